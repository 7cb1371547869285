"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random
import string

from indepkit import (
    Atom,
    CnfFormula,
    FlowNetwork,
    NULL,
    Relation,
    Schema,
)

ATTR_NAMES = tuple(string.ascii_uppercase)


def random_relation(
    rng: random.Random,
    max_attrs: int = 4,
    max_tuples: int = 5,
    max_count: int = 2,
    max_domain: int = 3,
    null_probability: float = 0.22,
    grounding_cap: int = 2**16,
) -> Relation:
    """A random relation with explicit domains and a capped grounding count."""
    while True:
        width = rng.randint(1, max_attrs)
        attrs = ATTR_NAMES[:width]
        domains = tuple(
            tuple(str(v) for v in range(rng.randint(2, max_domain)))
            for _ in attrs
        )
        schema = Schema(attrs, domains)
        n_rows = rng.randint(1, max_tuples)
        rows = []
        counts = []
        for _ in range(n_rows):
            row = tuple(
                NULL if rng.random() < null_probability else rng.choice(domains[j])
                for j in range(width)
            )
            rows.append(row)
            counts.append(rng.randint(1, max_count))
        relation = Relation.from_rows(schema, rows, counts)
        if relation.count_groundings() <= grounding_cap:
            return relation


def random_sides(
    rng: random.Random, schema: Schema
) -> tuple[frozenset[str], frozenset[str]]:
    """Two random attribute sets; overlap and empty sides occur."""
    lhs = frozenset(a for a in schema.attributes if rng.random() < 0.45)
    rhs = frozenset(a for a in schema.attributes if rng.random() < 0.45)
    return lhs, rhs


def random_atom_set(
    rng: random.Random,
    universe: tuple[str, ...],
    modalities: tuple[str, ...],
    max_atoms: int = 4,
    disjoint: bool = False,
) -> list[Atom]:
    atoms: list[Atom] = []
    for _ in range(rng.randint(1, max_atoms)):
        lhs = frozenset(a for a in universe if rng.random() < 0.4)
        rhs = frozenset(a for a in universe if rng.random() < 0.4)
        if disjoint:
            rhs = rhs - lhs
        atoms.append(Atom(lhs, rhs, rng.choice(modalities)))
    return atoms


def brute_force_max_flow(network: FlowNetwork) -> int:
    """Exhaustive search over integral edge flows; only usable on tiny
    networks."""
    edges = list(network.edges)
    best = 0
    inflow: dict = {}
    outflow: dict = {}

    def feasible_at(node) -> bool:
        return inflow.get(node, 0) == outflow.get(node, 0)

    def rec(i: int) -> None:
        nonlocal best
        if i == len(edges):
            if all(
                feasible_at(n)
                for n in network.nodes
                if n not in (network.source, network.sink)
            ):
                best = max(best, outflow.get(network.source, 0))
            return
        u, v, cap = edges[i]
        for f in range(cap + 1):
            outflow[u] = outflow.get(u, 0) + f
            inflow[v] = inflow.get(v, 0) + f
            rec(i + 1)
            outflow[u] -= f
            inflow[v] -= f

    rec(0)
    return best


def random_bipartite_network(rng: random.Random) -> FlowNetwork:
    lefts = [f"L{i}" for i in range(rng.randint(1, 3))]
    rights = [f"R{i}" for i in range(rng.randint(1, 3))]
    edges = []
    for left in lefts:
        edges.append(("s", left, rng.randint(0, 2)))
    for left in lefts:
        for right in rights:
            if rng.random() < 0.6:
                edges.append((left, right, 1))
    for right in rights:
        edges.append((right, "t", rng.randint(1, 2)))
    return FlowNetwork(
        nodes=tuple(["s", *lefts, *rights, "t"]),
        edges=tuple(edges),
        source="s",
        sink="t",
    )


def brute_force_sat(phi: CnfFormula) -> bool:
    variables = phi.variables()
    if not variables:
        return True
    for bits in itertools.product((False, True), repeat=len(variables)):
        assignment = dict(zip(variables, bits))
        if all(
            any((lit > 0) == assignment[abs(lit)] for lit in clause)
            for clause in phi.clauses
        ):
            return True
    return False


def random_cnf(
    rng: random.Random, max_vars: int = 4, max_clauses: int = 4, max_width: int = 3
) -> CnfFormula:
    n_vars = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        width = rng.randint(1, max_width)
        clause = tuple(
            rng.choice((1, -1)) * rng.randint(1, n_vars) for _ in range(width)
        )
        clauses.append(clause)
    return CnfFormula(n_vars, tuple(clauses))
