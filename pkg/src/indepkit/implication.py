"""Implication deciders and bounded semantic refutation.

For plain and certain atoms implication reduces to closure membership in the
respective rule system; the modality-stripping map makes the two problems
coincide.  For possible atoms the polynomial containment procedure decides
goals with a singleton side or near-equal side sizes, and for disjoint mixed
sets a certain goal depends only on the certain premises.  Everything outside
these fragments is answered as derivability only (sound, not complete).

``search_counterexample`` hunts for a relation that satisfies every premise
and violates the goal, enumerating relations by row count, then null count,
in a fixed order; absence within bounds proves nothing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .atoms import (
    Atom,
    CERTAIN,
    PLAIN,
    POSSIBLE,
    attributes_of,
    check_same_modality,
    ind,
    ind_set,
    is_disjoint,
    is_pia_star,
    render_atom,
)
from .errors import FragmentError, SearchBoundsError
from .model_check import check_cia_fast, check_ia, check_pia
from .relation import NULL, Relation, Schema
from .rules import (
    DEFAULT_ATTRIBUTE_LIMIT,
    SYSTEM_DISJOINT_MIXED,
    SYSTEM_I,
    closure,
    derives,
)


def constants_of(atoms: Iterable[Atom]) -> frozenset[str]:
    """Attributes forced constant: members of both sides of some premise."""
    out: set[str] = set()
    for a in atoms:
        out |= a.lhs & a.rhs
    return frozenset(out)


def implies_ia(
    sigma: Iterable[Atom], goal: Atom, limit: int = DEFAULT_ATTRIBUTE_LIMIT
) -> bool:
    """Implication among plain atoms (complete relations); the rule system is
    sound and complete here, so closure membership is the answer."""
    premises = list(sigma)
    check_same_modality(premises, PLAIN, "implies_ia")
    check_same_modality([goal], PLAIN, "implies_ia")
    universe = attributes_of(premises) | goal.attributes
    return goal in closure(premises, SYSTEM_I, universe, limit)


def implies_cia(
    sigma: Iterable[Atom], goal: Atom, limit: int = DEFAULT_ATTRIBUTE_LIMIT
) -> bool:
    """Implication among certain atoms: equivalent to the plain problem on
    the modality-stripped atoms."""
    premises = list(sigma)
    check_same_modality(premises, CERTAIN, "implies_cia")
    check_same_modality([goal], CERTAIN, "implies_cia")
    return implies_ia(ind_set(premises), ind(goal), limit)


def implies_pia_star(sigma: Iterable[Atom], goal: Atom) -> bool:
    """Implication among possible atoms for goals with a singleton side or
    side sizes within one: drop the constant attributes from the goal and
    look for a premise containing what is left of each side."""
    premises = list(sigma)
    check_same_modality(premises, POSSIBLE, "implies_pia_star")
    check_same_modality([goal], POSSIBLE, "implies_pia_star")
    if not is_pia_star(goal):
        raise FragmentError(
            f"goal {render_atom(goal)!r} is outside the decidable possible "
            "fragment; use derives() for a sound-only answer"
        )
    constants = constants_of(premises)
    xs = goal.lhs - constants
    ys = goal.rhs - constants
    if not xs or not ys:
        return True
    for a in premises:
        if (xs <= a.lhs and ys <= a.rhs) or (xs <= a.rhs and ys <= a.lhs):
            return True
    return False


def implies_mixed_disjoint(
    sigma: Iterable[Atom], goal: Atom, limit: int = DEFAULT_ATTRIBUTE_LIMIT
) -> bool:
    """Implication for disjoint possible and certain atoms.

    A certain goal depends only on the certain premises and reduces to the
    plain problem (complete answer).  For a possible goal the result is
    derivability in the disjoint mixed system, which is sound but not known
    to be complete.
    """
    premises = list(sigma)
    for a in [*premises, goal]:
        if a.modality == PLAIN:
            raise FragmentError("mixed implication takes possible and certain atoms")
        if not is_disjoint(a):
            raise FragmentError(
                f"atom {render_atom(a)!r} is not disjoint; only derivability "
                "is available outside the disjoint fragment"
            )
    if goal.modality == CERTAIN:
        certain = [a for a in premises if a.modality == CERTAIN]
        return implies_ia(ind_set(certain), ind(goal), limit)
    return derives(premises, goal, SYSTEM_DISJOINT_MIXED, limit) is not None


# -- bounded counterexample search ------------------------------------------


@dataclass(frozen=True)
class SearchBounds:
    max_attributes: int = 5
    max_rows: int = 4
    domain_size: int = 2

    def __post_init__(self):
        if self.max_attributes < 1 or self.max_rows < 1 or self.domain_size < 2:
            raise SearchBoundsError("bounds must be positive (domain size at least 2)")


def _satisfies(r: Relation, atom: Atom) -> bool:
    if atom.modality == PLAIN:
        return check_ia(r, atom.lhs, atom.rhs)
    if atom.modality == CERTAIN:
        return check_cia_fast(r, atom.lhs, atom.rhs)
    return check_pia(r, atom.lhs, atom.rhs).verdict


def _row_multisets(
    cells: list[tuple[str, ...]],
    null_counts: list[int],
    slots: int,
    budget: int,
    width: int,
) -> Iterator[tuple[int, ...]]:
    """Non-decreasing index sequences over the row alphabet whose total null
    count is exactly the budget."""

    def rec(start: int, left: int, budget_left: int, acc: list[int]):
        if left == 0:
            if budget_left == 0:
                yield tuple(acc)
            return
        for idx in range(start, len(cells)):
            n = null_counts[idx]
            if n > budget_left:
                continue
            if budget_left - n > (left - 1) * width:
                continue
            acc.append(idx)
            yield from rec(idx, left - 1, budget_left - n, acc)
            acc.pop()

    yield from rec(0, slots, budget, [])


def _is_canonical(rows: list[tuple[str, ...]], domain: tuple[str, ...]) -> bool:
    """Keep only the lexicographically least relabelling of each relation
    under per-column value permutations (atom satisfaction is invariant
    under them), to skip isomorphic candidates."""
    width = len(rows[0])
    rank = {v: i for i, v in enumerate(domain)}
    rank[NULL] = len(domain)

    def key(rs: list[tuple[str, ...]]) -> list[tuple[int, ...]]:
        return sorted(tuple(rank[v] for v in row) for row in rs)

    base = key(rows)
    perms = list(itertools.permutations(domain))
    for combo in itertools.product(perms, repeat=width):
        if all(p == perms[0] for p in combo):
            continue
        mapping = [dict(zip(domain, p)) for p in combo]
        relabeled = [
            tuple(v if v == NULL else mapping[j][v] for j, v in enumerate(row))
            for row in rows
        ]
        if key(relabeled) < base:
            return False
    return True


def search_counterexample(
    sigma: Iterable[Atom], goal: Atom, bounds: SearchBounds = SearchBounds()
) -> Relation | None:
    """First relation (rows ascending, then nulls ascending) that satisfies
    every premise and violates the goal, or None within the bounds."""
    premises = list(sigma)
    universe = sorted(attributes_of(premises) | goal.attributes)
    if not universe:
        universe = ["A"]
    if len(universe) > bounds.max_attributes:
        raise SearchBoundsError(
            f"{len(universe)} attributes exceed the bound of {bounds.max_attributes}"
        )
    domain = tuple(str(i) for i in range(bounds.domain_size))
    schema = Schema(tuple(universe), tuple(domain for _ in universe))
    width = len(universe)
    alphabet = domain + (NULL,)
    cells = [row for row in itertools.product(alphabet, repeat=width)]
    null_counts = [sum(1 for v in row if v == NULL) for row in cells]
    relabellings = math.factorial(len(domain)) ** width
    prune_isomorphic = relabellings <= 64

    for n_rows in range(1, bounds.max_rows + 1):
        for budget in range(0, n_rows * width + 1):
            for indices in _row_multisets(cells, null_counts, n_rows, budget, width):
                rows = [cells[i] for i in indices]
                if prune_isomorphic and not _is_canonical(rows, domain):
                    continue
                candidate = Relation.from_rows(schema, rows, validate=False)
                if _satisfies(candidate, goal):
                    continue
                if all(_satisfies(candidate, a) for a in premises):
                    return candidate
    return None
