"""Deciding whether a relation satisfies an independence atom.

Plain atoms are checked directly on the relation.  Possible and certain atoms
quantify over groundings; both get a brute-force grounding oracle plus an
exact fast path:

* certain atoms reduce to constancy of a side or plain independence, because
  a grounding of an incomplete projection always escapes multiset inclusion;
* unary possible atoms become a max-flow question on a bipartite network
  between tuples and the cross product of the non-null column values;
* general possible atoms run a depth-first search over candidate support
  sets, pruned by a counting bound and by bipartite-matching feasibility.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import FragmentError, OracleInfeasibleError
from .flow import FlowNetwork, max_flow_assignment
from .relation import NULL, Relation, Schema, relation_to_csv

DEFAULT_ORACLE_BOUND = 2**20

SOURCE = "source"
SINK = "sink"

METHOD_ORACLE = "oracle"
METHOD_IA_DIRECT = "ia_direct"
METHOD_CIA_FAST = "cia_fast"
METHOD_PIA_FLOW = "pia_flow"
METHOD_PIA_SEARCH = "pia_search"


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a check: verdict, the method that produced it, method
    statistics, and a witness when one exists.

    For a possible atom that holds, ``witness`` is a grounding satisfying the
    plain atom; for a certain atom refuted by the oracle it is a grounding
    violating it.
    """

    verdict: bool
    method: str
    stats: dict = field(default_factory=dict)
    witness: Relation | None = None

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "method": self.method,
            "stats": dict(self.stats),
            "witness": relation_to_csv(self.witness) if self.witness else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _split_indices(
    schema: Schema, x: Iterable[str], y: Iterable[str]
) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Schema positions of x-only, y-only, and shared attributes."""
    xset, yset = frozenset(x), frozenset(y)
    xi = schema.indices(xset - yset)
    yi = schema.indices(yset - xset)
    oi = schema.indices(xset & yset)
    return xi, yi, oi


def _ia_on_rows(
    rows: Sequence[tuple[str, ...]],
    xi: tuple[int, ...],
    yi: tuple[int, ...],
    oi: tuple[int, ...],
) -> bool:
    """Plain independence on rows that are complete in the xi/yi/oi columns:
    shared columns constant and the joint support a full cross product."""
    if not rows:
        return True
    first = rows[0]
    for j in oi:
        v = first[j]
        for t in rows:
            if t[j] != v:
                return False
    xs = {tuple(t[j] for j in xi) for t in rows}
    ys = {tuple(t[j] for j in yi) for t in rows}
    xys = {tuple(t[j] for j in xi + yi) for t in rows}
    return len(xys) == len(xs) * len(ys)


def check_ia(r: Relation, x: Iterable[str], y: Iterable[str]) -> bool:
    """Does the relation itself satisfy the plain atom?  Requires the
    projection onto both sides to be complete."""
    xi, yi, oi = _split_indices(r.schema, x, y)
    for row in r.rows:
        for j in xi + yi + oi:
            if row[j] == NULL:
                return False
    return _ia_on_rows(r.rows, xi, yi, oi)


def is_certainly_constant(r: Relation, x: Iterable[str]) -> bool:
    """Does every grounding make the x-columns a single constant tuple?
    Relations with at most one row qualify trivially."""
    if r.size <= 1:
        return True
    idx = r.schema.indices(x)
    values = set()
    for row in r.rows:
        key = tuple(row[j] for j in idx)
        if NULL in key:
            return False
        values.add(key)
        if len(values) > 1:
            return False
    return True


def check_cia_fast(r: Relation, x: Iterable[str], y: Iterable[str]) -> bool:
    """Certain independence without enumerating groundings.

    A grounding of an incomplete projection has the same total multiplicity
    but is a different multiset, so it is never included in the original;
    hence for two or more rows the atom is certain exactly when one side is
    certainly constant or the relation already satisfies the plain atom.
    """
    if r.size <= 1:
        return True
    return (
        is_certainly_constant(r, x)
        or is_certainly_constant(r, y)
        or check_ia(r, x, y)
    )


# -- grounding oracle ------------------------------------------------------


def _oracle_gate(r: Relation, bound: int) -> None:
    n = r.count_groundings()
    if n > bound:
        raise OracleInfeasibleError(
            f"relation has {n} groundings, above the oracle bound of {bound}"
        )


def _fill_defaults(
    schema: Schema, rows: Iterable[Sequence[str]]
) -> Relation:
    """Ground any remaining nulls with the first domain value per column."""
    domains = schema.domains
    filled = [
        tuple(v if v != NULL else domains[j][0] for j, v in enumerate(row))
        for row in rows
    ]
    return Relation.from_rows(schema, filled, validate=False)


def cia_oracle_report(
    r: Relation,
    x: Iterable[str],
    y: Iterable[str],
    bound: int = DEFAULT_ORACLE_BOUND,
) -> CheckReport:
    """Conjunction of the plain check over all groundings; on refutation the
    witness is the first failing grounding."""
    xi, yi, oi = _split_indices(r.schema, x, y)
    _oracle_gate(r, bound)
    examined = 0
    for rows in r.grounding_assignments(xi + yi + oi):
        examined += 1
        if not _ia_on_rows(rows, xi, yi, oi):
            return CheckReport(
                False,
                METHOD_ORACLE,
                stats={"groundings": examined},
                witness=_fill_defaults(r.schema, rows),
            )
    return CheckReport(True, METHOD_ORACLE, stats={"groundings": examined})


def check_cia_oracle(
    r: Relation,
    x: Iterable[str],
    y: Iterable[str],
    bound: int = DEFAULT_ORACLE_BOUND,
) -> bool:
    return cia_oracle_report(r, x, y, bound).verdict


def check_pia_oracle(
    r: Relation,
    x: Iterable[str],
    y: Iterable[str],
    bound: int = DEFAULT_ORACLE_BOUND,
) -> CheckReport:
    """Existential grounding check, returning the first witnessing grounding."""
    xi, yi, oi = _split_indices(r.schema, x, y)
    _oracle_gate(r, bound)
    examined = 0
    for rows in r.grounding_assignments(xi + yi + oi):
        examined += 1
        if _ia_on_rows(rows, xi, yi, oi):
            return CheckReport(
                True,
                METHOD_ORACLE,
                stats={"groundings": examined},
                witness=_fill_defaults(r.schema, rows),
            )
    return CheckReport(False, METHOD_ORACLE, stats={"groundings": examined})


# -- unary possible atoms via max flow --------------------------------------


def build_flow_network(r: Relation, a: str, b: str) -> FlowNetwork:
    """Bipartite network between the distinct tuples of the projection onto
    the two columns and the cross product of their non-null values: source
    edges carry tuple multiplicities, a tuple reaches the product elements it
    can ground to, and each product element must be hit exactly once."""
    if a == b:
        raise ValueError("two distinct attributes are required")
    rab = r.project((a, b))
    ai, bi = rab.schema.index(a), rab.schema.index(b)
    avals = rab.distinct_nonnull(a)
    bvals = rab.distinct_nonnull(b)
    if not avals or not bvals:
        raise ValueError(f"column {a if not avals else b!r} has no non-null value")
    tuple_nodes = [("t", row) for row in rab.rows]
    cell_nodes = [("x", (va, vb)) for va in avals for vb in bvals]
    edges: list[tuple[object, object, int]] = []
    for node, count in zip(tuple_nodes, rab.counts):
        edges.append((SOURCE, node, count))
    for node in tuple_nodes:
        row = node[1]
        for cell in cell_nodes:
            va, vb = cell[1]
            if row[ai] in (NULL, va) and row[bi] in (NULL, vb):
                edges.append((node, cell, 1))
    for cell in cell_nodes:
        edges.append((cell, SINK, 1))
    return FlowNetwork(
        nodes=tuple([SOURCE, *tuple_nodes, *cell_nodes, SINK]),
        edges=tuple(edges),
        source=SOURCE,
        sink=SINK,
    )


def _ground_constant_column(r: Relation, attrs: Iterable[str]) -> Relation:
    """Ground the given columns to a single value each (the observed value if
    any, else the first domain value) and every other null to the first
    domain value."""
    fixed: dict[int, str] = {}
    for a in attrs:
        j = r.schema.index(a)
        vals = r.distinct_nonnull(a)
        fixed[j] = vals[0] if vals else r.schema.domains[j][0]
    rows = [
        tuple(
            (fixed.get(j, r.schema.domains[j][0]) if v == NULL else v)
            for j, v in enumerate(row)
        )
        for row in r.rows
    ]
    return Relation.from_rows(r.schema, rows, r.counts, validate=False)


def check_pia_unary(r: Relation, a: str, b: str) -> CheckReport:
    """Possible independence of two single attributes, decided in polynomial
    time: the atom holds exactly when the maximum flow saturates the cross
    product of the non-null column values."""
    r.schema.index(a), r.schema.index(b)
    if a == b:
        vals = r.distinct_nonnull(a)
        verdict = len(vals) <= 1
        witness = _ground_constant_column(r, [a]) if verdict else None
        return CheckReport(verdict, METHOD_PIA_FLOW, stats={"constancy": True}, witness=witness)
    if r.row_count == 0:
        return CheckReport(True, METHOD_PIA_FLOW, stats={}, witness=r)
    avals = r.distinct_nonnull(a)
    bvals = r.distinct_nonnull(b)
    if not avals or not bvals:
        # an all-null column grounds to a constant, which makes the atom hold
        empty = a if not avals else b
        return CheckReport(
            True,
            METHOD_PIA_FLOW,
            stats={"constant_column": empty},
            witness=_ground_constant_column(r, [empty]),
        )
    network = build_flow_network(r, a, b)
    value, flows = max_flow_assignment(network)
    target = len(avals) * len(bvals)
    stats = {"flow": value, "target": target}
    if value < target:
        return CheckReport(False, METHOD_PIA_FLOW, stats=stats)

    # Rebuild a witnessing grounding from the saturating flow: every product
    # element is assigned one tuple copy, remaining copies ground to any
    # element they are compatible with.
    ia, ib = r.schema.index(a), r.schema.index(b)
    # positions of a and b within the projected rows (projection keeps
    # schema attribute order, which may swap the argument order)
    pa, pb = (0, 1) if ia < ib else (1, 0)
    by_projection: dict[tuple, list[tuple[str, str]]] = {}
    for node, cell, cap in network.edges:
        if (
            isinstance(node, tuple)
            and node[0] == "t"
            and flows.get((node, cell), 0) > 0
        ):
            by_projection.setdefault((node[1][pa], node[1][pb]), []).append(cell[1])
    grounded: list[tuple[str, ...]] = []
    grounded_counts: list[int] = []
    for row, count in zip(r.rows, r.counts):
        key = (row[ia], row[ib])
        queue = by_projection.get(key, [])
        for _ in range(count):
            if queue:
                va, vb = queue.pop(0)
            else:
                va = row[ia] if row[ia] != NULL else avals[0]
                vb = row[ib] if row[ib] != NULL else bvals[0]
            new = list(row)
            new[ia], new[ib] = va, vb
            grounded.append(
                tuple(
                    v if v != NULL else r.schema.domains[j][0]
                    for j, v in enumerate(new)
                )
            )
            grounded_counts.append(1)
    witness = Relation.from_rows(r.schema, grounded, grounded_counts, validate=False)
    return CheckReport(True, METHOD_PIA_FLOW, stats=stats, witness=witness)


# -- general possible atoms: support-set search ------------------------------


def pia_counting_bound(r: Relation, x: Iterable[str], y: Iterable[str]) -> bool:
    """Cheap refutation for disjoint sides: the complete tuples already fixed
    on each side force a cross product larger than the relation.  ``False``
    refutes the possible atom; ``True`` is no conclusion."""
    xset, yset = frozenset(x), frozenset(y)
    if xset & yset:
        raise FragmentError("the counting bound requires disjoint sides")
    xi = r.schema.indices(xset)
    yi = r.schema.indices(yset)
    nx = len({t for t in (tuple(row[j] for j in xi) for row in r.rows) if NULL not in t})
    ny = len({t for t in (tuple(row[j] for j in yi) for row in r.rows) if NULL not in t})
    return nx * ny <= r.size


def _column_candidates(r: Relation, j: int) -> tuple[str, ...]:
    """Values a null cell in column j may take in the search: the values
    already occurring there plus at most one fresh domain value per null cell
    (plain independence is invariant under renaming the unused values)."""
    occurring: dict[str, None] = {}
    nulls = 0
    for row, c in zip(r.rows, r.counts):
        if row[j] == NULL:
            nulls += c
        else:
            occurring[row[j]] = None
    fresh = [v for v in r.schema.domains[j] if v not in occurring]
    return tuple(occurring) + tuple(fresh[:nulls])


class _PiaSearch:
    """Depth-first search for a grounding with cross-product support.

    The state is a pair of candidate support sets (one per side).  Complete
    side-tuples force initial members; a row incompatible with the current
    sets branches over its possible groundings; a bipartite matching between
    support pairs and tuple copies prunes states that cannot cover the
    product (supersets only add pairs, so infeasibility is final)."""

    def __init__(self, r: Relation, x_cols: tuple[int, ...], y_cols: tuple[int, ...]):
        self.r = r
        self.rows = r.rows
        self.counts = r.counts
        self.total = r.size
        self.x_cols = x_cols
        self.y_cols = y_cols
        self.cand = {j: _column_candidates(r, j) for j in x_cols + y_cols}
        self.x_pat = [tuple(row[j] for j in x_cols) for row in self.rows]
        self.y_pat = [tuple(row[j] for j in y_cols) for row in self.rows]
        self.nodes = 0
        self.visited: set[tuple[frozenset, frozenset]] = set()
        self.result: Relation | None = None

    @staticmethod
    def _matches(pattern: tuple[str, ...], value: tuple[str, ...]) -> bool:
        return all(p == NULL or p == v for p, v in zip(pattern, value))

    def _extensions(self, pattern: tuple[str, ...], cols: tuple[int, ...]):
        choices = [
            (v,) if v != NULL else self.cand[j] for v, j in zip(pattern, cols)
        ]
        return itertools.product(*choices)

    def _extension_count(self, pattern: tuple[str, ...], cols: tuple[int, ...]) -> int:
        return math.prod(
            1 if v != NULL else len(self.cand[j]) for v, j in zip(pattern, cols)
        )

    def run(self) -> bool:
        u0: dict[tuple[str, ...], None] = {}
        w0: dict[tuple[str, ...], None] = {}
        for i in range(len(self.rows)):
            if NULL not in self.x_pat[i]:
                u0[self.x_pat[i]] = None
            if NULL not in self.y_pat[i]:
                w0[self.y_pat[i]] = None
        return self._dfs(list(u0), list(w0))

    def _saturate(self, u, w, x_opts, y_opts):
        """Match every (u, w) pair to a distinct tuple copy able to ground to
        it; returns the per-row pair lists or None if some pair is uncovered."""
        pairs = [(ku, kw) for ku in range(len(u)) for kw in range(len(w))]
        pair_rows = [
            [
                i
                for i in range(len(self.rows))
                if ku in x_opts[i] and kw in y_opts[i]
            ]
            for ku, kw in pairs
        ]
        hosted: list[list[int]] = [[] for _ in self.rows]
        owner: dict[int, int] = {}

        def place(p: int, blocked: set[int]) -> bool:
            for i in pair_rows[p]:
                if i in blocked:
                    continue
                blocked.add(i)
                if len(hosted[i]) < self.counts[i]:
                    hosted[i].append(p)
                    owner[p] = i
                    return True
                for q in list(hosted[i]):
                    if place(q, blocked):
                        hosted[i].remove(q)
                        hosted[i].append(p)
                        owner[p] = i
                        return True
            return False

        for p in range(len(pairs)):
            if not place(p, set()):
                return None
        return [[pairs[p] for p in hosted_i] for hosted_i in hosted]

    def _dfs(self, u: list, w: list) -> bool:
        self.nodes += 1
        key = (frozenset(u), frozenset(w))
        if key in self.visited:
            return False
        self.visited.add(key)
        if len(u) * len(w) > self.total:
            return False
        x_opts = [
            {k for k, val in enumerate(u) if self._matches(self.x_pat[i], val)}
            for i in range(len(self.rows))
        ]
        y_opts = [
            {k for k, val in enumerate(w) if self._matches(self.y_pat[i], val)}
            for i in range(len(self.rows))
        ]
        hosted = self._saturate(u, w, x_opts, y_opts)
        if hosted is None:
            return False
        branch = None  # (extension count, row, side)
        for i in range(len(self.rows)):
            if not x_opts[i]:
                score = (self._extension_count(self.x_pat[i], self.x_cols), i, "x")
            elif not y_opts[i]:
                score = (self._extension_count(self.y_pat[i], self.y_cols), i, "y")
            else:
                continue
            if branch is None or score < branch:
                branch = score
        if branch is None:
            self.result = self._build_witness(u, w, x_opts, y_opts, hosted)
            return True
        _, i, side = branch
        if side == "x":
            for ext in self._extensions(self.x_pat[i], self.x_cols):
                u.append(ext)
                if self._dfs(u, w):
                    return True
                u.pop()
        else:
            for ext in self._extensions(self.y_pat[i], self.y_cols):
                w.append(ext)
                if self._dfs(u, w):
                    return True
                w.pop()
        return False

    def _build_witness(self, u, w, x_opts, y_opts, hosted) -> Relation:
        schema = self.r.schema
        x_pos = {j: k for k, j in enumerate(self.x_cols)}
        y_pos = {j: k for k, j in enumerate(self.y_cols)}
        grounded: list[tuple[str, ...]] = []
        for i, (row, count) in enumerate(zip(self.rows, self.counts)):
            pair_list = list(hosted[i])
            default = (min(x_opts[i]), min(y_opts[i]))
            while len(pair_list) < count:
                pair_list.append(default)
            for ku, kw in pair_list:
                new = []
                for j, v in enumerate(row):
                    if v != NULL:
                        new.append(v)
                    elif j in x_pos:
                        new.append(u[ku][x_pos[j]])
                    elif j in y_pos:
                        new.append(w[kw][y_pos[j]])
                    else:
                        new.append(schema.domains[j][0])
                grounded.append(tuple(new))
        return Relation.from_rows(schema, grounded, validate=False)


def check_pia(r: Relation, x: Iterable[str], y: Iterable[str]) -> CheckReport:
    """Exact decision of a possible atom by depth-first support search."""
    xset, yset = frozenset(x), frozenset(y)
    xi, yi, oi = _split_indices(r.schema, xset, yset)
    if r.row_count == 0:
        return CheckReport(True, METHOD_PIA_SEARCH, stats={"nodes": 0}, witness=r)

    # Attributes on both sides must become constant in any witnessing
    # grounding, which pins them independently of the disjoint core.
    overlap_fixed: dict[int, str] = {}
    for j in oi:
        seen = {row[j] for row in r.rows if row[j] != NULL}
        if len(seen) > 1:
            return CheckReport(False, METHOD_PIA_SEARCH, stats={"nodes": 0})
        overlap_fixed[j] = next(iter(seen)) if seen else r.schema.domains[j][0]

    if not xi or not yi:
        rows = [
            tuple(
                (overlap_fixed.get(j, r.schema.domains[j][0]) if v == NULL else v)
                for j, v in enumerate(row)
            )
            for row in r.rows
        ]
        witness = Relation.from_rows(r.schema, rows, r.counts, validate=False)
        return CheckReport(True, METHOD_PIA_SEARCH, stats={"nodes": 0}, witness=witness)

    x_attrs = tuple(r.schema.attributes[j] for j in xi)
    y_attrs = tuple(r.schema.attributes[j] for j in yi)
    if not pia_counting_bound(r, x_attrs, y_attrs):
        return CheckReport(False, METHOD_PIA_SEARCH, stats={"nodes": 0, "counting_bound": True})

    search = _PiaSearch(r, xi, yi)
    found = search.run()
    stats = {"nodes": search.nodes}
    if not found:
        return CheckReport(False, METHOD_PIA_SEARCH, stats=stats)
    witness = search.result
    if overlap_fixed:
        rows = [
            tuple(
                overlap_fixed.get(j, v) if v == NULL else v
                for j, v in enumerate(row)
            )
            for row in witness.rows
        ]
        witness = Relation.from_rows(r.schema, rows, witness.counts, validate=False)
    return CheckReport(True, METHOD_PIA_SEARCH, stats=stats, witness=witness)


# -- dispatch ---------------------------------------------------------------


def check_atom(
    r: Relation,
    atom,
    method: str = "auto",
    oracle_bound: int = DEFAULT_ORACLE_BOUND,
) -> CheckReport:
    """Route an atom to a checker.  ``auto`` and ``fast`` use the direct and
    polynomial/search paths; ``oracle`` enumerates groundings."""
    if method not in ("auto", "fast", "oracle"):
        raise ValueError(f"unknown method {method!r}")
    if atom.modality == "plain":
        return CheckReport(check_ia(r, atom.lhs, atom.rhs), METHOD_IA_DIRECT)
    if method == "oracle":
        if atom.modality == "certain":
            return cia_oracle_report(r, atom.lhs, atom.rhs, oracle_bound)
        return check_pia_oracle(r, atom.lhs, atom.rhs, oracle_bound)
    if atom.modality == "certain":
        return CheckReport(check_cia_fast(r, atom.lhs, atom.rhs), METHOD_CIA_FAST)
    if len(atom.lhs) == 1 and len(atom.rhs) == 1:
        (a,) = atom.lhs
        (b,) = atom.rhs
        return check_pia_unary(r, a, b)
    return check_pia(r, atom.lhs, atom.rhs)
