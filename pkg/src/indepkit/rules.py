"""Inference-rule systems, closure by saturation, and derivation traces.

The base rules are trivial independence (T), symmetry (S), constancy (C),
decomposition (D), and exchange (E).  Suffixes pick the modality the rule
operates on: plain (no suffix), ``_c`` certain, ``_p`` possible.  The system
for possible atoms has no exchange rule; two mixed exchange rules (``E_pc``,
``E_cp``) combine a possible and a certain premise into a possible
conclusion.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .atoms import (
    Atom,
    CERTAIN,
    Modality,
    PLAIN,
    POSSIBLE,
    attributes_of,
    render_atom,
)
from .errors import SaturationLimitError
from .relation import Schema

DEFAULT_ATTRIBUTE_LIMIT = 12

# rule id -> (kind, premise modalities, conclusion modality)
_RULE_INFO: dict[str, tuple[str, tuple[Modality, ...], Modality]] = {
    "T": ("trivial", (), PLAIN),
    "S": ("symmetry", (PLAIN,), PLAIN),
    "C": ("constancy", (PLAIN, PLAIN), PLAIN),
    "D": ("decomposition", (PLAIN,), PLAIN),
    "E": ("exchange", (PLAIN, PLAIN), PLAIN),
    "T_c": ("trivial", (), CERTAIN),
    "S_c": ("symmetry", (CERTAIN,), CERTAIN),
    "C_c": ("constancy", (CERTAIN, CERTAIN), CERTAIN),
    "D_c": ("decomposition", (CERTAIN,), CERTAIN),
    "E_c": ("exchange", (CERTAIN, CERTAIN), CERTAIN),
    "T_p": ("trivial", (), POSSIBLE),
    "S_p": ("symmetry", (POSSIBLE,), POSSIBLE),
    "C_p": ("constancy", (POSSIBLE, POSSIBLE), POSSIBLE),
    "D_p": ("decomposition", (POSSIBLE,), POSSIBLE),
    "E_pc": ("exchange", (POSSIBLE, CERTAIN), POSSIBLE),
    "E_cp": ("exchange", (CERTAIN, POSSIBLE), POSSIBLE),
}


@dataclass(frozen=True)
class RuleSystem:
    """A named set of rule identifiers."""

    name: str
    rules: frozenset[str]

    def __post_init__(self):
        unknown = self.rules - _RULE_INFO.keys()
        if unknown:
            raise ValueError(f"unknown rules: {', '.join(sorted(unknown))}")

    def __contains__(self, rule: str) -> bool:
        return rule in self.rules

    def __or__(self, other: RuleSystem) -> RuleSystem:
        return RuleSystem(f"{self.name}+{other.name}", self.rules | other.rules)

    def without(self, *rule_ids: str) -> RuleSystem:
        return RuleSystem(
            f"{self.name}\\{{{','.join(rule_ids)}}}", self.rules - set(rule_ids)
        )


SYSTEM_I = RuleSystem("I", frozenset({"T", "S", "C", "D", "E"}))
SYSTEM_I_C = RuleSystem("I_c", frozenset({"T_c", "S_c", "C_c", "D_c", "E_c"}))
SYSTEM_I_P = RuleSystem("I_p", frozenset({"T_p", "S_p", "C_p", "D_p"}))
SYSTEM_J_PC = RuleSystem("J_pc", frozenset({"E_pc", "E_cp"}))
SYSTEM_FULL = RuleSystem("full", SYSTEM_I_C.rules | SYSTEM_I_P.rules | SYSTEM_J_PC.rules)
SYSTEM_DISJOINT_MIXED = RuleSystem(
    "disjoint-mixed", SYSTEM_FULL.rules - {"C_c", "C_p"}
)

_NAMED_SYSTEMS: Mapping[str, RuleSystem] = {
    "I": SYSTEM_I,
    "I_c": SYSTEM_I_C,
    "I_p": SYSTEM_I_P,
    "J_pc": SYSTEM_J_PC,
    "full": SYSTEM_FULL,
    "disjoint-mixed": SYSTEM_DISJOINT_MIXED,
}


def system_by_name(name: str) -> RuleSystem:
    try:
        return _NAMED_SYSTEMS[name]
    except KeyError:
        raise ValueError(
            f"unknown rule system {name!r}; pick one of {', '.join(_NAMED_SYSTEMS)}"
        ) from None


@dataclass(frozen=True)
class DerivationStep:
    atom: Atom
    rule: str | None  # None marks a premise
    premises: tuple[int, ...] = ()


@dataclass(frozen=True)
class Derivation:
    """A finite sequence of atoms, each a premise or a rule application on
    earlier steps; the last step is the derived goal."""

    steps: tuple[DerivationStep, ...]

    @property
    def conclusion(self) -> Atom:
        return self.steps[-1].atom

    def rules_used(self) -> tuple[str, ...]:
        return tuple(s.rule for s in self.steps if s.rule is not None)


class _Saturator:
    """Worklist closure computation with backpointers for proof extraction."""

    def __init__(self, system: RuleSystem):
        self.system = system
        self.known: dict[Atom, tuple[str | None, tuple[Atom, ...]]] = {}
        self.queue: deque[Atom] = deque()
        self.by_lhs: dict[tuple[Modality, frozenset], list[Atom]] = {}
        self.by_union: dict[tuple[Modality, frozenset], list[Atom]] = {}
        self.constancy: dict[Modality, list[Atom]] = {}
        self.all_atoms: dict[Modality, list[Atom]] = {}

    def add(self, atom: Atom, rule: str | None, premises: tuple[Atom, ...]) -> None:
        if atom in self.known:
            return
        self.known[atom] = (rule, premises)
        self.queue.append(atom)
        m = atom.modality
        self.by_lhs.setdefault((m, atom.lhs), []).append(atom)
        self.by_union.setdefault((m, atom.lhs | atom.rhs), []).append(atom)
        self.all_atoms.setdefault(m, []).append(atom)
        if atom.lhs == atom.rhs:
            self.constancy.setdefault(m, []).append(atom)

    def _exchange_rules(self):
        for rule in ("E", "E_c", "E_pc", "E_cp"):
            if rule in self.system:
                _, (m1, m2), mc = _RULE_INFO[rule]
                yield rule, m1, m2, mc

    def process(self, a: Atom) -> None:
        m = a.modality
        sym = {PLAIN: "S", CERTAIN: "S_c", POSSIBLE: "S_p"}[m]
        if sym in self.system:
            self.add(Atom(a.rhs, a.lhs, m), sym, (a,))
        dec = {PLAIN: "D", CERTAIN: "D_c", POSSIBLE: "D_p"}[m]
        if dec in self.system:
            rhs = sorted(a.rhs)
            for size in range(len(rhs)):
                for combo in itertools.combinations(rhs, size):
                    self.add(Atom(a.lhs, frozenset(combo), m), dec, (a,))
        con = {PLAIN: "C", CERTAIN: "C_c", POSSIBLE: "C_p"}[m]
        if con in self.system:
            if a.lhs == a.rhs:
                for b in list(self.all_atoms.get(m, ())):
                    self.add(Atom(a.lhs | b.lhs, b.rhs, m), con, (a, b))
            for c in list(self.constancy.get(m, ())):
                self.add(Atom(c.lhs | a.lhs, a.rhs, m), con, (c, a))
        for rule, m1, m2, mc in self._exchange_rules():
            if m == m1:
                for b in list(self.by_lhs.get((m2, a.lhs | a.rhs), ())):
                    self.add(Atom(a.lhs, a.rhs | b.rhs, mc), rule, (a, b))
            if m == m2:
                for b in list(self.by_union.get((m1, a.lhs), ())):
                    self.add(Atom(b.lhs, b.rhs | a.rhs, mc), rule, (b, a))

    def run(self, goal: Atom | None = None) -> bool:
        while self.queue:
            if goal is not None and goal in self.known:
                return True
            self.process(self.queue.popleft())
        return goal is not None and goal in self.known


def _check_universe(universe: frozenset[str], limit: int) -> None:
    if len(universe) > limit:
        raise SaturationLimitError(
            f"{len(universe)} attributes exceed the saturation limit of {limit}"
        )


def _seed(sat: _Saturator, premises: Iterable[Atom], universe: frozenset[str]) -> None:
    for a in premises:
        sat.add(a, None, ())
    trivial = {"T": PLAIN, "T_c": CERTAIN, "T_p": POSSIBLE}
    names = sorted(universe)
    for rule, modality in trivial.items():
        if rule in sat.system:
            for size in range(len(names) + 1):
                for combo in itertools.combinations(names, size):
                    sat.add(Atom(frozenset(combo), frozenset(), modality), rule, ())


def closure(
    atoms: Iterable[Atom],
    system: RuleSystem,
    universe: Iterable[str] | None = None,
    limit: int = DEFAULT_ATTRIBUTE_LIMIT,
) -> frozenset[Atom]:
    """Least fixpoint of the rule system over the given premises, restricted
    to atoms over the universe (premise attributes by default)."""
    premises = list(atoms)
    uni = frozenset(universe) if universe is not None else attributes_of(premises)
    uni |= attributes_of(premises)
    _check_universe(uni, limit)
    sat = _Saturator(system)
    _seed(sat, premises, uni)
    sat.run()
    return frozenset(sat.known)


def derives(
    atoms: Iterable[Atom],
    goal: Atom,
    system: RuleSystem,
    limit: int = DEFAULT_ATTRIBUTE_LIMIT,
) -> Derivation | None:
    """A checked derivation of the goal, or None when the system cannot
    derive it.  Non-derivability equals non-implication only on fragments
    with a proven complete axiomatisation."""
    premises = list(atoms)
    uni = attributes_of(premises) | goal.attributes
    _check_universe(uni, limit)
    sat = _Saturator(system)
    _seed(sat, premises, uni)
    if not sat.run(goal):
        return None
    return _extract(sat.known, goal)


def _extract(
    known: Mapping[Atom, tuple[str | None, tuple[Atom, ...]]], goal: Atom
) -> Derivation:
    order: dict[Atom, int] = {}
    steps: list[DerivationStep] = []

    def visit(atom: Atom) -> int:
        if atom in order:
            return order[atom]
        rule, prems = known[atom]
        indices = tuple(visit(p) for p in prems)
        steps.append(DerivationStep(atom, rule, indices))
        order[atom] = len(steps) - 1
        return order[atom]

    visit(goal)
    return Derivation(tuple(steps))


def validate_derivation(
    derivation: Derivation, system: RuleSystem, premises: Iterable[Atom]
) -> None:
    """Re-check every step against the rule schemas; raises ValueError on the
    first step that does not follow."""
    premise_set = set(premises)
    for n, step in enumerate(derivation.steps):
        if step.rule is None:
            if step.atom not in premise_set:
                raise ValueError(f"step {n}: not a premise: {render_atom(step.atom)}")
            continue
        if step.rule not in system:
            raise ValueError(f"step {n}: rule {step.rule} not in system {system.name}")
        kind, premise_mods, conclusion_mod = _RULE_INFO[step.rule]
        if any(i >= n for i in step.premises):
            raise ValueError(f"step {n}: forward reference")
        used = [derivation.steps[i].atom for i in step.premises]
        if len(used) != len(premise_mods):
            raise ValueError(f"step {n}: {step.rule} takes {len(premise_mods)} premises")
        for atom, mod in zip(used, premise_mods):
            if atom.modality != mod:
                raise ValueError(f"step {n}: premise modality mismatch")
        a = step.atom
        if a.modality != conclusion_mod:
            raise ValueError(f"step {n}: conclusion modality mismatch")
        ok = False
        if kind == "trivial":
            ok = not a.rhs
        elif kind == "symmetry":
            ok = a == Atom(used[0].rhs, used[0].lhs, conclusion_mod)
        elif kind == "decomposition":
            ok = a.lhs == used[0].lhs and a.rhs <= used[0].rhs
        elif kind == "constancy":
            ok = used[0].lhs == used[0].rhs and a == Atom(
                used[0].lhs | used[1].lhs, used[1].rhs, conclusion_mod
            )
        elif kind == "exchange":
            ok = used[1].lhs == used[0].lhs | used[0].rhs and a == Atom(
                used[0].lhs, used[0].rhs | used[1].rhs, conclusion_mod
            )
        if not ok:
            raise ValueError(
                f"step {n}: {render_atom(a)} does not follow by {step.rule}"
            )


def render_derivation_text(
    derivation: Derivation, schema: Schema | None = None, unicode_ops: bool = False
) -> str:
    """Indented proof tree, conclusion first."""
    lines: list[str] = []

    def visit(index: int, depth: int) -> None:
        step = derivation.steps[index]
        label = step.rule if step.rule is not None else "premise"
        atom = render_atom(step.atom, schema, unicode_ops)
        lines.append(f"{'  ' * depth}{atom}   [{label}]")
        for i in step.premises:
            visit(i, depth + 1)

    visit(len(derivation.steps) - 1, 0)
    return "\n".join(lines)


def derivation_to_json_list(
    derivation: Derivation, schema: Schema | None = None
) -> list[dict]:
    return [
        {
            "atom": render_atom(step.atom, schema),
            "rule": step.rule,
            "premises": list(step.premises),
        }
        for step in derivation.steps
    ]
