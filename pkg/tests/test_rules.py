from __future__ import annotations

import random

import pytest

from indepkit import (
    CERTAIN,
    POSSIBLE,
    SYSTEM_DISJOINT_MIXED,
    SYSTEM_FULL,
    SYSTEM_I,
    SYSTEM_I_C,
    SYSTEM_I_P,
    SYSTEM_J_PC,
    SaturationLimitError,
    closure,
    derivation_to_json_list,
    derives,
    make_atom,
    parse_atom,
    render_derivation_text,
    system_by_name,
    validate_derivation,
)
from helpers import random_atom_set


def atoms(*texts: str) -> list:
    return [parse_atom(t) for t in texts]


class TestSystems:
    def test_membership(self):
        assert "E" in SYSTEM_I
        assert "E_p" not in SYSTEM_I_P.rules  # no possible exchange exists
        assert SYSTEM_I_P.rules == {"T_p", "S_p", "C_p", "D_p"}
        assert SYSTEM_J_PC.rules == {"E_pc", "E_cp"}
        assert SYSTEM_FULL.rules == SYSTEM_I_C.rules | SYSTEM_I_P.rules | SYSTEM_J_PC.rules
        assert SYSTEM_DISJOINT_MIXED.rules == SYSTEM_FULL.rules - {"C_c", "C_p"}

    def test_lookup_by_name(self):
        assert system_by_name("I_p") is SYSTEM_I_P
        with pytest.raises(ValueError):
            system_by_name("bogus")


class TestClosure:
    def test_deduction_example(self):
        sigma = atoms("e _||_c s", "e,s _||_p g", "r _||_p r")
        result = closure(sigma, SYSTEM_FULL)
        assert parse_atom("r,s,g _||_p e") in result

    def test_empty_premises_only_trivial_atoms(self):
        result = closure([], SYSTEM_I, universe=["A", "B"])
        expected = set()
        for lhs in [set(), {"A"}, {"B"}, {"A", "B"}]:
            expected.add(make_atom(lhs, set()))
            expected.add(make_atom(set(), lhs))
        assert result == expected

    def test_exchange_fires_for_plain_atoms(self):
        result = closure(atoms("A _||_ B", "A,B _||_ C"), SYSTEM_I)
        assert parse_atom("A _||_ B,C") in result

    def test_monotone_and_idempotent(self):
        rng = random.Random(41)
        universe = ("A", "B", "C", "D")
        for _ in range(20):
            base = random_atom_set(rng, universe, (POSSIBLE, CERTAIN))
            extra = random_atom_set(rng, universe, (POSSIBLE, CERTAIN), max_atoms=2)
            small = closure(base, SYSTEM_FULL, universe)
            big = closure(base + extra, SYSTEM_FULL, universe)
            assert small <= big
            again = closure(small, SYSTEM_FULL, universe)
            assert again == small

    def test_universe_limit(self):
        sigma = [make_atom({f"A{i}" for i in range(13)}, set(), POSSIBLE)]
        with pytest.raises(SaturationLimitError):
            closure(sigma, SYSTEM_I_P)


class TestDerives:
    def test_deduction_example_trace(self):
        sigma = atoms("e _||_c s", "e,s _||_p g", "r _||_p r")
        goal = parse_atom("r,s,g _||_p e")
        derivation = derives(sigma, goal, SYSTEM_FULL)
        assert derivation is not None
        assert derivation.conclusion == goal
        validate_derivation(derivation, SYSTEM_FULL, sigma)
        assert set(derivation.rules_used()) <= SYSTEM_FULL.rules

    def test_three_rule_deduction_in_reduced_system(self):
        sigma = atoms("e _||_c s", "e,s _||_p g", "r _||_p r")
        goal = parse_atom("r,s,g _||_p e")
        system = system_by_name("full").without("T_c", "T_p", "D_c", "D_p", "E_c", "E_pc", "C_c", "S_c")
        derivation = derives(sigma, goal, system)
        assert derivation is not None
        assert derivation.rules_used() == ("E_cp", "S_p", "C_p")

    def test_premise_is_a_one_step_derivation(self):
        sigma = atoms("A _||_p B")
        derivation = derives(sigma, sigma[0], SYSTEM_I_P)
        assert len(derivation.steps) == 1
        assert derivation.steps[0].rule is None

    def test_possible_exchange_not_derivable(self):
        sigma = atoms("e _||_p s", "e,s _||_p g")
        assert derives(sigma, parse_atom("e _||_p s,g"), SYSTEM_I_P) is None

    def test_nondisjoint_mixed_gap(self):
        sigma = atoms(
            "A _||_p A", "B _||_p B", "C _||_p C", "A _||_c C", "B _||_c C"
        )
        assert derives(sigma, parse_atom("A,B _||_c C"), SYSTEM_FULL) is None

    def test_trivial_atom_outside_premise_attributes(self):
        derivation = derives([], parse_atom("Q _||_ {}"), SYSTEM_I)
        assert derivation is not None and derivation.steps[-1].rule == "T"

    def test_mixed_exchange_derivation(self):
        sigma = atoms("e _||_c s", "e,s _||_p g")
        derivation = derives(sigma, parse_atom("e _||_p s,g"), SYSTEM_FULL)
        assert derivation is not None
        validate_derivation(derivation, SYSTEM_FULL, sigma)
        assert "E_cp" in derivation.rules_used()


class TestValidation:
    def test_tampered_derivation_rejected(self):
        sigma = atoms("A _||_c B")
        derivation = derives(sigma, parse_atom("B _||_c A"), SYSTEM_I_C)
        bad_steps = derivation.steps[:-1] + (
            type(derivation.steps[-1])(
                atom=parse_atom("B _||_c B"),
                rule="S_c",
                premises=derivation.steps[-1].premises,
            ),
        )
        bad = type(derivation)(bad_steps)
        with pytest.raises(ValueError):
            validate_derivation(bad, SYSTEM_I_C, sigma)

    def test_rule_outside_system_rejected(self):
        sigma = atoms("A _||_ B", "A,B _||_ C")
        derivation = derives(sigma, parse_atom("A _||_ B,C"), SYSTEM_I)
        with pytest.raises(ValueError):
            validate_derivation(derivation, SYSTEM_I.without("E"), sigma)

    def test_random_derivations_validate(self):
        rng = random.Random(42)
        universe = ("A", "B", "C", "D")
        for _ in range(25):
            sigma = random_atom_set(rng, universe, (POSSIBLE, CERTAIN))
            everything = closure(sigma, SYSTEM_FULL, universe)
            target = rng.choice(sorted(everything, key=str))
            derivation = derives(sigma, target, SYSTEM_FULL)
            assert derivation is not None
            validate_derivation(derivation, SYSTEM_FULL, sigma)
            assert derivation.conclusion == target


class TestRendering:
    def test_text_tree(self):
        sigma = atoms("e _||_c s", "e,s _||_p g", "r _||_p r")
        derivation = derives(sigma, parse_atom("r,s,g _||_p e"), SYSTEM_FULL)
        text = render_derivation_text(derivation)
        lines = text.splitlines()
        assert lines[0].startswith("g,r,s _||_p e") or lines[0].startswith("r,s,g")
        assert any("[premise]" in line for line in lines)
        assert any(line.startswith("  ") for line in lines)

    def test_json_steps(self):
        sigma = atoms("A _||_c B")
        derivation = derives(sigma, parse_atom("B _||_c A"), SYSTEM_I_C)
        data = derivation_to_json_list(derivation)
        assert data[0] == {"atom": "A _||_c B", "rule": None, "premises": []}
        assert data[-1]["rule"] == "S_c"
        assert data[-1]["premises"] == [0]
