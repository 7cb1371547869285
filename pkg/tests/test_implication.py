from __future__ import annotations

import random

import pytest

from indepkit import (
    Atom,
    CERTAIN,
    FragmentError,
    POSSIBLE,
    SYSTEM_DISJOINT_MIXED,
    SYSTEM_I_C,
    SYSTEM_I_P,
    SearchBounds,
    SearchBoundsError,
    check_atom,
    closure,
    constants_of,
    derives,
    implies_cia,
    implies_ia,
    implies_mixed_disjoint,
    implies_pia_star,
    is_pia_star,
    make_atom,
    parse_atom,
    search_counterexample,
)
from helpers import random_atom_set


def atoms(*texts: str) -> list:
    return [parse_atom(t) for t in texts]


class TestImpliesIa:
    def test_exchange(self):
        assert implies_ia(atoms("A _||_ B", "A,B _||_ C"), parse_atom("A _||_ B,C"))

    def test_weak_union_style_failure(self):
        assert not implies_ia(atoms("A _||_ C", "B _||_ C"), parse_atom("A,B _||_ C"))

    def test_trivial(self):
        assert implies_ia([], parse_atom("X _||_ {}"))

    def test_modality_guard(self):
        with pytest.raises(FragmentError):
            implies_ia(atoms("A _||_c B"), parse_atom("A _||_ B"))


class TestImpliesCia:
    def test_running_example_triple(self):
        assert implies_cia(
            atoms("e _||_c s", "e,s _||_c g"), parse_atom("e _||_c s,g")
        )

    def test_nonimplication(self):
        assert not implies_cia(
            atoms("A _||_c C", "B _||_c C"), parse_atom("A,B _||_c C")
        )

    def test_premise_implies_itself(self):
        sigma = atoms("A _||_c B")
        assert implies_cia(sigma, sigma[0])

    def test_matches_certain_closure(self):
        rng = random.Random(51)
        universe = ("A", "B", "C", "D")
        for _ in range(40):
            sigma = random_atom_set(rng, universe, (CERTAIN,))
            goal = random_atom_set(rng, universe, (CERTAIN,), max_atoms=1)[0]
            expected = goal in closure(sigma, SYSTEM_I_C, universe)
            assert implies_cia(sigma, goal) == expected


class TestImpliesPiaStar:
    def test_running_example_failure(self):
        assert not implies_pia_star(
            atoms("e _||_p s", "e,s _||_p g"), parse_atom("e _||_p s,g")
        )

    def test_constancy_stripping(self):
        assert implies_pia_star(
            atoms("A,B _||_p B", "A _||_p C"), parse_atom("A _||_p B,C")
        )

    def test_trivial_goal(self):
        assert implies_pia_star([], parse_atom("A _||_p {}"))

    def test_scope_error_outside_fragment(self):
        goal = make_atom({"A", "B"}, {"C", "D", "E", "F"}, POSSIBLE)
        with pytest.raises(FragmentError):
            implies_pia_star([], goal)

    def test_matches_possible_closure(self):
        rng = random.Random(52)
        universe = ("A", "B", "C", "D", "E")
        checked = 0
        while checked < 60:
            sigma = random_atom_set(rng, universe, (POSSIBLE,))
            goal = random_atom_set(rng, universe, (POSSIBLE,), max_atoms=1)[0]
            if not is_pia_star(goal):
                continue
            checked += 1
            expected = goal in closure(sigma, SYSTEM_I_P, universe)
            assert implies_pia_star(sigma, goal) == expected, (sigma, goal)


class TestConstants:
    def test_syntactic_rule(self):
        assert constants_of(atoms("A,B _||_p B")) == {"B"}
        assert constants_of(atoms("A _||_p B")) == frozenset()

    def test_matches_saturation(self):
        rng = random.Random(53)
        universe = ("A", "B", "C", "D", "E", "F")
        for _ in range(30):
            sigma = random_atom_set(rng, universe, (POSSIBLE,))
            everything = closure(sigma, SYSTEM_I_P, universe)
            derived = {
                a
                for a in universe
                if make_atom({a}, {a}, POSSIBLE) in everything
            }
            assert constants_of(sigma) == derived


class TestMixedDisjoint:
    def test_mixed_exchange_derivable(self):
        sigma = atoms("e _||_c s", "e,s _||_p g")
        assert implies_mixed_disjoint(sigma, parse_atom("e _||_p s,g"))

    def test_possible_premises_dropped_for_certain_goal(self):
        assert not implies_mixed_disjoint(
            atoms("A _||_p B"), parse_atom("A _||_c B")
        )

    def test_certain_premise_gives_possible_goal(self):
        assert implies_mixed_disjoint(atoms("A _||_c B"), parse_atom("A _||_p B"))

    def test_guards(self):
        with pytest.raises(FragmentError):
            implies_mixed_disjoint(atoms("A _||_ B"), parse_atom("A _||_c B"))
        with pytest.raises(FragmentError):
            implies_mixed_disjoint(
                atoms("A,B _||_c B"), parse_atom("A _||_c B")
            )

    def test_matches_disjoint_closure_on_certain_goals(self):
        rng = random.Random(54)
        universe = ("A", "B", "C", "D", "E")
        for _ in range(40):
            sigma = random_atom_set(
                rng, universe, (POSSIBLE, CERTAIN), disjoint=True
            )
            goal_lhs = frozenset(a for a in universe if rng.random() < 0.4)
            goal_rhs = frozenset(
                a for a in universe if a not in goal_lhs and rng.random() < 0.4
            )
            goal = Atom(goal_lhs, goal_rhs, CERTAIN)
            expected = (
                derives(sigma, goal, SYSTEM_DISJOINT_MIXED) is not None
            )
            assert implies_mixed_disjoint(sigma, goal) == expected, (sigma, goal)


class TestSearchCounterexample:
    def test_certain_exchange_failure_witness(self):
        sigma = atoms("A _||_c C", "B _||_c C")
        goal = parse_atom("A,B _||_c C")
        witness = search_counterexample(sigma, goal)
        assert witness is not None and witness.size == 4
        for premise in sigma:
            assert check_atom(witness, premise).verdict
        assert not check_atom(witness, goal).verdict

    def test_possible_exchange_failure_witness(self):
        sigma = atoms("e _||_p s", "e,s _||_p g")
        goal = parse_atom("e _||_p s,g")
        witness = search_counterexample(sigma, goal)
        assert witness is not None
        for premise in sigma:
            assert check_atom(witness, premise).verdict
        assert not check_atom(witness, goal).verdict

    def test_premise_has_no_counterexample(self):
        sigma = atoms("A _||_c B")
        assert (
            search_counterexample(sigma, sigma[0], SearchBounds(max_rows=3)) is None
        )

    def test_soundness_of_derivations(self):
        # whenever something is derivable, the bounded search finds nothing
        cases = [
            (atoms("A _||_ B", "A,B _||_ C"), parse_atom("A _||_ B,C")),
            (atoms("e _||_c s", "e,s _||_p g"), parse_atom("e _||_p s,g")),
            (atoms("A _||_c B", "C _||_c B"), parse_atom("B _||_c A")),
        ]
        for sigma, goal in cases:
            assert search_counterexample(sigma, goal, SearchBounds(max_rows=3)) is None

    def test_bound_overflow(self):
        sigma = [make_atom({"A", "B", "C"}, {"D", "E", "F"}, CERTAIN)]
        with pytest.raises(SearchBoundsError):
            search_counterexample(sigma, parse_atom("A _||_c D"), SearchBounds(max_attributes=4))


REGRESSION_CORPUS = [
    # (premises, goal, implied)
    (("A _||_ B", "A,B _||_ C"), "A _||_ B,C", True),
    (("A _||_ C", "B _||_ C"), "A,B _||_ C", False),
    (("A _||_ B,C",), "A _||_ B", True),
    (("A _||_ B",), "A _||_ C", False),
    (("A _||_ B", "C _||_ D", "E _||_ E"), "A _||_ C", False),
    (("e _||_c s", "e,s _||_c g"), "e _||_c s,g", True),
    (("A _||_c C", "B _||_c C"), "A,B _||_c C", False),
    (("A _||_c B",), "B _||_c A", True),
    (("A,B _||_c C,D",), "A _||_c C", True),
    (("A _||_c B", "B _||_c C"), "A _||_c C", False),
]


class TestRegressionCorpus:
    def test_deciders_and_witnesses(self):
        bounds = SearchBounds(max_attributes=5, max_rows=16, domain_size=2)
        for premise_texts, goal_text, implied in REGRESSION_CORPUS:
            sigma = atoms(*premise_texts)
            goal = parse_atom(goal_text)
            if goal.modality == CERTAIN:
                got = implies_cia([a for a in sigma], goal)
            else:
                got = implies_ia(sigma, goal)
            assert got == implied, (premise_texts, goal_text)
            if not implied:
                witness = search_counterexample(sigma, goal, bounds)
                assert witness is not None, (premise_texts, goal_text)
                for premise in sigma:
                    assert check_atom(witness, premise).verdict
                assert not check_atom(witness, goal).verdict
