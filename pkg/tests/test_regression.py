import random

import pytest

from actcause.evaluator import StateAssignment, eval_at, eval_static, initial_states
from actcause.logic import (
    After,
    Equal,
    FluentAtom,
    GroundAction,
    Not,
    ObjName,
    Or,
    Poss,
    TRUE,
    Trace,
    is_static,
    mentions_poss,
)
from actcause.parser import parse_query, parse_trace
from actcause.randgen import (
    random_bat,
    random_executable_trace,
    random_static_sentence,
    random_vocabulary,
)
from actcause.regression import RegressionError, regress, regress_step, simplify

C = ObjName("C")
D = ObjName("D")


class TestRegressStep:
    def test_broken_through_drop(self, bat):
        got = regress_step(bat, GroundAction("drop", ("C",)),
                           FluentAtom("Broken", (C,)))
        assert got == Or(FluentAtom("Fragile", (C,)), FluentAtom("Broken", (C,)))

    def test_equalities_untouched(self, bat):
        f = Equal(C, D)
        assert regress_step(bat, GroundAction("pickup", ("C",)), f) == f

    def test_fragile_through_quench(self, bat):
        got = regress_step(bat, GroundAction("quench", ("D",)),
                           FluentAtom("Fragile", (D,)))
        assert got == TRUE

    def test_poss_is_rewritten_before_the_step(self, bat):
        got = regress_step(bat, GroundAction("pickup", ("C",)),
                           Poss(GroundAction("drop", ("C",)).to_term()))
        # Holding(C) after pickup(C) is just true.
        assert got == TRUE

    def test_rejects_modalities(self, bat):
        f = After(GroundAction("drop", ("C",)).to_term(), FluentAtom("Broken", (C,)))
        with pytest.raises(RegressionError):
            regress_step(bat, GroundAction("pickup", ("C",)), f)


class TestRegress:
    def test_empty_trace_is_identity(self, bat):
        f = FluentAtom("Broken", (C,))
        result = regress(bat, Trace(), f)
        assert result.formula == f and result.step_count == 0

    def test_break_sequence_true_initially(self, bat):
        z = parse_trace("pickup(C); drop(C)", bat.vocabulary)
        result = regress(bat, z, FluentAtom("Broken", (C,)))
        s0 = initial_states(bat)[0]
        assert eval_static(s0, result.formula)
        assert eval_at(bat, s0, z, FluentAtom("Broken", (C,)))

    def test_quench_sequence_true_initially(self, bat):
        z = parse_trace("pickup(D); quench(D)", bat.vocabulary)
        result = regress(bat, z, FluentAtom("Fragile", (D,)))
        s0 = initial_states(bat)[0]
        assert eval_static(s0, result.formula)

    def test_output_mentions_no_modality_and_no_poss(self, bat):
        z = parse_trace("pickup(C); drop(C)", bat.vocabulary)
        goal = parse_query("exists x. Broken(x) & Poss(pickup(x))", bat.vocabulary)
        result = regress(bat, z, goal)
        assert is_static(result.formula)
        assert not mentions_poss(result.formula)

    def test_compositional(self, bat):
        rng = random.Random(41)
        for _ in range(50):
            z = random_executable_trace(rng, bat, 4)
            k = rng.randint(0, len(z))
            f = random_static_sentence(rng, bat.vocabulary, 2)
            once = regress(bat, z, f).formula
            inner = regress(bat, z.drop_prefix(k), f).formula
            twice = regress(bat, z.prefix(k), inner).formula
            assert once == twice

    def test_agrees_with_progression(self):
        rng = random.Random(43)
        for _ in range(200):
            b = random_bat(rng)
            z = random_executable_trace(rng, b, 4)
            f = random_static_sentence(rng, b.vocabulary, 3)
            s0 = initial_states(b)[0]
            assert eval_static(s0, regress(b, z, f).formula) == eval_at(b, s0, z, f)


class TestSimplify:
    def test_reflexive_conjunct(self, bat):
        f = parse_query("C = C & Broken(C)", bat.vocabulary)
        assert simplify(f) == FluentAtom("Broken", (C,))

    def test_unique_names_disjunct(self, bat):
        f = parse_query("C = D | Broken(C)", bat.vocabulary)
        assert simplify(f) == FluentAtom("Broken", (C,))

    def test_double_negation(self, bat):
        assert simplify(Not(Not(FluentAtom("Broken", (C,))))) == \
            FluentAtom("Broken", (C,))

    def test_preserves_truth_on_all_states(self):
        # Brute force over every assignment of small random vocabularies.
        rng = random.Random(47)
        for _ in range(60):
            vocab = random_vocabulary(rng, max_objects=2, max_fluents=3)
            atoms = vocab.ground_atoms()
            if len(atoms) > 12:
                continue
            f = random_static_sentence(rng, vocab, 3)
            g = simplify(f)
            for mask in range(2 ** len(atoms)):
                true_atoms = frozenset(
                    a for i, a in enumerate(atoms) if mask >> i & 1
                )
                state = StateAssignment(vocab, true_atoms)
                assert eval_static(state, f) == eval_static(state, g)
