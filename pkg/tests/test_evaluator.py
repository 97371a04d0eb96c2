import itertools
import random

import pytest

from actcause.evaluator import (
    BoxUnsupportedError,
    OpenCapExceeded,
    enumerate_executable,
    entails,
    eval_at,
    eval_static,
    executability,
    initial_states,
    is_executable,
    progress,
    successor_state,
)
from actcause.logic import (
    Box,
    Equal,
    Exists,
    FluentAtom,
    GroundAction,
    Not,
    ObjName,
    Trace,
    Var,
)
from actcause.parser import parse_query, parse_theory, parse_trace
from actcause.randgen import random_bat, random_executable_trace

C = ObjName("C")
D = ObjName("D")


def trace(bat, text):
    return parse_trace(text, bat.vocabulary)


def query(bat, text):
    return parse_query(text, bat.vocabulary)


class TestInitialStates:
    def test_closed_gives_one_state(self, bat):
        states = initial_states(bat)
        assert len(states) == 1
        s0 = states[0]
        expected = {
            "Holding(C)": False, "Holding(D)": False,
            "Broken(C)": False, "Broken(D)": False,
            "Fragile(C)": True, "Fragile(D)": False,
        }
        assert s0.as_dict() == expected

    def test_open_completions(self):
        bat = parse_theory("""
        domain { objects: C; fluents: P/0; actions: tick/0; }
        poss tick: true;
        ssa P: a = tick | P;
        init open { }
        """)
        assert len(initial_states(bat)) == 2

    def test_open_cap(self):
        fluents = ", ".join(f"P{i}/1" for i in range(6))
        ssas = "\n".join(f"ssa P{i}(x): P{i}(x);" for i in range(6))
        bat = parse_theory(f"""
        domain {{ objects: C, D, E; fluents: {fluents}; actions: tick/0; }}
        poss tick: true;
        {ssas}
        init open {{ }}
        """)
        with pytest.raises(OpenCapExceeded) as err:
            initial_states(bat)  # 18 unassigned atoms, 2^18 > 2^16
        assert err.value.unassigned == 18

    def test_cap_env_override(self, monkeypatch):
        bat = parse_theory("""
        domain { objects: C; fluents: P/0, Q/0; actions: tick/0; }
        poss tick: true;
        ssa P: P;
        ssa Q: Q;
        init open { }
        """)
        monkeypatch.setenv("ACTCAUSE_OPEN_MODE_CAP", "2")
        with pytest.raises(OpenCapExceeded):
            initial_states(bat)
        monkeypatch.setenv("ACTCAUSE_OPEN_MODE_CAP", "16")
        assert len(initial_states(bat)) == 4


class TestSuccessorState:
    def test_pickup_sets_holding_only(self, bat):
        s0 = initial_states(bat)[0]
        s1 = successor_state(bat, s0, GroundAction("pickup", ("C",)))
        assert s1.as_dict() == {**s0.as_dict(), "Holding(C)": True}

    def test_drop_breaks_fragile(self, bat):
        s0 = initial_states(bat)[0]
        s2 = progress(bat, s0, trace(bat, "pickup(C); drop(C)"))
        assert s2.holds(("Broken", ("C",)))
        assert not s2.holds(("Holding", ("C",)))

    def test_repair_clears_broken(self, bat):
        s0 = initial_states(bat)[0]
        s = progress(bat, s0, trace(bat, "pickup(C); drop(C); pickup(C); repair(C)"))
        assert not s.holds(("Broken", ("C",)))

    def test_deterministic(self, bat):
        s0 = initial_states(bat)[0]
        act = GroundAction("pickup", ("D",))
        assert successor_state(bat, s0, act) == successor_state(bat, s0, act)


class TestEvalStatic:
    def test_fragile_initially(self, bat):
        s0 = initial_states(bat)[0]
        assert eval_static(s0, FluentAtom("Fragile", (C,)))

    def test_nothing_held_initially(self, bat):
        s0 = initial_states(bat)[0]
        assert not eval_static(s0, Exists(Var("x"), FluentAtom("Holding", (Var("x"),))))

    def test_identity_equality(self, bat):
        s0 = initial_states(bat)[0]
        assert eval_static(s0, Equal(C, C))
        assert not eval_static(s0, Equal(C, D))


class TestEvalAt:
    def test_quench_keeps_fragile(self, bat):
        s0 = initial_states(bat)[0]
        z = trace(bat, "pickup(D); quench(D)")
        assert eval_at(bat, s0, z, FluentAtom("Fragile", (D,)))

    def test_modal_query_from_empty_trace(self, bat):
        s0 = initial_states(bat)[0]
        f = query(bat, "[pickup(C)][drop(C)] Broken(C)")
        assert eval_at(bat, s0, Trace(), f)

    def test_nothing_broken_initially(self, bat):
        s0 = initial_states(bat)[0]
        assert not eval_at(bat, s0, Trace(), FluentAtom("Broken", (C,)))

    def test_box_rejected(self, bat):
        s0 = initial_states(bat)[0]
        with pytest.raises(BoxUnsupportedError):
            eval_at(bat, s0, Trace(), Box(FluentAtom("Broken", (C,))))


class TestEntails:
    def test_initially_not_broken(self, bat):
        assert entails(bat, Trace(), Not(FluentAtom("Broken", (C,)))).entailed

    def test_after_pickup_drop(self, bat):
        z = trace(bat, "pickup(C); drop(C)")
        assert entails(bat, z, FluentAtom("Broken", (C,))).entailed

    def test_open_counter_model(self):
        bat = parse_theory("""
        domain { objects: C; fluents: Broken/1; actions: tick/0; }
        poss tick: true;
        ssa Broken(x): Broken(x);
        init open { }
        """)
        verdict = entails(bat, Trace(), FluentAtom("Broken", (C,)))
        assert not verdict.entailed
        assert verdict.counter_model is not None
        assert verdict.counter_model.as_dict() == {"Broken(C)": False}

    def test_closed_counter_model_omitted(self, bat):
        verdict = entails(bat, Trace(), FluentAtom("Broken", (C,)))
        assert not verdict.entailed and verdict.counter_model is None


class TestExecutability:
    def test_valid_narrative(self, bat):
        report = executability(bat, trace(bat, "pickup(C); drop(C); pickup(D)"))
        assert report.executable and report.failed_step is None

    def test_drop_without_holding(self, bat):
        report = executability(bat, trace(bat, "drop(C)"))
        assert not report.executable
        assert report.failed_step == 1
        assert str(report.failed_action) == "drop(C)"

    def test_empty_trace(self, bat):
        assert executability(bat, Trace()).executable

    def test_empty_trace_formula_is_true(self):
        from actcause.evaluator import exec_formula
        from actcause.logic import TRUE
        assert exec_formula(Trace()) == TRUE

    def test_report_agrees_with_the_unfolded_formula(self, bat):
        # Dual route: the per-step report against entailment of exec(z).
        from actcause.evaluator import exec_formula
        rng = random.Random(19)
        from actcause.randgen import random_action_sequence
        for _ in range(40):
            z = random_action_sequence(rng, bat, 4)
            via_formula = entails(bat, Trace(), exec_formula(z)).entailed
            assert executability(bat, z).executable == via_formula

    def test_prefix_executability(self, bat):
        rng = random.Random(23)
        for _ in range(20):
            z = random_executable_trace(rng, bat, 5)
            for p in z.prefixes():
                assert is_executable(bat, p)

    def test_prefix_executability_random_theories(self):
        rng = random.Random(29)
        for _ in range(25):
            b = random_bat(rng)
            z = random_executable_trace(rng, b, 4)
            for p in z.prefixes():
                assert is_executable(b, p)


class TestEnumerateExecutable:
    def test_horizon_zero(self, bat):
        assert list(enumerate_executable(bat, 0)) == [Trace()]

    def test_horizon_one(self, bat):
        got = [z.strings() for z in enumerate_executable(bat, 1)]
        assert got == [[], ["pickup(C)"], ["pickup(D)"]]

    def test_horizon_two_contains_the_break(self, bat):
        traces = {tuple(z.strings()) for z in enumerate_executable(bat, 2)}
        assert ("pickup(C)", "drop(C)") in traces

    def test_breadth_first_order(self, bat):
        lengths = [len(z) for z in enumerate_executable(bat, 3)]
        assert lengths == sorted(lengths)

    def test_matches_brute_force_filter(self, bat):
        horizon = 3
        enumerated = {tuple(z.strings()) for z in enumerate_executable(bat, horizon)}
        acts = bat.vocabulary.ground_actions()
        brute = set()
        for n in range(horizon + 1):
            for combo in itertools.product(acts, repeat=n):
                z = Trace(combo)
                if is_executable(bat, z):
                    brute.add(tuple(z.strings()))
        assert enumerated == brute

    def test_matches_brute_force_on_random_theories(self):
        rng = random.Random(31)
        for _ in range(10):
            b = random_bat(rng, max_objects=2, max_fluents=3, max_actions=2)
            enumerated = {tuple(z.strings()) for z in enumerate_executable(b, 2)}
            acts = b.vocabulary.ground_actions()
            brute = set()
            for n in range(3):
                for combo in itertools.product(acts, repeat=n):
                    z = Trace(combo)
                    if is_executable(b, z):
                        brute.add(tuple(z.strings()))
            assert enumerated == brute
