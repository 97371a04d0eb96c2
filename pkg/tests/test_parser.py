import pytest

from actcause import fixtures
from actcause.logic import (
    Exists,
    FluentAtom,
    Not,
    ObjName,
    Or,
    Trace,
    Var,
)
from actcause.parser import (
    ParseError,
    TheoryValidationError,
    parse_file,
    parse_goal,
    parse_query,
    parse_theory,
    parse_trace,
)
from actcause.render import render_file, render_formula, to_json
from actcause.commands import cmd_achievement_cause, cmd_chain, cmd_minimal_cause

C = ObjName("C")
D = ObjName("D")


class TestParseTheory:
    def test_blocks_world_shape(self, bat):
        assert len(bat.vocabulary.fluents) == 3
        assert len(bat.vocabulary.actions) == 4
        assert len(bat.preconditions) == 4
        assert len(bat.ssas) == 3

    def test_empty_input(self):
        with pytest.raises(ParseError, match="expected 'domain'"):
            parse_theory("")

    def test_undeclared_fluent_in_ssa_is_a_parse_error(self):
        source = """
        domain { objects: C; fluents: P/0; actions: tick/0; }
        poss tick: true;
        ssa Q: true;
        init closed { !P; }
        """
        with pytest.raises(ParseError, match="undeclared fluent"):
            parse_theory(source)

    def test_missing_ssa_is_a_validation_error(self):
        source = """
        domain { objects: C; fluents: P/0; actions: tick/0; }
        poss tick: true;
        init closed { !P; }
        """
        with pytest.raises(TheoryValidationError) as err:
            parse_theory(source)
        assert any("P has no SSA" in v for v in err.value.report.violations)

    def test_forall_initials_expand(self, bat):
        literals = dict(bat.initial.literals)
        assert literals[("Holding", ("C",))] is False
        assert literals[("Holding", ("D",))] is False


class TestParseGoal:
    def test_disjunction(self, vocab):
        got = parse_goal("Broken(C) | Broken(D)", vocab)
        assert got == Or(FluentAtom("Broken", (C,)), FluentAtom("Broken", (D,)))

    def test_quantified(self, vocab):
        got = parse_goal("exists x. Holding(x)", vocab)
        x = Var("x")
        assert got == Exists(x, FluentAtom("Holding", (x,)))

    def test_modal_rejected(self, vocab):
        with pytest.raises(ParseError, match="goal must be static"):
            parse_goal("[drop(C)] Broken(C)", vocab)

    def test_unbound_variable(self, vocab):
        with pytest.raises(ParseError, match="unbound variable"):
            parse_goal("Holding(x)", vocab)

    def test_implication_desugars(self, vocab):
        got = parse_goal("Broken(C) -> Fragile(C)", vocab)
        assert got == Or(Not(FluentAtom("Broken", (C,))),
                         FluentAtom("Fragile", (C,)))


class TestParseTrace:
    def test_three_actions(self, vocab):
        got = parse_trace("pickup(C); drop(C); pickup(D)", vocab)
        assert got.strings() == ["pickup(C)", "drop(C)", "pickup(D)"]

    def test_empty(self, vocab):
        assert parse_trace("", vocab) == Trace()

    def test_arity_error(self, vocab):
        with pytest.raises(ParseError, match="expects 1 argument"):
            parse_trace("pickup(C, D)", vocab)

    def test_undeclared_symbol(self, vocab):
        with pytest.raises(ParseError, match="undeclared action"):
            parse_trace("fly(C)", vocab)

    def test_non_constant_argument(self, vocab):
        with pytest.raises(ParseError, match="not an object constant"):
            parse_trace("pickup(x)", vocab)


class TestSpans:
    @pytest.mark.parametrize("source", [
        "",
        "domain {",
        "domain { objects: C; fluents: P/0; actions: }",
        "domain { objects: C; fluents: P/0; actions: t/0; } junk",
        "domain { objects: C; fluents: P/0; actions: t/0; } poss t: P &; ",
    ])
    def test_error_spans_lie_inside_the_input(self, source):
        with pytest.raises(ParseError) as err:
            parse_file(source)
        span = err.value.span
        assert 0 <= span.start <= span.end <= len(source)
        assert err.value.message


class TestRoundTrip:
    def test_fixture_file(self):
        first = parse_file(fixtures.BLOCKS_SOURCE)
        second = parse_file(render_file(first))
        assert first == second

    def test_rendered_formulas_reparse(self, blocks, vocab):
        for goal in blocks.goals.values():
            assert parse_goal(render_formula(goal), vocab) == goal

    def test_assorted_formula_shapes(self, vocab):
        samples = [
            "!(Broken(C) & Holding(D))",
            "Broken(C) & (Holding(D) | Fragile(C))",
            "forall x. Holding(x) | Broken(x)",
            "exists x. !Holding(x) & Fragile(x)",
            "C != D & Broken(C)",
            "[pickup(C)] (Broken(C) | [drop(C)] Broken(C))",
            "Poss(pickup(C)) & !Poss(drop(D))",
        ]
        for text in samples:
            f = parse_query(text, vocab)
            assert parse_query(render_formula(f), vocab) == f

    def test_equality_rendering(self, vocab):
        f = parse_query("C = D", vocab)
        assert render_formula(f) == "C = D"
        g = parse_query("C != D", vocab)
        assert render_formula(g) == "C != D"


class TestRenderResult:
    def test_achievement_payload_shape(self, tmp_path):
        outcome = cmd_achievement_cause(fixtures.BLOCKS_SOURCE, "brokenC",
                                        "breakAndPick", label="blocks.act")
        result = outcome.payload["result"]
        assert result["cause"] == ["pickup(C)", "drop(C)"]
        assert result["filteredRemainder"] == ["pickup(D)"]
        assert set(outcome.payload) == {"command", "input", "result",
                                        "diagnostics"}

    def test_empty_chain(self, vocab):
        outcome = cmd_chain(fixtures.BLOCKS_SOURCE, trace="", label="x")
        assert outcome.payload["result"] == {"chain": []}

    def test_multi_answer_causes(self):
        outcome = cmd_minimal_cause(fixtures.BLOCKS_SOURCE, "holdingAny",
                                    "length", 3, label="x")
        assert outcome.payload["result"]["causes"] == \
            [["pickup(C)"], ["pickup(D)"]]

    def test_byte_identical_across_runs(self):
        a = to_json(cmd_minimal_cause(fixtures.BLOCKS_SOURCE, "brokenC",
                                      "length", 4, label="x").payload)
        b = to_json(cmd_minimal_cause(fixtures.BLOCKS_SOURCE, "brokenC",
                                      "length", 4, label="x").payload)
        assert a.encode() == b.encode()
