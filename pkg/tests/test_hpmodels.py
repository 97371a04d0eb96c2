import itertools
import random

import pytest

from actcause.hpmodels import (
    Cmp,
    ConstEquation,
    Context,
    ENot,
    EOr,
    ExprEquation,
    HPModel,
    Intervention,
    ModelError,
    VarDecl,
    actual_causes,
    find_witness,
    intervene,
    satisfies,
    solve,
)
from actcause.parser import parse_value_query
from actcause.randgen import random_boolean_model


def both_true(decl):
    return next(iter(decl.contexts.values()))


@pytest.fixture(scope="module")
def disjunctive(blocks):
    return blocks.hpmodels["forestFireDisjunctive"]


@pytest.fixture(scope="module")
def conjunctive(blocks):
    return blocks.hpmodels["forestFireConjunctive"]


@pytest.fixture(scope="module")
def preemption(blocks):
    return blocks.hpmodels["pickupPreemption"]


class TestSolve:
    def test_disjunctive_fire(self, disjunctive):
        got = solve(disjunctive.model, both_true(disjunctive))
        assert got == {"MD": "true", "L": "true", "FF": "true"}

    def test_no_ignition(self, disjunctive):
        ctx = Context((("UMD", "false"), ("UL", "false")))
        assert solve(disjunctive.model, ctx)["FF"] == "false"

    def test_preemption_assignment(self, preemption):
        got = solve(preemption.model, both_true(preemption))
        assert got["PDG"] == "false" and got["GL"] == "true"

    def test_respects_any_topological_order(self):
        # X1 and X2 are independent; either declaration order must agree.
        u = VarDecl("U")
        x1 = VarDecl("X1")
        x2 = VarDecl("X2")
        x3 = VarDecl("X3")
        eq = {
            "X1": ExprEquation(Cmp("U", "true")),
            "X2": ExprEquation(ENot(Cmp("U", "true"))),
            "X3": ExprEquation(EOr(Cmp("X1", "true"), Cmp("X2", "true"))),
        }
        ctx = Context((("U", "true"),))
        a = HPModel((u,), (x1, x2, x3), (("X1", eq["X1"]), ("X2", eq["X2"]),
                                         ("X3", eq["X3"])))
        b = HPModel((u,), (x2, x1, x3), (("X2", eq["X2"]), ("X1", eq["X1"]),
                                         ("X3", eq["X3"])))
        assert solve(a, ctx) == solve(b, ctx)

    def test_partial_context_rejected(self, disjunctive):
        with pytest.raises(ModelError, match="misses"):
            solve(disjunctive.model, Context((("UMD", "true"),)))


class TestModelShape:
    def test_forward_reference_rejected(self):
        with pytest.raises(ModelError, match="earlier"):
            HPModel(
                (VarDecl("U"),),
                (VarDecl("X"), VarDecl("Y")),
                (("X", ExprEquation(Cmp("Y", "true"))),
                 ("Y", ExprEquation(Cmp("U", "true")))),
            )

    def test_missing_equation_rejected(self):
        with pytest.raises(ModelError, match="one equation"):
            HPModel((VarDecl("U"),), (VarDecl("X"),), ())

    def test_value_outside_range_rejected(self):
        with pytest.raises(ModelError, match="range"):
            HPModel(
                (VarDecl("U"),),
                (VarDecl("X", ("low", "high")),),
                (("X", ConstEquation("medium")),),
            )


class TestIntervene:
    def test_pinned_variable(self, disjunctive):
        model = intervene(disjunctive.model, Intervention((("MD", "false"),)))
        got = solve(model, both_true(disjunctive))
        assert got["MD"] == "false" and got["FF"] == "true"

    def test_empty_intervention_is_identity(self, disjunctive):
        assert intervene(disjunctive.model, Intervention()) == disjunctive.model

    def test_pinning_the_effect(self, disjunctive):
        model = intervene(disjunctive.model, Intervention((("FF", "false"),)))
        assert solve(model, both_true(disjunctive))["FF"] == "false"

    def test_out_of_range_rejected(self, disjunctive):
        with pytest.raises(ModelError, match="range"):
            intervene(disjunctive.model, Intervention((("FF", "maybe"),)))

    def test_exogenous_rejected(self, disjunctive):
        with pytest.raises(ModelError, match="non-endogenous"):
            intervene(disjunctive.model, Intervention((("UMD", "false"),)))


class TestSatisfies:
    def test_frozen_lightning_keeps_the_fire(self, disjunctive):
        query = parse_value_query("FF = true", disjunctive.model)
        iv = Intervention((("MD", "false"), ("L", "true")))
        assert satisfies(disjunctive.model, both_true(disjunctive), iv, query)

    def test_both_out_extinguishes(self, disjunctive):
        query = parse_value_query("!(FF = true)", disjunctive.model)
        iv = Intervention((("MD", "false"), ("L", "false")))
        assert satisfies(disjunctive.model, both_true(disjunctive), iv, query)

    def test_no_intervention(self, disjunctive):
        query = parse_value_query("FF = true", disjunctive.model)
        assert satisfies(disjunctive.model, both_true(disjunctive),
                         Intervention(), query)


class TestNonBooleanRanges:
    SOURCE = """
    domain { objects: C; fluents: P/0; actions: tick/0; }
    poss tick: true;
    ssa P: P;
    init closed { !P; }

    hpmodel thermostat {
      exo: UH in {cold, warm, hot};
      endo: Heater, Temp in {low, mid, high};
      eq Heater: UH = cold;
      eq Temp: case { UH = hot -> high; Heater = true -> mid; else -> low; };
      context chilly: UH = cold;
    }
    """

    @pytest.fixture(scope="class")
    def thermostat(self):
        from actcause.parser import parse_file
        return parse_file(self.SOURCE).hpmodels["thermostat"]

    def test_case_equation_solves(self, thermostat):
        got = solve(thermostat.model, thermostat.contexts["chilly"])
        assert got == {"Heater": "true", "Temp": "mid"}

    def test_case_default(self, thermostat):
        got = solve(thermostat.model, Context((("UH", "warm"),)))
        assert got == {"Heater": "false", "Temp": "low"}

    def test_three_valued_cause(self, thermostat):
        ctx = thermostat.contexts["chilly"]
        causes = actual_causes(thermostat.model, ctx, Cmp("Temp", "mid"))
        assert [c.conjuncts for c in causes] == [(("Heater", "true"),)]

    def test_roundtrip(self):
        from actcause.parser import parse_file
        from actcause.render import render_file
        first = parse_file(self.SOURCE)
        assert parse_file(render_file(first)) == first


class TestActualCauses:
    def test_disjunctive_joint_cause_only(self, disjunctive):
        query = parse_value_query("FF = true", disjunctive.model)
        causes = actual_causes(disjunctive.model, both_true(disjunctive), query)
        assert [c.conjuncts for c in causes] == \
            [(("MD", "true"), ("L", "true"))]
        assert causes[0].witness.frozen == ()

    def test_conjunctive_singletons(self, conjunctive):
        query = parse_value_query("FF = true", conjunctive.model)
        causes = actual_causes(conjunctive.model, both_true(conjunctive), query)
        assert sorted(c.conjuncts for c in causes) == \
            [(("L", "true"),), (("MD", "true"),)]

    def test_preemption_blames_the_first_pickup(self, preemption):
        query = parse_value_query("GL = true", preemption.model)
        causes = actual_causes(preemption.model, both_true(preemption), query)
        conjunct_sets = [c.conjuncts for c in causes]
        assert (("PC", "true"),) in conjunct_sets
        assert (("PD", "true"),) not in conjunct_sets

    def test_singleton_model_causes_itself(self):
        model = HPModel(
            (VarDecl("U"),), (VarDecl("X"),),
            (("X", ExprEquation(Cmp("U", "true"))),),
        )
        ctx = Context((("U", "true"),))
        causes = actual_causes(model, ctx, Cmp("X", "true"))
        assert [c.conjuncts for c in causes] == [(("X", "true"),)]
        assert causes[0].witness.frozen == ()

    def test_query_must_hold(self, disjunctive):
        ctx = Context((("UMD", "false"), ("UL", "false")))
        with pytest.raises(ModelError, match="does not hold"):
            actual_causes(disjunctive.model, ctx,
                          parse_value_query("FF = true", disjunctive.model))

    def test_witness_variables_keep_actual_values(self, preemption):
        query = parse_value_query("GL = true", preemption.model)
        ctx = both_true(preemption)
        actual = solve(preemption.model, ctx)
        for cause in actual_causes(preemption.model, ctx, query):
            for var, value in cause.witness.frozen:
                assert actual[var] == value

    def test_minimality_by_exhaustive_witness_search(self):
        rng = random.Random(71)
        checked = 0
        for _ in range(60):
            model, ctx = random_boolean_model(rng)
            actual = solve(model, ctx)
            var = model.endogenous[-1].name
            query = Cmp(var, actual[var])
            causes = actual_causes(model, ctx, query)
            for cause in causes:
                names = tuple(v for v, _ in cause.conjuncts)
                for size in range(1, len(names)):
                    for subset in itertools.combinations(names, size):
                        assert find_witness(model, ctx, query, actual,
                                            subset) is None
                        checked += 1
        assert checked > 0
