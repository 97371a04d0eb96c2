"""Command implementations shared by the command line and the HTTP service.

Each command takes the input file text plus its selections, and returns an
:class:`Outcome`: the JSON-ready payload (``command`` / ``input`` /
``result`` / ``diagnostics``) and a status — 0 for an answer, 1 for a
domain-level "no answer".  Input problems (syntax, validation, unknown
names) raise and are mapped by the surfaces to exit code 2 or HTTP 400.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from . import fixtures
from .logic import Trace
from .evaluator import entails, executability
from .regression import regress
from .cause import (
    AchievementAnswer,
    CausalSetting,
    MinimalCauseAnswer,
    ORDERS,
    achievement_cause,
    filter_trace,
    minimal_causes,
)
from .bschain import bs_chain, chain_of, verify_chain_inclusion
from .hpmodels import Context, actual_causes, eval_expr, solve, check_context
from .parser import (
    HPModelDecl,
    ParsedFile,
    parse_file,
    parse_goal,
    parse_query,
    parse_trace,
    parse_value_query,
)
from .render import render_formula, result_payload


class CommandError(Exception):
    """A well-formed file was asked something it does not define."""


@dataclass(frozen=True)
class Outcome:
    payload: dict
    status: int


def _payload(command: str, input_desc: dict, result, diagnostics=()) -> dict:
    return result_payload(command, input_desc, result, list(diagnostics))


def _load(source: str) -> ParsedFile:
    return parse_file(source)


def _named_goal(parsed: ParsedFile, name: str):
    try:
        return parsed.goals[name]
    except KeyError:
        known = ", ".join(sorted(parsed.goals)) or "none"
        raise CommandError(f"unknown goal {name!r} (defined: {known})") from None


def _named_narrative(parsed: ParsedFile, name: str) -> Trace:
    try:
        return parsed.narratives[name]
    except KeyError:
        known = ", ".join(sorted(parsed.narratives)) or "none"
        raise CommandError(f"unknown narrative {name!r} (defined: {known})") from None


def _named_model(parsed: ParsedFile, name: str) -> HPModelDecl:
    try:
        return parsed.hpmodels[name]
    except KeyError:
        known = ", ".join(sorted(parsed.hpmodels)) or "none"
        raise CommandError(f"unknown hpmodel {name!r} (defined: {known})") from None


def _goal_selection(parsed: ParsedFile, goal: Optional[str],
                    formula: Optional[str]):
    if (goal is None) == (formula is None):
        raise CommandError("select a goal by name or give an inline formula")
    if goal is not None:
        return _named_goal(parsed, goal), {"goal": goal}
    parsed_formula = parse_goal(formula, parsed.bat.vocabulary)
    return parsed_formula, {"formula": formula}


def _trace_selection(parsed: ParsedFile, narrative: Optional[str],
                     trace: Optional[str]) -> tuple[Trace, dict]:
    if (narrative is None) == (trace is None):
        raise CommandError("select a narrative by name or give an inline trace")
    if narrative is not None:
        return _named_narrative(parsed, narrative), {"narrative": narrative}
    return parse_trace(trace, parsed.bat.vocabulary), {"trace": trace}


def _setting(parsed: ParsedFile, goal_name: str, narrative_name: str
             ) -> tuple[CausalSetting, dict]:
    goal = _named_goal(parsed, goal_name)
    narrative = _named_narrative(parsed, narrative_name)
    setting = CausalSetting(parsed.bat, narrative, goal)
    return setting, {"goal": goal_name, "narrative": narrative_name}


# ---------------------------------------------------------------------------
# Engine commands


def cmd_check(source: str, query: str, label: str = "<input>") -> Outcome:
    parsed = _load(source)
    f = parse_query(query, parsed.bat.vocabulary)
    verdict = entails(parsed.bat, Trace(), f)
    result = {
        "entailed": verdict.entailed,
        "counterModel": verdict.counter_model.as_dict()
        if verdict.counter_model else None,
    }
    return Outcome(_payload("check", {"path": label, "query": query}, result), 0)


def cmd_exec(source: str, narrative: Optional[str] = None,
             trace: Optional[str] = None, label: str = "<input>") -> Outcome:
    parsed = _load(source)
    z, selection = _trace_selection(parsed, narrative, trace)
    report = executability(parsed.bat, z)
    result = {
        "executable": report.executable,
        "steps": [
            {"index": s.index, "action": str(s.action), "possible": s.possible}
            for s in report.steps
        ],
        "failedStep": report.failed_step,
    }
    return Outcome(_payload("exec", {"path": label, **selection}, result), 0)


def cmd_regress(source: str, goal: Optional[str] = None,
                formula: Optional[str] = None, narrative: Optional[str] = None,
                trace: Optional[str] = None, label: str = "<input>") -> Outcome:
    parsed = _load(source)
    f, goal_sel = _goal_selection(parsed, goal, formula)
    z, trace_sel = _trace_selection(parsed, narrative, trace)
    rr = regress(parsed.bat, z, f)
    result = {
        "formula": render_formula(rr.formula),
        "stepCount": rr.step_count,
        "sizeBefore": rr.size_before,
        "sizeAfter": rr.size_after,
    }
    return Outcome(
        _payload("regress", {"path": label, **goal_sel, **trace_sel}, result), 0)


def _coordinates_json(answer: MinimalCauseAnswer) -> list[dict]:
    return [
        {"trace": c.trace.strings(), "length": c.length,
         "footprint": list(c.footprint)}
        for c in answer.coordinates
    ]


def cmd_minimal_cause(source: str, goal: str, order: str, horizon: int,
                      lex: Optional[str] = None, jobs: int = 1,
                      label: str = "<input>") -> Outcome:
    parsed = _load(source)
    if order not in ORDERS:
        raise CommandError(f"unknown order {order!r}; pick one of {', '.join(ORDERS)}")
    lex_parts = tuple(p.strip() for p in lex.split(",")) if lex else None
    answer = minimal_causes(parsed.bat, _named_goal(parsed, goal), order, horizon,
                            lex=lex_parts, jobs=jobs)
    result = {
        "baseHolds": answer.base_holds,
        "causes": [t.strings() for t in answer.causes],
        "coordinates": _coordinates_json(answer),
        "order": answer.order,
        "horizon": answer.horizon,
    }
    input_desc = {"path": label, "goal": goal, "order": order, "horizon": horizon}
    if lex:
        input_desc["lex"] = lex
    status = 0 if answer.causes else 1
    return Outcome(_payload("minimal-cause", input_desc, result,
                            answer.diagnostics), status)


def _achievement_json(answer: AchievementAnswer) -> dict:
    return {
        "cause": answer.cause.strings() if answer.cause is not None else None,
        "filteredRemainder": answer.filtered_remainder.strings()
        if answer.filtered_remainder is not None else None,
        "baseHolds": answer.base_holds,
        "items": [
            {
                "prefix": r.prefix.strings(),
                "persists": r.persists,
                "counterfactual": r.counterfactual,
                "filteredRemainder": r.filtered_remainder.strings(),
            }
            for r in answer.items
        ],
        "nonPrefixSubsequences": [
            {"indices": list(w.indices), "actions": w.actions.strings()}
            for w in answer.non_prefix_witnesses
        ],
    }


def cmd_achievement_cause(source: str, goal: str, narrative: str,
                          label: str = "<input>") -> Outcome:
    parsed = _load(source)
    setting, selection = _setting(parsed, goal, narrative)
    answer = achievement_cause(setting)
    status = 0 if answer.found else 1
    return Outcome(
        _payload("achievement-cause", {"path": label, **selection},
                 _achievement_json(answer), answer.diagnostics),
        status,
    )


def _pair_json(pair, provenance=None) -> dict:
    out = {"action": str(pair.action), "context": pair.context.strings()}
    if provenance is not None:
        out["clause"] = provenance.clause
        out["level"] = provenance.level
        out["levelGoal"] = render_formula(provenance.level_goal)
    return out


def cmd_bs_chain(source: str, goal: str, narrative: str,
                 label: str = "<input>") -> Outcome:
    parsed = _load(source)
    setting, selection = _setting(parsed, goal, narrative)
    chain = bs_chain(setting)
    result = {"chain": [
        _pair_json(p, prov) for p, prov in zip(chain.pairs, chain.provenance)
    ]}
    return Outcome(_payload("bs-chain", {"path": label, **selection}, result), 0)


def cmd_chain(source: str, narrative: Optional[str] = None,
              trace: Optional[str] = None, label: str = "<input>") -> Outcome:
    parsed = _load(source)
    z, selection = _trace_selection(parsed, narrative, trace)
    pairs = sorted(chain_of(z), key=lambda p: len(p.context))
    result = {"chain": [_pair_json(p) for p in pairs]}
    return Outcome(_payload("chain", {"path": label, **selection}, result), 0)


def cmd_verify_theorem1(source: str, goal: str, narrative: str,
                        label: str = "<input>") -> Outcome:
    parsed = _load(source)
    setting, selection = _setting(parsed, goal, narrative)
    report = verify_chain_inclusion(setting)
    result = {
        "holds": report.holds,
        "bsChain": [_pair_json(p) for p in report.chain.pairs],
        "cause": report.cause.strings() if report.cause is not None else None,
        "chainPairs": [
            _pair_json(p)
            for p in sorted(report.cause_pairs, key=lambda p: len(p.context))
        ],
        "violations": [_pair_json(p) for p in report.violations],
    }
    return Outcome(_payload("verify-theorem1", {"path": label, **selection},
                            result), 0)


def _pick_context(decl: HPModelDecl, context: Optional[str]) -> tuple[str, Context]:
    if context is not None:
        if context not in decl.contexts:
            known = ", ".join(sorted(decl.contexts)) or "none"
            raise CommandError(f"unknown context {context!r} (defined: {known})")
        return context, decl.contexts[context]
    if len(decl.contexts) == 1:
        return next(iter(decl.contexts.items()))
    known = ", ".join(sorted(decl.contexts)) or "none"
    raise CommandError(f"pick a context with --context (defined: {known})")


def cmd_hp_cause(source: str, model: str, query: str,
                 context: Optional[str] = None, label: str = "<input>") -> Outcome:
    parsed = _load(source)
    decl = _named_model(parsed, model)
    ctx_name, ctx = _pick_context(decl, context)
    expr = parse_value_query(query, decl.model)
    input_desc = {"path": label, "model": model, "context": ctx_name,
                  "query": query}

    actual = dict(check_context(decl.model, ctx))
    actual.update(solve(decl.model, ctx))
    if not eval_expr(expr, actual):
        result = {"actual": actual, "causes": []}
        return Outcome(_payload(
            "hp-cause", input_desc, result,
            ["query does not hold in the given context; nothing to cause"]), 1)

    causes = actual_causes(decl.model, ctx, expr)
    result = {
        "actual": actual,
        "causes": [
            {
                "conjuncts": [{"var": v, "value": x} for v, x in c.conjuncts],
                "partsOfCause": [f"{v}={x}" for v, x in c.conjuncts],
                "witness": {
                    "frozen": {v: x for v, x in c.witness.frozen},
                    "alternative": {v: x for v, x in c.witness.alternative},
                },
            }
            for c in causes
        ],
    }
    return Outcome(_payload("hp-cause", input_desc, result),
                   0 if causes else 1)


# ---------------------------------------------------------------------------
# Self-test


def _selftest_lines() -> list[dict]:
    parsed = _load(fixtures.BLOCKS_SOURCE)
    bat = parsed.bat
    lines = []

    def check(name: str, expected, got):
        lines.append({"name": name, "ok": expected == got,
                      "expected": expected, "got": got})

    q1 = parse_query("[pickup(C)][drop(C)] Broken(C)", bat.vocabulary)
    check("entailed: broken after pickup and drop",
          True, entails(bat, Trace(), q1).entailed)
    q2 = parse_query("[pickup(D)][quench(D)] Fragile(D)", bat.vocabulary)
    check("entailed: fragile after pickup and quench",
          True, entails(bat, Trace(), q2).entailed)

    def causes_of(goal, order, horizon=5):
        answer = minimal_causes(bat, parsed.goals[goal], order, horizon)
        return [t.strings() for t in answer.causes]

    check("minimal cause (length) of brokenC",
          [["pickup(C)", "drop(C)"]], causes_of("brokenC", "length"))
    check("minimal causes (length) of holdingAny",
          [["pickup(C)"], ["pickup(D)"]], causes_of("holdingAny", "length"))
    check("minimal cause (fluent) of brokenEither",
          [["pickup(C)", "drop(C)"]], causes_of("brokenEither", "fluent"))
    check("minimal cause (plan-effect) of brokenD",
          [["pickup(D)", "quench(D)", "drop(D)"]],
          causes_of("brokenD", "plan-effect"))

    z5 = parsed.narratives["breakBoth"]
    check("filtered remainder after removing pickup(C)",
          ["pickup(D)", "quench(D)", "drop(D)"],
          filter_trace(bat, Trace(), z5.drop_prefix(1)).strings())

    def achievement(goal, narrative):
        setting = CausalSetting(bat, parsed.narratives[narrative],
                                parsed.goals[goal])
        answer = achievement_cause(setting)
        return {
            "cause": answer.cause.strings(),
            "remainder": answer.filtered_remainder.strings(),
        }

    check("achievement cause of brokenC in breakAndPick",
          {"cause": ["pickup(C)", "drop(C)"], "remainder": ["pickup(D)"]},
          achievement("brokenC", "breakAndPick"))
    check("achievement cause of holdingEither in bothPicked",
          {"cause": ["pickup(C)", "pickup(D)"], "remainder": []},
          achievement("holdingEither", "bothPicked"))
    check("achievement cause of brokenEither in breakBoth",
          {"cause": ["pickup(C)", "drop(C)", "pickup(D)"], "remainder": []},
          achievement("brokenEither", "breakBoth"))

    setting = CausalSetting(bat, parsed.narratives["breakAndPick"],
                            parsed.goals["brokenCOrHoldingD"])
    chain = bs_chain(setting)
    check("achievement chain of brokenCOrHoldingD",
          [["pickup(C)", []], ["drop(C)", ["pickup(C)"]]],
          [[str(p.action), p.context.strings()] for p in chain.pairs])
    check("chain pairs of breakAndPick",
          sorted([["pickup(C)", []], ["drop(C)", ["pickup(C)"]],
                  ["pickup(D)", ["pickup(C)", "drop(C)"]]]),
          sorted([str(p.action), p.context.strings()]
                 for p in chain_of(parsed.narratives["breakAndPick"])))
    check("chain inclusion on brokenCOrHoldingD",
          True, verify_chain_inclusion(setting).holds)
    setting_b = CausalSetting(bat, parsed.narratives["breakAndPick"],
                              parsed.goals["brokenC"])
    check("chain inclusion on brokenC",
          True, verify_chain_inclusion(setting_b).holds)

    def hp_causes(model, query):
        decl = parsed.hpmodels[model]
        ctx = next(iter(decl.contexts.values()))
        expr = parse_value_query(query, decl.model)
        return sorted(
            [f"{v}={x}" for v, x in c.conjuncts]
            for c in actual_causes(decl.model, ctx, expr)
        )

    check("disjunctive forest fire: one joint cause",
          [["MD=true", "L=true"]], hp_causes("forestFireDisjunctive", "FF = true"))
    check("conjunctive forest fire: two singleton causes",
          [["L=true"], ["MD=true"]], hp_causes("forestFireConjunctive", "FF = true"))
    temporal = hp_causes("pickupPreemption", "GL = true")
    check("preemption model: first pickup is a cause",
          True, ["PC=true"] in temporal)
    check("preemption model: second pickup is not a cause",
          False, ["PD=true"] in temporal)
    return lines


def _random_lines(seed: int, settings: int) -> list[dict]:
    from . import randgen
    from .evaluator import eval_static, initial_states, eval_at
    from .regression import regress as _regress

    lines = []
    rng = random.Random(seed)
    violations = 0
    for _ in range(settings):
        setting = randgen.random_setting(rng)
        if not verify_chain_inclusion(setting).holds:
            violations += 1
    lines.append({
        "name": f"chain inclusion on {settings} random settings (seed {seed})",
        "ok": violations == 0, "expected": 0, "got": violations,
    })

    mismatches = 0
    for _ in range(settings):
        bat = randgen.random_bat(rng)
        z = randgen.random_executable_trace(rng, bat, 4)
        f = randgen.random_static_sentence(rng, bat.vocabulary, 3)
        s0 = initial_states(bat)[0]
        if eval_static(s0, _regress(bat, z, f).formula) != eval_at(bat, s0, z, f):
            mismatches += 1
    lines.append({
        "name": f"regression agrees with progression on {settings} random "
                f"queries (seed {seed})",
        "ok": mismatches == 0, "expected": 0, "got": mismatches,
    })
    return lines


def cmd_selftest(seed: Optional[int] = None,
                 random_settings: int = 0) -> Outcome:
    """Run the built-in fixture table; optionally append seeded random
    property lines."""
    lines = _selftest_lines()
    if random_settings:
        lines.extend(_random_lines(seed if seed is not None else 0, random_settings))
    passed = sum(1 for line in lines if line["ok"])
    result = {
        "total": len(lines),
        "passed": passed,
        "failed": len(lines) - passed,
        "lines": lines,
    }
    input_desc: dict = {"fixtures": "embedded"}
    if random_settings:
        input_desc["randomSettings"] = random_settings
        input_desc["seed"] = seed if seed is not None else 0
    status = 0 if passed == len(lines) else 1
    return Outcome(_payload("selftest", input_desc, result), status)
