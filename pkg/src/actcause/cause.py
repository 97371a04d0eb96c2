"""Counterfactual causes: minimal causes over all executable traces, and
achievement causes inside a given narrative.

A minimal cause of a goal that is false initially is an executable trace
achieving it, minimal under one of three orders:

* ``length``: fewest actions;
* ``fluent``: smallest fluent footprint (the fluents whose successor state
  axioms mention an action symbol of the trace), with ties broken by length,
  since footprint alone would admit traces padded with footprint-neutral
  actions;
* ``plan-effect``: the Pareto frontier of (footprint size, length), or a
  lexicographic order when one answer is wanted.

An achievement cause inside a narrative is the shortest prefix after which
the goal persists to the end, and whose removal leaves a filtered remainder
(inexecutable actions dropped left to right) after which the goal is false.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .logic import Formula, GroundAction, LanguageError, Not, Poss, Trace, free_vars, is_static
from .evaluator import (
    StateAssignment,
    entails,
    eval_at,
    executability,
    executable_levels,
)
from .theory import BasicActionTheory, affected_fluents

ORDER_LENGTH = "length"
ORDER_FLUENT = "fluent"
ORDER_PLAN_EFFECT = "plan-effect"
ORDERS = (ORDER_LENGTH, ORDER_FLUENT, ORDER_PLAN_EFFECT)


class SettingError(LanguageError):
    """The pieces given do not form a causal setting."""


def _check_goal(goal: Formula) -> None:
    if not is_static(goal):
        raise SettingError("goal must be static")
    if free_vars(goal):
        raise SettingError("goal must be a sentence")


@dataclass(frozen=True)
class CausalSetting:
    """A theory, a narrative executable in it, and a goal the narrative achieves.

    Both side conditions are checked at construction.
    """

    bat: BasicActionTheory
    narrative: Trace
    goal: Formula

    def __post_init__(self):
        _check_goal(self.goal)
        report = executability(self.bat, self.narrative)
        if not report.executable:
            raise SettingError(
                f"narrative is not executable: step {report.failed_step} "
                f"({report.failed_action}) is impossible"
            )
        if not entails(self.bat, self.narrative, self.goal):
            raise SettingError("narrative does not achieve the goal")


def fluent_footprint(bat: BasicActionTheory, trace: Trace) -> frozenset[str]:
    """Fluents whose successor state axioms mention an action symbol of ``trace``."""
    out: frozenset[str] = frozenset()
    for symbol in {a.symbol for a in trace}:
        out |= affected_fluents(bat, symbol)
    return out


def _trace_sort_key(bat: BasicActionTheory, trace: Trace):
    return (len(trace), tuple(bat.vocabulary.action_index(a) for a in trace))


@dataclass(frozen=True)
class CauseCoordinates:
    trace: Trace
    length: int
    footprint: tuple[str, ...]  # fluent declaration order


@dataclass(frozen=True)
class MinimalCauseAnswer:
    causes: tuple[Trace, ...]
    order: str
    horizon: int
    base_holds: bool
    coordinates: tuple[CauseCoordinates, ...] = ()
    diagnostics: tuple[str, ...] = ()


def _footprint_sorted(bat: BasicActionTheory, fp: frozenset[str]) -> tuple[str, ...]:
    decl = [name for name, _ in bat.vocabulary.fluents]
    return tuple(name for name in decl if name in fp)


def minimal_causes(bat: BasicActionTheory, goal: Formula, order: str,
                   horizon: int, *, lex: Optional[tuple[str, ...]] = None,
                   jobs: int = 1) -> MinimalCauseAnswer:
    """All minimal causes of ``goal`` within ``horizon``, under ``order``.

    Requires the goal to be entailed false initially; otherwise the answer is
    empty with a diagnostic.  Ties are all reported.  ``lex`` turns the
    plan-effect Pareto frontier into a lexicographic single class, e.g.
    ``("footprint", "length")``.
    """
    _check_goal(goal)
    if order not in ORDERS:
        raise SettingError(f"unknown minimality order {order!r}")
    if horizon < 1:
        raise SettingError("horizon must be >= 1")

    base = entails(bat, Trace(), Not(goal))
    if not base:
        return MinimalCauseAnswer(
            causes=(), order=order, horizon=horizon, base_holds=False,
            diagnostics=("goal is not false initially; nothing to cause",),
        )

    def achieved(entry: tuple[Trace, tuple[StateAssignment, ...]]) -> bool:
        _, states = entry
        return all(eval_at(bat, s, Trace(), goal) for s in states)

    achievers: list[Trace] = []
    levels = executable_levels(bat, horizon)
    next(levels)  # the empty trace cannot achieve a goal that is false initially
    for level in levels:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                flags = list(pool.map(achieved, level))
        else:
            flags = [achieved(entry) for entry in level]
        achievers.extend(trace for (trace, _), ok in zip(level, flags) if ok)
        if order == ORDER_LENGTH and achievers:
            break

    if not achievers:
        return MinimalCauseAnswer(
            causes=(), order=order, horizon=horizon, base_holds=True,
            diagnostics=(
                f"horizon exhausted: no executable trace of length <= {horizon} "
                "achieves the goal",),
        )

    stats = [(trace, len(fluent_footprint(bat, trace)), len(trace))
             for trace in achievers]
    if order == ORDER_LENGTH:
        best = min(n for _, _, n in stats)
        chosen = [t for t, _, n in stats if n == best]
    elif order == ORDER_FLUENT:
        best_fp = min(fp for _, fp, _ in stats)
        pool = [(t, fp, n) for t, fp, n in stats if fp == best_fp]
        best_len = min(n for _, _, n in pool)
        chosen = [t for t, _, n in pool if n == best_len]
    else:
        if lex:
            keys = {"footprint": 1, "length": 2}
            for part in lex:
                if part not in keys:
                    raise SettingError(f"unknown lex component {part!r}")
            def lex_key(item):
                return tuple(item[keys[part]] for part in lex)
            best_key = min(lex_key(item) for item in stats)
            chosen = [item[0] for item in stats if lex_key(item) == best_key]
        else:
            chosen = [
                t for t, fp, n in stats
                if not any(
                    (fp2 <= fp and n2 <= n) and (fp2 < fp or n2 < n)
                    for _, fp2, n2 in stats
                )
            ]

    chosen.sort(key=lambda t: _trace_sort_key(bat, t))
    coords = tuple(
        CauseCoordinates(t, len(t), _footprint_sorted(bat, fluent_footprint(bat, t)))
        for t in chosen
    )
    return MinimalCauseAnswer(
        causes=tuple(chosen), order=order, horizon=horizon, base_holds=True,
        coordinates=coords,
    )


def filter_trace(bat: BasicActionTheory, base: Trace, suffix: Trace) -> Trace:
    """The executable subsequence of ``suffix`` after the kept context ``base``.

    One left-to-right pass: an action is kept exactly when it is possible
    after ``base`` followed by everything kept so far.  Dropped actions are
    never reconsidered.
    """
    kept = base
    out: list[GroundAction] = []
    for act in suffix:
        if entails(bat, kept, Poss(act.to_term())):
            kept = kept.append(act)
            out.append(act)
    return Trace(tuple(out))


@dataclass(frozen=True)
class PrefixReport:
    """Outcome of the two cause conditions for one narrative prefix."""

    prefix: Trace
    persists: bool          # goal entailed after every extension prefix
    counterfactual: bool    # goal entailed false after the filtered remainder
    filtered_remainder: Trace


@dataclass(frozen=True)
class SubsequenceWitness:
    """A non-prefix subsequence of the cause that also passes both conditions
    when prefix containment is relaxed to subsequence containment."""

    indices: tuple[int, ...]
    actions: Trace


@dataclass(frozen=True)
class AchievementAnswer:
    cause: Optional[Trace]
    filtered_remainder: Optional[Trace]
    items: tuple[PrefixReport, ...]
    base_holds: bool
    non_prefix_witnesses: tuple[SubsequenceWitness, ...] = ()
    diagnostics: tuple[str, ...] = ()

    @property
    def found(self) -> bool:
        return self.cause is not None


def _subsequence(z: Trace, indices) -> Trace:
    return Trace(tuple(z[i] for i in sorted(indices)))


def _non_prefix_witnesses(bat: BasicActionTheory, z: Trace, goal: Formula,
                          cause_len: int) -> tuple[SubsequenceWitness, ...]:
    # The minimality item speaks of subsequences while the other two items are
    # stated over prefixes; the scan above minimizes over prefixes.  Here the
    # prefix order is relaxed to subsequence containment (by position sets)
    # and any non-prefix subsequence of the cause that still passes both
    # conditions is reported, so nothing is silently discarded.
    n = len(z)
    witnesses = []
    for size in range(1, cause_len + 1):
        for subset in itertools.combinations(range(cause_len), size):
            if subset == tuple(range(size)):
                continue  # a prefix; the scan already covered it
            rest = [i for i in range(n) if i not in subset]
            persists = all(
                entails(bat, _subsequence(z, subset + extra), goal)
                for k in range(len(rest) + 1)
                for extra in itertools.combinations(rest, k)
            )
            if not persists:
                continue
            remainder = _subsequence(z, rest)
            filtered = filter_trace(bat, Trace(), remainder)
            if entails(bat, filtered, Not(goal)):
                witnesses.append(SubsequenceWitness(subset, _subsequence(z, subset)))
    return tuple(witnesses)


def achievement_cause(setting: CausalSetting,
                      check_subsequences: bool = True) -> AchievementAnswer:
    """The shortest narrative prefix satisfying both cause conditions.

    Condition 1 (necessity): the goal is entailed after every prefix of the
    narrative extending the candidate.  Condition 2 (counterfactual
    sufficiency): after filtering the remainder of the narrative with the
    candidate removed, the goal is entailed false.  Minimality is realized
    by the shortest-first scan.  When the goal is not entailed false
    initially there is no cause and the answer says so instead of raising.
    """
    bat, z, goal = setting.bat, setting.narrative, setting.goal
    base = bool(entails(bat, Trace(), Not(goal)))

    reports = []
    for k in range(len(z) + 1):
        prefix = z.prefix(k)
        persists = all(
            bool(entails(bat, z.prefix(j), goal)) for j in range(k, len(z) + 1)
        )
        filtered = filter_trace(bat, Trace(), z.drop_prefix(k))
        counterfactual = bool(entails(bat, filtered, Not(goal)))
        reports.append(PrefixReport(prefix, persists, counterfactual, filtered))

    if not base:
        return AchievementAnswer(
            cause=None, filtered_remainder=None, items=tuple(reports),
            base_holds=False,
            diagnostics=("goal is not false initially; no cause",),
        )

    winner = next((r for r in reports if r.persists and r.counterfactual), None)
    if winner is None:
        return AchievementAnswer(
            cause=None, filtered_remainder=None, items=tuple(reports),
            base_holds=True,
            diagnostics=("no prefix satisfies both cause conditions",),
        )

    witnesses = ()
    if check_subsequences:
        witnesses = _non_prefix_witnesses(bat, z, goal, len(winner.prefix))
    return AchievementAnswer(
        cause=winner.prefix,
        filtered_remainder=winner.filtered_remainder,
        items=tuple(reports),
        base_holds=True,
        non_prefix_witnesses=witnesses,
    )
