"""Recursive achievement causal chains over a narrative.

An achievement pair for a goal is the action (with its preceding prefix as
context) at which the goal flips from entailed-false to entailed-true and
then persists through every further prefix of the narrative.  The chain of a
setting is built by recursion: the pair for the current goal is the direct
cause; the actions enabling it are found by recursing on the context with
the goal regressed one step through the pair's action and conjoined with
that action's possibility.  The recursion bottoms out when no pair exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .logic import And, Formula, GroundAction, Not, Poss, Trace, simplify
from .evaluator import entails
from .regression import regress_step
from .cause import CausalSetting, achievement_cause
from .theory import BasicActionTheory

DIRECT = "3a"     # the pair is itself the cause of the level's goal
INDIRECT = "3b"   # the pair entered by recursion through an enabled action


class ChainUniquenessError(Exception):
    """Two positions both satisfy the achievement conditions.

    Under prefix persistence this cannot happen for a consistent theory;
    raising (with both positions) beats silently choosing one.
    """

    def __init__(self, narrative: Trace, positions: list[int]):
        self.narrative = narrative
        self.positions = positions
        super().__init__(
            f"achievement pair not unique on {narrative}: positions {positions}"
        )


@dataclass(frozen=True)
class ActionSequencePair:
    """An action together with the narrative prefix executed before it."""

    action: GroundAction
    context: Trace


@dataclass(frozen=True)
class PairProvenance:
    clause: str          # DIRECT for the top-level pair, INDIRECT below it
    level: int           # recursion depth at which the pair was found
    level_goal: Formula  # the goal the pair achieves at that depth


@dataclass(frozen=True)
class CausalChain:
    pairs: tuple[ActionSequencePair, ...]
    provenance: tuple[PairProvenance, ...]

    def __post_init__(self):
        if len(self.pairs) != len(self.provenance):
            raise ValueError("one provenance record per pair")
        for a, b in zip(self.pairs, self.pairs[1:]):
            if len(a.context) >= len(b.context):
                raise ValueError("chain contexts must strictly grow")

    def __len__(self):
        return len(self.pairs)


def achievement_pair(bat: BasicActionTheory, narrative: Trace, goal: Formula
                     ) -> Optional[ActionSequencePair]:
    """The unique position where ``goal`` flips false-to-true and persists.

    Returns ``None`` when the goal already holds initially or never persists
    through to the end of the narrative.
    """
    hits = []
    n = len(narrative)
    for i in range(n):
        if not entails(bat, narrative.prefix(i), Not(goal)):
            continue
        if all(entails(bat, narrative.prefix(j), goal) for j in range(i + 1, n + 1)):
            hits.append(i)
    if len(hits) > 1:
        raise ChainUniquenessError(narrative, hits)
    if not hits:
        return None
    i = hits[0]
    return ActionSequencePair(narrative[i], narrative.prefix(i))


def bs_chain(setting: CausalSetting) -> CausalChain:
    """The achievement causal chain of the setting, innermost enabler first."""
    pairs: list[ActionSequencePair] = []
    provenance: list[PairProvenance] = []
    _collect(setting.bat, setting.narrative, setting.goal, 0, pairs, provenance)
    return CausalChain(tuple(pairs), tuple(provenance))


def _collect(bat: BasicActionTheory, narrative: Trace, goal: Formula, level: int,
             pairs: list[ActionSequencePair], provenance: list[PairProvenance]
             ) -> None:
    pair = achievement_pair(bat, narrative, goal)
    if pair is None:
        return
    sub_goal = simplify(And(
        regress_step(bat, pair.action, goal),
        Poss(pair.action.to_term()),
    ))
    _collect(bat, pair.context, sub_goal, level + 1, pairs, provenance)
    pairs.append(pair)
    provenance.append(PairProvenance(
        DIRECT if level == 0 else INDIRECT, level, goal))


def chain_of(trace: Trace) -> frozenset[ActionSequencePair]:
    """Every (action, preceding-prefix) pair of ``trace``."""
    return frozenset(
        ActionSequencePair(trace[i], trace.prefix(i)) for i in range(len(trace))
    )


@dataclass(frozen=True)
class InclusionReport:
    holds: bool
    chain: CausalChain
    cause: Optional[Trace]
    cause_pairs: frozenset[ActionSequencePair]
    violations: tuple[ActionSequencePair, ...]


def verify_chain_inclusion(setting: CausalSetting) -> InclusionReport:
    """Check that every chain pair lies on the achievement cause of the setting.

    The recursive chain identifies actions inside the narrative; the prefix
    cause of the same setting must contain them all as (action, prefix)
    pairs.  An empty violation list means the inclusion holds.
    """
    chain = bs_chain(setting)
    answer = achievement_cause(setting, check_subsequences=False)
    if answer.cause is None:
        return InclusionReport(
            holds=not chain.pairs, chain=chain, cause=None,
            cause_pairs=frozenset(), violations=tuple(chain.pairs),
        )
    cause_pairs = chain_of(answer.cause)
    violations = tuple(p for p in chain.pairs if p not in cause_pairs)
    return InclusionReport(
        holds=not violations, chain=chain, cause=answer.cause,
        cause_pairs=cause_pairs, violations=violations,
    )
