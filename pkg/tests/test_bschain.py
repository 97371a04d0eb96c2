import random

import pytest

from actcause.bschain import (
    DIRECT,
    INDIRECT,
    ActionSequencePair,
    achievement_pair,
    bs_chain,
    chain_of,
    verify_chain_inclusion,
)
from actcause.cause import CausalSetting
from actcause.evaluator import entails
from actcause.logic import GroundAction, Not, Trace
from actcause.parser import parse_goal, parse_trace
from actcause.randgen import random_setting


def pairs_as_strings(pairs):
    return [(str(p.action), tuple(p.context.strings())) for p in pairs]


@pytest.fixture(scope="module")
def mixed_setting(blocks, bat):
    return CausalSetting(bat, blocks.narratives["breakAndPick"],
                         blocks.goals["brokenCOrHoldingD"])


class TestAchievementPair:
    def test_flip_at_the_drop(self, blocks, bat):
        pair = achievement_pair(bat, blocks.narratives["breakAndPick"],
                                blocks.goals["brokenCOrHoldingD"])
        assert str(pair.action) == "drop(C)"
        assert pair.context.strings() == ["pickup(C)"]

    def test_plain_break_goal(self, blocks, bat):
        z = parse_trace("pickup(C); drop(C)", bat.vocabulary)
        pair = achievement_pair(bat, z, blocks.goals["brokenC"])
        assert str(pair.action) == "drop(C)"
        assert pair.context.strings() == ["pickup(C)"]

    def test_goal_already_true_gives_none(self, blocks, bat):
        goal = parse_goal("Fragile(C)", bat.vocabulary)
        assert achievement_pair(bat, blocks.narratives["breakAndPick"], goal) is None

    def test_empty_narrative_gives_none(self, blocks, bat):
        assert achievement_pair(bat, Trace(), blocks.goals["brokenC"]) is None


class TestBSChain:
    def test_mixed_goal_chain(self, mixed_setting):
        chain = bs_chain(mixed_setting)
        assert pairs_as_strings(chain.pairs) == [
            ("pickup(C)", ()),
            ("drop(C)", ("pickup(C)",)),
        ]
        assert [p.clause for p in chain.provenance] == [INDIRECT, DIRECT]

    def test_redundant_action_never_enters(self, blocks, bat):
        setting = CausalSetting(bat, blocks.narratives["breakAndPick"],
                                blocks.goals["brokenC"])
        chain = bs_chain(setting)
        assert pairs_as_strings(chain.pairs) == [
            ("pickup(C)", ()),
            ("drop(C)", ("pickup(C)",)),
        ]

    def test_goal_true_initially_gives_empty_chain(self, blocks, bat):
        goal = parse_goal("Fragile(C)", bat.vocabulary)
        setting = CausalSetting(bat, blocks.narratives["breakAndPick"], goal)
        assert len(bs_chain(setting)) == 0

    def test_pairs_lie_on_the_narrative(self, mixed_setting):
        chain = bs_chain(mixed_setting)
        for pair in chain.pairs:
            assert pair.context.append(pair.action).is_prefix_of(
                mixed_setting.narrative)

    def test_contexts_strictly_grow(self, mixed_setting):
        chain = bs_chain(mixed_setting)
        lengths = [len(p.context) for p in chain.pairs]
        assert lengths == sorted(set(lengths))

    def test_final_pair_is_a_direct_cause(self, mixed_setting):
        bat, z, goal = (mixed_setting.bat, mixed_setting.narrative,
                        mixed_setting.goal)
        chain = bs_chain(mixed_setting)
        last = chain.pairs[-1]
        assert chain.provenance[-1].clause == DIRECT
        assert entails(bat, last.context, Not(goal)).entailed
        start = len(last.context) + 1
        for j in range(start, len(z) + 1):
            assert entails(bat, z.prefix(j), goal).entailed

    def test_each_pair_achieves_its_level_goal(self, mixed_setting):
        bat = mixed_setting.bat
        chain = bs_chain(mixed_setting)
        # The pair at position i was found over the next pair's context, or
        # over the full narrative for the last one.
        for i, (pair, prov) in enumerate(zip(chain.pairs, chain.provenance)):
            if i + 1 < len(chain.pairs):
                level_narrative = chain.pairs[i + 1].context
            else:
                level_narrative = mixed_setting.narrative
            goal = prov.level_goal
            assert entails(bat, pair.context, Not(goal)).entailed
            start = len(pair.context) + 1
            for j in range(start, len(level_narrative) + 1):
                assert entails(bat, level_narrative.prefix(j), goal).entailed


class TestChainOf:
    def test_two_action_trace(self, bat):
        z = parse_trace("pickup(C); drop(C)", bat.vocabulary)
        assert sorted(pairs_as_strings(chain_of(z))) == sorted([
            ("pickup(C)", ()),
            ("drop(C)", ("pickup(C)",)),
        ])

    def test_adds_the_redundant_pickup(self, blocks, bat, mixed_setting):
        z = blocks.narratives["breakAndPick"]
        chain = bs_chain(mixed_setting)
        extra = ActionSequencePair(GroundAction("pickup", ("D",)),
                                   parse_trace("pickup(C); drop(C)",
                                               bat.vocabulary))
        assert chain_of(z) == frozenset(chain.pairs) | {extra}

    def test_empty(self):
        assert chain_of(Trace()) == frozenset()


class TestInclusion:
    def test_mixed_goal(self, mixed_setting):
        report = verify_chain_inclusion(mixed_setting)
        assert report.holds
        assert len(report.chain.pairs) == 2
        assert len(report.cause_pairs) == 3
        assert report.cause.strings() == ["pickup(C)", "drop(C)", "pickup(D)"]

    def test_plain_break_goal(self, blocks, bat):
        setting = CausalSetting(bat, blocks.narratives["breakAndPick"],
                                blocks.goals["brokenC"])
        report = verify_chain_inclusion(setting)
        assert report.holds
        assert len(report.chain.pairs) == 2
        assert len(report.cause_pairs) == 2

    def test_randomized_settings(self):
        rng = random.Random(67)
        for _ in range(50):
            setting = random_setting(rng)
            report = verify_chain_inclusion(setting)
            assert report.holds, (setting.narrative.strings(), report.violations)
