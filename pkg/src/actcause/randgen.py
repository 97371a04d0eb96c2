"""Seeded random theories, traces, sentences, settings, and structural
models, used by the property suites and the randomized self-test lines.

Everything is driven by an explicit ``random.Random`` so runs reproduce
exactly from a seed.  Theories are closed-world and shaped like real action
domains: each successor state axiom is a disjunction of trigger equalities
over a frame condition, so footprints and flips behave like hand-written
domains rather than arbitrary formula soup.
"""

from __future__ import annotations

import random
from typing import Optional

from .logic import (
    And,
    Equal,
    Exists,
    FluentAtom,
    Forall,
    Formula,
    Not,
    ObjName,
    Or,
    ActionTerm,
    Trace,
    Var,
    Vocabulary,
    and_all,
    or_all,
)
from .theory import (
    ACTION_VAR,
    BasicActionTheory,
    CLOSED,
    InitialTheory,
    PreconditionClause,
    SuccessorStateAxiom,
    poss_rhs,
    validate,
)
from .evaluator import eval_static, initial_states, progress, entails
from .cause import CausalSetting
from .hpmodels import (
    Cmp,
    Context,
    EAnd,
    ENot,
    EOr,
    ExprEquation,
    HPModel,
    ValueExpr,
    VarDecl,
)


def random_vocabulary(rng: random.Random, max_objects: int = 3,
                      max_fluents: int = 4, max_actions: int = 3) -> Vocabulary:
    objects = tuple(f"O{i + 1}" for i in range(rng.randint(1, max_objects)))
    fluents = tuple(
        (f"F{i + 1}", rng.choice((0, 1, 1))) for i in range(rng.randint(1, max_fluents))
    )
    actions = tuple(
        (f"A{i + 1}", rng.choice((0, 1, 1))) for i in range(rng.randint(1, max_actions))
    )
    return Vocabulary(objects, fluents, actions)


def _action_equality(rng: random.Random, vocab: Vocabulary, symbol: str,
                     param: Optional[Var]) -> Formula:
    arity = vocab.action_arity(symbol)
    args = []
    for _ in range(arity):
        if param is not None and rng.random() < 0.7:
            args.append(param)
        else:
            args.append(ObjName(rng.choice(vocab.objects)))
    return Equal(ACTION_VAR, ActionTerm(symbol, tuple(args)))


def _context_literal(rng: random.Random, vocab: Vocabulary,
                     param: Optional[Var]) -> Formula:
    fluent, arity = rng.choice(vocab.fluents)
    args = []
    for _ in range(arity):
        if param is not None and rng.random() < 0.5:
            args.append(param)
        else:
            args.append(ObjName(rng.choice(vocab.objects)))
    atom = FluentAtom(fluent, tuple(args))
    return Not(atom) if rng.random() < 0.4 else atom


def random_bat(rng: random.Random, max_objects: int = 3, max_fluents: int = 4,
               max_actions: int = 3) -> BasicActionTheory:
    vocab = random_vocabulary(rng, max_objects, max_fluents, max_actions)
    action_names = [name for name, _ in vocab.actions]

    ssas = []
    for fluent, arity in vocab.fluents:
        param = Var("x") if arity else None
        params = (param,) if param else ()
        n_pos = rng.randint(0, 2)
        n_neg = rng.randint(0, 1)
        positive = [
            _action_equality(rng, vocab, rng.choice(action_names), param)
            for _ in range(n_pos)
        ]
        if positive and rng.random() < 0.4:
            positive[0] = And(positive[0], _context_literal(rng, vocab, param))
        negative = [
            _action_equality(rng, vocab, rng.choice(action_names), param)
            for _ in range(n_neg)
        ]
        frame: Formula = FluentAtom(fluent, params)
        if negative:
            frame = And(Not(or_all(negative)), frame)
        rhs = or_all(positive + [frame])
        ssas.append(SuccessorStateAxiom(fluent, params, rhs))

    clauses = []
    for i, (symbol, arity) in enumerate(vocab.actions):
        if i > 0 and rng.random() < 0.2:
            continue  # no clause: the action is never executable
        param = Var("x") if arity else None
        params = (param,) if param else ()
        literals = [_context_literal(rng, vocab, param)
                    for _ in range(rng.randint(0, 2))]
        clauses.append(PreconditionClause(symbol, params, and_all(literals)))

    literals = frozenset(
        (atom, rng.random() < 0.5) for atom in vocab.ground_atoms()
    )
    bat = BasicActionTheory(vocab, InitialTheory(CLOSED, literals),
                            tuple(clauses), tuple(ssas))
    report = validate(bat)
    assert report.ok, report.violations
    return bat


def random_static_sentence(rng: random.Random, vocab: Vocabulary,
                           max_depth: int = 3) -> Formula:
    def atom(bound: tuple[Var, ...]) -> Formula:
        fluent, arity = rng.choice(vocab.fluents)
        args = []
        for _ in range(arity):
            if bound and rng.random() < 0.5:
                args.append(rng.choice(bound))
            else:
                args.append(ObjName(rng.choice(vocab.objects)))
        return FluentAtom(fluent, tuple(args))

    def go(depth: int, bound: tuple[Var, ...]) -> Formula:
        if depth <= 0 or rng.random() < 0.3:
            roll = rng.random()
            if roll < 0.1:
                left = rng.choice(bound) if bound and rng.random() < 0.5 \
                    else ObjName(rng.choice(vocab.objects))
                right = ObjName(rng.choice(vocab.objects))
                return Equal(left, right)
            return atom(bound)
        roll = rng.random()
        if roll < 0.2:
            return Not(go(depth - 1, bound))
        if roll < 0.45:
            return And(go(depth - 1, bound), go(depth - 1, bound))
        if roll < 0.7:
            return Or(go(depth - 1, bound), go(depth - 1, bound))
        var = Var(f"v{len(bound) + 1}")
        body = go(depth - 1, bound + (var,))
        return Forall(var, body) if roll < 0.85 else Exists(var, body)

    return go(max_depth, ())


def random_executable_trace(rng: random.Random, bat: BasicActionTheory,
                            max_len: int) -> Trace:
    state = initial_states(bat)[0]
    trace = Trace()
    for _ in range(max_len):
        possible = [a for a in bat.vocabulary.ground_actions()
                    if eval_static(state, poss_rhs(bat, a))]
        if not possible or rng.random() < 0.15:
            break
        act = rng.choice(possible)
        trace = trace.append(act)
        state = progress(bat, state, Trace((act,)))
    return trace


def random_action_sequence(rng: random.Random, bat: BasicActionTheory,
                           max_len: int) -> Trace:
    """A raw action sequence, executable or not."""
    acts = bat.vocabulary.ground_actions()
    return Trace(tuple(rng.choice(acts) for _ in range(rng.randint(0, max_len))))


def random_setting(rng: random.Random, max_narrative: int = 5,
                   attempts: int = 200) -> CausalSetting:
    """A causal setting: a closed theory, an executable narrative, and a
    goal that is entailed false initially and true after the narrative."""
    for _ in range(attempts):
        bat = random_bat(rng)
        narrative = random_executable_trace(rng, bat, rng.randint(1, max_narrative))
        if len(narrative) == 0:
            continue
        s0 = initial_states(bat)[0]
        for _ in range(20):
            goal = random_static_sentence(rng, bat.vocabulary, max_depth=2)
            if entails(bat, Trace(), Not(goal)) and entails(bat, narrative, goal):
                return CausalSetting(bat, narrative, goal)
        end = progress(bat, s0, narrative)
        flipped = [atom for atom in bat.vocabulary.ground_atoms()
                   if not s0.holds(atom) and end.holds(atom)]
        if flipped:
            fluent, args = rng.choice(flipped)
            goal = FluentAtom(fluent, tuple(ObjName(n) for n in args))
            return CausalSetting(bat, narrative, goal)
    raise RuntimeError("could not generate a causal setting; widen the attempts")


def random_boolean_model(rng: random.Random, max_endo: int = 5
                         ) -> tuple[HPModel, Context]:
    n_exo = rng.randint(1, 2)
    n_endo = rng.randint(1, max_endo)
    exo = tuple(VarDecl(f"U{i + 1}") for i in range(n_exo))
    endo = tuple(VarDecl(f"X{i + 1}") for i in range(n_endo))

    def expr(available: list[str], depth: int) -> ValueExpr:
        if depth <= 0 or rng.random() < 0.4:
            return Cmp(rng.choice(available), "true")
        roll = rng.random()
        if roll < 0.25:
            return ENot(expr(available, depth - 1))
        if roll < 0.65:
            return EAnd(expr(available, depth - 1), expr(available, depth - 1))
        return EOr(expr(available, depth - 1), expr(available, depth - 1))

    equations = []
    available = [d.name for d in exo]
    for decl in endo:
        equations.append((decl.name, ExprEquation(expr(available, 2))))
        available.append(decl.name)
    model = HPModel(exo, endo, tuple(equations))
    context = Context(tuple(
        (d.name, rng.choice(("false", "true"))) for d in exo
    ))
    return model, context
