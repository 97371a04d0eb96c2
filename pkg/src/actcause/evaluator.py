"""Forward semantics: progression under successor state axioms, truth of
sentences at a trace, entailment, and executability.

Entailment quantifies over the initial states induced by the theory: one
state in closed mode, every completion of the literal set in open mode.
States after *any* trace are always defined (progression just applies the
axioms), executability is a separate check; that is what makes
counterfactual questions about inexecutable remainders meaningful.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Optional

from .logic import (
    After,
    And,
    Atom,
    Box,
    Equal,
    Exists,
    FluentAtom,
    Forall,
    Formula,
    GroundAction,
    LanguageError,
    Not,
    ObjName,
    Or,
    Poss,
    TRUE,
    Trace,
    TrueConst,
    FalseConst,
    atom_str,
    free_vars,
    substitute,
    terms_equal_ground,
    is_ground_term,
)
from .theory import BasicActionTheory, CLOSED, OPEN, poss_rhs, ssa_instance

DEFAULT_OPEN_CAP = 2 ** 16
OPEN_CAP_ENV = "ACTCAUSE_OPEN_MODE_CAP"


class EvaluationError(LanguageError):
    """A formula cannot be evaluated as requested."""


class BoxUnsupportedError(EvaluationError):
    """Queries may not mention the always modality.

    The axioms carry it implicitly; a bounded check in queries would silently
    change its meaning, so it is rejected instead.
    """


class OpenCapExceeded(EvaluationError):
    def __init__(self, unassigned: int, cap: int):
        self.unassigned = unassigned
        self.cap = cap
        super().__init__(
            f"open initial theory leaves {unassigned} atoms unassigned "
            f"({2 ** unassigned} completions exceed the cap of {cap}); "
            f"set {OPEN_CAP_ENV} to raise it"
        )


def open_mode_cap() -> int:
    raw = os.environ.get(OPEN_CAP_ENV)
    if raw is None:
        return DEFAULT_OPEN_CAP
    try:
        return int(raw)
    except ValueError:
        raise EvaluationError(f"{OPEN_CAP_ENV} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class StateAssignment:
    """A total truth assignment to the ground fluent atoms of a vocabulary."""

    vocabulary: "object"
    true_atoms: frozenset[Atom]

    def holds(self, atom: Atom) -> bool:
        return atom in self.true_atoms

    def items(self) -> list[tuple[Atom, bool]]:
        return [(atom, atom in self.true_atoms)
                for atom in self.vocabulary.ground_atoms()]

    def as_dict(self) -> dict[str, bool]:
        return {atom_str(atom): value for atom, value in self.items()}


@dataclass(frozen=True)
class Verdict:
    entailed: bool
    counter_model: Optional[StateAssignment] = None

    def __bool__(self) -> bool:
        return self.entailed


def initial_states(bat: BasicActionTheory, cap: Optional[int] = None
                   ) -> tuple[StateAssignment, ...]:
    """The initial states induced by the theory.

    Closed mode yields exactly one state.  Open mode yields one state per
    completion of the unassigned atoms, capped (default 2^16, overridable via
    ``ACTCAUSE_OPEN_MODE_CAP``) to keep memory predictable.
    """
    vocab = bat.vocabulary
    assigned = bat.initial.assigned()
    atoms = vocab.ground_atoms()
    if bat.initial.mode == CLOSED:
        missing = [a for a in atoms if a not in assigned]
        if missing:
            raise EvaluationError(
                f"closed initial theory leaves {atom_str(missing[0])} unassigned")
        base = frozenset(a for a in atoms if assigned[a])
        return (StateAssignment(vocab, base),)
    if bat.initial.mode != OPEN:
        raise EvaluationError(f"unknown initial mode {bat.initial.mode!r}")
    unknown = [a for a in atoms if a not in assigned]
    if cap is None:
        cap = open_mode_cap()
    if 2 ** len(unknown) > cap:
        raise OpenCapExceeded(len(unknown), cap)
    fixed = frozenset(a for a in atoms if assigned.get(a, False))
    states = []
    for mask in range(2 ** len(unknown)):
        extra = frozenset(a for i, a in enumerate(unknown) if mask >> i & 1)
        states.append(StateAssignment(vocab, fixed | extra))
    return tuple(states)


def eval_static(state: StateAssignment, f: Formula) -> bool:
    """Classical truth of a static, closed, Poss-free sentence at one state.

    Quantifiers expand over the declared object constants.
    """
    match f:
        case TrueConst():
            return True
        case FalseConst():
            return False
        case FluentAtom(fluent, args):
            if any(not isinstance(t, ObjName) for t in args):
                raise EvaluationError(f"open formula: {f} has a free variable")
            return state.holds((fluent, tuple(t.name for t in args)))
        case Equal(left, right):
            if not (is_ground_term(left) and is_ground_term(right)):
                raise EvaluationError("open formula: equality over a free variable")
            return terms_equal_ground(left, right)
        case Not(sub):
            return not eval_static(state, sub)
        case And(left, right):
            return eval_static(state, left) and eval_static(state, right)
        case Or(left, right):
            return eval_static(state, left) or eval_static(state, right)
        case Forall(var, body):
            return all(eval_static(state, substitute(body, var, ObjName(n)))
                       for n in state.vocabulary.objects)
        case Exists(var, body):
            return any(eval_static(state, substitute(body, var, ObjName(n)))
                       for n in state.vocabulary.objects)
        case Poss(_):
            raise EvaluationError(
                "Poss cannot be evaluated against a bare state; use eval_at")
        case After(_, _) | Box(_):
            raise EvaluationError(f"non-static formula: {f}")
    raise EvaluationError(f"not a formula: {f!r}")


def successor_state(bat: BasicActionTheory, state: StateAssignment,
                    act: GroundAction) -> StateAssignment:
    """The state after ``act``: each atom takes the truth value of its
    instantiated successor-state right-hand side."""
    true_atoms = frozenset(
        atom for atom in bat.vocabulary.ground_atoms()
        if eval_static(state, ssa_instance(bat, atom, act))
    )
    return StateAssignment(bat.vocabulary, true_atoms)


def progress(bat: BasicActionTheory, state: StateAssignment, trace: Trace
             ) -> StateAssignment:
    for act in trace:
        state = successor_state(bat, state, act)
    return state


def _eval_after(bat: BasicActionTheory, state: StateAssignment, f: Formula) -> bool:
    match f:
        case Poss(action):
            if not is_ground_term(action):
                raise EvaluationError(f"open formula: {f}")
            return eval_static(state, poss_rhs(bat, GroundAction.from_term(action)))
        case After(action, body):
            if not is_ground_term(action):
                raise EvaluationError(f"open formula: {f}")
            nxt = successor_state(bat, state, GroundAction.from_term(action))
            return _eval_after(bat, nxt, body)
        case Box(_):
            raise BoxUnsupportedError("box is not supported in queries")
        case Not(sub):
            return not _eval_after(bat, state, sub)
        case And(left, right):
            return _eval_after(bat, state, left) and _eval_after(bat, state, right)
        case Or(left, right):
            return _eval_after(bat, state, left) or _eval_after(bat, state, right)
        case Forall(var, body):
            return all(_eval_after(bat, state, substitute(body, var, ObjName(n)))
                       for n in bat.vocabulary.objects)
        case Exists(var, body):
            return any(_eval_after(bat, state, substitute(body, var, ObjName(n)))
                       for n in bat.vocabulary.objects)
        case _:
            return eval_static(state, f)


def eval_at(bat: BasicActionTheory, state: StateAssignment, trace: Trace,
            f: Formula) -> bool:
    """Truth of the sentence ``f`` after running ``trace`` from ``state``.

    ``[t]`` subformulas progress the state one further action; ``Poss(t)``
    evaluates the action's instantiated precondition at the current state.
    """
    if free_vars(f):
        raise EvaluationError("query must be a sentence")
    return _eval_after(bat, progress(bat, state, trace), f)


def entails(bat: BasicActionTheory, trace: Trace, f: Formula,
            cap: Optional[int] = None) -> Verdict:
    """Whether ``f`` holds after ``trace`` in every initial state of the theory.

    In open mode a failing completion is returned as the counter-model.
    """
    states = initial_states(bat, cap=cap)
    for s in states:
        if not eval_at(bat, s, trace, f):
            counter = s if bat.initial.mode == OPEN else None
            return Verdict(False, counter)
    return Verdict(True)


@dataclass(frozen=True)
class StepReport:
    index: int  # 1-based position in the trace
    action: GroundAction
    possible: bool


@dataclass(frozen=True)
class ExecutabilityReport:
    executable: bool
    steps: tuple[StepReport, ...]

    @property
    def failed_step(self) -> Optional[int]:
        for step in self.steps:
            if not step.possible:
                return step.index
        return None

    @property
    def failed_action(self) -> Optional[GroundAction]:
        for step in self.steps:
            if not step.possible:
                return step.action
        return None


def exec_formula(trace: Trace) -> Formula:
    """The executability sentence of a trace, unfolded action by action:
    the first action is possible now, and after it the rest is executable.
    The empty trace unfolds to true."""
    out: Formula = TRUE
    for act in reversed(trace.actions):
        out = And(Poss(act.to_term()), After(act.to_term(), out))
    return out


def executability(bat: BasicActionTheory, trace: Trace) -> ExecutabilityReport:
    """Per-step executability of ``trace``; the empty trace is executable.

    Equivalent to entailment of the unfolded ``Poss``-chain: each action must
    be possible in every initial-state branch when its turn comes.  The
    report stops at the first failing action.
    """
    steps = []
    for i, act in enumerate(trace):
        ok = bool(entails(bat, trace.prefix(i), Poss(act.to_term())))
        steps.append(StepReport(i + 1, act, ok))
        if not ok:
            return ExecutabilityReport(False, tuple(steps))
    return ExecutabilityReport(True, tuple(steps))


def is_executable(bat: BasicActionTheory, trace: Trace) -> bool:
    return executability(bat, trace).executable


def executable_levels(bat: BasicActionTheory, horizon: int,
                      cap: Optional[int] = None
                      ) -> Iterator[list[tuple[Trace, tuple[StateAssignment, ...]]]]:
    """Breadth-first levels of executable traces with their progressed states.

    Level ``k`` holds all executable traces of length ``k``, ordered by the
    canonical action ordering; the paired states are the progressions of
    every initial state through the trace (one in closed mode).
    """
    if horizon < 0:
        raise EvaluationError("horizon must be >= 0")
    frontier = [(Trace(), initial_states(bat, cap=cap))]
    yield list(frontier)
    acts = bat.vocabulary.ground_actions()
    for _ in range(horizon):
        nxt = []
        for trace, states in frontier:
            for act in acts:
                rhs = poss_rhs(bat, act)
                if all(eval_static(s, rhs) for s in states):
                    nxt.append((
                        trace.append(act),
                        tuple(successor_state(bat, s, act) for s in states),
                    ))
        if not nxt:
            return
        yield nxt
        frontier = nxt


def enumerate_executable(bat: BasicActionTheory, horizon: int,
                         cap: Optional[int] = None) -> Iterator[Trace]:
    """All executable traces of length <= ``horizon`` in breadth-first order,
    ties broken by the canonical action ordering."""
    for level in executable_levels(bat, horizon, cap=cap):
        for trace, _ in level:
            yield trace
