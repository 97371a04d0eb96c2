"""Regression: rewriting a query about the future into an equivalent static
formula about the initial state.

One step replaces every fluent atom by its instantiated successor-state
right-hand side and every ``Poss`` atom by the action's instantiated
precondition (itself regressed through the step, so the result speaks about
the moment before the action).  Quantifiers are grounded over the declared
objects before stepping; under the finite-domain restriction this is
equivalent to symbolic regression and much simpler.
"""

from __future__ import annotations

from dataclasses import dataclass

from .logic import (
    After,
    And,
    Box,
    Equal,
    Exists,
    FalseConst,
    FluentAtom,
    Forall,
    Formula,
    GroundAction,
    LanguageError,
    Not,
    ObjName,
    Or,
    Poss,
    Trace,
    TrueConst,
    and_all,
    is_static,
    node_count,
    or_all,
    simplify,
    substitute,
)
from .theory import BasicActionTheory, poss_rhs, ssa_instance

__all__ = [
    "RegressionError", "RegressionResult", "regress", "regress_step", "simplify",
]


class RegressionError(LanguageError):
    """Regression got a formula outside the static fragment."""


@dataclass(frozen=True)
class RegressionResult:
    formula: Formula
    step_count: int
    size_before: int
    size_after: int


def regress_step(bat: BasicActionTheory, act: GroundAction, f: Formula) -> Formula:
    """The one-step regression of the static formula ``f`` through ``act``."""
    if not is_static(f):
        raise RegressionError("regression input must be static")
    return _step(bat, act, f)


def _step(bat: BasicActionTheory, act: GroundAction, f: Formula) -> Formula:
    match f:
        case TrueConst() | FalseConst() | Equal(_, _):
            return f
        case FluentAtom(fluent, args):
            if any(not isinstance(t, ObjName) for t in args):
                raise RegressionError(f"free variable in {f}; regress a sentence")
            return ssa_instance(bat, (fluent, tuple(t.name for t in args)), act)
        case Not(sub):
            return Not(_step(bat, act, sub))
        case And(left, right):
            return And(_step(bat, act, left), _step(bat, act, right))
        case Or(left, right):
            return Or(_step(bat, act, left), _step(bat, act, right))
        case Forall(var, body):
            return and_all(
                _step(bat, act, substitute(body, var, ObjName(n)))
                for n in bat.vocabulary.objects
            )
        case Exists(var, body):
            return or_all(
                _step(bat, act, substitute(body, var, ObjName(n)))
                for n in bat.vocabulary.objects
            )
        case Poss(action):
            ga = GroundAction.from_term(action)
            return _step(bat, act, poss_rhs(bat, ga))
        case After(_, _) | Box(_):
            raise RegressionError("regression input must be static")
    raise RegressionError(f"not a formula: {f!r}")


def regress(bat: BasicActionTheory, trace: Trace, f: Formula) -> RegressionResult:
    """Regress ``f`` through the whole of ``trace`` (right to left).

    The empty trace is the identity.  Each step is simplified, so the result
    of a nonempty regression mentions no ``Poss`` and no modality and can be
    evaluated directly at an initial state.
    """
    if not is_static(f):
        raise RegressionError("regression input must be static")
    size_before = node_count(f)
    out = f
    steps = 0
    for act in reversed(trace.actions):
        out = simplify(regress_step(bat, act, out))
        steps += 1
    return RegressionResult(out, steps, size_before, node_count(out))
