"""Basic action theories: initial state, precondition clauses, and one
successor state axiom per fluent.

Preconditions are authored as one clause per action symbol; the single
disjunctive possibility axiom is an assembled view (:func:`poss_rhs`).
Axiom bodies must be static and may not mention ``Poss``, so every
instantiated right-hand side can be evaluated directly against a state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .logic import (
    ACTION,
    Atom,
    ActionTerm,
    FluentAtom,
    Formula,
    GroundAction,
    LanguageError,
    ObjName,
    Or,
    FALSE,
    Var,
    Vocabulary,
    atom_str,
    free_vars,
    action_symbols,
    is_static,
    mentions_poss,
    simplify,
    substitute,
)

CLOSED = "closed"
OPEN = "open"

#: The distinguished action variable usable on successor-state right-hand sides.
ACTION_VAR = Var("a", ACTION)


class TheoryError(LanguageError):
    """A theory was used in a way its shape does not support."""


@dataclass(frozen=True)
class PreconditionClause:
    """``Poss(symbol(params)) <- condition`` for one action symbol."""

    action_symbol: str
    params: tuple[Var, ...]
    condition: Formula


@dataclass(frozen=True)
class SuccessorStateAxiom:
    """``[a] fluent(params) <-> rhs`` where ``rhs`` may mention ``a``."""

    fluent_symbol: str
    params: tuple[Var, ...]
    rhs: Formula


@dataclass(frozen=True)
class InitialTheory:
    """Signed ground atoms describing the initial state.

    ``closed`` mode must assign every ground atom of the vocabulary and thus
    pins down a single initial state; ``open`` mode may leave atoms
    unassigned, and entailment then ranges over all completions.
    """

    mode: str
    literals: frozenset[tuple[Atom, bool]]

    def assigned(self) -> dict[Atom, bool]:
        out: dict[Atom, bool] = {}
        for atom, sign in sorted(self.literals):
            out[atom] = sign
        return out


@dataclass(frozen=True)
class BasicActionTheory:
    vocabulary: Vocabulary
    initial: InitialTheory
    preconditions: tuple[PreconditionClause, ...]
    ssas: tuple[SuccessorStateAxiom, ...]

    def ssa_for(self, fluent: str) -> SuccessorStateAxiom:
        for ssa in self.ssas:
            if ssa.fluent_symbol == fluent:
                return ssa
        raise TheoryError(f"fluent {fluent!r} has no successor state axiom")

    def clauses_for(self, symbol: str) -> tuple[PreconditionClause, ...]:
        return tuple(c for c in self.preconditions if c.action_symbol == symbol)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_axiom_body(vocab: Vocabulary, f: Formula, allowed: frozenset[Var],
                      where: str) -> list[str]:
    out = []
    if not is_static(f):
        out.append(f"{where} is not static")
    if mentions_poss(f):
        out.append(f"{where} mentions Poss")
    for v in sorted(free_vars(f) - allowed, key=lambda v: v.name):
        out.append(f"{where} mentions unbound variable {v.name!r}")
    try:
        vocab.check_formula(f)
    except LanguageError as exc:
        out.append(f"{where}: {exc}")
    return out


def validate(bat: BasicActionTheory) -> ValidationReport:
    """Every shape violation in ``bat``; the report is empty iff it is valid.

    Purely syntactic, so repeated calls return the same report.
    """
    vocab = bat.vocabulary
    violations: list[str] = []

    by_fluent: dict[str, int] = {}
    for ssa in bat.ssas:
        by_fluent[ssa.fluent_symbol] = by_fluent.get(ssa.fluent_symbol, 0) + 1
        if not vocab.is_fluent(ssa.fluent_symbol):
            violations.append(f"SSA for undeclared fluent {ssa.fluent_symbol!r}")
            continue
        arity = vocab.fluent_arity(ssa.fluent_symbol)
        if len(ssa.params) != arity:
            violations.append(
                f"SSA for {ssa.fluent_symbol} expects {arity} parameter(s), "
                f"got {len(ssa.params)}"
            )
            continue
        if len(set(ssa.params)) != len(ssa.params):
            violations.append(f"SSA for {ssa.fluent_symbol} repeats a parameter")
        allowed = frozenset(ssa.params) | {ACTION_VAR}
        violations.extend(_check_axiom_body(
            vocab, ssa.rhs, allowed, f"SSA rhs for {ssa.fluent_symbol}"))
    for fluent, _ in vocab.fluents:
        n = by_fluent.get(fluent, 0)
        if n == 0:
            violations.append(f"fluent {fluent} has no SSA")
        elif n > 1:
            violations.append(f"fluent {fluent} has {n} SSAs")

    for clause in bat.preconditions:
        if not vocab.is_action(clause.action_symbol):
            violations.append(
                f"precondition for undeclared action {clause.action_symbol!r}")
            continue
        arity = vocab.action_arity(clause.action_symbol)
        if len(clause.params) != arity:
            violations.append(
                f"precondition for {clause.action_symbol} expects {arity} "
                f"parameter(s), got {len(clause.params)}"
            )
            continue
        if len(set(clause.params)) != len(clause.params):
            violations.append(
                f"precondition for {clause.action_symbol} repeats a parameter")
        violations.extend(_check_axiom_body(
            vocab, clause.condition, frozenset(clause.params),
            f"precondition of {clause.action_symbol}"))

    assigned: dict[Atom, bool] = {}
    for atom, sign in sorted(bat.initial.literals):
        fluent, args = atom
        if not vocab.is_fluent(fluent):
            violations.append(f"initial literal for undeclared fluent {fluent!r}")
            continue
        if len(args) != vocab.fluent_arity(fluent):
            violations.append(f"initial literal {atom_str(atom)} has wrong arity")
            continue
        if any(not vocab.is_object(n) for n in args):
            violations.append(
                f"initial literal {atom_str(atom)} uses an undeclared object")
            continue
        if atom in assigned and assigned[atom] != sign:
            violations.append(f"atom {atom_str(atom)} both asserted and denied")
        assigned[atom] = sign
    if bat.initial.mode == CLOSED:
        for atom in vocab.ground_atoms():
            if atom not in assigned:
                violations.append(f"atom {atom_str(atom)} unassigned in closed mode")
    elif bat.initial.mode != OPEN:
        violations.append(f"unknown initial mode {bat.initial.mode!r}")

    return ValidationReport(tuple(violations))


def _ground_action(action: Union[GroundAction, ActionTerm]) -> GroundAction:
    if isinstance(action, GroundAction):
        return action
    return GroundAction.from_term(action)


@lru_cache(maxsize=None)
def _poss_rhs(bat: BasicActionTheory, act: GroundAction) -> Formula:
    clauses = bat.clauses_for(act.symbol)
    if not clauses:
        return FALSE
    parts = []
    for clause in clauses:
        f = clause.condition
        for param, name in zip(clause.params, act.args):
            f = substitute(f, param, ObjName(name))
        parts.append(f)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return simplify(out)


def poss_rhs(bat: BasicActionTheory, action: Union[GroundAction, ActionTerm]) -> Formula:
    """The executability condition of ``action``, instantiated at its arguments.

    The disjunctive possibility axiom collapses under unique names to the
    clauses of the action's own symbol; a symbol without any clause is never
    executable, hence ``false``.
    """
    act = _ground_action(action)
    bat.vocabulary.check_ground_action(act)
    return _poss_rhs(bat, act)


@lru_cache(maxsize=None)
def _ssa_instance(bat: BasicActionTheory, atom: Atom, act: GroundAction) -> Formula:
    fluent, args = atom
    ssa = bat.ssa_for(fluent)
    f = ssa.rhs
    for param, name in zip(ssa.params, args):
        f = substitute(f, param, ObjName(name))
    f = substitute(f, ACTION_VAR, act.to_term())
    out = simplify(f)
    if not is_static(out) or mentions_poss(out):
        raise TheoryError(f"SSA instance for {atom_str(atom)} is not evaluable")
    return out


def ssa_instance(bat: BasicActionTheory,
                 atom: Union[Atom, FluentAtom],
                 action: Union[GroundAction, ActionTerm]) -> Formula:
    """The successor-state right-hand side for a ground atom under an action.

    Parameters are bound to the atom's arguments and the action variable to
    the action; equalities between the resulting ground action terms resolve
    to constants and constant folding is applied, so e.g. the instance for a
    fluent untouched by the action collapses to the fluent atom itself.
    """
    if isinstance(atom, FluentAtom):
        if any(not isinstance(t, ObjName) for t in atom.args):
            raise TheoryError("ssa_instance needs a ground fluent atom")
        atom = (atom.fluent, tuple(t.name for t in atom.args))
    fluent, args = atom
    arity = bat.vocabulary.fluent_arity(fluent)
    if len(args) != arity:
        raise TheoryError(
            f"fluent {fluent!r} expects {arity} argument(s), got {len(args)}")
    act = _ground_action(action)
    bat.vocabulary.check_ground_action(act)
    return _ssa_instance(bat, (fluent, tuple(args)), act)


def affected_fluents(bat: BasicActionTheory, symbol: str) -> frozenset[str]:
    """Fluents whose successor state axiom mentions the action symbol."""
    if not bat.vocabulary.is_action(symbol):
        raise TheoryError(f"undeclared action {symbol!r}")
    out = set()
    for ssa in bat.ssas:
        if symbol in action_symbols(ssa.rhs):
            out.add(ssa.fluent_symbol)
    return frozenset(out)
