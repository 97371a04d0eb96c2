"""Terms, formulas, and traces of a two-sorted modal language for actions.

The language has object and action terms, fluent atoms, equality, the usual
connectives and quantifiers, a possibility atom ``Poss(t)``, an after-action
modality ``[t] f``, and an always modality ``box f``.  A formula is *static*
when it mentions neither ``[t]`` nor ``box``.

Quantifiers range over the finite set of object constants declared in a
:class:`Vocabulary`.  This is a deliberate desk-scale restriction: the
theories handled here only distinguish declared objects, so nothing is lost
at this scale, but no infinite-domain reasoning is attempted.

Equality follows the unique-names convention: two object constants are equal
exactly when they are the same name, and two ground action terms are equal
exactly when they share the symbol and the arguments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union

OBJECT = "object"
ACTION = "action"

# Words with fixed meaning in the surface syntax; not usable as symbol names.
RESERVED_WORDS = frozenset({
    "a", "domain", "objects", "fluents", "actions", "poss", "ssa", "init",
    "closed", "open", "goal", "narrative", "hpmodel", "exo", "endo", "eq",
    "context", "case", "else", "forall", "exists", "true", "false", "Poss",
    "box", "in",
})


class LanguageError(Exception):
    """Ill-formed vocabulary item, term, or formula."""


class SortError(LanguageError):
    """A term of the wrong sort appeared in some position."""


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str
    sort: str = OBJECT

    def __post_init__(self):
        if self.sort not in (OBJECT, ACTION):
            raise SortError(f"unknown sort {self.sort!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ObjName:
    """An object constant."""

    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ActionTerm:
    symbol: str
    args: tuple = ()

    def __post_init__(self):
        for t in self.args:
            if sort_of(t) != OBJECT:
                raise SortError(
                    f"action term {self.symbol!r} takes object arguments, got {t}"
                )

    def __str__(self):
        if not self.args:
            return self.symbol
        return f"{self.symbol}({','.join(str(t) for t in self.args)})"


Term = Union[Var, ObjName, ActionTerm]


def sort_of(term: Term) -> str:
    if isinstance(term, Var):
        return term.sort
    if isinstance(term, ObjName):
        return OBJECT
    if isinstance(term, ActionTerm):
        return ACTION
    raise LanguageError(f"not a term: {term!r}")


def is_ground_term(term: Term) -> bool:
    if isinstance(term, Var):
        return False
    if isinstance(term, ObjName):
        return True
    return all(is_ground_term(t) for t in term.args)


def term_vars(term: Term) -> frozenset[Var]:
    if isinstance(term, Var):
        return frozenset((term,))
    if isinstance(term, ObjName):
        return frozenset()
    out: frozenset[Var] = frozenset()
    for t in term.args:
        out |= term_vars(t)
    return out


@dataclass(frozen=True)
class GroundAction:
    """A primitive action: a symbol applied to object constants only."""

    symbol: str
    args: tuple[str, ...] = ()

    def to_term(self) -> ActionTerm:
        return ActionTerm(self.symbol, tuple(ObjName(n) for n in self.args))

    @staticmethod
    def from_term(term: ActionTerm) -> "GroundAction":
        if not is_ground_term(term):
            raise LanguageError(f"action term {term} is not ground")
        return GroundAction(term.symbol, tuple(t.name for t in term.args))

    def __str__(self):
        if not self.args:
            return self.symbol
        return f"{self.symbol}({','.join(self.args)})"


@dataclass(frozen=True)
class Trace:
    """A finite, possibly empty sequence of ground actions.

    ``z2`` is a prefix of ``z`` exactly when ``z`` equals ``z2`` followed by
    some remainder, so the empty trace is a prefix of everything.
    """

    actions: tuple[GroundAction, ...] = ()

    def __len__(self):
        return len(self.actions)

    def __iter__(self) -> Iterator[GroundAction]:
        return iter(self.actions)

    def __getitem__(self, i) -> GroundAction:
        return self.actions[i]

    def append(self, act: GroundAction) -> "Trace":
        return Trace(self.actions + (act,))

    def concat(self, other: "Trace") -> "Trace":
        return Trace(self.actions + other.actions)

    def prefix(self, k: int) -> "Trace":
        return Trace(self.actions[:k])

    def drop_prefix(self, k: int) -> "Trace":
        """The remainder after removing the first ``k`` actions."""
        return Trace(self.actions[k:])

    def prefixes(self) -> Iterator["Trace"]:
        """All prefixes, from the empty trace up to the trace itself."""
        for k in range(len(self.actions) + 1):
            yield self.prefix(k)

    def is_prefix_of(self, other: "Trace") -> bool:
        return self.actions == other.actions[: len(self.actions)]

    def is_proper_prefix_of(self, other: "Trace") -> bool:
        return len(self) < len(other) and self.is_prefix_of(other)

    def strings(self) -> list[str]:
        return [str(a) for a in self.actions]

    def __str__(self):
        if not self.actions:
            return "<>"
        return "·".join(str(a) for a in self.actions)


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class TrueConst:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class FalseConst:
    def __str__(self):
        return "false"


TRUE = TrueConst()
FALSE = FalseConst()


@dataclass(frozen=True)
class FluentAtom:
    fluent: str
    args: tuple = ()

    def __post_init__(self):
        for t in self.args:
            if sort_of(t) != OBJECT:
                raise SortError(
                    f"fluent {self.fluent!r} takes object arguments, got {t}"
                )


@dataclass(frozen=True)
class Equal:
    left: Term
    right: Term

    def __post_init__(self):
        if sort_of(self.left) != sort_of(self.right):
            raise SortError(
                f"equality between different sorts: {self.left} = {self.right}"
            )


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Formula"

    def __post_init__(self):
        if self.var.sort != OBJECT:
            raise SortError("quantifiers bind object variables only")


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Formula"

    def __post_init__(self):
        if self.var.sort != OBJECT:
            raise SortError("quantifiers bind object variables only")


@dataclass(frozen=True)
class Poss:
    action: Term

    def __post_init__(self):
        if sort_of(self.action) != ACTION:
            raise SortError(f"Poss takes an action term, got {self.action}")


@dataclass(frozen=True)
class After:
    action: Term
    body: "Formula"

    def __post_init__(self):
        if sort_of(self.action) != ACTION:
            raise SortError(f"[.] takes an action term, got {self.action}")


@dataclass(frozen=True)
class Box:
    body: "Formula"


Formula = Union[
    TrueConst, FalseConst, FluentAtom, Equal, Not, And, Or,
    Forall, Exists, Poss, After, Box,
]


def after_all(trace: Trace, f: Formula) -> Formula:
    """``[a1]...[ak] f`` for the actions of ``trace``."""
    out = f
    for act in reversed(trace.actions):
        out = After(act.to_term(), out)
    return out


def and_all(parts, empty: Formula = TRUE) -> Formula:
    parts = list(parts)
    if not parts:
        return empty
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def or_all(parts, empty: Formula = FALSE) -> Formula:
    parts = list(parts)
    if not parts:
        return empty
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# ---------------------------------------------------------------------------
# Structural operations


def free_vars(f: Formula) -> frozenset[Var]:
    """Variables with at least one free occurrence in ``f``."""
    match f:
        case TrueConst() | FalseConst():
            return frozenset()
        case FluentAtom(_, args):
            out: frozenset[Var] = frozenset()
            for t in args:
                out |= term_vars(t)
            return out
        case Equal(left, right):
            return term_vars(left) | term_vars(right)
        case Not(sub):
            return free_vars(sub)
        case And(left, right) | Or(left, right):
            return free_vars(left) | free_vars(right)
        case Forall(var, body) | Exists(var, body):
            return free_vars(body) - {var}
        case Poss(action):
            return term_vars(action)
        case After(action, body):
            return term_vars(action) | free_vars(body)
        case Box(body):
            return free_vars(body)
    raise LanguageError(f"not a formula: {f!r}")


def subst_term(term: Term, var: Var, value: Term) -> Term:
    if isinstance(term, Var):
        return value if term == var else term
    if isinstance(term, ObjName):
        return term
    return ActionTerm(term.symbol, tuple(subst_term(t, var, value) for t in term.args))


def substitute(f: Formula, var: Var, value: Term) -> Formula:
    """Replace all free occurrences of ``var`` in ``f`` by the ground ``value``.

    Only ground terms are ever substituted here, so variable capture cannot
    occur and no renaming machinery is needed.
    """
    if not is_ground_term(value):
        raise LanguageError(f"only ground terms may be substituted, got {value}")
    if sort_of(value) != var.sort:
        raise SortError(f"cannot substitute {value} of sort {sort_of(value)} "
                        f"for {var.name} of sort {var.sort}")
    return _subst(f, var, value)


def _subst(f: Formula, var: Var, value: Term) -> Formula:
    match f:
        case TrueConst() | FalseConst():
            return f
        case FluentAtom(fluent, args):
            return FluentAtom(fluent, tuple(subst_term(t, var, value) for t in args))
        case Equal(left, right):
            return Equal(subst_term(left, var, value), subst_term(right, var, value))
        case Not(sub):
            return Not(_subst(sub, var, value))
        case And(left, right):
            return And(_subst(left, var, value), _subst(right, var, value))
        case Or(left, right):
            return Or(_subst(left, var, value), _subst(right, var, value))
        case Forall(v, body):
            if v == var:
                return f
            return Forall(v, _subst(body, var, value))
        case Exists(v, body):
            if v == var:
                return f
            return Exists(v, _subst(body, var, value))
        case Poss(action):
            return Poss(subst_term(action, var, value))
        case After(action, body):
            return After(subst_term(action, var, value), _subst(body, var, value))
        case Box(body):
            return Box(_subst(body, var, value))
    raise LanguageError(f"not a formula: {f!r}")


def is_static(f: Formula) -> bool:
    """True when ``f`` mentions no after-action and no always modality."""
    match f:
        case After(_, _) | Box(_):
            return False
        case Not(sub):
            return is_static(sub)
        case And(left, right) | Or(left, right):
            return is_static(left) and is_static(right)
        case Forall(_, body) | Exists(_, body):
            return is_static(body)
        case _:
            return True


def mentions_poss(f: Formula) -> bool:
    match f:
        case Poss(_):
            return True
        case Not(sub) | Forall(_, sub) | Exists(_, sub) | Box(sub):
            return mentions_poss(sub)
        case And(left, right) | Or(left, right):
            return mentions_poss(left) or mentions_poss(right)
        case After(_, body):
            return mentions_poss(body)
        case _:
            return False


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def node_count(f: Formula) -> int:
    match f:
        case TrueConst() | FalseConst() | FluentAtom(_, _) | Equal(_, _) | Poss(_):
            return 1
        case Not(sub) | Forall(_, sub) | Exists(_, sub) | Box(sub):
            return 1 + node_count(sub)
        case And(left, right) | Or(left, right):
            return 1 + node_count(left) + node_count(right)
        case After(_, body):
            return 1 + node_count(body)
    raise LanguageError(f"not a formula: {f!r}")


def action_symbols(f: Formula) -> frozenset[str]:
    """Action symbols occurring anywhere in ``f`` (inside terms included)."""

    def from_term(t: Term) -> frozenset[str]:
        if isinstance(t, ActionTerm):
            out = frozenset((t.symbol,))
            for s in t.args:
                out |= from_term(s)
            return out
        return frozenset()

    match f:
        case TrueConst() | FalseConst():
            return frozenset()
        case FluentAtom(_, args):
            out: frozenset[str] = frozenset()
            for t in args:
                out |= from_term(t)
            return out
        case Equal(left, right):
            return from_term(left) | from_term(right)
        case Not(sub) | Forall(_, sub) | Exists(_, sub) | Box(sub):
            return action_symbols(sub)
        case And(left, right) | Or(left, right):
            return action_symbols(left) | action_symbols(right)
        case Poss(action):
            return from_term(action)
        case After(action, body):
            return from_term(action) | action_symbols(body)
    raise LanguageError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Simplification


def terms_equal_ground(left: Term, right: Term) -> bool:
    """Unique-names equality of two ground terms."""
    if isinstance(left, ObjName) and isinstance(right, ObjName):
        return left.name == right.name
    if isinstance(left, ActionTerm) and isinstance(right, ActionTerm):
        return left.symbol == right.symbol and len(left.args) == len(right.args) \
            and all(terms_equal_ground(a, b) for a, b in zip(left.args, right.args))
    return False


def simplify(f: Formula) -> Formula:
    """An equivalent but smaller formula.

    Applies constant folding, unique-names resolution of ground equalities,
    double negation, idempotence and absorption of conjunction/disjunction,
    and removal of vacuous quantifiers.  No normal form is imposed.
    """
    match f:
        case TrueConst() | FalseConst() | FluentAtom(_, _) | Poss(_):
            return f
        case Equal(left, right):
            if left == right:
                return TRUE
            if is_ground_term(left) and is_ground_term(right):
                return TRUE if terms_equal_ground(left, right) else FALSE
            return f
        case Not(sub):
            s = simplify(sub)
            if isinstance(s, TrueConst):
                return FALSE
            if isinstance(s, FalseConst):
                return TRUE
            if isinstance(s, Not):
                return s.sub
            return Not(s)
        case And(left, right):
            l, r = simplify(left), simplify(right)
            if isinstance(l, FalseConst) or isinstance(r, FalseConst):
                return FALSE
            if isinstance(l, TrueConst):
                return r
            if isinstance(r, TrueConst):
                return l
            if l == r:
                return l
            if isinstance(r, Or) and l in (r.left, r.right):
                return l
            if isinstance(l, Or) and r in (l.left, l.right):
                return r
            return And(l, r)
        case Or(left, right):
            l, r = simplify(left), simplify(right)
            if isinstance(l, TrueConst) or isinstance(r, TrueConst):
                return TRUE
            if isinstance(l, FalseConst):
                return r
            if isinstance(r, FalseConst):
                return l
            if l == r:
                return l
            if isinstance(r, And) and l in (r.left, r.right):
                return l
            if isinstance(l, And) and r in (l.left, l.right):
                return r
            return Or(l, r)
        case Forall(var, body):
            b = simplify(body)
            if isinstance(b, (TrueConst, FalseConst)) or var not in free_vars(b):
                return b
            return Forall(var, b)
        case Exists(var, body):
            b = simplify(body)
            if isinstance(b, (TrueConst, FalseConst)) or var not in free_vars(b):
                return b
            return Exists(var, b)
        case After(action, body):
            return After(action, simplify(body))
        case Box(body):
            return Box(simplify(body))
    raise LanguageError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Vocabulary

# A ground fluent atom as a plain key: (fluent symbol, argument names).
Atom = tuple[str, tuple[str, ...]]


def atom_str(atom: Atom) -> str:
    fluent, args = atom
    if not args:
        return fluent
    return f"{fluent}({','.join(args)})"


def atom_formula(atom: Atom) -> FluentAtom:
    fluent, args = atom
    return FluentAtom(fluent, tuple(ObjName(n) for n in args))


@dataclass(frozen=True)
class Vocabulary:
    """Declared object constants and fluent/action signatures.

    Declaration order is the canonical order used for grounding, search, and
    reporting, so identical inputs always produce identical outputs.
    """

    objects: tuple[str, ...]
    fluents: tuple[tuple[str, int], ...]
    actions: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen: set[str] = set()
        for name in itertools.chain(
            self.objects, (n for n, _ in self.fluents), (n for n, _ in self.actions)
        ):
            if name in RESERVED_WORDS:
                raise LanguageError(f"{name!r} is a reserved word")
            if name in seen:
                raise LanguageError(f"name {name!r} declared more than once")
            seen.add(name)
        for name, arity in itertools.chain(self.fluents, self.actions):
            if arity < 0:
                raise LanguageError(f"negative arity for {name!r}")
        if not self.objects:
            raise LanguageError("at least one object constant is required")
        object.__setattr__(self, "_fluent_arity", dict(self.fluents))
        object.__setattr__(self, "_action_arity", dict(self.actions))
        atoms = []
        for fluent, arity in self.fluents:
            for args in itertools.product(self.objects, repeat=arity):
                atoms.append((fluent, args))
        acts = []
        for symbol, arity in self.actions:
            for args in itertools.product(self.objects, repeat=arity):
                acts.append(GroundAction(symbol, args))
        object.__setattr__(self, "_ground_atoms", tuple(atoms))
        object.__setattr__(self, "_ground_actions", tuple(acts))
        object.__setattr__(self, "_action_pos", {a: i for i, a in enumerate(acts)})

    def is_object(self, name: str) -> bool:
        return name in self.objects

    def is_fluent(self, name: str) -> bool:
        return name in self._fluent_arity

    def is_action(self, name: str) -> bool:
        return name in self._action_arity

    def fluent_arity(self, name: str) -> int:
        try:
            return self._fluent_arity[name]
        except KeyError:
            raise LanguageError(f"undeclared fluent {name!r}") from None

    def action_arity(self, name: str) -> int:
        try:
            return self._action_arity[name]
        except KeyError:
            raise LanguageError(f"undeclared action {name!r}") from None

    def ground_atoms(self) -> tuple[Atom, ...]:
        return self._ground_atoms

    def ground_actions(self) -> tuple[GroundAction, ...]:
        return self._ground_actions

    def action_index(self, act: GroundAction) -> int:
        """Position of ``act`` in the canonical ground-action order."""
        try:
            return self._action_pos[act]
        except KeyError:
            raise LanguageError(f"unknown ground action {act}") from None

    def check_ground_action(self, act: GroundAction) -> None:
        arity = self.action_arity(act.symbol)
        if len(act.args) != arity:
            raise LanguageError(
                f"action {act.symbol!r} expects {arity} argument(s), got {len(act.args)}"
            )
        for name in act.args:
            if not self.is_object(name):
                raise LanguageError(f"undeclared object {name!r}")

    def check_term(self, term: Term) -> None:
        if isinstance(term, ObjName):
            if not self.is_object(term.name):
                raise LanguageError(f"undeclared object {term.name!r}")
        elif isinstance(term, ActionTerm):
            arity = self.action_arity(term.symbol)
            if len(term.args) != arity:
                raise LanguageError(
                    f"action {term.symbol!r} expects {arity} argument(s), "
                    f"got {len(term.args)}"
                )
            for t in term.args:
                self.check_term(t)

    def check_formula(self, f: Formula) -> None:
        """Raise :class:`LanguageError` unless every symbol in ``f`` is
        declared with the right arity."""
        match f:
            case TrueConst() | FalseConst():
                return
            case FluentAtom(fluent, args):
                arity = self.fluent_arity(fluent)
                if len(args) != arity:
                    raise LanguageError(
                        f"fluent {fluent!r} expects {arity} argument(s), got {len(args)}"
                    )
                for t in args:
                    self.check_term(t)
            case Equal(left, right):
                self.check_term(left)
                self.check_term(right)
            case Not(sub) | Forall(_, sub) | Exists(_, sub) | Box(sub):
                self.check_formula(sub)
            case And(left, right) | Or(left, right):
                self.check_formula(left)
                self.check_formula(right)
            case Poss(action):
                self.check_term(action)
            case After(action, body):
                self.check_term(action)
                self.check_formula(body)
            case _:
                raise LanguageError(f"not a formula: {f!r}")
