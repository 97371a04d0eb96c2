"""Finite structural equation models and actual causes by the modified
counterfactual test.

Variables are exogenous (set by a context) or endogenous (defined by one
equation each).  Equations may depend on exogenous variables and on earlier
endogenous variables only, so dependencies are acyclic by construction and
solving is a single pass in declaration order.

An actual cause of a query that holds in ``(model, context)`` is a minimal
conjunction of endogenous assignments, at their actual values, for which
some witness exists: a disjoint variable set frozen at its actual values and
alternative values for the conjunction such that intervening accordingly
falsifies the query.  Every conjunct of a cause is a part of the cause.

Causes made only of variables the query itself mentions are reported only
when nothing else qualifies; asking whether an outcome caused itself is
vacuous whenever any other cause exists, but in a model with nothing else
(a single variable queried at its own value) the assignment is its own
cause with an empty witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

BOOL_RANGE = ("false", "true")


class ModelError(Exception):
    """An ill-formed model, context, intervention, or query."""


@dataclass(frozen=True)
class VarDecl:
    name: str
    values: tuple[str, ...] = BOOL_RANGE

    def __post_init__(self):
        if len(set(self.values)) != len(self.values) or not self.values:
            raise ModelError(f"range of {self.name!r} must be a nonempty set")

    @property
    def boolean(self) -> bool:
        return tuple(sorted(self.values)) == tuple(sorted(BOOL_RANGE))


# --- value expressions -------------------------------------------------------


@dataclass(frozen=True)
class Cmp:
    var: str
    value: str


@dataclass(frozen=True)
class ENot:
    sub: "ValueExpr"


@dataclass(frozen=True)
class EAnd:
    left: "ValueExpr"
    right: "ValueExpr"


@dataclass(frozen=True)
class EOr:
    left: "ValueExpr"
    right: "ValueExpr"


@dataclass(frozen=True)
class EConst:
    value: bool


ValueExpr = Union[Cmp, ENot, EAnd, EOr, EConst]


def expr_vars(expr: ValueExpr) -> frozenset[str]:
    match expr:
        case Cmp(var, _):
            return frozenset((var,))
        case ENot(sub):
            return expr_vars(sub)
        case EAnd(left, right) | EOr(left, right):
            return expr_vars(left) | expr_vars(right)
        case EConst(_):
            return frozenset()
    raise ModelError(f"not a value expression: {expr!r}")


def eval_expr(expr: ValueExpr, assignment: dict[str, str]) -> bool:
    match expr:
        case Cmp(var, value):
            try:
                return assignment[var] == value
            except KeyError:
                raise ModelError(f"undeclared variable {var!r}") from None
        case ENot(sub):
            return not eval_expr(sub, assignment)
        case EAnd(left, right):
            return eval_expr(left, assignment) and eval_expr(right, assignment)
        case EOr(left, right):
            return eval_expr(left, assignment) or eval_expr(right, assignment)
        case EConst(value):
            return value
    raise ModelError(f"not a value expression: {expr!r}")


# --- equations ---------------------------------------------------------------


@dataclass(frozen=True)
class ExprEquation:
    """Boolean shorthand: the variable is true exactly when the expression holds."""

    expr: ValueExpr


@dataclass(frozen=True)
class CaseEquation:
    """First matching condition wins; the default keeps the function total."""

    cases: tuple[tuple[ValueExpr, str], ...]
    default: str


@dataclass(frozen=True)
class ConstEquation:
    """A variable pinned to one value; what intervening produces."""

    value: str


Equation = Union[ExprEquation, CaseEquation, ConstEquation]


def equation_vars(eq: Equation) -> frozenset[str]:
    if isinstance(eq, ExprEquation):
        return expr_vars(eq.expr)
    if isinstance(eq, CaseEquation):
        out: frozenset[str] = frozenset()
        for cond, _ in eq.cases:
            out |= expr_vars(cond)
        return out
    return frozenset()


def eval_equation(eq: Equation, decl: VarDecl, assignment: dict[str, str]) -> str:
    if isinstance(eq, ConstEquation):
        return eq.value
    if isinstance(eq, ExprEquation):
        return "true" if eval_expr(eq.expr, assignment) else "false"
    for cond, value in eq.cases:
        if eval_expr(cond, assignment):
            return value
    return eq.default


# --- models ------------------------------------------------------------------


@dataclass(frozen=True)
class HPModel:
    exogenous: tuple[VarDecl, ...]
    endogenous: tuple[VarDecl, ...]
    equations: tuple[tuple[str, Equation], ...]

    def __post_init__(self):
        names = [d.name for d in self.exogenous] + [d.name for d in self.endogenous]
        if len(set(names)) != len(names):
            raise ModelError("variable names must be unique")
        decls = self.decls()
        defined = [name for name, _ in self.equations]
        if sorted(defined) != sorted(d.name for d in self.endogenous) or \
                len(set(defined)) != len(defined):
            raise ModelError("exactly one equation per endogenous variable")
        # References may reach exogenous variables and earlier endogenous
        # variables only; this keeps the dependency relation acyclic.
        seen = {d.name for d in self.exogenous}
        eq_by_name = dict(self.equations)
        for decl in self.endogenous:
            eq = eq_by_name[decl.name]
            for ref in sorted(equation_vars(eq)):
                if ref not in decls:
                    raise ModelError(f"equation for {decl.name!r} references "
                                     f"undeclared variable {ref!r}")
                if ref not in seen:
                    raise ModelError(
                        f"equation for {decl.name!r} references {ref!r}, which is "
                        "not an exogenous or earlier endogenous variable")
            self._check_values(decl, eq, decls)
            seen.add(decl.name)

    @staticmethod
    def _check_values(decl: VarDecl, eq: Equation, decls: dict[str, VarDecl]) -> None:
        def check_expr(expr: ValueExpr) -> None:
            match expr:
                case Cmp(var, value):
                    if value not in decls[var].values:
                        raise ModelError(
                            f"value {value!r} is outside the range of {var!r}")
                case ENot(sub):
                    check_expr(sub)
                case EAnd(left, right) | EOr(left, right):
                    check_expr(left)
                    check_expr(right)
                case EConst(_):
                    pass

        if isinstance(eq, ExprEquation):
            if not decl.boolean:
                raise ModelError(
                    f"boolean equation for {decl.name!r}, whose range is not boolean")
            check_expr(eq.expr)
        elif isinstance(eq, CaseEquation):
            for cond, value in eq.cases:
                check_expr(cond)
                if value not in decl.values:
                    raise ModelError(
                        f"value {value!r} is outside the range of {decl.name!r}")
            if eq.default not in decl.values:
                raise ModelError(
                    f"value {eq.default!r} is outside the range of {decl.name!r}")
        elif isinstance(eq, ConstEquation):
            if eq.value not in decl.values:
                raise ModelError(
                    f"value {eq.value!r} is outside the range of {decl.name!r}")

    def decls(self) -> dict[str, VarDecl]:
        return {d.name: d for d in self.exogenous + self.endogenous}

    def endo_decl(self, name: str) -> VarDecl:
        for d in self.endogenous:
            if d.name == name:
                return d
        raise ModelError(f"undeclared endogenous variable {name!r}")


@dataclass(frozen=True)
class Context:
    """A total assignment to the exogenous variables."""

    values: tuple[tuple[str, str], ...]

    def as_dict(self) -> dict[str, str]:
        return dict(self.values)


@dataclass(frozen=True)
class Intervention:
    """A partial assignment pinning endogenous variables to values."""

    values: tuple[tuple[str, str], ...] = ()

    def as_dict(self) -> dict[str, str]:
        return dict(self.values)


def check_context(model: HPModel, context: Context) -> dict[str, str]:
    ctx = context.as_dict()
    for decl in model.exogenous:
        if decl.name not in ctx:
            raise ModelError(f"context misses exogenous variable {decl.name!r}")
        if ctx[decl.name] not in decl.values:
            raise ModelError(
                f"value {ctx[decl.name]!r} is outside the range of {decl.name!r}")
    for name in ctx:
        if name not in {d.name for d in model.exogenous}:
            raise ModelError(f"context assigns non-exogenous variable {name!r}")
    return ctx


def solve(model: HPModel, context: Context) -> dict[str, str]:
    """The unique endogenous assignment in the given context.

    Equations are evaluated in declaration order; any topological order of
    the dependencies would produce the same assignment.
    """
    assignment = check_context(model, context)
    eq_by_name = dict(model.equations)
    for decl in model.endogenous:
        assignment[decl.name] = eval_equation(eq_by_name[decl.name], decl, assignment)
    return {d.name: assignment[d.name] for d in model.endogenous}


def intervene(model: HPModel, intervention: Intervention) -> HPModel:
    """A model in which the intervened variables are pinned to constants."""
    pinned = intervention.as_dict()
    endo_names = {d.name for d in model.endogenous}
    for name, value in sorted(pinned.items()):
        if name not in endo_names:
            raise ModelError(f"cannot intervene on non-endogenous {name!r}")
        if value not in model.endo_decl(name).values:
            raise ModelError(f"value {value!r} is outside the range of {name!r}")
    equations = tuple(
        (name, ConstEquation(pinned[name]) if name in pinned else eq)
        for name, eq in model.equations
    )
    return HPModel(model.exogenous, model.endogenous, equations)


def satisfies(model: HPModel, context: Context, intervention: Intervention,
              query: ValueExpr) -> bool:
    """Truth of ``query`` after intervening: solve the pinned model and
    evaluate the query over the resulting assignment (context included)."""
    intervened = intervene(model, intervention)
    assignment = check_context(model, context)
    assignment.update(solve(intervened, context))
    decls = model.decls()
    for var in sorted(expr_vars(query)):
        if var not in decls:
            raise ModelError(f"query references undeclared variable {var!r}")
    return eval_expr(query, assignment)


# --- actual causes -----------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    frozen: tuple[tuple[str, str], ...]       # variables kept at actual values
    alternative: tuple[tuple[str, str], ...]  # replacement values for the cause


@dataclass(frozen=True)
class HPCause:
    conjuncts: tuple[tuple[str, str], ...]  # actual-value assignments X = x
    witness: Witness

    def variables(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.conjuncts)


def find_witness(model: HPModel, context: Context, query: ValueExpr,
                 actual: dict[str, str], subset: tuple[str, ...]
                 ) -> Optional[Witness]:
    """The first witness (smallest frozen set, canonical value order) showing
    that flipping ``subset`` away from its actual values can falsify the
    query while the frozen variables keep their actual values."""
    others = [d.name for d in model.endogenous if d.name not in subset]
    alt_ranges = []
    for name in subset:
        decl = model.endo_decl(name)
        alt_ranges.append([v for v in decl.values if v != actual[name]])
    for w_size in range(len(others) + 1):
        for frozen_vars in itertools.combinations(others, w_size):
            frozen = tuple((name, actual[name]) for name in frozen_vars)
            for alt in itertools.product(*alt_ranges):
                alternative = tuple(zip(subset, alt))
                iv = Intervention(alternative + frozen)
                if not satisfies(model, context, iv, query):
                    return Witness(frozen, alternative)
    return None


def actual_causes(model: HPModel, context: Context, query: ValueExpr
                  ) -> tuple[HPCause, ...]:
    """All minimal actual causes of ``query`` in ``(model, context)``.

    Candidates are conjunctions of endogenous variables at their actual
    values, searched by increasing size so that minimality prunes supersets;
    whether each candidate counterfactually suffices is decided by exhaustive
    witness search.  Raises when the query does not actually hold.
    """
    actual_full = check_context(model, context)
    actual = solve(model, context)
    actual_full.update(actual)
    for var in sorted(expr_vars(query)):
        if var not in model.decls():
            raise ModelError(f"query references undeclared variable {var!r}")
    if not eval_expr(query, actual_full):
        raise ModelError("query does not hold in the given context")

    endo_names = [d.name for d in model.endogenous]
    passing: list[HPCause] = []
    passing_sets: list[frozenset[str]] = []
    for size in range(1, len(endo_names) + 1):
        for subset in itertools.combinations(endo_names, size):
            if any(prev <= frozenset(subset) for prev in passing_sets):
                continue  # a sub-conjunction already qualifies
            witness = find_witness(model, context, query, actual, subset)
            if witness is not None:
                conjuncts = tuple((name, actual[name]) for name in subset)
                passing.append(HPCause(conjuncts, witness))
                passing_sets.append(frozenset(subset))

    qvars = expr_vars(query)
    outside = tuple(c for c in passing if not c.variables() <= qvars)
    return outside if outside else tuple(passing)
