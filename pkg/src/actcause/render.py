"""Rendering back to the surface syntax, and deterministic JSON results.

Rendered formulas reparse to structurally equal trees; rendered files
reparse to equal bundles.  JSON output is built from explicitly ordered
dictionaries and canonically sorted lists, so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import json

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
    Not,
    Or,
    Poss,
    Term,
    Trace,
    TrueConst,
    atom_str,
)
from .theory import BasicActionTheory
from .hpmodels import (
    Cmp,
    ConstEquation,
    EAnd,
    EConst,
    ENot,
    EOr,
    Equation,
    ExprEquation,
    ValueExpr,
)
from .parser import HPModelDecl, ParsedFile

_PREC_QUANT = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_UNARY = 4
_PREC_ATOM = 5


def render_term(term: Term) -> str:
    return str(term)


def render_formula(f: Formula) -> str:
    return _render(f, 0)


def _render(f: Formula, parent: int) -> str:
    match f:
        case TrueConst():
            return "true"
        case FalseConst():
            return "false"
        case FluentAtom(fluent, args):
            if not args:
                return fluent
            return f"{fluent}({','.join(render_term(t) for t in args)})"
        case Equal(left, right):
            return f"{render_term(left)} = {render_term(right)}"
        case Not(Equal(left, right)):
            return f"{render_term(left)} != {render_term(right)}"
        case Not(sub):
            return "!" + _render(sub, _PREC_UNARY)
        case And(left, right):
            s = f"{_render(left, _PREC_AND)} & {_render(right, _PREC_AND + 1)}"
            return f"({s})" if parent > _PREC_AND else s
        case Or(left, right):
            s = f"{_render(left, _PREC_OR)} | {_render(right, _PREC_OR + 1)}"
            return f"({s})" if parent > _PREC_OR else s
        case Forall(var, body):
            s = f"forall {var.name}. {_render(body, 0)}"
            return f"({s})" if parent > _PREC_QUANT else s
        case Exists(var, body):
            s = f"exists {var.name}. {_render(body, 0)}"
            return f"({s})" if parent > _PREC_QUANT else s
        case Poss(action):
            return f"Poss({render_term(action)})"
        case After(action, body):
            return f"[{render_term(action)}] {_render(body, _PREC_UNARY)}"
        case Box(body):
            return "box " + _render(body, _PREC_UNARY)
    raise ValueError(f"not a formula: {f!r}")


def trace_strings(trace: Trace) -> list[str]:
    return trace.strings()


def render_trace(trace: Trace) -> str:
    return "; ".join(trace.strings())


# ---------------------------------------------------------------------------
# Value expressions and equations


def render_vexpr(expr: ValueExpr) -> str:
    return _render_vexpr(expr, 0)


def _render_vexpr(expr: ValueExpr, parent: int) -> str:
    match expr:
        case EConst(value):
            return "true" if value else "false"
        case Cmp(var, value):
            return f"{var} = {value}"
        case ENot(Cmp(var, value)):
            return f"{var} != {value}"
        case ENot(sub):
            return "!" + _render_vexpr(sub, 3)
        case EAnd(left, right):
            s = f"{_render_vexpr(left, 2)} & {_render_vexpr(right, 3)}"
            return f"({s})" if parent > 2 else s
        case EOr(left, right):
            s = f"{_render_vexpr(left, 1)} | {_render_vexpr(right, 2)}"
            return f"({s})" if parent > 1 else s
    raise ValueError(f"not a value expression: {expr!r}")


def render_equation(eq: Equation) -> str:
    if isinstance(eq, ExprEquation):
        return render_vexpr(eq.expr)
    if isinstance(eq, ConstEquation):
        return f"case {{ else -> {eq.value}; }}"
    parts = [f"{render_vexpr(cond)} -> {value};" for cond, value in eq.cases]
    parts.append(f"else -> {eq.default};")
    return "case { " + " ".join(parts) + " }"


# ---------------------------------------------------------------------------
# Whole files


def _render_sig(sigs) -> str:
    return ", ".join(f"{name}/{arity}" for name, arity in sigs)


def render_theory(bat: BasicActionTheory) -> str:
    vocab = bat.vocabulary
    lines = [
        "domain {",
        f"  objects: {', '.join(vocab.objects)};",
        f"  fluents: {_render_sig(vocab.fluents)};",
        f"  actions: {_render_sig(vocab.actions)};",
        "}",
        "",
    ]
    for clause in bat.preconditions:
        params = f"({', '.join(v.name for v in clause.params)})" if clause.params else ""
        lines.append(f"poss {clause.action_symbol}{params}: "
                     f"{render_formula(clause.condition)};")
    lines.append("")
    for ssa in bat.ssas:
        params = f"({', '.join(v.name for v in ssa.params)})" if ssa.params else ""
        lines.append(f"ssa {ssa.fluent_symbol}{params}: {render_formula(ssa.rhs)};")
    lines.append("")
    lines.append(f"init {bat.initial.mode} {{")
    for atom, sign in sorted(bat.initial.literals):
        lines.append(f"  {'' if sign else '!'}{atom_str(atom)};")
    lines.append("}")
    return "\n".join(lines)


def render_hpmodel(name: str, decl: HPModelDecl) -> str:
    model = decl.model
    lines = [f"hpmodel {name} {{"]

    def var_decl(d):
        if d.values == ("false", "true"):
            return d.name
        return f"{d.name} in {{{', '.join(d.values)}}}"

    lines.append(f"  exo: {', '.join(var_decl(d) for d in model.exogenous)};")
    lines.append(f"  endo: {', '.join(var_decl(d) for d in model.endogenous)};")
    for var, eq in model.equations:
        lines.append(f"  eq {var}: {render_equation(eq)};")
    for cname, ctx in decl.contexts.items():
        assigns = ", ".join(f"{k} = {v}" for k, v in ctx.values)
        lines.append(f"  context {cname}: {assigns};")
    lines.append("}")
    return "\n".join(lines)


def render_file(parsed: ParsedFile) -> str:
    parts = [render_theory(parsed.bat)]
    if parsed.goals:
        parts.append("\n".join(
            f"goal {name}: {render_formula(f)};" for name, f in parsed.goals.items()
        ))
    if parsed.narratives:
        parts.append("\n".join(
            f"narrative {name}: {render_trace(t)};"
            for name, t in parsed.narratives.items()
        ))
    for name, decl in parsed.hpmodels.items():
        parts.append(render_hpmodel(name, decl))
    return "\n\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# JSON results


def result_payload(command: str, input_desc: dict, result,
                   diagnostics: list[str]) -> dict:
    return {
        "command": command,
        "input": input_desc,
        "result": result,
        "diagnostics": list(diagnostics),
    }


def to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
