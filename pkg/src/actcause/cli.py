"""One-shot command line over the engine.

Every command reads a theory file, prints one JSON document on standard
output, and exits 0 for an answer, 1 for a domain-level "no answer", and 2
for input errors (reported on standard error, never mixed into the output).
``--pretty`` swaps the JSON for a human rendering.
"""

from __future__ import annotations

import sys
from typing import Optional

import click

from . import commands
from .commands import CommandError, Outcome
from .evaluator import EvaluationError
from .hpmodels import ModelError
from .logic import LanguageError
from .parser import ParseError, TheoryValidationError
from .render import to_json

_INPUT_ERRORS = (ParseError, TheoryValidationError, LanguageError,
                 ModelError, CommandError, EvaluationError)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc}") from exc


def _fail(exc: Exception) -> "None":
    if isinstance(exc, ParseError):
        sys.stderr.write(
            f"error: line {exc.span.line}, column {exc.span.column}: "
            f"{exc.message}\n")
        if exc.expected:
            sys.stderr.write(f"  expected: {', '.join(exc.expected)}\n")
    elif isinstance(exc, TheoryValidationError):
        sys.stderr.write("error: the theory is ill-formed\n")
        for violation in exc.report.violations:
            sys.stderr.write(f"  - {violation}\n")
    else:
        sys.stderr.write(f"error: {exc}\n")
    sys.exit(2)


def _emit(outcome: Outcome, pretty: bool) -> None:
    if pretty:
        sys.stdout.write(_pretty(outcome.payload))
    else:
        sys.stdout.write(to_json(outcome.payload))
    sys.exit(outcome.status)


def _pretty(payload: dict, indent: int = 0) -> str:
    if payload["command"] == "selftest":
        lines = []
        for line in payload["result"]["lines"]:
            mark = "pass" if line["ok"] else "FAIL"
            lines.append(f"[{mark}] {line['name']}")
            if not line["ok"]:
                lines.append(f"       expected: {line['expected']}")
                lines.append(f"       got:      {line['got']}")
        result = payload["result"]
        lines.append(f"{result['passed']}/{result['total']} checks passed")
        return "\n".join(lines) + "\n"
    return _pretty_value(payload["result"], 0) + "\n"


def _pretty_value(value, depth: int) -> str:
    pad = "  " * depth
    if isinstance(value, dict):
        rows = []
        for key, sub in value.items():
            if isinstance(sub, (dict, list)) and sub:
                rows.append(f"{pad}{key}:")
                rows.append(_pretty_value(sub, depth + 1))
            else:
                rows.append(f"{pad}{key}: {_scalar(sub)}")
        return "\n".join(rows)
    if isinstance(value, list):
        rows = []
        for sub in value:
            if isinstance(sub, (dict, list)) and sub:
                rows.append(f"{pad}-")
                rows.append(_pretty_value(sub, depth + 1))
            else:
                rows.append(f"{pad}- {_scalar(sub)}")
        return "\n".join(rows)
    return pad + _scalar(value)


def _scalar(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return "[]"
    if isinstance(value, dict):
        return "{}"
    return str(value)


def _run(thunk, pretty: bool = False) -> None:
    # File reading happens inside the guard too, so unreadable inputs land
    # on stderr with exit code 2 like every other input problem.
    try:
        outcome = thunk()
    except _INPUT_ERRORS as exc:
        _fail(exc)
        return
    _emit(outcome, pretty)


input_option = click.option("-i", "--input", "path", required=True,
                            type=click.Path(), help="Theory file.")
pretty_option = click.option("--pretty", is_flag=True,
                             help="Human output instead of JSON.")


@click.group()
def main() -> None:
    """Reason about counterfactual causes in action theories."""


@main.command("check")
@input_option
@click.argument("query")
@pretty_option
def check_cmd(path: str, query: str, pretty: bool) -> None:
    """Decide entailment of a raw query; [action] prefixes are allowed."""
    _run(lambda: commands.cmd_check(_read(path), query, label=path),
         pretty=pretty)


@main.command("exec")
@input_option
@click.option("--narrative", help="Narrative name from the file.")
@click.option("--trace", help="Inline trace, e.g. 'pickup(C); drop(C)'.")
@pretty_option
def exec_cmd(path: str, narrative: Optional[str], trace: Optional[str],
             pretty: bool) -> None:
    """Report step-by-step executability of an action sequence."""
    _run(lambda: commands.cmd_exec(_read(path), narrative=narrative,
                                   trace=trace, label=path), pretty=pretty)


@main.command("regress")
@input_option
@click.option("--goal", help="Goal name from the file.")
@click.option("--formula", help="Inline static formula.")
@click.option("--narrative", help="Narrative name from the file.")
@click.option("--trace", help="Inline trace.")
@pretty_option
def regress_cmd(path: str, goal: Optional[str], formula: Optional[str],
                narrative: Optional[str], trace: Optional[str],
                pretty: bool) -> None:
    """Rewrite a query about the future into a static formula."""
    _run(lambda: commands.cmd_regress(_read(path), goal=goal, formula=formula,
                                      narrative=narrative, trace=trace,
                                      label=path), pretty=pretty)


@main.command("minimal-cause")
@input_option
@click.option("--goal", required=True, help="Goal name from the file.")
@click.option("--order", type=click.Choice(["length", "fluent", "plan-effect"]),
              default="length", show_default=True)
@click.option("--horizon", type=int, required=True,
              help="Maximum trace length searched.")
@click.option("--lex", help="Total order for plan-effect, e.g. 'footprint,length'.")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Worker threads for candidate evaluation.")
@pretty_option
def minimal_cause_cmd(path: str, goal: str, order: str, horizon: int,
                      lex: Optional[str], jobs: int, pretty: bool) -> None:
    """All minimal causes of a goal within the horizon."""
    _run(lambda: commands.cmd_minimal_cause(_read(path), goal, order, horizon,
                                            lex=lex, jobs=jobs, label=path),
         pretty=pretty)


@main.command("achievement-cause")
@input_option
@click.option("--goal", required=True)
@click.option("--narrative", required=True)
@pretty_option
def achievement_cause_cmd(path: str, goal: str, narrative: str,
                          pretty: bool) -> None:
    """The minimal narrative prefix that causes the goal."""
    _run(lambda: commands.cmd_achievement_cause(_read(path), goal, narrative,
                                                label=path), pretty=pretty)


@main.command("bs-chain")
@input_option
@click.option("--goal", required=True)
@click.option("--narrative", required=True)
@pretty_option
def bs_chain_cmd(path: str, goal: str, narrative: str, pretty: bool) -> None:
    """The recursive achievement causal chain of a setting."""
    _run(lambda: commands.cmd_bs_chain(_read(path), goal, narrative,
                                       label=path), pretty=pretty)


@main.command("chain")
@input_option
@click.option("--narrative", help="Narrative name from the file.")
@click.option("--trace", help="Inline trace.")
@pretty_option
def chain_cmd(path: str, narrative: Optional[str], trace: Optional[str],
              pretty: bool) -> None:
    """All (action, prefix) pairs of an action sequence."""
    _run(lambda: commands.cmd_chain(_read(path), narrative=narrative,
                                    trace=trace, label=path), pretty=pretty)


@main.command("verify-theorem1")
@input_option
@click.option("--goal", required=True)
@click.option("--narrative", required=True)
@pretty_option
def verify_theorem1_cmd(path: str, goal: str, narrative: str,
                        pretty: bool) -> None:
    """Check that the causal chain lies inside the achievement cause."""
    _run(lambda: commands.cmd_verify_theorem1(_read(path), goal, narrative,
                                              label=path), pretty=pretty)


@main.command("hp-cause")
@input_option
@click.option("--model", required=True, help="Structural model name.")
@click.option("--query", required=True, help="Boolean query, e.g. 'FF = true'.")
@click.option("--context", help="Context name (optional when unique).")
@pretty_option
def hp_cause_cmd(path: str, model: str, query: str, context: Optional[str],
                 pretty: bool) -> None:
    """Actual causes of a query in a structural model."""
    _run(lambda: commands.cmd_hp_cause(_read(path), model, query,
                                       context=context, label=path),
         pretty=pretty)


@main.command("selftest")
@click.option("--seed", type=int, default=None,
              help="Seed for the random property lines.")
@click.option("--random-settings", type=int, default=0, show_default=True,
              help="Also run this many random settings per property line.")
@pretty_option
def selftest_cmd(seed: Optional[int], random_settings: int, pretty: bool) -> None:
    """Run the built-in fixture table and print one line per check."""
    _run(lambda: commands.cmd_selftest(seed=seed,
                                       random_settings=random_settings),
         pretty=pretty)


if __name__ == "__main__":
    main()
