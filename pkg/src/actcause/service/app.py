"""Stateless HTTP service over the engine.

Run with ``uvicorn actcause.service.app:app``.  Each endpoint mirrors one
command of the command line and returns the same payload plus the status
the command line would use as its exit code; input problems become 400
responses with the diagnostic (and source span, when there is one).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import commands
from ..commands import CommandError, Outcome
from ..evaluator import EvaluationError
from ..hpmodels import ModelError
from ..logic import LanguageError
from ..parser import ParseError, TheoryValidationError
from .schemas import (
    ChainRequest,
    CheckRequest,
    CommandResponse,
    ExecRequest,
    HPCauseRequest,
    MinimalCauseRequest,
    RegressRequest,
    SelftestRequest,
    SettingRequest,
)

app = FastAPI(
    title="actcause",
    description="Counterfactual and achievement causes over basic action "
                "theories, plus structural-equation comparison models.",
)


def _respond(fn, *args, **kwargs) -> CommandResponse:
    try:
        outcome: Outcome = fn(*args, **kwargs)
    except ParseError as exc:
        raise HTTPException(status_code=400, detail={
            "message": exc.message,
            "span": {
                "start": exc.span.start, "end": exc.span.end,
                "line": exc.span.line, "column": exc.span.column,
            },
            "expected": list(exc.expected),
        }) from exc
    except TheoryValidationError as exc:
        raise HTTPException(status_code=400, detail={
            "message": "the theory is ill-formed",
            "violations": list(exc.report.violations),
        }) from exc
    except (LanguageError, ModelError, CommandError, EvaluationError) as exc:
        raise HTTPException(status_code=400,
                            detail={"message": str(exc)}) from exc
    return CommandResponse(**outcome.payload, status=outcome.status)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/check", response_model=CommandResponse)
def check(request: CheckRequest) -> CommandResponse:
    return _respond(commands.cmd_check, request.source, request.query,
                    label="<request>")


@app.post("/exec", response_model=CommandResponse)
def exec_trace(request: ExecRequest) -> CommandResponse:
    return _respond(commands.cmd_exec, request.source,
                    narrative=request.narrative, trace=request.trace,
                    label="<request>")


@app.post("/regress", response_model=CommandResponse)
def regress(request: RegressRequest) -> CommandResponse:
    return _respond(commands.cmd_regress, request.source, goal=request.goal,
                    formula=request.formula, narrative=request.narrative,
                    trace=request.trace, label="<request>")


@app.post("/minimal-cause", response_model=CommandResponse)
def minimal_cause(request: MinimalCauseRequest) -> CommandResponse:
    return _respond(commands.cmd_minimal_cause, request.source, request.goal,
                    request.order, request.horizon, lex=request.lex,
                    jobs=request.jobs, label="<request>")


@app.post("/achievement-cause", response_model=CommandResponse)
def achievement_cause(request: SettingRequest) -> CommandResponse:
    return _respond(commands.cmd_achievement_cause, request.source,
                    request.goal, request.narrative, label="<request>")


@app.post("/bs-chain", response_model=CommandResponse)
def bs_chain(request: SettingRequest) -> CommandResponse:
    return _respond(commands.cmd_bs_chain, request.source, request.goal,
                    request.narrative, label="<request>")


@app.post("/chain", response_model=CommandResponse)
def chain(request: ChainRequest) -> CommandResponse:
    return _respond(commands.cmd_chain, request.source,
                    narrative=request.narrative, trace=request.trace,
                    label="<request>")


@app.post("/verify-theorem1", response_model=CommandResponse)
def verify_theorem1(request: SettingRequest) -> CommandResponse:
    return _respond(commands.cmd_verify_theorem1, request.source, request.goal,
                    request.narrative, label="<request>")


@app.post("/hp-cause", response_model=CommandResponse)
def hp_cause(request: HPCauseRequest) -> CommandResponse:
    return _respond(commands.cmd_hp_cause, request.source, request.model,
                    request.query, context=request.context, label="<request>")


@app.post("/selftest", response_model=CommandResponse)
def selftest(request: SelftestRequest) -> CommandResponse:
    return _respond(commands.cmd_selftest, seed=request.seed,
                    random_settings=request.random_settings)
