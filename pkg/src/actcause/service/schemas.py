"""Request and response models for the HTTP surface.

Requests carry the theory source inline, so the service stays stateless:
every call is one self-contained reasoning problem.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class TheoryRequest(BaseModel):
    source: str = Field(description="Theory file content.")


class CheckRequest(TheoryRequest):
    query: str


class ExecRequest(TheoryRequest):
    narrative: Optional[str] = None
    trace: Optional[str] = None


class RegressRequest(TheoryRequest):
    goal: Optional[str] = None
    formula: Optional[str] = None
    narrative: Optional[str] = None
    trace: Optional[str] = None


class MinimalCauseRequest(TheoryRequest):
    goal: str
    order: str = "length"
    horizon: int
    lex: Optional[str] = None
    jobs: int = 1


class SettingRequest(TheoryRequest):
    goal: str
    narrative: str


class ChainRequest(TheoryRequest):
    narrative: Optional[str] = None
    trace: Optional[str] = None


class HPCauseRequest(TheoryRequest):
    model: str
    query: str
    context: Optional[str] = None


class SelftestRequest(BaseModel):
    seed: Optional[int] = None
    random_settings: int = 0


class CommandResponse(BaseModel):
    command: str
    input: dict[str, Any]
    result: Any
    diagnostics: list[str]
    status: int = Field(description="0: answer; 1: domain-level no answer.")
