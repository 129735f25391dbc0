"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class SpecModel(BaseModel):
    """Avoidance-search instance: what to avoid, over which lattice."""

    n: int
    rainbow: Optional[str] = None
    mono: Optional[str] = None
    palette: str = "unbounded"  # "exact" | "at_most" | "unbounded"
    k: Optional[int] = None
    mode: str = "induced"


class SearchRequest(BaseModel):
    spec: SpecModel
    budget: Optional[int] = None


class NumberRequest(BaseModel):
    kind: str  # "r" | "rr" | "gr"
    p: str
    q: Optional[str] = None
    k: Optional[int] = None
    mode: str = "induced"
    n_max: Optional[int] = None
    window: Optional[tuple[int, int]] = None
    budget: Optional[int] = None


class ColoringModel(BaseModel):
    n: int
    k: int
    colors: list[int]


class ClassifyRequest(BaseModel):
    which: str  # "c3" | "v2" | "b2"
    coloring: ColoringModel


class GenerateRequest(BaseModel):
    instance: dict[str, Any]
    palette: Optional[dict[str, int]] = None
    free: str = "low"
    top: Optional[int] = None


class ConstructRequest(BaseModel):
    which: str  # "gr-c3" | "gr-v2"
    s: int
    k: int


class BlobRequest(BaseModel):
    m: int
    n0: int


class LubellRequest(BaseModel):
    n: int
    family: list[str] = Field(default_factory=list)


class LuMaxRequest(BaseModel):
    n: int
    p: str


class EPosetRequest(BaseModel):
    p: str
    n_probe: int = 6


class GPosetRequest(BaseModel):
    q: str


class UilbRequest(BaseModel):
    p: str
    n_max: int = 4


class GstRequest(BaseModel):
    v: int
    n: int
    verify: bool = False


class CapsRequest(BaseModel):
    n: int


class TheoremRequest(BaseModel):
    claim: str
    params: dict[str, Any] = Field(default_factory=dict)


class ClaimRequest(BaseModel):
    claim: str
    params: dict[str, Any] = Field(default_factory=dict)
    budget: Optional[int] = None


class DimacsExportRequest(BaseModel):
    spec: SpecModel


class DimacsDecodeRequest(BaseModel):
    spec: SpecModel
    model_text: str


class VerifyRequest(BaseModel):
    document: dict[str, Any]
