# src/schemas/analysis.py
from pydantic import BaseModel, Field, ConfigDict
from typing import Dict, List, Optional, Literal

from src.schemas.series import Mismatch


class RelationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    relation_id: str
    params: Dict[str, str] = Field(default_factory=dict)
    depth: str
    status: Literal["pass", "fail"]
    ring: str = "rational"
    mismatch: Optional[Mismatch] = None


class TransformReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    kind: Literal["S", "T", "closure", "fixed-point"]
    tau: str
    precision_bits: int = Field(..., gt=0)
    depth: int = Field(..., gt=0)
    residual: float = Field(..., ge=0.0)
    tail_bound: float = Field(default=0.0, ge=0.0)
    tolerance: float = Field(..., gt=0.0)
    passed: bool
    notes: List[str] = Field(default_factory=list)


class TbaSolution(BaseModel):
    model_config = ConfigDict(frozen=True)

    Q: List[str]
    residuals: List[str]
    precision_bits: int
    sweeps: int = Field(..., ge=0)
    exact_forms: List[Optional[str]] = Field(default_factory=list)

    def values(self, ctx):
        return [ctx.mpf(x) for x in self.Q]


class ObstructionVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    B: List[str]
    verdict: Literal["obstructed", "candidate"]
    c: Dict[str, str]
    candidate_C: Optional[str] = None


class StageResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    stage: str
    equal: bool
    window: Optional[int] = None
    mismatch: Optional[Mismatch] = None


class DerivationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    part: int = Field(..., ge=1, le=6)
    depth: str
    stages: List[StageResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.equal for s in self.stages)
