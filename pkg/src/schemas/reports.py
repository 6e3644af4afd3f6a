# src/schemas/reports.py
from pydantic import BaseModel, Field, ConfigDict, model_validator
from typing import Dict, List, Optional
from enum import Enum

from src.schemas.series import Mismatch


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


class CheckKind(str, Enum):
    IDENTITY = "identity"
    BUILTIN = "builtin"


class CheckSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    check_id: str = Field(..., min_length=1)
    kind: CheckKind
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    builtin: Optional[str] = None
    params: Dict[str, str] = Field(default_factory=dict)
    depth: Optional[int] = Field(default=None, gt=0)
    line: Optional[int] = None

    @model_validator(mode="after")
    def _shape(self):
        if self.kind == CheckKind.IDENTITY and (self.lhs is None or self.rhs is None):
            raise ValueError("identity checks need both sides")
        if self.kind == CheckKind.BUILTIN and not self.builtin:
            raise ValueError("builtin checks need a builtin name")
        return self


class SuiteDefinition(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite_id: str = Field(..., min_length=1)
    description: str = ""
    depth: int = Field(default=100, gt=0)
    ring: str = "rational"
    deep_only: bool = False
    aliases: List[str] = Field(default_factory=list)
    checks: List[CheckSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _unique_ids(self):
        ids = [c.check_id for c in self.checks]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate check ids in suite {self.suite_id}")
        return self


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    check_id: str
    status: CheckStatus
    depth: Optional[str] = None
    elapsed_ms: float = Field(default=0.0, ge=0.0)
    mismatch: Optional[Mismatch] = None
    detail: Optional[str] = None

    @model_validator(mode="after")
    def _fail_has_mismatch(self):
        if self.status == CheckStatus.FAIL and self.mismatch is None:
            raise ValueError("a failed check must carry its mismatch")
        return self


class VerificationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite_id: str
    tool_version: str
    config_hash: str
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == CheckStatus.PASS for c in self.checks)

    def counts(self) -> Dict[str, int]:
        out = {s.value: 0 for s in CheckStatus}
        for c in self.checks:
            out[c.status.value] += 1
        return out
