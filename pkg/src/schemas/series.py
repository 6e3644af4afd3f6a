# src/schemas/series.py
from pydantic import BaseModel, Field, ConfigDict
from typing import Optional


class Mismatch(BaseModel):
    model_config = ConfigDict(frozen=True)

    exponent: str = Field(..., min_length=1)
    lhs: str
    rhs: str


class MatchReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    equal: bool
    depth: str
    mismatch: Optional[Mismatch] = None

    def __bool__(self) -> bool:
        return self.equal
