# config/settings.py
from typing import Literal, Optional
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Suites
    suites: Optional[str] = None  # directory override (NAHMLAB_SUITES)
    default_depth: int = Field(default=100, gt=0)
    nahm_depth: int = Field(default=60, gt=0)
    sturm_depth: int = Field(default=2401, gt=0)
    jobs: int = Field(default=4, ge=1)
    deep: bool = False

    # Coefficient rings
    ring: Literal["rational", "root5", "gauss", "complex"] = "rational"
    precision_bits: int = Field(default=192, ge=53)
    tolerance: float = Field(default=1e-20, gt=0.0)

    # TBA solver
    tba_precision_bits: int = Field(default=256, ge=53)
    tba_tolerance: float = Field(default=1e-30, gt=0.0)
    tba_damping: float = Field(default=0.5, gt=0.0, le=1.0)
    tba_max_sweeps: int = Field(default=2000, gt=0)

    # Expansion engine
    window_margin: int = Field(default=8, ge=0)
    deepen_attempts: int = Field(default=4, ge=1)
    dense_threshold: int = Field(default=2048, ge=1)
    gram_threshold: float = Field(default=1e-40, gt=0.0)

    # Observability
    log_level: str = "INFO"
    log_file: Optional[str] = None
    metrics_file: Optional[str] = None

    model_config = SettingsConfigDict(env_file=".env", env_prefix="NAHMLAB_", extra="ignore")


settings = Settings()
