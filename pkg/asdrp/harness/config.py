#############################################################################
# config.py
#
# sweep configuration: a JSON document validated by pydantic, with
# "_db" keys converted to linear units on parse
#
# Sat Oct 17 2026
#############################################################################

import json
import logging
import os
from pathlib import Path
from typing import Any, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from asdrp.channel.profiles import ProfileSpec

logger = logging.getLogger(__name__)

DB_SUFFIX = "_db"
N_JOBS_ENV = "ASDRP_N_JOBS"
LOG_LEVEL_ENV = "ASDRP_LOG_LEVEL"


def db_to_linear(value: Union[float, List[float]]) -> Union[float, List[float]]:
    if isinstance(value, (list, tuple)):
        return [10.0 ** (v / 10.0) for v in value]
    return 10.0 ** (value / 10.0)


def convert_db_keys(data: Any) -> Any:
    """Replace every `<name>_db` key of a mapping by `<name>` in linear units."""
    if not isinstance(data, dict):
        return data
    out = dict(data)
    for key in [k for k in data if isinstance(k, str) and k.endswith(DB_SUFFIX)]:
        linear = key[: -len(DB_SUFFIX)]
        if linear in data:
            raise ValueError(f"both {key!r} and {linear!r} given")
        out[linear] = db_to_linear(out.pop(key))
    return out


def env_n_jobs() -> int:
    return int(os.getenv(N_JOBS_ENV, "1"))


def env_log_level() -> str:
    return os.getenv(LOG_LEVEL_ENV, "WARNING").upper()


class FixedTau(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    fixed: int = Field(..., ge=1, description="Data length tau used at every SNR.")


TauRule = Union[Literal["equals_l"], FixedTau]


class SweepConfig(BaseModel):
    """One SNR sweep: profile, noise level, grid and output locations."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    profile: ProfileSpec
    sigma_sq: float = Field(1.0, gt=0.0, description="Noise variance sigma^2.")
    snr_grid: List[float] = Field(..., min_length=1, description="Linear SNR values, strictly increasing.")
    tau_rule: TauRule = Field("equals_l", description='"equals_l" or {"fixed": tau}.')
    rho_majorant: Optional[float] = Field(None, gt=0.0, lt=1.0)
    oracle: bool = False
    n_samples: int = Field(10**6, ge=10**4)
    seed: int = Field(0, ge=0, lt=2**64)
    n_jobs: int = Field(default_factory=env_n_jobs)
    csv_path: Optional[Path] = None
    svg_path: Optional[Path] = None
    report_path: Optional[Path] = None

    @model_validator(mode="before")
    @classmethod
    def linear_units(cls, data: Any) -> Any:
        return convert_db_keys(data)

    @field_validator("snr_grid")
    @classmethod
    def validate_grid(cls, v: List[float]) -> List[float]:
        grid = np.asarray(v, dtype=float)
        if not np.all(np.isfinite(grid)) or np.any(grid <= 0):
            raise ValueError("SNR values must be finite and positive")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("snr_grid must be strictly increasing")
        return v

    def tau_for(self, guard_len: int) -> int:
        if isinstance(self.tau_rule, FixedTau):
            return self.tau_rule.fixed
        return max(1, guard_len)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SweepConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        logger.debug("loaded sweep config from %s", path)
        return cls.model_validate(data)
