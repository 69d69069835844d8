"""Experiment configuration: TOML files validated by pydantic models.

Unknown keys are rejected so that typos fail loudly.  A minimal file::

    [problem]
    preset = "example71-1d"

    [sweep]
    p = [2, 4, 6]
    times = [1.0]
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .presets import COEFFICIENT_PRESETS, PRESETS


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class CoefficientSpec(_Strict):
    A: float = 1.0
    c: float = 0.0
    preset: Optional[str] = None

    @model_validator(mode="after")
    def _check(self):
        if self.preset is not None and self.preset not in COEFFICIENT_PRESETS:
            raise ValueError(f"unknown coefficient preset {self.preset!r}")
        if self.A <= 0 or self.c < 0:
            raise ValueError("need A > 0 and c >= 0")
        return self


class ProblemSpec(_Strict):
    preset: str = "example71-1d"
    gamma: Optional[float] = None
    beta: Optional[float] = None
    T: float = Field(1.0, gt=0)
    interval: tuple[float, float] = (0.0, 1.0)
    coefficients: CoefficientSpec = CoefficientSpec()

    @field_validator("preset")
    @classmethod
    def _known(cls, v):
        if v not in PRESETS:
            raise ValueError(f"unknown data preset {v!r}; choose from {sorted(PRESETS)}")
        return v

    @model_validator(mode="after")
    def _ranges(self):
        for name in ("gamma", "beta"):
            v = getattr(self, name)
            if v is not None and not 0 < v <= 1:
                raise ValueError(f"{name} must lie in (0, 1]")
        if not self.interval[0] < self.interval[1]:
            raise ValueError("interval must satisfy a < b")
        return self


class SweepSpec(_Strict):
    p: list[int] = [2, 3, 4, 5, 6]
    times: list[float] = [1.0]
    mesh_sigma: float = Field(0.125, gt=0, lt=1)
    quad_sigma: float = Field(0.125, gt=0, lt=1)
    n_q_factor: int = Field(6, ge=1)  # n_q = n_q_factor * p^2
    H: float = Field(math.pi / 5, gt=0, lt=math.pi / 4)  # k = sqrt(pi H/(beta n_q))
    n_hp_offset: int = 0  # n_hp = p + n_hp_offset
    b: Optional[float] = None
    reference_p: int = Field(12, ge=1)  # finest run for presets without exact solution
    spacetime_samples: int = Field(0, ge=0)
    spectral_modes: int = Field(256, ge=1)
    combine_rhs: bool = False

    @model_validator(mode="after")
    def _valid(self):
        if any(p < 1 for p in self.p):
            raise ValueError("every swept p must be >= 1")
        if any(t <= 0 for t in self.times):
            raise ValueError("times must be positive")
        if any(p + self.n_hp_offset < 0 for p in self.p):
            raise ValueError("n_hp = p + n_hp_offset must be >= 0")
        return self


class SincSpec(_Strict):
    lam: float = Field(4 * math.pi**2, gt=0)
    t: float = Field(1.0, gt=0)
    n_q: list[int] = [25, 100, 400, 1600]
    reference_n_q: int = 10_000
    H: float = Field(math.pi / 5, gt=0, lt=math.pi / 4)
    b: Optional[float] = None


class MlfSpec(_Strict):
    params: list[tuple[float, float]] = [(0.5, 0.5), (0.6, 1.0), (0.75, 0.75)]
    radii: int = Field(8, ge=1)
    angles: int = Field(5, ge=1)
    r_min: float = Field(0.1, gt=0)
    r_max: float = Field(30.0, gt=0)
    tol: float = 1e-12


class OutputSpec(_Strict):
    directory: str = "out"
    format: Literal["csv"] = "csv"


class ExperimentConfig(_Strict):
    problem: ProblemSpec = ProblemSpec()
    sweep: SweepSpec = SweepSpec()
    sinc: SincSpec = SincSpec()
    mlf: MlfSpec = MlfSpec()
    output: OutputSpec = OutputSpec()

    def digest(self) -> str:
        blob = json.dumps(self.model_dump(mode="json"), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def _format_error(err: ValidationError) -> str:
    parts = []
    for e in err.errors():
        loc = ".".join(str(x) for x in e["loc"])
        parts.append(f"{loc}: {e['msg']}")
    return "; ".join(parts)


def parse_config(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as err:
        raise ConfigError(f"invalid configuration: {_format_error(err)}") from None


def load_config(path: str | Path | None = None, preset: str | None = None) -> ExperimentConfig:
    """Read a TOML file (or defaults) and optionally override the data preset."""
    data: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as err:
            raise ConfigError(f"cannot read config {path}: {err}") from None
        except tomllib.TOMLDecodeError as err:
            raise ConfigError(f"malformed TOML in {path}: {err}") from None
    if preset is not None:
        data = dict(data)
        data["problem"] = dict(data.get("problem", {}), preset=preset)
    return parse_config(data)


__all__ = [
    "ExperimentConfig",
    "MlfSpec",
    "OutputSpec",
    "ProblemSpec",
    "SincSpec",
    "SweepSpec",
    "load_config",
    "parse_config",
]
