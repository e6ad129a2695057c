"""Pydantic models: the typed experiment configuration and calibration rows.

Every simulation verb is driven by one :class:`ExperimentConfig`. Its JSON
dump (minus runtime-only fields) is echoed into every summary, and feeding
that dump back through ``--config`` reproduces the run.
"""

import hashlib
import json
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cli.constants import (
    DEFAULT_SYMMETRIC_T_US,
    DEFAULT_TRIALS,
    MAX_DISTANCE,
    MIN_DISTANCE,
)
from cli.conversions import log_grid
from cli.noise import P_LIMIT

DecoderMode = Literal["mwpm", "rmwpm"]
NoiseModel = Literal["iid", "inid"]
ArrangementStrategy = Literal["as_indexed", "random", "optimized", "imported"]
RankKey = Literal["t2", "t1", "min_t", "p_fail"]
Selection = Literal["best", "random"]


class CalibrationRow(BaseModel):
    qubit_id: int = Field(ge=0)
    t1_us: float = Field(gt=0, description="Relaxation time in microseconds")
    t2_us: float = Field(gt=0, description="Dephasing time in microseconds")
    text: Optional[tuple[str, str, str]] = Field(
        default=None, exclude=True, description="The three fields as written"
    )


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = Field(ge=0, description="Master seed; no wall-clock default")
    distances: list[int] = Field(default_factory=lambda: [3])
    decoders: list[DecoderMode] = Field(default_factory=lambda: ["mwpm"])
    noise_model: NoiseModel = "iid"
    arrangement: ArrangementStrategy = "as_indexed"
    arrangement_seed: Optional[int] = Field(
        default=None, description="Placement seed for arrangement=random"
    )
    layout: Optional[str] = Field(
        default=None,
        description="Layout CSV for arrangement=imported; {d} stands for the distance",
    )
    rank_key: RankKey = "t2"
    t_ref_us: float = Field(default=1.0, gt=0)
    selection: Selection = "best"
    n_arrangements: int = Field(default=100, ge=2)
    p_grid: Optional[list[float]] = None
    t_grid: Optional[list[float]] = None
    n_trials: int = Field(default=DEFAULT_TRIALS, ge=1)
    adaptive: bool = False
    max_trials: Optional[int] = Field(default=None, ge=1)
    calibration: Optional[str] = None
    symmetric_t_us: float = Field(default=DEFAULT_SYMMETRIC_T_US, gt=0)
    iid_reference: bool = False
    breakdown: bool = False
    plot: bool = False

    # Runtime-only: never echoed, never part of the fingerprint.
    workers: int = Field(default=1, ge=1, exclude=True)
    output_dir: Optional[str] = Field(default=None, exclude=True)

    @field_validator("distances")
    @classmethod
    def _distances(cls, v: list[int]) -> list[int]:
        if not v:
            raise ValueError("at least one distance is required")
        for d in v:
            if not MIN_DISTANCE <= d <= MAX_DISTANCE:
                raise ValueError(
                    f"distance {d} outside [{MIN_DISTANCE}, {MAX_DISTANCE}]"
                )
        return v

    @field_validator("decoders")
    @classmethod
    def _decoders(cls, v: list[str]) -> list[str]:
        if not v:
            raise ValueError("at least one decoder is required")
        return v

    @model_validator(mode="after")
    def _grids(self) -> "ExperimentConfig":
        if self.p_grid is not None and self.t_grid is not None:
            raise ValueError("give either p_grid or t_grid, not both")
        if self.p_grid is not None:
            if not self.p_grid:
                raise ValueError("p_grid is empty")
            if any(not 0 < p < P_LIMIT for p in self.p_grid):
                raise ValueError(f"p_grid values must lie in (0, {P_LIMIT})")
        if self.t_grid is not None:
            if not self.t_grid:
                raise ValueError("t_grid is empty")
            if any(t < 0 for t in self.t_grid):
                raise ValueError("t_grid values must be >= 0")
        return self

    @model_validator(mode="after")
    def _layout(self) -> "ExperimentConfig":
        if self.arrangement == "imported":
            if self.layout is None:
                raise ValueError("arrangement=imported needs a layout table")
            if len(self.distances) > 1 and "{d}" not in self.layout:
                raise ValueError("layout must contain {d} for several distances")
        elif self.layout is not None:
            raise ValueError("layout is only used with arrangement=imported")
        return self

    def layout_path(self, distance: int) -> str:
        if self.layout is None:
            raise ValueError("no layout table configured")
        return self.layout.replace("{d}", str(distance))

    @property
    def uses_time_grid(self) -> bool:
        return self.t_grid is not None

    def grid(self) -> list[float]:
        if self.t_grid is not None:
            return list(self.t_grid)
        return list(self.p_grid) if self.p_grid is not None else log_grid()

    def echo(self) -> dict:
        return self.model_dump(mode="json")

    def fingerprint(self) -> str:
        canonical = json.dumps(self.echo(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
