"""
Weak Tomography - Experiment Config Schema
Pydantic models for JSON experiment documents
"""
import hashlib
import json
import math
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import Settings
from ..core.bloch import BlochVector, named_state, require_physical
from ..core.estimator import EstimatorKind
from ..core.harness import BASELINE_EPS, LabelledState, SchemePair, sample_states
from ..core.protocol import DISK_Y_TOL, MAX_SEED, EngineKind, SchemeConfig

GRID_DECIMALS = 12

DEFAULT_A_GRID = [0.0, 0.2, 0.4, 0.6, 0.8]


# -------------------------------------------
# Grids
# -------------------------------------------

class GridRange(BaseModel):
    """Inclusive arithmetic range {start, stop, step}"""
    model_config = ConfigDict(extra="forbid")

    start: float
    stop: float
    step: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_order(self) -> "GridRange":
        if self.stop < self.start:
            raise ValueError(f"stop ({self.stop}) is below start ({self.start})")
        return self

    def values(self) -> List[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, GRID_DECIMALS) for i in range(count)]


Grid = Union[List[float], GridRange]


def expand_grid(grid: Grid) -> List[float]:
    if isinstance(grid, GridRange):
        return grid.values()
    return [float(v) for v in grid]


def _check_grid(name: str, grid: Grid, positive: bool) -> Grid:
    values = expand_grid(grid)
    if not values:
        raise ValueError(f"{name} must not be empty")
    if len(set(values)) != len(values):
        raise ValueError(f"{name} has duplicate values")
    for v in values:
        if not math.isfinite(v) or v < 0 or (positive and v == 0):
            bound = "> 0" if positive else ">= 0"
            raise ValueError(f"{name} values must be finite and {bound}, got {v}")
    return grid


# -------------------------------------------
# States
# -------------------------------------------

class ExplicitState(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: Optional[str] = None
    x: float
    y: float
    z: float

    @model_validator(mode="after")
    def _check_physical(self) -> "ExplicitState":
        require_physical(BlochVector(self.x, self.y, self.z))
        return self


class StateSource(BaseModel):
    """Exactly one of: explicit list, ball sample count, disk sample count, named states"""
    model_config = ConfigDict(extra="forbid")

    explicit: Optional[List[ExplicitState]] = None
    ball: Optional[int] = Field(default=None, ge=1)
    disk: Optional[int] = Field(default=None, ge=1)
    named: Optional[List[str]] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "StateSource":
        given = [k for k in ("explicit", "ball", "disk", "named") if getattr(self, k) is not None]
        if len(given) != 1:
            raise ValueError(f"states needs exactly one of explicit, ball, disk, named (got {given or 'none'})")
        if self.explicit is not None and not self.explicit:
            raise ValueError("explicit state list is empty")
        if self.named is not None:
            if not self.named:
                raise ValueError("named state list is empty")
            for name in self.named:
                named_state(name)
        return self

    def resolve(self, seed: int) -> List[LabelledState]:
        if self.ball is not None:
            return sample_states("ball", self.ball, seed)
        if self.disk is not None:
            return sample_states("disk", self.disk, seed)
        if self.named is not None:
            return [LabelledState(name.lower(), named_state(name)) for name in self.named]
        return [
            LabelledState(s.id or f"state-{i:05d}", BlochVector(s.x, s.y, s.z))
            for i, s in enumerate(self.explicit)
        ]

    def has_transverse_y(self) -> bool:
        """True when some state can have y != 0"""
        if self.ball is not None:
            return True
        if self.named is not None:
            return any(abs(named_state(n).y) > DISK_Y_TOL for n in self.named)
        if self.explicit is not None:
            return any(abs(s.y) > DISK_Y_TOL for s in self.explicit)
        return False


# -------------------------------------------
# Experiment
# -------------------------------------------

class OutputOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    csv: str = "results.csv"
    summary: str = "summary.json"
    score_csv: str = "score.csv"
    plot_series: bool = True
    html: bool = False


class ExperimentConfig(BaseModel):
    """
    One sweep or score experiment.

    Unset seed/engine/estimator/workers fall back to Settings in `resolved()`.
    """
    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    experiment: Literal["sweep", "score"] = "sweep"
    pair: SchemePair = SchemePair.FULL
    states: StateSource
    eps_grid: Grid = Field(default_factory=lambda: GridRange(start=0.1, stop=2.0, step=0.1))
    a_grid: Grid = Field(default_factory=lambda: list(DEFAULT_A_GRID))
    n_list: List[int] = Field(default_factory=lambda: [30])
    runs: int = Field(default=1000, ge=1)
    seed: Optional[int] = Field(default=None, ge=0, lt=MAX_SEED)
    engine: Optional[EngineKind] = None
    estimator: Optional[EstimatorKind] = None
    workers: Optional[int] = Field(default=None, ge=1)
    per_eps: bool = False
    outputs: OutputOptions = Field(default_factory=OutputOptions)

    @field_validator("eps_grid")
    @classmethod
    def _eps_grid(cls, grid: Grid) -> Grid:
        return _check_grid("eps_grid", grid, positive=True)

    @field_validator("a_grid")
    @classmethod
    def _a_grid(cls, grid: Grid) -> Grid:
        return _check_grid("a_grid", grid, positive=False)

    @field_validator("n_list")
    @classmethod
    def _n_list(cls, n_list: List[int]) -> List[int]:
        if not n_list:
            raise ValueError("n_list must not be empty")
        if len(set(n_list)) != len(n_list):
            raise ValueError("n_list has duplicate values")
        return n_list

    @model_validator(mode="after")
    def _check_cells(self) -> "ExperimentConfig":
        if self.pair is SchemePair.DISK and self.states.has_transverse_y():
            raise ValueError("states: the disk pair needs states with y = 0 (use a disk or explicit source)")
        # Every cell must be a valid SchemeConfig before anything runs
        estimator = self.estimator or EstimatorKind.CALIBRATED
        for n in self.n_list:
            try:
                SchemeConfig(self.pair.baseline, ensemble_n=n, eps1=BASELINE_EPS,
                             eps2=BASELINE_EPS, runs=self.runs)
                for eps in expand_grid(self.eps_grid):
                    for a in expand_grid(self.a_grid):
                        SchemeConfig(self.pair.weak, ensemble_n=n, eps1=eps, eps2=eps,
                                     discard_a=a, runs=self.runs, estimator=estimator)
            except ValueError as e:
                raise ValueError(f"cells at N={n}: {e}") from None
        return self

    # -------------------------------------------
    # Resolution
    # -------------------------------------------

    def resolved(self, settings: Settings) -> "ExperimentConfig":
        """Copy with every optional knob filled from settings"""
        return self.model_copy(update={
            "seed": self.seed if self.seed is not None else settings.DEFAULT_SEED,
            "engine": self.engine or EngineKind(settings.DEFAULT_ENGINE),
            "estimator": self.estimator or EstimatorKind(settings.DEFAULT_ESTIMATOR),
            "workers": self.workers or settings.DEFAULT_WORKERS,
        })

    @property
    def eps_values(self) -> List[float]:
        return expand_grid(self.eps_grid)

    @property
    def a_values(self) -> List[float]:
        return expand_grid(self.a_grid)

    def canonical(self) -> Dict[str, Any]:
        """Everything that determines the result rows; worker count and output paths excluded"""
        data = self.model_dump(mode="json", exclude={"workers", "outputs"}, exclude_none=True)
        data["eps_grid"] = self.eps_values
        data["a_grid"] = self.a_values
        data["states"] = self.states.model_dump(mode="json", exclude_none=True)
        return data

    def config_hash(self) -> str:
        payload = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()
