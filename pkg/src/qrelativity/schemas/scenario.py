"""
Scenario configs: one JSON document per run.

    {"kind": "double_slit", "seed": 0, "output_path": "slit", "params": {...}}

`params` is validated against the model registered for the kind in
`PARAMS_MODELS`.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..constants import ELECTRON_MASS, HBAR
from .frames import FrameGraphModel

ScenarioKind = Literal[
    "wigner_chain",
    "basis_paradox",
    "double_slit",
    "frame_swap",
    "chain_fit",
    "relation_check",
    "transform_table",
]


class ParamsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ComplexInput(ParamsModel):
    re: float = 0.0
    im: float = 0.0

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


def _coerce_complex(v: Any) -> Any:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return {"re": float(v), "im": 0.0}
    return v


class GridModel(ParamsModel):
    x_min: float
    x_max: float
    n_points: int = Field(4096, ge=2, description="Power of two")

    @field_validator("n_points")
    @classmethod
    def validate_power_of_two(cls, v: int) -> int:
        if v & (v - 1):
            raise ValueError(f"n_points must be a power of two, got {v}")
        return v

    @model_validator(mode="after")
    def validate_extent(self) -> "GridModel":
        if self.x_max <= self.x_min:
            raise ValueError("x_max must exceed x_min")
        return self


class WignerChainParams(ParamsModel):
    c1: ComplexInput = Field(..., description="Amplitude of s_up")
    c2: ComplexInput = Field(..., description="Amplitude of s_down")
    pointer_dim: int = Field(3, ge=3)
    trials: int = Field(0, ge=0, description="Extra seeded runs for branch frequencies (seed, seed+1, ...)")

    @field_validator("c1", "c2", mode="before")
    @classmethod
    def parse_complex(cls, v: Any) -> Any:
        return _coerce_complex(v)


class BasisParadoxParams(ParamsModel):
    c1: ComplexInput
    c2: ComplexInput
    pointer_dim: int = Field(3, ge=3)

    @field_validator("c1", "c2", mode="before")
    @classmethod
    def parse_complex(cls, v: Any) -> Any:
        return _coerce_complex(v)


class SlitGeometry(ParamsModel):
    slit_separation: float = Field(..., gt=0, description="d in meters")
    slit_width: float = Field(..., gt=0, description="w in meters")
    screen_distance: float = Field(..., gt=0, description="L in meters")
    packet_speed: float = Field(..., gt=0, description="v in m/s")
    grid: GridModel
    hbar: float = Field(HBAR, gt=0)


class DoubleSlitParams(SlitGeometry):
    mass: float = Field(ELECTRON_MASS, gt=0)


class FrameSwapParams(SlitGeometry):
    m_S: float = Field(ELECTRON_MASS, gt=0, description="Mass of the described particle")
    m_A: float = Field(..., gt=0, description="Mass of the apparatus frame")


class PairInit(ParamsModel):
    x0: float = 0.0
    sigma0: float = Field(..., gt=0)
    k0: float = 0.0


class ChainFitParams(ParamsModel):
    masses: List[float] = Field(..., min_length=1, description="One mass per frame pair")
    pair_init: List[PairInit] = Field(..., min_length=1)
    grid: GridModel
    dt: float = Field(1e-3, gt=0)
    steps: int = Field(20, ge=2)
    every: int = Field(1, ge=1)
    hbar: float = Field(1.0, gt=0)

    @field_validator("masses")
    @classmethod
    def validate_masses(cls, v: List[float]) -> List[float]:
        if any(m <= 0 for m in v):
            raise ValueError("masses must be positive")
        return v

    @model_validator(mode="after")
    def validate_pairs(self) -> "ChainFitParams":
        if len(self.pair_init) != len(self.masses):
            raise ValueError(f"{len(self.masses)} masses but {len(self.pair_init)} pair_init entries")
        if self.steps // self.every < 2:
            raise ValueError("steps / every must leave at least 3 snapshots")
        return self


class RelationCheckParams(FrameGraphModel):
    model_config = ConfigDict(extra="forbid")

    closure: bool = Field(False, description="Also report the equivalence closure of phys_edges")


class TransformTableParams(ParamsModel):
    mass_pairs: List[Tuple[float, float]] = Field(..., min_length=1, description="(m_S, m_A) pairs in kg")
    energies: List[float] = Field(default_factory=lambda: [0.0], min_length=1, description="E_q values in J")
    t: float = Field(1.0, gt=0)
    h: float = Field(HBAR, gt=0)
    speed: float = Field(1.0, gt=0, description="Relative speed for the de Broglie columns")

    @field_validator("mass_pairs")
    @classmethod
    def validate_mass_pairs(cls, v: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        for m_s, m_a in v:
            if m_s <= 0 or m_a <= 0:
                raise ValueError(f"masses must be positive, got ({m_s}, {m_a})")
        return v

    @field_validator("energies")
    @classmethod
    def validate_energies(cls, v: List[float]) -> List[float]:
        if any(e < 0 for e in v):
            raise ValueError("energies must be non-negative")
        return v


PARAMS_MODELS: Dict[str, type] = {
    "wigner_chain": WignerChainParams,
    "basis_paradox": BasisParadoxParams,
    "double_slit": DoubleSlitParams,
    "frame_swap": FrameSwapParams,
    "chain_fit": ChainFitParams,
    "relation_check": RelationCheckParams,
    "transform_table": TransformTableParams,
}


class Scenario(BaseModel):
    kind: ScenarioKind
    params: Dict[str, Any] = Field(default_factory=dict, description="Kind-specific parameters")
    seed: int = Field(0, ge=0)
    output_path: Optional[str] = Field(None, description="Output stem, relative to the output directory")

    @property
    def output_stem(self) -> str:
        return self.output_path or self.kind
