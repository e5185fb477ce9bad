"""
Pydantic models for algorithm parameters.
"""

from enum import Enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import get_settings


class BandNorm(str, Enum):
    """Norm used to measure frequency radii in band masks."""

    MAX = "max"
    EUCLIDEAN = "euclidean"


class MetricKind(str, Enum):
    """Patch distance used to weight graph edges."""

    ATOM = "atom"
    SSD = "ssd"
    ORACLE = "oracle"


class PatchWindow(str, Enum):
    """Window function psi applied inside each patch."""

    INDICATOR = "indicator"
    HANN = "hann"


class ConstraintMode(str, Enum):
    """How the hard spectral constraint is enforced inside CG."""

    PACKED = "packed"
    PROJECTION = "projection"


class TomographyStyle(str, Enum):
    """Line layout of tomography masks."""

    RADIAL = "radial"
    PARALLEL = "parallel"


class BandSpec(BaseModel):
    """Radial bands of known frequencies."""

    model_config = ConfigDict(frozen=True)

    bands: list[tuple[float, float]] = Field(
        ..., min_length=1, description="(r_lo, r_hi) radii in frequency-index units"
    )
    norm: BandNorm = Field(default=BandNorm.MAX, description="Radius norm")

    @field_validator("bands")
    @classmethod
    def _check_bands(cls, bands: list[tuple[float, float]]) -> list[tuple[float, float]]:
        ordered = sorted(bands)
        for lo, hi in ordered:
            if not 0 <= lo < hi:
                raise ValueError(f"band ({lo}, {hi}) must satisfy 0 <= r_lo < r_hi")
        for (_, hi), (lo, _) in zip(ordered, ordered[1:]):
            if lo < hi:
                raise ValueError("bands overlap")
        return ordered

    @classmethod
    def rings(cls) -> "BandSpec":
        """Low-pass core plus two max-norm rings on 128x128; the inner ring holds radius 32."""
        return cls(bands=[(0, 8), (30, 35), (44, 52)], norm=BandNorm.MAX)


class GraphParams(BaseModel):
    """Parameters of the stride-eps patch graph."""

    model_config = ConfigDict(frozen=True)

    eta: int = Field(..., ge=1, description="Search window radius (max-norm, pixels)")
    rho: int = Field(..., ge=1, description="Patch size (odd, pixels)")
    eps: int = Field(..., ge=1, description="Lattice stride (pixels)")
    m0: int = Field(..., ge=0, description="Best matches kept per center")
    h: float = Field(..., gt=0, description="Weight selectivity")
    metric: MetricKind = Field(default=MetricKind.SSD, description="Patch distance")

    @model_validator(mode="after")
    def _check_geometry(self) -> "GraphParams":
        if self.rho % 2 == 0:
            raise ValueError(f"patch size rho={self.rho} must be odd")
        if self.eps > self.rho:
            raise ValueError(f"stride eps={self.eps} must not exceed rho={self.rho}")
        if self.eta < self.eps:
            raise ValueError(f"window eta={self.eta} must be at least eps={self.eps}")
        return self

    def header(self) -> str:
        """One-line parameter summary used in graph files."""
        return (
            f"eta={self.eta} rho={self.rho} eps={self.eps} m0={self.m0} "
            f"h={self.h!r} metric={self.metric.value}"
        )


class SolverConfig(BaseModel):
    """Configuration of the non-local energy minimization."""

    model_config = ConfigDict(frozen=True)

    alpha: Literal[1, 2] = Field(default=2, description="Exponent of patch differences")
    rho: int = Field(default=7, ge=1, description="Width of the patch window psi")
    window: PatchWindow = Field(default=PatchWindow.INDICATOR, description="Window psi")
    cg_tol: float = Field(default_factory=lambda: get_settings().cg_tol, gt=0)
    cg_max_iter: int = Field(default_factory=lambda: get_settings().cg_max_iter, ge=1)
    irls_eps: float = Field(default_factory=lambda: get_settings().irls_eps, gt=0)
    irls_rounds: int = Field(default_factory=lambda: get_settings().irls_rounds, ge=1)
    constraint_mode: ConstraintMode = Field(default=ConstraintMode.PACKED)

    @field_validator("rho")
    @classmethod
    def _odd_rho(cls, rho: int) -> int:
        if rho % 2 == 0:
            raise ValueError(f"patch size rho={rho} must be odd")
        return rho


class TvConfig(BaseModel):
    """Configuration of the constrained TV solver."""

    model_config = ConfigDict(frozen=True)

    outer_iters: int = Field(default_factory=lambda: get_settings().tv_outer_iters, ge=1)
    inner_iters: int = Field(default_factory=lambda: get_settings().tv_inner_iters, ge=1)
    dr_gamma: float = Field(default_factory=lambda: get_settings().tv_gamma, gt=0)
    tau: float = Field(default=0.125, gt=0, le=0.125, description="Dual projection step")
    tol: float = Field(default=1e-7, gt=0, description="Relative iterate change at convergence")
