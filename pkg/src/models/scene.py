"""
Pydantic models for scattering scenes.
"""

import math
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


class DiskShape(BaseModel):
    """Disk of constant amplitude, coordinates in the unit square."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["disk"] = "disk"
    cx: float
    cy: float
    r: float = Field(..., gt=0)
    amp: float = 1.0

    @model_validator(mode="after")
    def _inside(self) -> "DiskShape":
        if not (0 <= self.cx - self.r and self.cx + self.r <= 1):
            raise ValueError(f"disk at cx={self.cx} r={self.r} leaves the unit square")
        if not (0 <= self.cy - self.r and self.cy + self.r <= 1):
            raise ValueError(f"disk at cy={self.cy} r={self.r} leaves the unit square")
        if not math.isfinite(self.amp):
            raise ValueError("amplitude must be finite")
        return self


class RectShape(BaseModel):
    """Axis-aligned rectangle [x0, x1] x [y0, y1] in the unit square."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["rect"] = "rect"
    x0: float
    y0: float
    x1: float
    y1: float
    amp: float = 1.0

    @model_validator(mode="after")
    def _inside(self) -> "RectShape":
        if not (0 <= self.x0 < self.x1 <= 1 and 0 <= self.y0 < self.y1 <= 1):
            raise ValueError(
                f"rect ({self.x0}, {self.y0}, {self.x1}, {self.y1}) must be ordered "
                "and inside the unit square"
            )
        if not math.isfinite(self.amp):
            raise ValueError("amplitude must be finite")
        return self


Shape = Annotated[Union[DiskShape, RectShape], Field(discriminator="kind")]


class ScatterScene(BaseModel):
    """Scatterer D rendered on an n x n grid, probed at wave number k."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=8, description="Grid side length (even)")
    shapes: list[Shape] = Field(default_factory=list)
    k_wave: float = Field(..., gt=0, description="Wave number (radians per unit length)")
    grid_scale: Optional[float] = Field(
        default=None,
        gt=0,
        description="Physical side length of the grid; None fills radius 2k into the half-grid",
    )

    @model_validator(mode="after")
    def _even(self) -> "ScatterScene":
        if self.n % 2:
            raise ValueError(f"grid side n={self.n} must be even")
        return self

    @property
    def wavelength(self) -> float:
        """lambda = 2 pi / k."""
        return 2 * math.pi / self.k_wave

    @property
    def effective_grid_scale(self) -> float:
        """Explicit grid scale, or the one mapping radius 2k onto index n/2 - 1."""
        if self.grid_scale is not None:
            return self.grid_scale
        return default_grid_scale(self.n, self.k_wave)


def default_grid_scale(n: int, k_wave: float) -> float:
    """Grid scale placing the ball of radius 2k just inside the Nyquist box."""
    return (n / 2 - 1) * math.pi / k_wave


def wavelength_grid_scale(n: int, k_wave: float, wavelength_px: float) -> float:
    """Grid scale putting one wavelength 2 pi / k on wavelength_px pixels."""
    return n * (2 * math.pi / k_wave) / wavelength_px
