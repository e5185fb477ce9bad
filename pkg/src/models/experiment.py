"""
Pydantic models for experiment presets, run configs and reports.
"""

import math
from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.params import BandSpec, GraphParams, TomographyStyle, TvConfig


class Method(str, Enum):
    """Restoration methods an experiment can run."""

    SSD = "ssd"
    ATOM = "atom"
    ORACLE = "oracle"
    TV = "tv"
    HYBRID = "hybrid"
    RECOMPUTED = "recomputed"
    ATOM_L1 = "atom_l1"
    SSD_L1 = "ssd_l1"
    ORACLE_L1 = "oracle_l1"


class MaskKind(str, Enum):
    """Sources of the known-frequency set."""

    RINGS = "rings"
    BAND = "band"
    SCATTERING = "scattering"
    TOMOGRAPHY = "tomography"
    FILE = "file"


class FarFieldSource(str, Enum):
    """How scattering data are produced."""

    PIXEL = "pixel"
    CONTINUOUS = "continuous"


class MaskSpec(BaseModel):
    """Description of the mask an experiment uses."""

    model_config = ConfigDict(frozen=True)

    kind: MaskKind = Field(..., description="Mask source")
    bands: Optional[BandSpec] = Field(default=None, description="Bands for kind=band")
    k_wave: Optional[float] = Field(default=None, gt=0, description="Wave number for scattering")
    n_dirs: int = Field(default=32, ge=1, description="Directions per side for scattering")
    wavelength_px: Optional[float] = Field(
        default=None,
        gt=0,
        description="Pixels per wavelength for scattering; None fills radius 2k into the half-grid",
    )
    n_lines: int = Field(default=32, ge=1, description="Lines for tomography")
    style: TomographyStyle = Field(default=TomographyStyle.RADIAL)
    half_width: int = Field(default=0, ge=0, description="Tomography line half-width")
    path: Optional[Path] = Field(default=None, description="Mask file for kind=file")

    @model_validator(mode="after")
    def _complete(self) -> "MaskSpec":
        if self.kind == MaskKind.BAND and self.bands is None:
            raise ValueError("band masks need bands")
        if self.kind == MaskKind.SCATTERING and self.k_wave is None:
            raise ValueError("scattering masks need k_wave")
        if self.kind == MaskKind.FILE and self.path is None:
            raise ValueError("file masks need a path")
        return self


class Preset(BaseModel):
    """A named parameter set reproducing one experiment protocol."""

    model_config = ConfigDict(frozen=True)

    name: str
    description: str = ""
    n: int = Field(..., ge=8, description="Grid side length")
    image: Optional[str] = Field(default=None, description="Synthetic image name")
    scene: Optional[str] = Field(default=None, description="Stock scene name (disks, bars)")
    separation: int = Field(default=6, ge=1, description="Bar gap in pixels for the bars scene")
    far_field: FarFieldSource = Field(default=FarFieldSource.PIXEL)
    mask: MaskSpec
    graph: GraphParams
    n0: int = Field(..., ge=1, description="Atom count")
    p: float = Field(default=4.0, gt=1, description="Moment exponent")
    atoms_at_gap: bool = Field(
        default=False, description="Grow n0 so it does not split an eigenvalue cluster"
    )
    noise: float = Field(default=0.0, ge=0, description="Noise norm relative to ||g0||")
    methods: list[Method] = Field(default_factory=lambda: [Method.SSD, Method.ATOM, Method.TV])
    recompute_rounds: int = Field(default=20, ge=1, description="Rounds of the recomputed schedule")
    tv: TvConfig = Field(default_factory=TvConfig)

    @model_validator(mode="after")
    def _one_source(self) -> "Preset":
        if (self.image is None) == (self.scene is None):
            raise ValueError("a preset names exactly one of image or scene")
        return self


class ExperimentConfig(BaseModel):
    """Run configuration parsed from ``key = value`` text."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    preset: str = Field(..., description="Preset name")
    output_dir: Path = Field(default=Path("results"), description="Output directory")
    seed: int = Field(default=0, ge=0, description="Noise and eigensolver seed")
    image: Optional[Path] = Field(default=None, description="Replaces the preset image")
    scene: Optional[Path] = Field(default=None, description="Scene file replacing the preset scene")
    mask: Optional[Path] = Field(default=None, description="Mask file replacing the preset mask")
    methods: Optional[list[Method]] = Field(default=None, description="Replaces preset methods")
    noise: Optional[float] = Field(default=None, ge=0, description="Replaces preset noise")
    n: Optional[int] = Field(default=None, ge=8, description="Replaces preset grid size")

    @field_validator("image", "scene", "mask")
    @classmethod
    def _exists(cls, path: Optional[Path]) -> Optional[Path]:
        if path is not None and not path.exists():
            raise ValueError(f"file not found: {path}")
        return path

    @field_validator("methods", mode="before")
    @classmethod
    def _split(cls, value):
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value


class Report(BaseModel):
    """
    Experiment report.

    ``values`` is deterministic for a given config and seed; wall times live
    in ``timings`` and are written to a separate section.
    """

    values: dict[str, str] = Field(default_factory=dict)
    timings: dict[str, float] = Field(default_factory=dict)
    manifest: list[str] = Field(default_factory=list)

    def record(self, key: str, value) -> None:
        self.values[key] = format_value(value)

    def to_text(self) -> str:
        lines = [f"{key}={value}" for key, value in self.values.items()]
        lines.extend(f"file={name}" for name in self.manifest)
        lines.append("[timings]")
        lines.extend(f"{key}={value:.3f}" for key, value in self.timings.items())
        return "\n".join(lines) + "\n"

    def deterministic_text(self) -> str:
        return self.to_text().split("[timings]", 1)[0]

    @classmethod
    def from_text(cls, text: str) -> "Report":
        report = cls()
        section = "values"
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.strip() == "[timings]":
                section = "timings"
                continue
            key, _, value = line.partition("=")
            if section == "timings":
                report.timings[key] = float(value)
            elif key == "file":
                report.manifest.append(value)
            else:
                report.values[key] = value
        return report

    def psnr(self, label: str) -> float:
        return float(self.values[f"psnr.{label}"])


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)
