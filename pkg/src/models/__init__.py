"""
Pydantic models for parameters, scenes, presets and reports.
"""

from src.models.experiment import (
    ExperimentConfig,
    FarFieldSource,
    MaskKind,
    MaskSpec,
    Method,
    Preset,
    Report,
)
from src.models.params import (
    BandNorm,
    BandSpec,
    ConstraintMode,
    GraphParams,
    MetricKind,
    PatchWindow,
    SolverConfig,
    TomographyStyle,
    TvConfig,
)
from src.models.scene import DiskShape, RectShape, ScatterScene, default_grid_scale

__all__ = [
    "BandNorm",
    "BandSpec",
    "ConstraintMode",
    "DiskShape",
    "ExperimentConfig",
    "FarFieldSource",
    "GraphParams",
    "MaskKind",
    "MaskSpec",
    "Method",
    "MetricKind",
    "PatchWindow",
    "Preset",
    "RectShape",
    "Report",
    "ScatterScene",
    "SolverConfig",
    "TomographyStyle",
    "TvConfig",
    "default_grid_scale",
]
