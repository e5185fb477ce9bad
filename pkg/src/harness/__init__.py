"""
Experiment harness: metrics, rendering, synthetic images, presets and runs.
"""

from src.harness.audit_logger import AuditLogger, ExperimentEventType, get_audit_logger
from src.harness.experiment import (
    ExperimentRunner,
    build_mask,
    load_experiment_config,
    parse_experiment_config,
    resolution_sweep,
    run_experiment,
    smallest_resolved,
)
from src.harness.metrics import constraint_deviation, count_components, mse, psnr
from src.harness.presets import PRESETS, get_preset
from src.harness.render import export_display, load_image, render_spectrum
from src.harness.synthetic import synthetic_image

__all__ = [
    "PRESETS",
    "AuditLogger",
    "ExperimentEventType",
    "ExperimentRunner",
    "build_mask",
    "constraint_deviation",
    "count_components",
    "export_display",
    "get_audit_logger",
    "get_preset",
    "load_experiment_config",
    "load_image",
    "mse",
    "parse_experiment_config",
    "psnr",
    "render_spectrum",
    "resolution_sweep",
    "run_experiment",
    "smallest_resolved",
    "synthetic_image",
]
