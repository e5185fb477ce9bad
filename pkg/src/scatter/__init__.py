"""
Born-approximation scattering data synthesis.
"""

from src.scatter.born import (
    FarFieldData,
    FarFieldModel,
    add_noise,
    far_field,
    grid_far_field,
)
from src.scatter.scene import (
    bars_scene,
    disks_scene,
    format_scene,
    parse_scene,
    parse_wave_number,
    render_scene,
)

__all__ = [
    "FarFieldData",
    "FarFieldModel",
    "add_noise",
    "bars_scene",
    "disks_scene",
    "far_field",
    "format_scene",
    "grid_far_field",
    "parse_scene",
    "parse_wave_number",
    "render_scene",
]
