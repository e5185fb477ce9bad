"""
Patch distances, best-match queries and the weighted patch graph.
"""

from src.similarity.distances import (
    MetricInput,
    dist_atom,
    dist_ssd,
    patch_features,
    patch_offsets,
    patch_pixels,
)
from src.similarity.graph import (
    PatchGraph,
    best_matches,
    build_graph,
    lattice_centers,
    torus_distance,
)
from src.similarity.io import format_graph, load_graph, parse_graph, save_graph
from src.similarity.responses import ResponseStack, filter_responses, image_hash

__all__ = [
    "MetricInput",
    "PatchGraph",
    "ResponseStack",
    "best_matches",
    "build_graph",
    "dist_atom",
    "dist_ssd",
    "filter_responses",
    "format_graph",
    "image_hash",
    "lattice_centers",
    "load_graph",
    "parse_graph",
    "patch_features",
    "patch_offsets",
    "patch_pixels",
    "save_graph",
    "torus_distance",
]
