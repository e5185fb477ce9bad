"""
SFG text format for patch graphs.

    # SFG n=64 eta=20 rho=7 eps=5 m0=10 h=100.0 metric=atom
    k1 k2 l1 l2 delta weight
    ...
"""

import logging
from pathlib import Path

import numpy as np

from src.exceptions import GridFormatError
from src.models.params import GraphParams
from src.similarity.graph import PatchGraph, lattice_centers

logger = logging.getLogger(__name__)

GRAPH_MAGIC = "# SFG"


def format_graph(graph: PatchGraph) -> str:
    lines = [f"{GRAPH_MAGIC} n={graph.n} {graph.params.header()}"]
    for (k1, k2), (l1, l2), delta, weight in graph.edges():
        lines.append(f"{k1} {k2} {l1} {l2} {delta:.17g} {weight:.17g}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> PatchGraph:
    """
    Parse SFG text.

    Raises:
        GridFormatError: On a missing header or malformed edge rows
    """
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith(GRAPH_MAGIC):
        raise GridFormatError("graph file lacks the '# SFG' header")
    try:
        fields = dict(item.split("=", 1) for item in lines[0][len(GRAPH_MAGIC) :].split())
        n = int(fields.pop("n"))
        params = GraphParams(**fields)
    except (KeyError, ValueError) as e:
        raise GridFormatError(f"bad graph header: {e}") from e

    rows = []
    for number, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 6:
            raise GridFormatError(f"line {number}: expected 6 columns, got {len(parts)}")
        try:
            rows.append([float(x) for x in parts])
        except ValueError as e:
            raise GridFormatError(f"line {number}: {e}") from e
    table = np.array(rows, dtype=np.float64).reshape(-1, 6)
    return PatchGraph(
        n=n,
        params=params,
        src=table[:, 0:2].astype(np.int64),
        dst=table[:, 2:4].astype(np.int64),
        delta=table[:, 4],
        weight=table[:, 5],
        centers=lattice_centers(n, params.eps),
    )


def save_graph(graph: PatchGraph, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_graph(graph))
    logger.info(f"Saved graph with {graph.edge_count} edges to {path}")
    return path


def load_graph(path: Path | str) -> PatchGraph:
    path = Path(path)
    if not path.exists():
        raise GridFormatError(f"graph file not found: {path}")
    return parse_graph(path.read_text())
