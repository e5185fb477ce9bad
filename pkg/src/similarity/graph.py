"""
Patch similarity graph on the stride-eps lattice.

Every lattice center x_k keeps its m0 most similar lattice points among
those within torus max-norm distance [eps, eta]. Edges are undirected: a
pair selected from both ends is stored once with its smaller distance.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from src.config import get_settings
from src.exceptions import InvalidParameterError, SizeMismatchError
from src.models.params import GraphParams, MetricKind
from src.similarity.distances import MetricInput, patch_features
from src.similarity.responses import ResponseStack
from src.spectral.core import Image

logger = logging.getLogger(__name__)
settings = get_settings()

MIN_WEIGHT = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class PatchGraph:
    """Weighted undirected patch graph; row e links src[e] and dst[e] (pixel coords)."""

    n: int
    params: GraphParams
    src: np.ndarray
    dst: np.ndarray
    delta: np.ndarray
    weight: np.ndarray
    centers: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))

    def __post_init__(self):
        src = np.asarray(self.src, dtype=np.int64).reshape(-1, 2)
        dst = np.asarray(self.dst, dtype=np.int64).reshape(-1, 2)
        delta = np.asarray(self.delta, dtype=np.float64).ravel()
        weight = np.asarray(self.weight, dtype=np.float64).ravel()
        if not (len(src) == len(dst) == len(delta) == len(weight)):
            raise SizeMismatchError("graph edge arrays differ in length")
        for name, value in (("src", src), ("dst", dst), ("delta", delta), ("weight", weight)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def edge_count(self) -> int:
        return len(self.delta)

    def edges(self) -> Iterator[tuple[tuple[int, int], tuple[int, int], float, float]]:
        for e in range(self.edge_count):
            yield (
                (int(self.src[e, 0]), int(self.src[e, 1])),
                (int(self.dst[e, 0]), int(self.dst[e, 1])),
                float(self.delta[e]),
                float(self.weight[e]),
            )

    def out_degree(self) -> dict[tuple[int, int], int]:
        """Edges per point, counting both endpoints."""
        counts: dict[tuple[int, int], int] = {}
        for point in np.concatenate([self.src, self.dst]):
            key = (int(point[0]), int(point[1]))
            counts[key] = counts.get(key, 0) + 1
        return counts


def lattice_coords(n: int, eps: int) -> np.ndarray:
    """Lattice coordinates 0, eps, 2 eps, ... below n along one axis."""
    return np.arange(0, n, eps, dtype=np.int64)


def lattice_centers(n: int, eps: int) -> np.ndarray:
    """(L^2, 2) lattice centers in row-major order."""
    coords = lattice_coords(n, eps)
    c1, c2 = np.meshgrid(coords, coords, indexing="ij")
    return np.stack([c1.ravel(), c2.ravel()], axis=1)


def torus_distance(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Per-axis periodic distance min(|a - b|, n - |a - b|), broadcast."""
    diff = np.abs(np.asarray(a) - np.asarray(b)) % n
    return np.minimum(diff, n - diff)


def _check_input(metric_input: MetricInput, metric: MetricKind) -> int:
    if metric == MetricKind.ATOM and not isinstance(metric_input, ResponseStack):
        raise InvalidParameterError("atom metric requires atom responses")
    if metric != MetricKind.ATOM and not isinstance(metric_input, Image):
        raise InvalidParameterError(f"{metric.value} metric requires an image")
    return metric_input.n


def _score_centers(
    indices: np.ndarray,
    features: np.ndarray,
    axis_dist: np.ndarray,
    params: GraphParams,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Best m0 matches of each lattice center in `indices`."""
    side = axis_dist.shape[0]
    sources, targets, deltas = [], [], []
    for k in indices:
        a, b = divmod(int(k), side)
        rows = np.flatnonzero(axis_dist[a] <= params.eta)
        cols = np.flatnonzero(axis_dist[b] <= params.eta)
        spread = np.maximum(axis_dist[a][rows][:, None], axis_dist[b][cols][None, :])
        candidates = (rows[:, None] * side + cols[None, :])[spread >= params.eps]
        if candidates.size == 0:
            continue
        delta = np.linalg.norm(features[candidates] - features[k], axis=1)
        order = np.argsort(delta, kind="stable")[: params.m0]
        sources.append(np.full(order.size, k, dtype=np.int64))
        targets.append(candidates[order])
        deltas.append(delta[order])
    if not sources:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0)
    return np.concatenate(sources), np.concatenate(targets), np.concatenate(deltas)


def _merge_undirected(
    src: np.ndarray, dst: np.ndarray, delta: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Keep one edge per unordered pair: smallest delta, then first generated."""
    if src.size == 0:
        return src, dst, delta
    count = int(max(src.max(), dst.max())) + 1
    key = np.minimum(src, dst) * count + np.maximum(src, dst)
    generation = np.arange(src.size)
    order = np.lexsort((generation, delta, key))
    _, first = np.unique(key[order], return_index=True)
    kept = np.sort(order[first])
    return src[kept], dst[kept], delta[kept]


def build_graph(
    metric_input: MetricInput,
    params: GraphParams,
    workers: Optional[int] = None,
) -> PatchGraph:
    """
    Build the weighted patch graph.

    Args:
        metric_input: Atom responses (metric ATOM) or an image (SSD, ORACLE)
        params: Graph parameters
        workers: Threads scoring centers in parallel (defaults to config)

    Returns:
        PatchGraph with weights exp(-delta/h), floored at the smallest
        positive float

    Raises:
        InvalidParameterError: If the input does not fit the metric
    """
    n = _check_input(metric_input, params.metric)
    centers = lattice_centers(n, params.eps)
    coords = lattice_coords(n, params.eps)
    axis_dist = torus_distance(coords[:, None], coords[None, :], n)
    features = np.asarray(patch_features(metric_input, centers, params.rho), dtype=np.float64)

    workers = max(1, workers or settings.graph_workers)
    chunks = np.array_split(np.arange(len(centers)), workers)
    if params.m0 == 0:
        parts = []
    elif workers == 1:
        parts = [_score_centers(chunks[0], features, axis_dist, params)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda chunk: _score_centers(chunk, features, axis_dist, params), chunks)
            )

    if parts:
        src = np.concatenate([p[0] for p in parts])
        dst = np.concatenate([p[1] for p in parts])
        delta = np.concatenate([p[2] for p in parts])
        src, dst, delta = _merge_undirected(src, dst, delta)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
        delta = np.zeros(0)

    weight = np.maximum(np.exp(-delta / params.h), MIN_WEIGHT)
    logger.info(
        f"Built {params.metric.value} graph on {len(centers)} centers: {delta.size} edges"
    )
    return PatchGraph(
        n=n,
        params=params,
        src=centers[src],
        dst=centers[dst],
        delta=delta,
        weight=weight,
        centers=centers,
    )


def best_matches(
    metric_input: MetricInput,
    x_k: tuple[int, int],
    count: int,
    params: GraphParams,
    dense: bool = False,
) -> list[tuple[int, int]]:
    """
    Points most similar to x_k inside its search window, best first.

    Candidates are lattice points at max-norm distance in [eps, eta], or every
    pixel other than x_k within eta when `dense` is set. Ties keep row-major order.
    """
    n = _check_input(metric_input, params.metric)
    x_k = (int(x_k[0]) % n, int(x_k[1]) % n)
    if dense:
        coords = np.arange(n, dtype=np.int64)
        min_spread = 1
    else:
        coords = lattice_coords(n, params.eps)
        min_spread = params.eps
    c1, c2 = np.meshgrid(coords, coords, indexing="ij")
    points = np.stack([c1.ravel(), c2.ravel()], axis=1)
    spread = np.maximum(
        torus_distance(points[:, 0], x_k[0], n), torus_distance(points[:, 1], x_k[1], n)
    )
    points = points[(spread >= min_spread) & (spread <= params.eta)]
    if points.size == 0 or count <= 0:
        return []
    features = patch_features(metric_input, points, params.rho)
    reference = patch_features(metric_input, np.array([x_k]), params.rho)[0]
    delta = np.linalg.norm(features - reference, axis=1)
    order = np.argsort(delta, kind="stable")[:count]
    return [(int(points[i, 0]), int(points[i, 1])) for i in order]
