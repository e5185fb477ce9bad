"""
Multi-round restoration: weight recomputation and hybrid schedules.

Round i rebuilds the patch graph, on the atom responses of g, on the
round-(i-1) restoration (ssd), or on a reference image (oracle), then
re-solves from g.
"""

import logging
import re
import time
from dataclasses import replace
from typing import Optional, Sequence

from src.atoms.eigensolver import AtomSet
from src.exceptions import InvalidParameterError, InvalidScheduleError
from src.models.params import GraphParams, MetricKind, SolverConfig
from src.similarity.distances import MetricInput
from src.similarity.graph import PatchGraph, build_graph
from src.similarity.responses import filter_responses
from src.solver.irls import solve_l1
from src.solver.quadratic import check_sizes, ensure_known, solve_quadratic
from src.solver.result import RestoreResult
from src.spectral.core import FreqMask, Image
from src.spectral.metrics import psnr

logger = logging.getLogger(__name__)

_ROUND = re.compile(r"^(atom|ssd|oracle)(?:\s*[*x]\s*(\d+))?$")


def parse_schedule(text: str) -> list[MetricKind]:
    """
    Parse "atom,ssd*20"-style schedules.

    Raises:
        InvalidScheduleError: On unknown tokens or an empty schedule
    """
    rounds: list[MetricKind] = []
    for token in (t.strip().lower() for t in text.split(",")):
        match = _ROUND.match(token)
        if not match:
            raise InvalidScheduleError(f"bad schedule entry {token!r}")
        repeat = int(match.group(2) or 1)
        rounds.extend([MetricKind(match.group(1))] * repeat)
    validate_schedule(rounds)
    return rounds


def validate_schedule(schedule: Sequence[MetricKind], has_reference: bool = True) -> None:
    if not schedule:
        raise InvalidScheduleError("schedule has no rounds")
    for index, metric in enumerate(schedule):
        if metric == MetricKind.ATOM and index > 0:
            raise InvalidScheduleError(
                "atom distances do not change with the restoration; use them in round 1 only"
            )
        if metric == MetricKind.ORACLE and not has_reference:
            raise InvalidScheduleError("oracle rounds need a reference image")


def solve(
    g: Image, mask: FreqMask, graph: PatchGraph, cfg: Optional[SolverConfig] = None
) -> RestoreResult:
    """Dispatch on cfg.alpha."""
    cfg = cfg or SolverConfig()
    if cfg.alpha == 1:
        return solve_l1(g, mask, graph, cfg)
    return solve_quadratic(g, mask, graph, cfg)


def round_graph(
    metric: MetricKind,
    params: GraphParams,
    g: Image,
    current: Image,
    atoms: Optional[AtomSet],
    reference: Optional[Image],
) -> PatchGraph:
    metric_input: MetricInput
    if metric == MetricKind.ATOM:
        if atoms is None:
            raise InvalidParameterError("atom rounds need an atom set")
        metric_input = filter_responses(g, atoms)
    elif metric == MetricKind.ORACLE:
        metric_input = reference
    else:
        metric_input = current
    return build_graph(metric_input, params.model_copy(update={"metric": metric}))


def restore_iterated(
    g: Image,
    mask: FreqMask,
    params: GraphParams,
    schedule: Sequence[MetricKind],
    atoms: Optional[AtomSet] = None,
    reference: Optional[Image] = None,
    cfg: Optional[SolverConfig] = None,
) -> RestoreResult:
    """
    Run a restoration schedule.

    Args:
        g: Corrupted image
        mask: Known frequencies
        params: Graph parameters (the metric is taken per round)
        schedule: Round metrics, e.g. [ATOM, SSD] for the hybrid
        atoms: Atom set for an atom round
        reference: Clean image; feeds oracle rounds and per-round PSNR
        cfg: Solver configuration; its window width follows params.rho

    Returns:
        Final RestoreResult with the energy traces of all rounds concatenated
        and ``round_psnr`` filled when a reference is given

    Raises:
        InvalidScheduleError: On an invalid schedule
    """
    validate_schedule(schedule, has_reference=reference is not None)
    check_sizes(g, mask)
    cfg = (cfg or SolverConfig()).model_copy(update={"rho": params.rho})
    g = ensure_known(g, mask)
    started = time.perf_counter()

    current = g
    result: Optional[RestoreResult] = None
    trace: list[float] = []
    scores: list[float] = []
    iterations = 0
    converged = True
    for index, metric in enumerate(schedule):
        graph = round_graph(metric, params, g, current, atoms, reference)
        result = solve(g, mask, graph, cfg)
        current = result.restored
        trace.extend(result.energy_trace)
        iterations += result.iterations
        converged = converged and result.converged
        if reference is not None:
            scores.append(psnr(current, reference))
            logger.info(f"Round {index + 1} ({metric.value}): PSNR {scores[-1]:.2f} dB")

    assert result is not None
    return replace(
        result,
        energy_trace=tuple(trace),
        iterations=iterations,
        wall_time=time.perf_counter() - started,
        converged=converged,
        method="+".join(m.value for m in schedule),
        round_psnr=tuple(scores),
    )
