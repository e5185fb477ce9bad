"""
Subcommand handlers. Each takes the parsed arguments and returns an exit code.
"""

import argparse
import logging
import math
from pathlib import Path
from typing import Optional

import numpy as np

from src.atoms.eigensolver import AtomSet, compute_atoms
from src.atoms.report import atom_report
from src.atoms.store import get_atom_store, load_atoms, save_atoms
from src.exceptions import ConfigError
from src.harness.experiment import load_experiment_config, run_experiment
from src.harness.metrics import psnr
from src.harness.presets import get_preset
from src.harness.render import export_display, load_image, render_spectrum
from src.masks.generators import band_mask, ring_mask, scattering_mask, tomography_mask
from src.masks.io import load_mask, save_mask
from src.models.experiment import ExperimentConfig, Preset
from src.models.scene import wavelength_grid_scale
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
from src.scatter.born import FarFieldModel, add_noise, far_field, grid_far_field
from src.scatter.scene import bars_scene, disks_scene, parse_scene, parse_wave_number, render_scene
from src.similarity.distances import MetricInput
from src.similarity.graph import best_matches, build_graph
from src.similarity.io import load_graph, save_graph
from src.similarity.responses import filter_responses
from src.solver.schedule import parse_schedule, restore_iterated, solve
from src.spectral.core import FreqMask, Image, Spectrum, dft2, idft2
from src.spectral.io import write_grid
from src.tv.solver import solve_tv

logger = logging.getLogger(__name__)

GRAPH_FIELDS = ("eta", "rho", "eps", "m0", "h")

# Mask spellings accepted on the command line, mapped to canonical kinds
MASK_KINDS = {
    "band": "band",
    "rings": "rings",
    "scatter": "scattering",
    "scattering": "scattering",
    "tomo": "tomography",
    "tomography": "tomography",
}


def parse_bands(text: str) -> list[tuple[float, float]]:
    """Parse "0:8,20:28" into [(0, 8), (20, 28)]."""
    bands = []
    for item in text.split(","):
        lo, sep, hi = item.partition(":")
        if not sep:
            raise ConfigError(f"band {item!r} must look like lo:hi")
        try:
            bands.append((float(lo), float(hi)))
        except ValueError as e:
            raise ConfigError(f"band {item!r}: {e}") from e
    return bands


def _grid_scale(args: argparse.Namespace, n: int, k_wave: float) -> Optional[float]:
    if args.wavelength_px is None:
        return None
    if args.wavelength_px <= 0:
        raise ConfigError(f"--wavelength-px must be positive, got {args.wavelength_px}")
    return wavelength_grid_scale(n, k_wave, args.wavelength_px)


def _preset(args: argparse.Namespace) -> Optional[Preset]:
    name = getattr(args, "preset", None)
    return get_preset(name) if name else None


def graph_params(args: argparse.Namespace, metric: MetricKind) -> GraphParams:
    """Graph parameters from the preset, overridden by explicit flags."""
    preset = _preset(args)
    values = preset.graph.model_dump() if preset else {}
    for name in GRAPH_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    missing = [name for name in GRAPH_FIELDS if name not in values]
    if missing:
        raise ConfigError(f"missing graph parameters {missing}; pass them or use --preset")
    values["metric"] = metric
    try:
        return GraphParams(**values)
    except ValueError as e:
        raise ConfigError(f"invalid graph parameters: {e}") from e


def _atoms(args: argparse.Namespace, mask: Optional[FreqMask]) -> AtomSet:
    if getattr(args, "atoms", None):
        return load_atoms(args.atoms)
    if mask is None:
        raise ConfigError("atom metric needs --atoms or a mask (-m)")
    preset = _preset(args)
    n0 = args.n0 or (preset.n0 if preset else None)
    p = args.p or (preset.p if preset else None)
    if n0 is None or p is None:
        raise ConfigError("atom metric needs --n0 and --p (or --preset)")
    return get_atom_store().get_or_compute(mask, p, n0, seed=args.seed)


def _metric_input(
    args: argparse.Namespace, metric: MetricKind, g: Image, mask: Optional[FreqMask]
) -> MetricInput:
    if metric == MetricKind.ATOM:
        return filter_responses(g, _atoms(args, mask))
    if metric == MetricKind.ORACLE:
        if not args.reference:
            raise ConfigError("oracle metric needs --reference")
        return load_image(args.reference)
    return g


def cmd_mask(args: argparse.Namespace) -> int:
    kind = MASK_KINDS[args.kind]
    if kind == "rings":
        mask = ring_mask(args.n)
    elif kind == "band":
        if not args.bands:
            raise ConfigError("band masks need --bands")
        try:
            spec = BandSpec(bands=parse_bands(args.bands), norm=BandNorm(args.norm))
        except ValueError as e:
            raise ConfigError(f"invalid bands: {e}") from e
        mask = band_mask(args.n, spec)
    elif kind == "scattering":
        k_wave = parse_wave_number(args.k)
        mask = scattering_mask(
            args.n, k_wave, n_dirs=args.dirs, grid_scale=_grid_scale(args, args.n, k_wave)
        )
    else:
        mask = tomography_mask(
            args.n, args.lines, style=TomographyStyle(args.style), half_width=args.half_width
        )
    save_mask(mask, args.output)
    print(f"{mask.count} of {mask.n * mask.n} frequencies kept")
    return 0


def cmd_atoms(args: argparse.Namespace) -> int:
    mask = load_mask(args.mask, symmetrize=args.symmetrize)
    atom_set = compute_atoms(mask, args.p, args.n0, seed=args.seed)
    save_atoms(atom_set, args.output)
    if args.report_dir:
        out = Path(args.report_dir)
        for view in atom_report(atom_set):
            export_display(Image(view.atom), out / f"atom_{view.index:02d}.png", normalize=True)
            export_display(
                Image(view.log_spectrum), out / f"atom_{view.index:02d}_spectrum.png", normalize=True
            )
    for i, moment in enumerate(atom_set.moments):
        print(f"atom {i}: moment {moment:.6e}")
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    metric = MetricKind(args.metric)
    g = load_image(args.input)
    mask = load_mask(args.mask) if args.mask else None
    params = graph_params(args, metric)
    graph = build_graph(_metric_input(args, metric, g, mask), params)
    save_graph(graph, args.output)
    print(f"{graph.edge_count} edges")
    return 0


def cmd_best_matches(args: argparse.Namespace) -> int:
    metric = MetricKind(args.metric)
    g = load_image(args.input)
    mask = load_mask(args.mask) if args.mask else None
    params = graph_params(args, metric)
    matches = best_matches(
        _metric_input(args, metric, g, mask), (args.x, args.y), args.count, params, dense=args.dense
    )
    for rank, (x1, x2) in enumerate(matches, start=1):
        print(f"{rank} {x1} {x2}")
    if args.output:
        overlay = g.pixels.copy()
        overlay = 0.5 * (overlay - overlay.min()) * 255.0 / max(np.ptp(overlay), 1e-12)
        half = params.rho // 2
        for x1, x2 in matches:
            overlay[(x1 + np.arange(-half, half + 1)) % g.n, x2 % g.n] = 255.0
        overlay[args.x % g.n, args.y % g.n] = 255.0
        export_display(Image(overlay), args.output)
    return 0


def cmd_restore(args: argparse.Namespace) -> int:
    g = load_image(args.input)
    mask = load_mask(args.mask, symmetrize=args.symmetrize)
    metric = MetricKind(args.metric)
    graph = load_graph(args.graph) if args.graph and not args.schedule else None
    params = graph.params if graph is not None else graph_params(args, metric)
    overrides = {
        key: value
        for key, value in (("cg_tol", args.cg_tol), ("cg_max_iter", args.cg_max_iter))
        if value is not None
    }
    cfg = SolverConfig(
        alpha=args.alpha,
        rho=params.rho,
        window=PatchWindow(args.window),
        constraint_mode=ConstraintMode(args.constraint),
        **overrides,
    )
    reference = load_image(args.reference) if args.reference else None
    if args.schedule:
        schedule = parse_schedule(args.schedule)
        atoms = _atoms(args, mask) if MetricKind.ATOM in schedule else None
        result = restore_iterated(g, mask, params, schedule, atoms=atoms, reference=reference, cfg=cfg)
    else:
        if graph is None:
            graph = build_graph(_metric_input(args, metric, g, mask), params)
        result = solve(g, mask, graph, cfg)
    write_grid(result.restored, args.output)
    print(f"iterations {result.iterations} energy {result.final_energy:.6e} converged {result.converged}")
    if reference is not None:
        print(f"psnr {psnr(result.restored, reference):.4f}")
    return 0


def cmd_tv(args: argparse.Namespace) -> int:
    g = load_image(args.input)
    mask = load_mask(args.mask, symmetrize=args.symmetrize)
    overrides = {
        key: value
        for key, value in (
            ("outer_iters", args.outer),
            ("inner_iters", args.inner),
            ("dr_gamma", args.gamma),
        )
        if value is not None
    }
    result = solve_tv(g, mask, TvConfig(**overrides))
    write_grid(result.restored, args.output)
    print(f"iterations {result.iterations} tv {result.final_energy:.6e} converged {result.converged}")
    return 0


def cmd_scatter(args: argparse.Namespace) -> int:
    k_wave = parse_wave_number(args.k)
    if args.scene:
        scene = parse_scene(Path(args.scene).read_text(), args.n, k_wave)
    elif args.stock == "bars":
        scene = bars_scene(args.n, args.separation, k_wave)
    else:
        scene = disks_scene(args.n, k_wave)
    grid_scale = _grid_scale(args, scene.n, k_wave)
    if grid_scale is not None:
        scene = scene.model_copy(update={"grid_scale": grid_scale})
    samples = far_field(scene, n_dirs=args.dirs, model=FarFieldModel(args.model))
    spectrum, mask = grid_far_field(samples, scene.n)
    original = render_scene(scene)
    if args.noise:
        spectrum = add_noise(spectrum, mask, args.noise, seed=args.seed, reference_norm=original.norm())
    write_grid(idft2(spectrum), args.output)
    save_mask(mask, args.mask_out)
    if args.truth_out:
        write_grid(original, args.truth_out)
    print(f"{samples.count} samples on {mask.count} cells")
    return 0


def cmd_corrupt(args: argparse.Namespace) -> int:
    clean = load_image(args.input)
    mask = load_mask(args.mask, symmetrize=args.symmetrize)
    spectrum = Spectrum(dft2(clean).coeffs * mask.known)
    if args.noise:
        spectrum = add_noise(spectrum, mask, args.noise, seed=args.seed, reference_norm=clean.norm())
    corrupted = idft2(spectrum)
    write_grid(corrupted, args.output)
    print(f"psnr {psnr(corrupted, clean):.4f}")
    return 0


def cmd_psnr(args: argparse.Namespace) -> int:
    value = psnr(load_image(args.first), load_image(args.second), peak=args.peak)
    print("inf" if math.isinf(value) else f"{value:.4f}")
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    export_display(render_spectrum(load_image(args.input)), args.output)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    if args.config:
        config = load_experiment_config(args.config)
    elif args.preset:
        config = ExperimentConfig(preset=args.preset, output_dir=Path(args.output_dir), seed=args.seed)
    else:
        raise ConfigError("run needs a config file or --preset")
    report = run_experiment(config)
    print(report.deterministic_text(), end="")
    return 0
