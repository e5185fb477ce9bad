"""
Experiment runner: corrupt, compute atoms, build graphs, restore, report.

Every stage runs under a label; failures surface as ExperimentStageError
carrying the label and the original exit code.
"""

import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Sequence

from src.atoms.eigensolver import AtomSet
from src.atoms.store import get_atom_store
from src.exceptions import ConfigError, ExperimentStageError, SizeMismatchError
from src.harness.audit_logger import AuditLogger, get_audit_logger
from src.harness.metrics import constraint_deviation, count_components, psnr
from src.harness.presets import get_preset
from src.harness.render import export_display, load_image, render_spectrum
from src.harness.synthetic import synthetic_image
from src.masks.generators import band_mask, ring_mask, scattering_mask, tomography_mask
from src.masks.io import load_mask, save_mask
from src.models.experiment import ExperimentConfig, MaskKind, MaskSpec, Method, Preset, Report
from src.models.params import MetricKind, SolverConfig
from src.models.scene import ScatterScene, wavelength_grid_scale
from src.scatter.born import FarFieldModel, add_noise, far_field, grid_far_field
from src.scatter.scene import bars_scene, disks_scene, parse_scene, render_scene
from src.similarity.graph import PatchGraph, build_graph
from src.similarity.responses import filter_responses
from src.solver.irls import solve_l1
from src.solver.quadratic import solve_quadratic
from src.solver.result import RestoreResult
from src.solver.schedule import restore_iterated
from src.spectral.core import FreqMask, Image, Spectrum, dft2, idft2
from src.spectral.io import write_grid
from src.tv.solver import solve_tv

logger = logging.getLogger(__name__)

ATOM_METHODS = {Method.ATOM, Method.ATOM_L1, Method.HYBRID}

QUADRATIC_METHODS = {
    Method.SSD: MetricKind.SSD,
    Method.ATOM: MetricKind.ATOM,
    Method.ORACLE: MetricKind.ORACLE,
}
L1_METHODS = {
    Method.SSD_L1: MetricKind.SSD,
    Method.ATOM_L1: MetricKind.ATOM,
    Method.ORACLE_L1: MetricKind.ORACLE,
}

CONFIG_KEYS = set(ExperimentConfig.model_fields)


def parse_experiment_config(text: str) -> ExperimentConfig:
    """
    Parse ``key = value`` lines (``#`` starts a comment).

    Raises:
        ConfigError: On malformed lines, unknown keys or invalid values
    """
    fields: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"line {number}: expected 'key = value'")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {number}: unknown key {key!r}")
        fields[key] = value.strip()
    try:
        return ExperimentConfig(**fields)
    except ValueError as e:
        raise ConfigError(f"invalid experiment config: {e}") from e


def load_experiment_config(path: Path | str) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return parse_experiment_config(path.read_text())


def scattering_grid_scale(spec: MaskSpec, n: int) -> Optional[float]:
    """Grid scale fixed by the spec's wavelength in pixels, or None for the default."""
    if spec.k_wave is None or spec.wavelength_px is None:
        return None
    return wavelength_grid_scale(n, spec.k_wave, spec.wavelength_px)


def build_mask(spec: MaskSpec, n: int) -> FreqMask:
    """Materialize a preset mask description on an n x n grid."""
    if spec.kind == MaskKind.RINGS:
        return ring_mask(n)
    if spec.kind == MaskKind.BAND:
        return band_mask(n, spec.bands)
    if spec.kind == MaskKind.SCATTERING:
        return scattering_mask(
            n, spec.k_wave, grid_scale=scattering_grid_scale(spec, n), n_dirs=spec.n_dirs
        )
    if spec.kind == MaskKind.TOMOGRAPHY:
        return tomography_mask(n, spec.n_lines, style=spec.style, half_width=spec.half_width)
    return load_mask(spec.path)


class ExperimentRunner:
    """
    Runs one preset: data synthesis, atoms and every requested method.

    Args:
        preset: Experiment preset
        config: Run configuration (overrides and output directory)
        audit: Audit logger (defaults to the global one)
        write_files: Write grids, display images and the report
    """

    def __init__(
        self,
        preset: Preset,
        config: ExperimentConfig,
        audit: Optional[AuditLogger] = None,
        write_files: bool = True,
    ):
        self.preset = preset
        self.config = config
        self.audit = audit or get_audit_logger()
        self.write_files = write_files
        self.output_dir = Path(config.output_dir)
        self.report = Report()
        self.original: Optional[Image] = None
        self.corrupted: Optional[Image] = None
        self.mask: Optional[FreqMask] = None
        self.atoms: Optional[AtomSet] = None
        self.results: dict[Method, RestoreResult] = {}
        self._graphs: dict[MetricKind, PatchGraph] = {}

    @property
    def methods(self) -> list[Method]:
        return list(self.config.methods or self.preset.methods)

    @property
    def noise(self) -> float:
        return self.preset.noise if self.config.noise is None else self.config.noise

    @property
    def n(self) -> int:
        return self.config.n or self.preset.n

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        self.audit.log_stage_start(self.preset.name, name)
        started = time.perf_counter()
        try:
            yield
        except ExperimentStageError:
            raise
        except Exception as e:
            self.audit.log_stage_failed(self.preset.name, name, e)
            raise ExperimentStageError(name, e) from e
        elapsed = time.perf_counter() - started
        self.report.timings[f"time.{name}"] = elapsed
        self.audit.log_stage_complete(self.preset.name, name, elapsed)

    # Data

    def _scene(self) -> ScatterScene:
        k_wave = self.preset.mask.k_wave
        grid_scale = scattering_grid_scale(self.preset.mask, self.n)
        if self.config.scene is not None:
            return parse_scene(self.config.scene.read_text(), self.n, k_wave, grid_scale)
        if self.preset.scene == "bars":
            scene = bars_scene(self.n, self.preset.separation, k_wave)
        else:
            scene = disks_scene(self.n, k_wave)
        return scene.model_copy(update={"grid_scale": grid_scale})

    def _scatter_data(self) -> tuple[Image, Spectrum, FreqMask]:
        scene = self._scene()
        original = render_scene(scene)
        model = FarFieldModel(self.preset.far_field.value)
        samples = far_field(scene, n_dirs=self.preset.mask.n_dirs, model=model)
        spectrum, mask = grid_far_field(samples, scene.n)
        if self.config.mask is not None:
            logger.warning("Scattering presets derive their mask from the data; ignoring mask file")
        return original, spectrum, mask

    def _image_data(self) -> tuple[Image, Spectrum, FreqMask]:
        if self.config.image is not None:
            original = load_image(self.config.image)
            if self.config.n is not None and self.config.n != original.n:
                raise SizeMismatchError(
                    f"image side {original.n} does not match requested n={self.config.n}"
                )
        else:
            original = synthetic_image(self.preset.image, self.n)
        if self.config.mask is not None:
            mask = load_mask(self.config.mask)
        else:
            mask = build_mask(self.preset.mask, original.n)
        if mask.n != original.n:
            raise SizeMismatchError(f"mask side {mask.n} does not match image side {original.n}")
        spectrum = Spectrum(dft2(original).coeffs * mask.known)
        return original, spectrum, mask

    def prepare(self) -> None:
        """Build g0, the mask and the corrupted image g."""
        with self.stage("data"):
            is_scene = self.preset.scene is not None or self.config.scene is not None
            original, spectrum, mask = self._scatter_data() if is_scene else self._image_data()
            if self.noise > 0:
                spectrum = add_noise(
                    spectrum, mask, self.noise, seed=self.config.seed, reference_norm=original.norm()
                )
            self.original, self.mask, self.corrupted = original, mask, idft2(spectrum)
        self.report.record("preset", self.preset.name)
        self.report.record("n", self.original.n)
        self.report.record("mask.count", self.mask.count)
        self.report.record("noise", float(self.noise))
        self.report.record("seed", self.config.seed)
        self.report.record("psnr.corrupted", psnr(self.corrupted, self.original))
        if self.preset.scene == "bars":
            self.report.record("components.original", count_components(self.original))
            self.report.record("components.corrupted", count_components(self.corrupted))

    def compute_atoms(self) -> None:
        if not ATOM_METHODS & set(self.methods):
            return
        with self.stage("atoms"):
            self.atoms = get_atom_store().get_or_compute(
                self.mask,
                self.preset.p,
                self.preset.n0,
                seed=self.config.seed,
                extend_to_gap=self.preset.atoms_at_gap,
            )
        self.report.record("atoms.n0", self.atoms.n0)
        self.report.record("atoms.p", self.atoms.p)

    # Restoration

    def graph(self, metric: MetricKind) -> PatchGraph:
        """Graph of the corrupted image (atom, ssd) or of g0 (oracle), built once."""
        if metric not in self._graphs:
            params = self.preset.graph.model_copy(update={"metric": metric})
            with self.stage(f"graph.{metric.value}"):
                if metric == MetricKind.ATOM:
                    metric_input = filter_responses(self.corrupted, self.atoms)
                elif metric == MetricKind.ORACLE:
                    metric_input = self.original
                else:
                    metric_input = self.corrupted
                self._graphs[metric] = build_graph(metric_input, params)
            self.report.record(f"edges.{metric.value}", self._graphs[metric].edge_count)
        return self._graphs[metric]

    def restore(self, method: Method) -> RestoreResult:
        g, mask, params = self.corrupted, self.mask, self.preset.graph
        cfg = SolverConfig(rho=params.rho)
        if method in QUADRATIC_METHODS:
            graph = self.graph(QUADRATIC_METHODS[method])
            with self.stage(f"solve.{method.value}"):
                return solve_quadratic(g, mask, graph, cfg)
        if method in L1_METHODS:
            graph = self.graph(L1_METHODS[method])
            with self.stage(f"solve.{method.value}"):
                return solve_l1(g, mask, graph, cfg.model_copy(update={"alpha": 1}))
        if method == Method.TV:
            with self.stage("solve.tv"):
                return solve_tv(g, mask, self.preset.tv)
        schedule = (
            [MetricKind.ATOM, MetricKind.SSD]
            if method == Method.HYBRID
            else [MetricKind.SSD] * self.preset.recompute_rounds
        )
        with self.stage(f"solve.{method.value}"):
            return restore_iterated(
                g, mask, params, schedule, atoms=self.atoms, reference=self.original, cfg=cfg
            )

    def run_methods(self) -> None:
        for method in self.methods:
            result = self.restore(method)
            self.results[method] = result
            label = method.value
            self.report.record(f"psnr.{label}", psnr(result.restored, self.original))
            self.report.record(f"energy.{label}", result.final_energy)
            self.report.record(f"iterations.{label}", result.iterations)
            self.report.record(f"converged.{label}", result.converged)
            self.report.record(
                f"constraint.{label}", constraint_deviation(result.restored, self.corrupted, self.mask)
            )
            if result.round_psnr:
                self.report.record(
                    f"rounds.{label}", ",".join(f"{value:.4f}" for value in result.round_psnr)
                )
            if self.preset.scene == "bars":
                self.report.record(f"components.{label}", count_components(result.restored))

    # Output

    def _write(self, path: Path) -> None:
        self.report.manifest.append(path.relative_to(self.output_dir).as_posix())
        self.audit.log_artifact(self.preset.name, path)

    def write_outputs(self) -> Path:
        out = self.output_dir
        with self.stage("write"):
            images = {"original": self.original, "corrupted": self.corrupted}
            images.update({f"restored_{m.value}": r.restored for m, r in self.results.items()})
            for name, img in images.items():
                self._write(write_grid(img, out / f"{name}.sfg1"))
                self._write(export_display(img, out / f"{name}.png"))
                self._write(export_display(render_spectrum(img), out / f"spectrum_{name}.png"))
            self._write(save_mask(self.mask, out / "mask.pbm"))
            report_path = out / "report.txt"
            report_path.write_text(self.report.to_text())
        return report_path

    def run(self) -> Report:
        started = time.perf_counter()
        self.audit.log_experiment_start(self.preset.name, self.output_dir)
        try:
            self.prepare()
            self.compute_atoms()
            self.run_methods()
            if self.write_files:
                self.write_outputs()
        except ExperimentStageError as e:
            self.audit.log_experiment_failed(self.preset.name, e.stage, e.cause)
            raise
        self.audit.log_experiment_complete(self.preset.name, time.perf_counter() - started)
        return self.report


def run_experiment(config: ExperimentConfig, write_files: bool = True) -> Report:
    """
    Run the preset named by the config.

    Args:
        config: Run configuration
        write_files: Write SFG1 grids, PNG views, the mask and report.txt

    Returns:
        The experiment report

    Raises:
        ConfigError: If the preset is unknown
        ExperimentStageError: If a stage fails
    """
    preset = get_preset(config.preset)
    return ExperimentRunner(preset, config, write_files=write_files).run()


def resolution_sweep(
    separations: Sequence[int],
    methods: Sequence[Method] = (Method.ATOM, Method.TV),
    n: int = 128,
    seed: int = 0,
) -> dict[int, dict[str, int]]:
    """
    Count thresholded components of the bars scene restored at each gap.

    Returns:
        {separation: {"corrupted": c, method: c, ...}}
    """
    base = get_preset("figScatParallel")
    counts: dict[int, dict[str, int]] = {}
    for separation in separations:
        preset = base.model_copy(update={"separation": separation, "n": n})
        config = ExperimentConfig(preset=base.name, methods=list(methods), seed=seed)
        runner = ExperimentRunner(preset, config, write_files=False)
        runner.run()
        counts[separation] = {
            "corrupted": count_components(runner.corrupted),
            **{m.value: count_components(r.restored) for m, r in runner.results.items()},
        }
        logger.info(f"Separation {separation}px: {counts[separation]}")
    return counts


def smallest_resolved(counts: dict[int, dict[str, int]], label: str, bars: int = 4) -> Optional[int]:
    """Smallest separation at which `label` shows all bars as separate components."""
    resolved = [sep for sep, row in counts.items() if row.get(label) == bars]
    return min(resolved) if resolved else None
