"""
spectrafill command-line entry point.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from src.cli import commands
from src.config import get_settings
from src.exceptions import SpectraFillError
from src.harness.presets import PRESETS

settings = get_settings()

logger = logging.getLogger(__name__)


def _add_graph_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("graph")
    group.add_argument("--metric", choices=["atom", "ssd", "oracle"], default="atom")
    group.add_argument("--preset", choices=sorted(PRESETS), help="Take defaults from a preset")
    group.add_argument("--eta", type=int, help="Search window radius")
    group.add_argument("--rho", type=int, help="Patch size (odd)")
    group.add_argument("--eps", type=int, help="Lattice stride")
    group.add_argument("--m0", type=int, help="Best matches per center")
    group.add_argument("--h", type=float, help="Weight selectivity")
    group.add_argument("--atoms", help="SFA1 atom file for the atom metric")
    group.add_argument("--n0", type=int, help="Atom count when computing atoms")
    group.add_argument("--p", type=float, help="Moment exponent when computing atoms")
    group.add_argument("--reference", help="Clean image (oracle metric, PSNR)")
    group.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectrafill",
        description="Fill in missing Fourier coefficients with non-local patch regularization.",
    )
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mask", help="Generate a known-frequency mask")
    p.add_argument("kind", choices=sorted(commands.MASK_KINDS), help="band, rings, scatter or tomo")
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--bands", help='Band radii, e.g. "0:8,20:28"')
    p.add_argument("--norm", choices=["max", "euclidean"], default="max")
    p.add_argument("--k", default="3pi", help='Wave number, e.g. "3pi"')
    p.add_argument("--dirs", type=int, default=32)
    p.add_argument("--wavelength-px", type=float, help="Pixels per wavelength (scatter)")
    p.add_argument("--lines", type=int, default=32)
    p.add_argument("--style", choices=["radial", "parallel"], default="radial")
    p.add_argument("--half-width", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=commands.cmd_mask)

    p = sub.add_parser("atoms", help="Compute localized atoms for a mask")
    p.add_argument("-m", "--mask", required=True)
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--p", type=float, default=4.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--symmetrize", action="store_true")
    p.add_argument("--report-dir", help="Write atom and log-spectrum PNGs here")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=commands.cmd_atoms)

    p = sub.add_parser("graph", help="Build a patch graph")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-m", "--mask")
    _add_graph_options(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=commands.cmd_graph)

    p = sub.add_parser("best-matches", help="List the best matches of one point")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-m", "--mask")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--count", type=int, default=13)
    p.add_argument("--dense", action="store_true", help="Search every pixel, not the lattice")
    _add_graph_options(p)
    p.add_argument("-o", "--output", help="Overlay image")
    p.set_defaults(func=commands.cmd_best_matches)

    p = sub.add_parser("restore", help="Restore a corrupted image")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-m", "--mask", required=True)
    p.add_argument("--symmetrize", action="store_true")
    p.add_argument("--graph", help="Precomputed graph file")
    p.add_argument("--alpha", type=int, choices=[1, 2], default=2)
    p.add_argument("--schedule", help='Round metrics, e.g. "atom,ssd*20"')
    p.add_argument("--window", choices=["indicator", "hann"], default="indicator")
    p.add_argument("--constraint", choices=["packed", "projection"], default="packed")
    p.add_argument("--cg-tol", type=float)
    p.add_argument("--cg-max-iter", type=int)
    _add_graph_options(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=commands.cmd_restore)

    p = sub.add_parser("tv", help="Constrained TV restoration")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-m", "--mask", required=True)
    p.add_argument("--symmetrize", action="store_true")
    p.add_argument("--outer", type=int)
    p.add_argument("--inner", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=commands.cmd_tv)

    p = sub.add_parser("scatter", help="Synthesize Born far-field data")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--scene", help="Scene file")
    source.add_argument("--stock", choices=["disks", "bars"])
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--k", default="3pi")
    p.add_argument("--dirs", type=int, default=32)
    p.add_argument("--separation", type=int, default=6)
    p.add_argument("--wavelength-px", type=float, help="Pixels per wavelength")
    p.add_argument("--model", choices=["pixel", "continuous"], default="pixel")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="Corrupted image (SFG1)")
    p.add_argument("--mask-out", required=True)
    p.add_argument("--truth-out", help="Rendered scatterer (SFG1)")
    p.set_defaults(func=commands.cmd_scatter)

    p = sub.add_parser("corrupt", help="Keep only the masked frequencies of an image")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-m", "--mask", required=True)
    p.add_argument("--symmetrize", action="store_true")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=commands.cmd_corrupt)

    p = sub.add_parser("psnr", help="PSNR of an estimate against a reference")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--peak", type=float)
    p.set_defaults(func=commands.cmd_psnr)

    p = sub.add_parser("spectrum", help="Render a log-magnitude spectrum")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=commands.cmd_spectrum)

    p = sub.add_parser("run", help="Run an experiment preset")
    p.add_argument("config", nargs="?", help="key = value config file")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--output-dir", default="results")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=commands.cmd_run)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments and dispatch.

    Returns:
        0 on success, 2 for invalid input, 3 for numerical failures
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level or settings.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    try:
        return args.func(args)
    except SpectraFillError as e:
        logger.error(f"{args.command} failed: {e}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
