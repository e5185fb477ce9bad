"""
Spectral core: images, spectra, masks, unitary transforms and projections.
"""

from src.spectral.basis import MaskBasis, pack, unpack
from src.spectral.core import (
    FreqMask,
    Image,
    Spectrum,
    corrupt,
    dft2,
    idft2,
    project_known,
    project_missing,
)
from src.spectral.io import read_grid, write_grid
from src.spectral.metrics import mse, psnr

__all__ = [
    "FreqMask",
    "Image",
    "MaskBasis",
    "Spectrum",
    "corrupt",
    "dft2",
    "idft2",
    "mse",
    "pack",
    "project_known",
    "psnr",
    "project_missing",
    "read_grid",
    "unpack",
    "write_grid",
]
