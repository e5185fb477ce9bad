"""
Shared fixtures for the spectrafill test suite.
"""

import numpy as np
import pytest

from src.masks.generators import band_mask
from src.models.params import BandNorm, BandSpec
from src.spectral.core import FreqMask, Image


@pytest.fixture(autouse=True)
def isolated_atom_cache(tmp_path, monkeypatch):
    """Keep the on-disk atom cache inside the test's temporary directory."""
    from src.atoms import store

    monkeypatch.setattr(store.settings, "atom_cache_dir", tmp_path / "atom-cache")


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def random_image(rng):
    """Random 16x16 image on the 0..255 scale."""
    return Image(rng.uniform(0, 255, size=(16, 16)))


@pytest.fixture
def low_band_mask():
    """16x16 mask keeping max-norm radius below 3."""
    return band_mask(16, BandSpec(bands=[(0, 3)], norm=BandNorm.MAX))


@pytest.fixture
def random_mask_8(rng):
    """Random symmetric 8x8 mask of 10 frequencies (5 conjugate pairs, no DC)."""
    known = np.zeros((8, 8), dtype=bool)
    candidates = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 0), (0, 2), (2, 1), (1, 2), (3, 3), (2, -3)]
    for index in rng.choice(len(candidates), size=5, replace=False):
        k1, k2 = candidates[index]
        known[k1 % 8, k2 % 8] = True
    return FreqMask.from_array(known)
