"""
Configuration management for spectrafill.

Loads numerical defaults from environment variables (prefix ``SPECTRAFILL_``)
or a local ``.env`` file. Every operation accepts explicit parameters and
falls back to these values when given ``None``.
"""

from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="SPECTRAFILL_",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="INFO", description="Logging level"
    )

    # Spectral core
    hermitian_rtol: float = Field(
        default=1e-9, description="Relative tolerance of the Hermitian symmetry check"
    )

    # Atom basis
    atom_cache_dir: Path = Field(
        default=Path(".spectrafill/atoms"), description="Directory of cached SFA1 atom sets"
    )
    atoms_tol: float = Field(
        default=1e-9, description="Relative eigen-residual tolerance for atom computation"
    )
    atoms_max_iter: int = Field(default=500, description="Iteration cap per eigensolver block")
    atoms_solver: Literal["lanczos", "lobpcg"] = Field(
        default="lanczos", description="Iterative eigensolver used above the dense limit"
    )
    atoms_block_size: int = Field(default=8, description="LOBPCG block size")
    atoms_gap_search: int = Field(
        default=4, description="Extra eigenpairs searched when n0 is grown to a spectral gap"
    )
    atoms_dense_limit: int = Field(
        default=400, description="Below this many degrees of freedom the form is assembled densely"
    )

    # Non-local solver
    cg_tol: float = Field(default=1e-6, description="Relative CG residual tolerance")
    cg_max_iter: int = Field(default=500, description="CG iteration cap")
    irls_eps: float = Field(
        default=1e-3, description="IRLS smoothing floor, relative to the initial median difference"
    )
    irls_rounds: int = Field(default=10, description="IRLS outer rounds for alpha=1")

    # TV baseline
    tv_outer_iters: int = Field(default=300, description="Douglas-Rachford iterations")
    tv_inner_iters: int = Field(default=30, description="Dual projection iterations per TV prox")
    tv_gamma: float = Field(default=10.0, description="Douglas-Rachford step (TV prox weight)")

    # Similarity
    graph_workers: int = Field(
        default=1, description="Threads used to score patch centers when building graphs"
    )

    # Harness
    psnr_peak: float = Field(default=255.0, description="Peak value used by PSNR")
    spectrum_floor: float = Field(
        default=1e-9, description="Log-spectrum floor, relative to the largest magnitude"
    )


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
