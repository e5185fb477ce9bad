"""
Restoration result shared by the non-local and TV solvers.
"""

from dataclasses import dataclass, field
from typing import Optional

from src.spectral.core import Image


@dataclass(frozen=True)
class RestoreResult:
    """
    Outcome of one restoration.

    ``restored`` equals g + v with v carried only by missing frequencies.
    ``smoothing`` is the IRLS floor when the l1 energy was approximated.
    """

    restored: Image
    v: Image
    energy_trace: tuple[float, ...]
    iterations: int
    wall_time: float
    converged: bool = True
    method: str = ""
    smoothing: Optional[float] = None
    round_psnr: tuple[float, ...] = field(default_factory=tuple)

    @property
    def final_energy(self) -> float:
        return self.energy_trace[-1] if self.energy_trace else 0.0
