"""Signal and phase-model domain types.

The observation model is y_l = s_l * exp(j*theta_l) + n_l with unit
average symbol energy, circular Gaussian noise of variance sigma_n^2,
and a random-walk phase theta_l = theta_{l-1} + xi + w_l whose
increments have variance sigma_w^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RejectedInput

SUPPORTED_LABELS = ("bpsk", "qam4", "qam16", "qam64", "qam256")

DA = "da"
NDA = "nda"


@dataclass(frozen=True)
class Constellation:
    """A unit-average-energy symbol set with uniform prior."""

    points: np.ndarray
    order: int
    label: str

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if pts.size != self.order:
            raise RejectedInput(
                f"expected {self.order} points, got {pts.size}")
        energy = np.mean(np.abs(pts) ** 2)
        if abs(energy - 1.0) > 1e-12:
            raise RejectedInput(f"mean symbol energy {energy} != 1")


@dataclass(frozen=True)
class PhaseModel:
    """Scalar parameters of the dynamical phase estimation problem."""

    snr_db: float
    sigma_w2: float
    xi: float = 0.0
    block_len: int = 1
    scenario: str = DA

    def __post_init__(self):
        if self.sigma_w2 <= 0:
            raise RejectedInput("sigma_w2 must be positive")
        if self.block_len < 1:
            raise RejectedInput("block_len must be >= 1")
        if self.scenario not in (DA, NDA):
            raise RejectedInput(f"unknown scenario {self.scenario!r}")


def _square_qam_points(m: int) -> np.ndarray:
    # Odd-integer grid, row-major (Q from +side down, I from -side up),
    # scaled so the average energy is exactly 1.
    side = int(round(np.sqrt(m)))
    levels = np.arange(-(side - 1), side, 2)
    i_grid, q_grid = np.meshgrid(levels, levels[::-1])
    pts = (i_grid + 1j * q_grid).reshape(-1)
    scale = np.sqrt(2.0 * (m - 1) / 3.0)  # mean of |odd grid|^2
    return pts / scale


def build_constellation(label: str) -> Constellation:
    """Return the constellation for one of bpsk/qam4/qam16/qam64/qam256.

    Point ordering is fixed (BPSK as {-1, +1}; QAM row-major over the
    grid) so seeded Monte-Carlo runs are reproducible bit-for-bit.
    """
    key = label.lower()
    if key not in SUPPORTED_LABELS:
        raise RejectedInput(
            f"unsupported constellation {label!r}; choose from {SUPPORTED_LABELS}")
    if key == "bpsk":
        pts = np.array([-1.0 + 0j, 1.0 + 0j])
    else:
        pts = _square_qam_points(int(key[3:]))
    return Constellation(points=pts, order=pts.size, label=key)


def noise_variance(pm: PhaseModel) -> float:
    """sigma_n^2 = 10^(-snr_db/10), using the unit-energy convention."""
    return 10.0 ** (-pm.snr_db / 10.0)
