"""Per-symbol Fisher information about the carrier phase.

The data-aided value has the closed form 2/sigma_n^2.  The non-data-aided
value marginalizes the symbol over the constellation and has no closed
form, so it is estimated by seeded Monte Carlo over (symbol, noise) draws.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import RejectedInput
from .model import DA, NDA, Constellation, PhaseModel, noise_variance

DEFAULT_N_SAMPLES = 1_000_000
MIN_N_SAMPLES = 1_000
_CHUNK = 1 << 16


@dataclass(frozen=True)
class FisherEstimate:
    """The scalar information J with Monte-Carlo uncertainty metadata."""

    jd: float
    std_error: float
    n_samples: int
    scenario: str
    seed: int = 0

    def __post_init__(self):
        if self.jd <= 0:
            raise RejectedInput("jd must be positive")
        if self.scenario == DA and (self.std_error != 0 or self.n_samples != 0):
            raise RejectedInput("DA estimates are exact: no MC metadata")
        if self.scenario == NDA and self.n_samples < 1:
            raise RejectedInput("NDA estimates need n_samples >= 1")


def fisher_da(pm: PhaseModel) -> FisherEstimate:
    """Exact data-aided information 2/sigma_n^2."""
    if pm.scenario != DA:
        raise RejectedInput(f"fisher_da requires a DA model, got {pm.scenario!r}")
    return FisherEstimate(jd=2.0 / noise_variance(pm), std_error=0.0,
                          n_samples=0, scenario=DA)


def _curvature_batch(y: np.ndarray, theta: float, points: np.ndarray,
                     sigma_n2: float) -> np.ndarray:
    """Second theta-derivative of the marginalized log-likelihood, one
    value per observation.  Weights are softmax-normalized so the shared
    exp factors cancel and nothing under/overflows at high SNR."""
    z = y[:, None] * np.conj(points)[None, :] * np.exp(-1j * theta)
    u = (2.0 * z.real - np.abs(points)[None, :] ** 2) / sigma_n2
    u -= u.max(axis=1, keepdims=True)
    w = np.exp(u)
    w /= w.sum(axis=1, keepdims=True)
    g = 2.0 * z.imag / sigma_n2
    g_dot = -2.0 * z.real / sigma_n2
    mean_g = (w * g).sum(axis=1)
    return (w * (g * g + g_dot)).sum(axis=1) - mean_g ** 2


def nda_curvature(y: complex, theta: float, c: Constellation,
                  sigma_n2: float) -> float:
    """Pointwise curvature of the NDA log-likelihood in theta."""
    if not (np.isfinite(y) and np.isfinite(theta)):
        raise RejectedInput("non-finite observation or phase")
    if not (np.isfinite(sigma_n2) and sigma_n2 > 0):
        raise RejectedInput("sigma_n2 must be positive and finite")
    out = _curvature_batch(np.array([y], dtype=np.complex128), theta,
                           c.points, sigma_n2)
    return float(out[0])


def nda_loglik(y: complex, theta: float, c: Constellation,
               sigma_n2: float) -> float:
    """Marginalized log-likelihood ln sum_s p(y|s,theta)/M, up to an
    additive constant independent of theta (used by derivative checks)."""
    z = y * np.conj(c.points) * np.exp(-1j * theta)
    u = (2.0 * z.real - np.abs(c.points) ** 2) / sigma_n2
    return float(logsumexp(u) - np.log(c.order))


def _chunk_stats(seed: int, chunk_idx: int, n: int, points: np.ndarray,
                 sigma_n2: float, theta0: float) -> tuple[float, float]:
    rng = np.random.Generator(np.random.Philox(key=seed).jumped(chunk_idx))
    idx = rng.integers(0, points.size, size=n)
    noise = rng.normal(scale=np.sqrt(sigma_n2 / 2.0), size=(n, 2))
    y = points[idx] * np.exp(1j * theta0) + noise[:, 0] + 1j * noise[:, 1]
    curv = _curvature_batch(y, theta0, points, sigma_n2)
    return float(curv.sum()), float(np.square(curv).sum())


def fisher_nda_mc(pm: PhaseModel, c: Constellation,
                  n_samples: int = DEFAULT_N_SAMPLES, seed: int = 0,
                  n_workers: int = 1, theta0: float = 0.0) -> FisherEstimate:
    """Monte-Carlo estimate of the NDA information.

    Samples are partitioned into fixed counter-based substreams (one
    Philox jump per chunk) and the per-chunk sums are combined in chunk
    order, so the result is bit-identical for any n_workers.

    theta0 is the phase the observations are generated at; the estimate
    is theta0-invariant up to MC noise and defaults to 0.
    """
    if pm.scenario != NDA:
        raise RejectedInput(f"fisher_nda_mc requires an NDA model, got {pm.scenario!r}")
    if n_samples < MIN_N_SAMPLES:
        raise RejectedInput(
            f"n_samples={n_samples} below floor {MIN_N_SAMPLES}: "
            "Monte-Carlo noise would dominate")
    sigma_n2 = noise_variance(pm)
    sizes = [_CHUNK] * (n_samples // _CHUNK)
    if n_samples % _CHUNK:
        sizes.append(n_samples % _CHUNK)
    args = [(seed, i, n, c.points, sigma_n2, theta0)
            for i, n in enumerate(sizes)]
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            stats = list(pool.map(lambda a: _chunk_stats(*a), args))
    else:
        stats = [_chunk_stats(*a) for a in args]
    total = 0.0
    total_sq = 0.0
    for s, s2 in stats:
        total += s
        total_sq += s2
    mean = -total / n_samples
    var = (total_sq - n_samples * mean ** 2) / (n_samples - 1)
    return FisherEstimate(jd=mean, std_error=float(np.sqrt(var / n_samples)),
                          n_samples=n_samples, scenario=NDA, seed=seed)
