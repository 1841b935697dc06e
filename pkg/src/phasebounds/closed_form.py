"""Analytical bound expressions: no matrix is ever materialized or
inverted on this path.

The tridiagonal structure gives the characteristic roots r1 < r2 of
r^2 - (J + 2/sigma_w^2) r + 1/sigma_w^4 = 0.  Every leading principal
minor of the information matrix is c1*r1^k + c2*r2^k with weights fixed
by the corner entries, and all bound values reduce to ratios of such
terms.  Powers are evaluated as (r1/r2)^k so nothing overflows for any
block length.

Published transcriptions of these expressions carry index ambiguities;
the forms below are re-derived from the matrix structure and are pinned
to the dense-inversion oracle by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConsistencyError, RejectedInput


@dataclass(frozen=True)
class ClosedFormCoefs:
    """Scalars shared by every bound evaluation at fixed (jd, sigma_w2)."""

    r1: float
    r2: float
    rho1: float
    rho2: float
    a_coef: float
    b_coef: float
    jd: float
    sigma_w2: float
    # minor-expansion weights: leading minor_k = c1*r1^k + c2*r2^k
    c1: float
    c2: float

    @property
    def q(self) -> float:
        """Root ratio r1/r2, in (0, 1)."""
        return self.r1 / self.r2


@dataclass(frozen=True)
class BoundValue:
    """One bound evaluation, tagged with what it is and where."""

    value: float
    kind: str        # "bcrb" | "hcrb"
    mode: str        # "online" | "offline"
    position: int
    block_len: int

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value <= 0:
            raise ConsistencyError(f"invalid bound value {self.value}")
        if not 1 <= self.position <= self.block_len:
            raise RejectedInput("position out of range")


def coefs(jd: float, sigma_w2: float) -> ClosedFormCoefs:
    """Characteristic roots and weights for fixed (jd, sigma_w2).

    r1 is obtained as b^2/r2 and (s - 1) by rationalization, so there is
    no cancellation when jd*sigma_w2 is small or large.
    """
    if jd <= 0 or sigma_w2 <= 0:
        raise RejectedInput("jd and sigma_w2 must be positive")
    b = -1.0 / sigma_w2
    a = -sigma_w2 * jd - 2.0
    g = 4.0 / (jd * sigma_w2)
    s = math.sqrt(1.0 + g)
    s_minus_1 = g / (1.0 + s)
    r2 = 1.0 / sigma_w2 + jd * (1.0 + s) / 2.0
    r1 = (b * b) / r2
    c1 = s_minus_1 / (2.0 * s)
    c2 = (1.0 + s) / (2.0 * s)
    return ClosedFormCoefs(r1=r1, r2=r2, rho1=-s * c1 * c1, rho2=s * c2 * c2,
                           a_coef=a, b_coef=b, jd=jd, sigma_w2=sigma_w2,
                           c1=c1, c2=c2)


def det_b(cf: ClosedFormCoefs, L: int) -> tuple[float, float]:
    """(sign, log-magnitude) of the L x L information-matrix determinant.

    Three-term recurrence d_k = (b*A)*d_{k-1} - b^2*d_{k-2} with the
    corner corrections at both ends, rescaled every step: raw magnitudes
    pass 1e138 near L = 60 at sigma_w2 = 0.005.
    """
    if L < 1:
        raise RejectedInput("L must be >= 1")
    b, a = cf.b_coef, cf.a_coef
    d_edge = b * (a + 1.0)           # jd + 1/sigma_w^2
    d_int = b * a                    # jd + 2/sigma_w^2
    b2 = b * b
    if L == 1:
        return math.copysign(1.0, d_edge), math.log(abs(d_edge))
    log_scale = 0.0
    prev, cur = 1.0, d_edge
    for k in range(2, L + 1):
        diag = d_edge if k == L else d_int
        nxt = diag * cur - b2 * prev
        scale = abs(nxt)
        if scale == 0.0:
            return 0.0, -math.inf
        prev, cur = cur / scale, nxt / scale
        log_scale += math.log(scale)
    return math.copysign(1.0, cur), log_scale


def _pow(base: float, k: int) -> float:
    """base**k for base in (0, 1), flushing sub-normal results to zero
    (they contribute nothing and libm pow slows down on them)."""
    if k * math.log(base) < -708.0:
        return 0.0
    return base ** k


def _denom(cf: ClosedFormCoefs, L: int) -> float:
    """Determinant of the L x L matrix divided by r2^(L-1); positive."""
    b = cf.b_coef
    return (cf.c1 * (cf.r1 + b) * _pow(cf.q, L - 1) + cf.c2 * (cf.r2 + b))


def _minor_ratio(cf: ClosedFormCoefs, k: int) -> float:
    """Leading k x k principal minor divided by r2^k (0 <= k <= L-1)."""
    return cf.c1 * _pow(cf.q, k) + cf.c2


def bcrb_offline(cf: ClosedFormCoefs, L: int, l: int) -> BoundValue:
    """Off-line Bayesian bound on theta_l from a length-L block."""
    if L < 2:
        raise RejectedInput("offline bounds need L >= 2")
    if not 1 <= l <= L:
        raise RejectedInput(f"position {l} out of range [1, {L}]")
    value = _minor_ratio(cf, l - 1) * _minor_ratio(cf, L - l) / _denom(cf, L)
    return BoundValue(value=value, kind="bcrb", mode="offline",
                      position=l, block_len=L)


def _lambda_schur(cf: ClosedFormCoefs, L: int, denom: float) -> float:
    b = cf.b_coef
    sqq = (-b) / cf.r2   # sqrt(r1/r2), exact since b^2 = r1*r2
    lam = (-(L - 1) * b
           - 2.0 * b * b * (_minor_ratio(cf, L - 1) - _pow(sqq, L - 1))
           / denom)
    if lam <= 0:
        raise ConsistencyError(
            f"Schur-complement scalar {lam} <= 0 at L={L}: "
            "formula transcription bug, not a user error")
    return lam


def h11_inv_edge(cf: ClosedFormCoefs, L: int, l: int) -> tuple[float, float]:
    """First- and last-column elements (row l) of the inverse information
    matrix, feeding the drift-uncertainty correction."""
    if L < 2 or not 1 <= l <= L:
        raise RejectedInput("need L >= 2 and 1 <= l <= L")
    denom = _denom(cf, L)
    sqq = (-cf.b_coef) / cf.r2
    first = _pow(sqq, l - 1) * _minor_ratio(cf, L - l) / denom
    last = _pow(sqq, L - l) * _minor_ratio(cf, l - 1) / denom
    return first, last


def hcrb_offline(cf: ClosedFormCoefs, L: int, l: int) -> BoundValue:
    """Off-line hybrid bound: the Bayesian term plus the rank-one
    correction for the unknown linear drift."""
    base = bcrb_offline(cf, L, l)
    denom = _denom(cf, L)
    lam = _lambda_schur(cf, L, denom)
    first, last = h11_inv_edge(cf, L, l)
    b2 = cf.b_coef * cf.b_coef
    value = base.value + (b2 / lam) * (first - last) ** 2
    return BoundValue(value=value, kind="hcrb", mode="offline",
                      position=l, block_len=L)


def bcrb_online(cf: ClosedFormCoefs, l: int) -> BoundValue:
    """On-line Bayesian bound on theta_l from observations 1..l."""
    if l < 1:
        raise RejectedInput("l must be >= 1")
    if l == 1:
        # single observation, no prior information
        value = 1.0 / cf.jd
    else:
        value = bcrb_offline(cf, l, l).value
    return BoundValue(value=value, kind="bcrb", mode="online",
                      position=l, block_len=l)


def hcrb_online(cf: ClosedFormCoefs, l: int) -> BoundValue:
    """On-line hybrid bound on theta_l from observations 1..l."""
    if l < 2:
        raise RejectedInput("the hybrid bound needs l >= 2 (the drift is "
                            "unobservable from a single sample)")
    value = hcrb_offline(cf, l, l).value
    return BoundValue(value=value, kind="hcrb", mode="online",
                      position=l, block_len=l)
