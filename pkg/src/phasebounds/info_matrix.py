"""Information-matrix assembly and the dense-inversion oracle.

The hybrid information matrix for the random-walk phase with unknown
linear drift is

    H = [[H11, h12], [h12^T, h22]]

with H11 symmetric tridiagonal (first/last diagonal entries
J + 1/sigma_w^2, interior J + 2/sigma_w^2, off-diagonals -1/sigma_w^2),
h12 zero except +-1/sigma_w^2 at the endpoints, and h22 = (L-1)/sigma_w^2.
The Bayesian information matrix equals H11.

The oracle functions invert dense materializations with a pivoted
factorization.  They deliberately share no code with the closed-form
module so they remain an independent check on it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import RejectedInput, SingularMatrixError

ORACLE_MAX_LEN = 2000


@dataclass(frozen=True)
class HimBlocks:
    """Structured blocks of the hybrid information matrix."""

    a_coef: float   # A = -sigma_w^2 * J - 2
    b_coef: float   # b = -1/sigma_w^2
    block_len: int
    jd: float
    sigma_w2: float

    @property
    def h22(self) -> float:
        return (self.block_len - 1) / self.sigma_w2

    @property
    def h12_nonzeros(self) -> tuple[tuple[int, float], tuple[int, float]]:
        """(index, value) pairs of the two nonzero entries, 1-based."""
        return ((1, 1.0 / self.sigma_w2),
                (self.block_len, -1.0 / self.sigma_w2))

    def h11_dense(self) -> np.ndarray:
        return _tridiag(self.jd, self.sigma_w2, self.block_len)

    def him_dense(self) -> np.ndarray:
        L = self.block_len
        H = np.zeros((L + 1, L + 1))
        H[:L, :L] = self.h11_dense()
        for idx, val in self.h12_nonzeros:
            H[idx - 1, L] = H[L, idx - 1] = val
        H[L, L] = self.h22
        return H


def _tridiag(jd: float, sigma_w2: float, L: int) -> np.ndarray:
    c = 1.0 / sigma_w2
    M = np.diag(np.full(L, jd + 2.0 * c))
    M[0, 0] = M[L - 1, L - 1] = jd + c
    off = np.arange(L - 1)
    M[off, off + 1] = M[off + 1, off] = -c
    if L == 1:
        M[0, 0] = jd
    return M


def build_him(jd: float, sigma_w2: float, L: int) -> HimBlocks:
    """Assemble the HIM blocks for a length-L observation window."""
    if jd <= 0 or sigma_w2 <= 0:
        raise RejectedInput("jd and sigma_w2 must be positive")
    if L < 2:
        raise RejectedInput("the HIM corner structure needs L >= 2 "
                            "(at least one phase transition)")
    return HimBlocks(a_coef=-sigma_w2 * jd - 2.0, b_coef=-1.0 / sigma_w2,
                     block_len=L, jd=jd, sigma_w2=sigma_w2)


def build_bim(jd: float, sigma_w2: float, L: int) -> np.ndarray:
    """Bayesian information matrix: H11 for L >= 2, [jd] for L = 1."""
    if jd <= 0 or sigma_w2 <= 0:
        raise RejectedInput("jd and sigma_w2 must be positive")
    if L < 1:
        raise RejectedInput("L must be >= 1")
    return _tridiag(jd, sigma_w2, L)


def _dense_inv_diag(M: np.ndarray) -> np.ndarray:
    try:
        lu, piv = scipy.linalg.lu_factor(M)
    except scipy.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    if np.any(np.abs(np.diag(lu)) < np.finfo(float).tiny * M.shape[0]):
        raise SingularMatrixError("matrix is singular at working precision")
    inv = scipy.linalg.lu_solve((lu, piv), np.eye(M.shape[0]))
    return np.diag(inv).copy()


def oracle_hcrb_diag(blocks: HimBlocks) -> np.ndarray:
    """Ground-truth hybrid bound diagonal by brute-force dense inversion."""
    if blocks.block_len > ORACLE_MAX_LEN:
        raise RejectedInput(f"oracle capped at L <= {ORACLE_MAX_LEN}")
    return _dense_inv_diag(blocks.him_dense())[:blocks.block_len]


def oracle_bcrb_diag(bim: np.ndarray) -> np.ndarray:
    """Ground-truth Bayesian bound diagonal by brute-force dense inversion."""
    if bim.shape[0] > ORACLE_MAX_LEN:
        raise RejectedInput(f"oracle capped at L <= {ORACLE_MAX_LEN}")
    return _dense_inv_diag(np.asarray(bim, dtype=float))
