"""Dense linear algebra kernel: SVD pseudoinverse and least-squares solves.

All solves go through a single SVD-based Moore-Penrose pseudoinverse with a
singular-value cutoff.  For full-rank systems this coincides with the primal
normal-equation solution (A^T A)^-1 A^T b when the system is over-determined,
and with the dual solution A^T (A A^T)^-1 b when it is under-determined; the
SVD route additionally handles rank deficiency and gives the minimum-norm
least-squares solution in every case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericalError, RankDeficiencyError

__all__ = ["PinvResult", "as_matrix", "pinv", "solve_least_squares", "sse"]


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and convert input to a 2-D float64 array.

    Requires at least one row and one column and all-finite entries.
    """
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"{name} must be non-empty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalError(f"{name} contains non-finite entries")
    return m


@dataclass(frozen=True)
class PinvResult:
    """Pseudoinverse of a matrix together with the numerical rank used.

    Attributes
    ----------
    pinv : ndarray, shape (cols, rows) of the input
    rank : int
        Number of singular values kept (above the cutoff).
    tolerance : float
        Absolute singular-value cutoff that was applied.
    """

    pinv: np.ndarray
    rank: int
    tolerance: float


def pinv(a, rcond: float | None = None) -> PinvResult:
    """Moore-Penrose pseudoinverse via SVD with a singular-value cutoff.

    Parameters
    ----------
    a : array-like, shape (m, d)
    rcond : float, optional
        Relative cutoff; singular values below ``rcond * sigma_max`` are
        treated as zero.  Defaults to ``max(m, d) * eps * sigma_max``.

    Returns
    -------
    PinvResult
        Satisfies the four defining pseudoinverse conditions to numerical
        tolerance: A X A = A, X A X = X, and both A X and X A symmetric.
    """
    m = as_matrix(a, "a")
    try:
        u, s, vt = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed to converge for shape {m.shape}") from exc
    sigma_max = s[0] if s.size else 0.0
    if rcond is None:
        rcond = max(m.shape) * np.finfo(np.float64).eps
    tol = rcond * sigma_max
    kept = s > tol
    rank = int(np.count_nonzero(kept))
    inv_s = np.zeros_like(s)
    inv_s[kept] = 1.0 / s[kept]
    return PinvResult(pinv=(vt.T * inv_s) @ u.T, rank=rank, tolerance=float(tol))


def solve_least_squares(a, b) -> np.ndarray:
    """Minimum-norm least-squares solution of ``a @ theta = b``.

    ``b`` may be a vector or a matrix of stacked right-hand sides; solving
    column-by-column and solving the matrix equation in one call agree.
    """
    am = as_matrix(a, "a")
    bm = np.asarray(b, dtype=np.float64)
    squeeze = bm.ndim == 1
    if squeeze:
        bm = bm[:, None]
    bm = as_matrix(bm, "b")
    if am.shape[0] != bm.shape[0]:
        raise DimensionError(
            f"row mismatch: a has {am.shape[0]} rows, b has {bm.shape[0]}"
        )
    theta = pinv(am).pinv @ bm
    return theta[:, 0] if squeeze else theta


def sse(a, theta, b) -> float:
    """Sum of squared errors ``trace((A T - B)^T (A T - B))``.

    Computed as a direct elementwise sum of squared residuals; the Gram
    product is never formed.
    """
    am = as_matrix(a, "a")
    tm = np.asarray(theta, dtype=np.float64)
    if tm.ndim == 0:
        tm = tm.reshape(1, 1)
    elif tm.ndim == 1:
        tm = tm[:, None]
    bm = np.asarray(b, dtype=np.float64)
    if bm.ndim == 1:
        bm = bm[:, None]
    if am.shape[1] != tm.shape[0]:
        raise DimensionError(
            f"inner mismatch: a has {am.shape[1]} cols, theta has {tm.shape[0]} rows"
        )
    if am.shape[0] != bm.shape[0] or tm.shape[1] != bm.shape[1]:
        raise DimensionError(
            f"result mismatch: a@theta is {am.shape[0]}x{tm.shape[1]}, "
            f"b is {bm.shape[0]}x{bm.shape[1]}"
        )
    r = am @ tm - bm
    return float(np.sum(r * r))


def require_rank(result: PinvResult, what: str) -> PinvResult:
    """Raise if a pseudoinverse found no usable singular values."""
    if result.rank == 0:
        raise RankDeficiencyError(f"{what} is numerically rank-deficient (rank 0)")
    return result
