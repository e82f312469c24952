"""Eigenvalues of real symmetric tridiagonal matrices.

The reference solver is Sturm-count bisection: the number of negative
pivots of the LDL^T factorization of ``T - x`` equals the number of
eigenvalues below ``x``.  All eigen-indices are bisected at once with numpy,
so the cost is O(L) vector operations of width L per bisection step.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from ..errors import InvalidInput

PIVOT_FLOOR = 1e-300
EIG_TOL = 1e-10


def _as_arrays(diag, offdiag) -> tuple[np.ndarray, np.ndarray]:
    d = np.asarray(diag, dtype=float).ravel()
    e = np.asarray(offdiag, dtype=float).ravel()
    if d.size < 1:
        raise InvalidInput("tridiagonal matrix needs at least one diagonal entry")
    if e.size != d.size - 1:
        raise InvalidInput(f"off-diagonal length {e.size} != {d.size - 1}")
    return d, e


def gershgorin_interval(diag, offdiag) -> tuple[float, float]:
    d, e = _as_arrays(diag, offdiag)
    r = np.zeros_like(d)
    r[:-1] += np.abs(e)
    r[1:] += np.abs(e)
    return float((d - r).min()), float((d + r).max())


def sturm_count(diag, offdiag, x) -> np.ndarray:
    """Number of eigenvalues strictly below each entry of ``x``."""
    d, e = _as_arrays(diag, offdiag)
    x = np.asarray(x, dtype=float)
    e2 = e * e
    q = d[0] - x
    q = np.where(np.abs(q) < PIVOT_FLOOR, -PIVOT_FLOOR, q)
    count = (q < 0).astype(np.int64)
    for i in range(1, d.size):
        q = d[i] - x - e2[i - 1] / q
        q = np.where(np.abs(q) < PIVOT_FLOOR, -PIVOT_FLOOR, q)
        count += q < 0
    return count


def tridiag_eigenvalues(diag, offdiag, tol: float = EIG_TOL, method: str = "sturm") -> np.ndarray:
    """All eigenvalues in ascending order.

    ``method="sturm"`` is the in-house bisection (absolute accuracy ``tol``).
    ``method="lapack"`` hands the same matrix to LAPACK's root-free QR
    (``sterf``); it is used for bulk density-of-states work where thousands
    of windows are diagonalized.
    """
    d, e = _as_arrays(diag, offdiag)
    L = d.size
    if L == 1:
        return d.copy()
    if method == "lapack":
        return eigvalsh_tridiagonal(d, e, lapack_driver="sterf")
    if method != "sturm":
        raise InvalidInput(f"unknown eigen method {method!r}")
    lo, hi = gershgorin_interval(d, e)
    pad = 1e-12 * max(1.0, abs(lo), abs(hi))
    lo -= pad
    hi += pad
    k = np.arange(L)
    a = np.full(L, lo)
    b = np.full(L, hi)
    steps = max(1, math.ceil(math.log2((hi - lo) / (0.5 * tol))))
    for _ in range(steps):
        mid = 0.5 * (a + b)
        below = sturm_count(d, e, mid) > k
        b = np.where(below, mid, b)
        a = np.where(below, a, mid)
    return 0.5 * (a + b)
