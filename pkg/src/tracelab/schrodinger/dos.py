"""Density of states from Dirichlet windows, and quantities derived from it."""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidInput
from ..numerics.measure import SpectralMeasure
from ..numerics.tridiag import tridiag_eigenvalues
from .operator import LyapunovSample, Method, OperatorFamily


def dirichlet_eigenvalues(of: OperatorFamily, offset: int, L: int, method: str = "sturm") -> np.ndarray:
    """Eigenvalues of H restricted to sites [offset, offset + L)."""
    if L < 1 or offset < 0:
        raise InvalidInput("need L >= 1 and offset >= 0")
    of.need(offset + L)
    diag = of.kappa * of.potential[offset:offset + L].astype(float)
    return tridiag_eigenvalues(diag, np.ones(L - 1), method=method)


def density_of_states(of: OperatorFamily, L: int, n_windows: int = 64, method: str = "lapack",
                      stride: int = 1) -> SpectralMeasure:
    """Average of the eigenvalue counting measures of ``n_windows`` windows.

    The windows start at offsets 0, stride, 2 stride, ... along the
    invariant word (consecutive offsets by default).  A stride of a hundred
    or more decorrelates the windows' boundary states, which matters when
    comparing DOS at different L.  Windows with identical potential are
    diagonalized once.
    """
    if n_windows < 1 or stride < 1:
        raise InvalidInput("need at least one window and a positive stride")
    of.need((n_windows - 1) * stride + L)
    cache: dict[bytes, np.ndarray] = {}
    blocks = []
    for off in range(0, n_windows * stride, stride):
        key = (of.kappa * of.potential[off:off + L]).tobytes()
        if key not in cache:
            cache[key] = dirichlet_eigenvalues(of, off, L, method=method)
        blocks.append(cache[key])
    atoms = np.concatenate(blocks)
    return SpectralMeasure(atoms, np.full(atoms.size, 1.0 / atoms.size))


def lyapunov_thouless(E: complex, dos: SpectralMeasure, strict: bool = False) -> LyapunovSample:
    dos.require_probability()
    return LyapunovSample(complex(E), float(dos.log_potential(E, strict=strict)), Method.THOULESS)


def lyapunov_thouless_batch(E, dos: SpectralMeasure) -> np.ndarray:
    dos.require_probability()
    return dos.log_potential(np.asarray(E, dtype=complex))


def capacity_check(dos: SpectralMeasure, E0: complex) -> float:
    """gamma(E0) - ln|E0| from the Thouless formula; near 0 when the capacity is one."""
    radius = float(np.abs(dos.atoms).max())
    if abs(E0) < 100 * radius:
        raise InvalidInput(f"|E0| = {abs(E0):.3g} is below 100 x spectral radius {radius:.3g}")
    return float(dos.log_potential(E0)) - math.log(abs(E0))


def max_window_mass(dos: SpectralMeasure, delta: float) -> float:
    """sup_E dos((E, E + delta]), computed exactly over the atoms."""
    a = dos.atoms
    cum = np.concatenate([[0.0], np.cumsum(dos.weights)])
    # windows ending at each atom are the only candidates for the maximum
    j = np.searchsorted(a, a - delta, side="right")
    i = np.searchsorted(a, a, side="right")
    return float((cum[i] - cum[j]).max())


def holder_estimate_ids(dos: SpectralMeasure, deltas) -> float:
    """Slope of ln sup_E |k(E + delta) - k(E)| against ln delta."""
    deltas = np.asarray(list(deltas), dtype=float)
    if deltas.size < 4:
        raise InvalidInput("need at least 4 deltas")
    dos.require_probability()
    mass = np.array([max_window_mass(dos, d) for d in deltas])
    return float(np.polyfit(np.log(deltas), np.log(mass), 1)[0])


def free_ids(E) -> np.ndarray:
    """Integrated density of states of the free operator: 1 - arccos(E/2)/pi on [-2, 2]."""
    E = np.clip(np.asarray(E, dtype=float), -2.0, 2.0)
    return 1.0 - np.arccos(E / 2.0) / np.pi


def free_lyapunov(E) -> np.ndarray:
    """Lyapunov exponent of the free operator, ln|(E + sqrt(E^2 - 4)) / 2| on the outer branch."""
    E = np.asarray(E, dtype=complex)
    s = np.sqrt(E * E - 4)
    return np.log(np.maximum(np.abs(E + s), np.abs(E - s)) / 2)


# -- potential-theory diagnostics ----------------------------------------------

def integrated_laplacian(values: np.ndarray, h: float) -> float:
    """h^2 times the sum of the 5-point Laplacian over interior nodes.

    ``values`` is sampled on a square grid of spacing ``h``; by summation by
    parts this equals the discrete outward flux through the boundary.
    """
    v = np.asarray(values, dtype=float)
    lap = (v[2:, 1:-1] + v[:-2, 1:-1] + v[1:-1, 2:] + v[1:-1, :-2] - 4 * v[1:-1, 1:-1]) / h**2
    return float(lap.sum() * h * h)


def laplacian_grid(re_lo: float, re_hi: float, im_lo: float, im_hi: float, h: float) -> np.ndarray:
    """Complex grid with spacing h; rows are Im E, columns Re E."""
    nx = int(round((re_hi - re_lo) / h)) + 1
    ny = int(round((im_hi - im_lo) / h)) + 1
    xs = re_lo + h * np.arange(nx)
    ys = im_lo + h * np.arange(ny)
    return xs[None, :] + 1j * ys[:, None]


def circle_mean(f, center: complex, radius: float = 0.05, n: int = 16) -> float:
    pts = center + radius * np.exp(2j * np.pi * np.arange(n) / n)
    return float(np.mean(f(pts)))
