"""Spectrum approximants from escape of the trace-map orbit of s(E)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from ..errors import InvalidInput
from ..green import EscapeParams, Membership, escape_status
from ..numerics.intervals import IntervalSet
from ..parallel import grid_map
from .operator import OperatorFamily, schrodinger_arrays

MAX_STEP = 0.01


def real_grid(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(n), 12)


@dataclass(frozen=True)
class SpectrumScan:
    grid: np.ndarray
    status: np.ndarray  # Membership codes
    step: float
    outer: IntervalSet
    inner: IntervalSet


def escape_chunk(of: OperatorFamily, ep: EscapeParams, E: np.ndarray) -> np.ndarray:
    """Membership codes of s(E) for a chunk of real energies."""
    return escape_status(of.trace_map, *schrodinger_arrays(E, of.kappa), ep=ep)


def spectrum_escape(of: OperatorFamily, lo: float | None = None, hi: float | None = None, step: float = 0.005,
                    ep: EscapeParams = EscapeParams(N_max=40), chunk: int = 4096, workers: int = 1) -> SpectrumScan:
    """Bracket the spectrum by the set of energies whose orbit stays bounded.

    Energies whose escape could not be confirmed within N_max count as in
    the spectrum for ``outer`` and out of it for ``inner``.
    """
    if step > MAX_STEP:
        raise InvalidInput(f"grid step {step} exceeds {MAX_STEP}")
    r = of.spectral_bound()
    lo = -r - 0.5 if lo is None else lo
    hi = r + 0.5 if hi is None else hi
    E = real_grid(lo, hi, step)
    status = grid_map(partial(escape_chunk, of, ep), E, workers=workers, chunk=chunk)
    outer = IntervalSet.from_samples(E[status != Membership.ESCAPED], step)
    inner = IntervalSet.from_samples(E[status == Membership.BOUNDED], step)
    return SpectrumScan(E, status, step, outer, inner)


def refine_edge(of: OperatorFamily, inside: float, outside: float, ep: EscapeParams = EscapeParams(N_max=60),
                tol: float = 1e-12) -> float:
    """Bisect between a bounded energy and an escaping one."""
    a, b = float(inside), float(outside)
    while abs(b - a) > tol:
        m = 0.5 * (a + b)
        st = escape_status(of.trace_map, *schrodinger_arrays(np.array([m]), of.kappa), ep=ep)[0]
        if st == Membership.BOUNDED:
            a = m
        else:
            b = m
    return a
