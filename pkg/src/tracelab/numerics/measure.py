"""Finite atomic measures on the real line."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import AtAtom, EmptySet, InvalidInput, NotProbability
from ..io import read_csv, write_csv

log = logging.getLogger(__name__)

MASS_TOL = 1e-12
ATOM_TOL = 1e-14


@dataclass(frozen=True)
class SpectralMeasure:
    atoms: np.ndarray
    weights: np.ndarray
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = np.asarray(self.atoms, dtype=float).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()
        if a.size == 0:
            raise EmptySet("measure needs at least one atom")
        if a.shape != w.shape:
            raise InvalidInput("atoms and weights differ in length")
        if not (w > 0).all():
            raise InvalidInput("weights must be positive")
        order = np.argsort(a, kind="stable")
        a, w = a[order], w[order]
        object.__setattr__(self, "atoms", a)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "_cum", np.cumsum(w))

    @classmethod
    def uniform(cls, atoms) -> "SpectralMeasure":
        atoms = np.asarray(atoms, dtype=float).ravel()
        return cls(atoms, np.full(atoms.size, 1.0 / max(atoms.size, 1)))

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def is_probability(self) -> bool:
        return abs(self.total_mass - 1.0) <= MASS_TOL

    def require_probability(self) -> None:
        if not self.is_probability():
            raise NotProbability(f"total mass {self.total_mass!r} is not 1")

    def mean(self) -> float:
        return float(np.dot(self.atoms, self.weights) / self.total_mass)

    def cdf(self, x):
        """Mass of atoms <= x (right-continuous)."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.atoms, x, side="right")
        out = np.where(idx > 0, self._cum[np.maximum(idx - 1, 0)], 0.0)
        return float(out) if out.ndim == 0 else out

    def cdf_left(self, x):
        """Mass of atoms < x (left limit of the CDF)."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.atoms, x, side="left")
        out = np.where(idx > 0, self._cum[np.maximum(idx - 1, 0)], 0.0)
        return float(out) if out.ndim == 0 else out

    def compressed(self, decimals: int = 12) -> "SpectralMeasure":
        """Merge atoms equal after rounding; exact for repeated windows."""
        key = np.round(self.atoms, decimals)
        uniq, inv = np.unique(key, return_inverse=True)
        w = np.bincount(inv, weights=self.weights)
        a = np.bincount(inv, weights=self.atoms * self.weights) / w
        return SpectralMeasure(a, w)

    def log_potential(self, E, strict: bool = False, chunk: int = 2**22):
        """sum_j w_j ln|E - atom_j| for scalar or array ``E``.

        Where ``E`` sits on an atom (within 1e-14) the value is ``-inf``; this
        is logged, or raised as ``AtAtom`` when ``strict`` is set.
        """
        E = np.asarray(E, dtype=complex)
        flat = E.ravel()
        out = np.empty(flat.size)
        step = max(1, chunk // self.atoms.size)
        hit = False
        for s in range(0, flat.size, step):
            blk = flat[s:s + step, None] - self.atoms[None, :]
            mag = np.abs(blk)
            at = (mag <= ATOM_TOL).any(axis=1)
            with np.errstate(divide="ignore"):
                out[s:s + step] = np.log(mag) @ self.weights
            out[s:s + step][at] = -np.inf
            hit |= bool(at.any())
        if hit:
            if strict:
                raise AtAtom("evaluation point coincides with an atom")
            log.warning("log potential evaluated on an atom; returning -inf")
        out = out.reshape(E.shape)
        return float(out) if out.ndim == 0 else out

    def to_csv(self, path, manifest_digest: str | None = None) -> None:
        write_csv(path, ["atom", "weight"], zip(self.atoms, self.weights), manifest_digest)

    @classmethod
    def from_csv(cls, path) -> "SpectralMeasure":
        _, rows, _ = read_csv(path)
        arr = np.array(rows, dtype=float).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1])


def cdf(m: SpectralMeasure, x):
    return m.cdf(x)


def log_potential(m: SpectralMeasure, E, strict: bool = False):
    m.require_probability()
    return m.log_potential(E, strict=strict)


def kolmogorov_distance(m1: SpectralMeasure, m2: SpectralMeasure) -> float:
    """sup_x |F1(x) - F2(x)| for two probability measures."""
    m1.require_probability()
    m2.require_probability()
    pts = np.union1d(m1.atoms, m2.atoms)
    return float(np.abs(m1.cdf(pts) - m2.cdf(pts)).max())


def kolmogorov_to_cdf(m: SpectralMeasure, F) -> float:
    """sup_x |F_m(x) - F(x)| against a continuous distribution function ``F``."""
    m.require_probability()
    Fa = np.asarray(F(m.atoms), dtype=float)
    right = np.abs(m.cdf(m.atoms) - Fa)
    left = np.abs(m.cdf_left(m.atoms) - Fa)
    return float(max(right.max(), left.max()))
