"""Finite unions of disjoint closed intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import EmptySet, InvalidInput
from ..io import read_csv, write_csv


@dataclass(frozen=True)
class IntervalSet:
    intervals: np.ndarray  # shape (k, 2), sorted, disjoint

    def __post_init__(self):
        iv = np.asarray(self.intervals, dtype=float).reshape(-1, 2)
        if (iv[:, 0] > iv[:, 1]).any():
            raise InvalidInput("interval with lo > hi")
        iv = iv[np.argsort(iv[:, 0], kind="stable")]
        merged: list[list[float]] = []
        for lo, hi in iv:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        object.__setattr__(self, "intervals", np.array(merged, dtype=float).reshape(-1, 2))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(np.zeros((0, 2)))

    @classmethod
    def from_samples(cls, points, step: float) -> "IntervalSet":
        """Merge accepted grid points closer than one grid step into intervals."""
        pts = np.sort(np.asarray(points, dtype=float).ravel())
        if pts.size == 0:
            return cls.empty()
        breaks = np.nonzero(np.diff(pts) > step * (1 + 1e-9))[0]
        starts = np.concatenate([[0], breaks + 1])
        ends = np.concatenate([breaks, [pts.size - 1]])
        return cls(np.column_stack([pts[starts], pts[ends]]))

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(map(tuple, self.intervals))

    def is_empty(self) -> bool:
        return len(self.intervals) == 0

    def total_length(self) -> float:
        return float((self.intervals[:, 1] - self.intervals[:, 0]).sum())

    def contains(self, x, tol: float = 0.0):
        x = np.asarray(x, dtype=float)
        i = np.searchsorted(self.intervals[:, 0], x + tol, side="right") - 1
        ok = i >= 0
        i = np.maximum(i, 0)
        res = ok & (x <= self.intervals[i, 1] + tol) if len(self) else np.zeros(x.shape, bool)
        return bool(res) if res.ndim == 0 else res

    def is_subset(self, other: "IntervalSet", tol: float = 1e-12) -> bool:
        for lo, hi in self:
            j = np.searchsorted(other.intervals[:, 0], lo + tol, side="right") - 1
            if j < 0 or other.intervals[j, 1] < hi - tol:
                return False
        return True

    def distance_to(self, x) -> np.ndarray:
        """Distance from each point of ``x`` to the set."""
        if self.is_empty():
            raise EmptySet("distance to an empty interval set")
        x = np.asarray(x, dtype=float)
        lo, hi = self.intervals[:, 0], self.intervals[:, 1]
        d = np.maximum(lo[None, :] - x.reshape(-1, 1), x.reshape(-1, 1) - hi[None, :])
        return np.maximum(d, 0).min(axis=1).reshape(x.shape)

    def gap_midpoints(self) -> np.ndarray:
        return 0.5 * (self.intervals[1:, 0] + self.intervals[:-1, 1])

    def box_count(self, eps: float) -> int:
        """Number of grid boxes [k eps, (k+1) eps] whose interior meets the set.

        Endpoints lying on a box edge (up to a 1e-9 relative slack) do not
        claim the neighbouring box, so [0, 1] at eps = 0.1 counts 10 boxes.
        A single point counts one box.
        """
        if eps <= 0:
            raise InvalidInput("eps must be positive")
        if self.is_empty():
            return 0
        slack = 1e-9
        k_lo = np.floor(self.intervals[:, 0] / eps + slack).astype(np.int64)
        k_hi = np.ceil(self.intervals[:, 1] / eps - slack).astype(np.int64) - 1
        k_hi = np.maximum(k_hi, k_lo)
        total, last = 0, None
        for a, b in zip(k_lo, k_hi):
            if last is not None and a <= last:
                a = last + 1
            if b >= a:
                total += int(b - a + 1)
            last = b if last is None else max(last, b)
        return total

    def to_csv(self, path, manifest_digest: str | None = None) -> None:
        write_csv(path, ["lo", "hi"], self.intervals, manifest_digest)

    @classmethod
    def from_csv(cls, path) -> "IntervalSet":
        _, rows, _ = read_csv(path)
        return cls(np.array(rows, dtype=float).reshape(-1, 2))


def _one_sided(a: IntervalSet, b: IntervalSet) -> float:
    # d(., b) restricted to a is maximal at a's endpoints or at b's gap midpoints inside a
    mids = b.gap_midpoints()
    cand = np.concatenate([a.intervals.ravel(), mids[a.contains(mids)] if mids.size else mids])
    return float(b.distance_to(cand).max())


def hausdorff_distance(a: IntervalSet, b: IntervalSet) -> float:
    if a.is_empty() or b.is_empty():
        raise EmptySet("Hausdorff distance needs two non-empty sets")
    return max(_one_sided(a, b), _one_sided(b, a))


def total_length(s: IntervalSet) -> float:
    return s.total_length()


def box_count(s: IntervalSet, eps: float) -> int:
    return s.box_count(eps)


def cantor_set(depth: int, lo: float = 0.0, hi: float = 1.0) -> IntervalSet:
    """Middle-thirds Cantor approximant with 2**depth intervals."""
    iv = [(lo, hi)]
    for _ in range(depth):
        nxt = []
        for a, b in iv:
            t = (b - a) / 3
            nxt += [(a, a + t), (b - t, b)]
        iv = nxt
    return IntervalSet(np.array(iv))


def box_dimension(s: IntervalSet, eps_range) -> float:
    """Least-squares slope of ln N(eps) against ln(1/eps)."""
    eps = np.asarray(list(eps_range), dtype=float)
    if eps.size < 4:
        raise InvalidInput("box dimension needs at least 4 scales")
    if s.is_empty():
        raise EmptySet("box dimension of an empty set")
    counts = np.array([s.box_count(e) for e in eps], dtype=float)
    slope = np.polyfit(np.log(1 / eps), np.log(counts), 1)[0]
    return float(slope)


def geometric_eps(hi: float, lo: float, n: int) -> np.ndarray:
    return np.exp(np.linspace(math.log(hi), math.log(lo), n))
