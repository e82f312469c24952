"""Real roots of tr M(iota^n(a))(E) = target.

The trace of the transfer matrix over a word of length l is a monic real
polynomial of degree l in E.  Roots are located by scanning at step 1e-3,
then refining the scan where the trace oscillates faster than the grid can
resolve, and finally bisecting each sign change to 1e-10.  Critical points
of the trace are located as well: a critical value indistinguishable from
the target is a double root (a closed gap), which no sign change reveals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..numerics.intervals import IntervalSet
from ..substitution import potential_array
from .operator import OperatorFamily

SCAN_STEP = 1e-3
ROOT_TOL = 1e-10
MAX_REFINE = 40
# resolved when one cell moves the trace by at most this much
CELL_SWING = 0.25
DOUBLE_ROOT_TOL = 1e-7
LN2 = math.log(2.0)
RESCALE_EVERY = 32


def trace_and_derivative(potential: np.ndarray, E: np.ndarray, kappa: float, target: float):
    """g(E) = tr M(E) - target and g'(E), as (sign, log|.|) pairs.

    Forward-mode differentiation of the transfer product with one shared
    base-2 exponent per energy; the returned logs are natural logs of the
    absolute values (``-inf`` for an exact zero).
    """
    E = np.asarray(E, dtype=float)
    ca, cb = E - kappa, E
    r00 = np.ones_like(E)
    r01 = np.zeros_like(E)
    r10 = np.zeros_like(E)
    r11 = np.ones_like(E)
    d00 = np.zeros_like(E)
    d01 = np.zeros_like(E)
    d10 = np.zeros_like(E)
    d11 = np.zeros_like(E)
    ex = np.zeros(E.shape, dtype=np.int64)
    for i, v in enumerate(potential):
        c = ca if v else cb
        # M = [[c, -1], [1, 0]], dM/dE = [[1, 0], [0, 0]]
        n00, n01 = c * r00 - r10, c * r01 - r11
        d00, d01, d10, d11 = r00 + c * d00 - d10, r01 + c * d01 - d11, d00, d01
        r10, r11, r00, r01 = r00, r01, n00, n01
        if i % RESCALE_EVERY == RESCALE_EVERY - 1:
            big = np.max(np.abs([r00, r01, r10, r11, d00, d01, d10, d11]), axis=0)
            _, k = np.frexp(big)
            k = k.astype(np.int64)
            r00, r01, r10, r11, d00, d01, d10, d11 = (np.ldexp(q, -k) for q in (r00, r01, r10, r11, d00, d01, d10, d11))
            ex += k
    with np.errstate(under="ignore"):
        g = (r00 + r11) - np.ldexp(np.full(E.shape, float(target)), -ex)
    dg = d00 + d11
    with np.errstate(divide="ignore"):
        lg = np.log(np.abs(g)) + ex * LN2
        ldg = np.log(np.abs(dg)) + ex * LN2
    return np.sign(g), lg, np.sign(dg), ldg


@dataclass(frozen=True)
class MixedRoots:
    roots: np.ndarray  # sorted, double roots repeated
    distinct: np.ndarray
    multiplicity: np.ndarray
    length: int  # degree of the trace polynomial
    target: float

    @property
    def count(self) -> int:
        return int(self.multiplicity.sum())


def _bisect(potential, kappa, target, a, b, sa, use_derivative: bool):
    a, b = a.copy(), b.copy()
    while a.size and np.max(b - a) > ROOT_TOL:
        m = 0.5 * (a + b)
        sg, _, sd, _ = trace_and_derivative(potential, m, kappa, target)
        sm = sd if use_derivative else sg
        left = sm == sa
        a = np.where(left, m, a)
        b = np.where(left, b, m)
    return 0.5 * (a + b)


def find_roots(potential: np.ndarray, kappa: float, target: float = 2.0, lo: float | None = None,
               hi: float | None = None, step: float = SCAN_STEP) -> MixedRoots:
    r = 2.0 + abs(kappa)
    lo = -r - 1.0 if lo is None else lo
    hi = r + 1.0 if hi is None else hi
    n = int(round((hi - lo) / step)) + 1
    x = lo + step * np.arange(n)
    sg, lg, sd, ldg = trace_and_derivative(potential, x, kappa, target)

    # adaptive refinement: split cells whose trace swing may reach a root
    for _ in range(MAX_REFINE):
        h = np.diff(x)
        swing = np.log(h) + np.maximum(ldg[:-1], ldg[1:])
        near = (np.minimum(lg[:-1], lg[1:]) <= swing + LN2) | (sg[:-1] != sg[1:])
        flag = near & (swing > math.log(CELL_SWING))
        # grading: endpoint derivatives can both sit near extrema and hide
        # an oscillation, so no cell may exceed twice a neighbour's width
        if h.size > 1:
            nb = np.minimum(np.r_[np.inf, h[:-1]], np.r_[h[1:], np.inf])
            flag |= h > 2.0 * nb * (1 + 1e-9)
        if not flag.any():
            break
        mids = 0.5 * (x[:-1][flag] + x[1:][flag])
        msg, mlg, msd, mldg = trace_and_derivative(potential, mids, kappa, target)
        order = np.argsort(np.concatenate([x, mids]), kind="stable")
        x = np.concatenate([x, mids])[order]
        sg, lg, sd, ldg = (np.concatenate([u, v])[order] for u, v in ((sg, msg), (lg, mlg), (sd, msd), (ldg, mldg)))

    # critical points of the trace
    cflag = (sd[:-1] != sd[1:]) & (sd[:-1] != 0) & (sd[1:] != 0)
    crit = _bisect(potential, kappa, target, x[:-1][cflag], x[1:][cflag], sd[:-1][cflag], use_derivative=True)
    csg, clg, _, _ = trace_and_derivative(potential, crit, kappa, target)
    order = np.argsort(np.concatenate([x, crit]), kind="stable")
    is_crit = np.concatenate([np.zeros(x.size, bool), np.ones(crit.size, bool)])[order]
    x = np.concatenate([x, crit])[order]
    sg = np.concatenate([sg, csg])[order]
    lg = np.concatenate([lg, clg])[order]

    exact = sg == 0
    change = (sg[:-1] * sg[1:]) < 0
    simple = _bisect(potential, kappa, target, x[:-1][change], x[1:][change], sg[:-1][change], use_derivative=False)

    # a critical value within tolerance of the target, with no sign change on
    # either side, is a tangential (double) root
    tiny = is_crit & (lg <= math.log(DOUBLE_ROOT_TOL)) & ~exact
    idx = np.nonzero(tiny)[0]
    lonely = []
    for i in idx:
        left_change = i > 0 and change[i - 1]
        right_change = i < x.size - 1 and change[i]
        if not (left_change or right_change):
            lonely.append(x[i])
    doubles = np.array(lonely)
    zeros = x[exact]
    # an exact zero is a double root when the trace returns to the same side
    zi = np.nonzero(exact)[0]
    left = sg[np.maximum(zi - 1, 0)]
    right = sg[np.minimum(zi + 1, x.size - 1)]
    zero_mult = np.where(is_crit[exact] | ((left == right) & (left != 0)), 2, 1)

    distinct = np.concatenate([simple, doubles, zeros])
    mult = np.concatenate([np.ones(simple.size, int), np.full(doubles.size, 2), zero_mult])
    order = np.argsort(distinct)
    distinct, mult = distinct[order], mult[order]
    # merge pairs of simple roots that bisection drove to the same point
    merged_x, merged_m = [], []
    for e, m in zip(distinct, mult):
        if merged_x and e - merged_x[-1] <= 10 * ROOT_TOL:
            merged_m[-1] += m
        else:
            merged_x.append(e)
            merged_m.append(m)
    distinct = np.array(merged_x)
    mult = np.array(merged_m, dtype=int)
    return MixedRoots(np.repeat(distinct, mult), distinct, mult, int(len(potential)), float(target))


def mixed_bc_eigenvalues(of: OperatorFamily, n: int, target: float = 2.0) -> MixedRoots:
    """All real E with tr M(iota^n(a))(E) = target."""
    word = of.sub.iterate("a", n)
    return find_roots(potential_array(word), of.kappa, target)


def band_spectrum(of: OperatorFamily, n: int) -> IntervalSet:
    """{E : |tr M(iota^n(a))(E)| <= 2}, the band set of the periodic approximant."""
    word = of.sub.iterate("a", n)
    pot = potential_array(word)
    ends = np.sort(np.concatenate([find_roots(pot, of.kappa, 2.0).roots, find_roots(pot, of.kappa, -2.0).roots]))
    ends = np.unique(ends)
    if ends.size == 0:
        return IntervalSet.empty()
    mids = 0.5 * (ends[:-1] + ends[1:])
    sg_p, lg_p, _, _ = trace_and_derivative(pot, mids, of.kappa, 2.0)
    sg_m, _, _, _ = trace_and_derivative(pot, mids, of.kappa, -2.0)
    inside = (sg_p <= 0) & (sg_m >= 0)
    iv = np.column_stack([ends[:-1][inside], ends[1:][inside]])
    # closed gaps leave isolated band edges; keep them as degenerate bands
    return IntervalSet(iv) if iv.size else IntervalSet(np.column_stack([ends, ends]))
