"""Dynamical Green functions of trace maps by renormalized escape iteration.

    g_n(p) = lambda^-n * log+ ||f^n(p)||

with the Euclidean norm on C^3, evaluated in scaled arithmetic so that
orbits growing like exp(C lambda^n) never overflow.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ExponentOverflow, GreenInconclusive, InsufficientProbes, InvalidInput, NotNearInfinity
from .numerics.scaled import ScaledArray, log_norm3
from .surface import PROBES_XY, SurfacePoint, TraceMap, infinity_vertex

log = logging.getLogger(__name__)

CONSECUTIVE = 3


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    BOUNDED = "BoundedOrbit"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class EscapeParams:
    R_escape: float = 1e3
    N_max: int = 60
    tol: float = 1e-9

    def __post_init__(self):
        if not self.R_escape > 10:
            raise InvalidInput("R_escape must exceed 10")
        if self.N_max < 5:
            raise InvalidInput("N_max must be at least 5")
        if not self.tol > 0:
            raise InvalidInput("tol must be positive")


@dataclass(frozen=True)
class GreenResult:
    value: float
    iterations: int
    status: Status
    escape_iteration: int | None = None
    history: np.ndarray = field(default=None, repr=False, compare=False)


@dataclass
class GreenBatch:
    value: np.ndarray
    iterations: np.ndarray
    status: np.ndarray  # object array of Status
    escape_iteration: np.ndarray  # -1 when never escaped

    def mask(self, status: Status) -> np.ndarray:
        """Boolean mask of points with the given status."""
        return _status_mask(self.status, status)

    def result(self, i: int) -> GreenResult:
        esc = int(self.escape_iteration[i])
        return GreenResult(float(self.value[i]), int(self.iterations[i]), self.status[i], esc if esc >= 0 else None)


def _status_mask(arr: np.ndarray, status: Status) -> np.ndarray:
    # elementwise == against a str-enum is unreliable on object arrays
    return np.fromiter((s is status for s in arr), dtype=bool, count=arr.size)


def _points_to_arrays(points) -> tuple[ScaledArray, ScaledArray, ScaledArray]:
    return tuple(ScaledArray.from_scalars([getattr(p, c) for p in points]) for c in "xyz")


def green_batch(tm: TraceMap, x: ScaledArray, y: ScaledArray, z: ScaledArray,
                ep: EscapeParams = EscapeParams(), inverse: bool = False) -> GreenBatch:
    """Green function at many points at once; converged points leave the batch."""
    n_pts = x.shape[0]
    lam = tm.lam
    ln_r = math.log(ep.R_escape)
    value = np.zeros(n_pts)
    iters = np.full(n_pts, ep.N_max, dtype=np.int64)
    status = np.empty(n_pts, dtype=object)
    status[:] = [Status.BOUNDED] * n_pts
    esc_at = np.full(n_pts, -1, dtype=np.int64)

    L = log_norm3(x, y, z)
    g_prev = np.maximum(L, 0.0)
    escaped = L > ln_r
    esc_at[escaped] = 0
    streak = np.zeros(n_pts, dtype=np.int64)
    active = np.arange(n_pts)
    for n in range(1, ep.N_max + 1):
        if active.size == 0:
            break
        try:
            x, y, z = tm.step(x, y, z, inverse=inverse)
        except ExponentOverflow as exc:
            raise ExponentOverflow(str(exc), iterate=n) from exc
        L = log_norm3(x, y, z)
        g = np.maximum(L, 0.0) / lam**n
        was_esc = escaped[active]
        ok = was_esc & (np.abs(g - g_prev) < ep.tol * np.maximum(1.0, g_prev))
        streak[active] = np.where(ok, streak[active] + 1, 0)
        now_esc = L > ln_r
        new = now_esc & ~was_esc
        esc_at[active[new]] = n
        escaped[active] = was_esc | now_esc
        value[active] = np.where(escaped[active], g, 0.0)
        done = streak[active] >= CONSECUTIVE
        if done.any():
            idx = active[done]
            iters[idx] = n
            status[idx] = Status.CONVERGED
        keep = ~done
        active = active[keep]
        x, y, z = x[keep], y[keep], z[keep]
        g_prev = g[keep]
    left_escaped = active[escaped[active]]
    status[left_escaped] = Status.INCONCLUSIVE
    value[_status_mask(status, Status.BOUNDED)] = 0.0
    return GreenBatch(value, iters, status, esc_at)


def _single(tm: TraceMap, p: SurfacePoint, ep: EscapeParams, inverse: bool) -> GreenResult:
    b = green_batch(tm, *_points_to_arrays([p]), ep=ep, inverse=inverse)
    return b.result(0)


def green_plus(tm: TraceMap, p: SurfacePoint, ep: EscapeParams = EscapeParams(), strict: bool = False) -> GreenResult:
    """G+ at p.  With ``strict`` an Inconclusive result raises GreenInconclusive."""
    res = _single(tm, p, ep, inverse=False)
    if strict and res.status is Status.INCONCLUSIVE:
        raise GreenInconclusive(res)
    return res


def green_minus(tm: TraceMap, p: SurfacePoint, ep: EscapeParams = EscapeParams(), strict: bool = False) -> GreenResult:
    """G- at p: the same renormalized limit along backward iterates."""
    tm.inverse_words  # raises InverseWordsUnavailable early
    res = _single(tm, p, ep, inverse=True)
    if strict and res.status is Status.INCONCLUSIVE:
        raise GreenInconclusive(res)
    return res


def in_filled_julia(tm: TraceMap, p: SurfacePoint, ep: EscapeParams = EscapeParams()) -> bool:
    res = green_plus(tm, p, ep)
    if res.status is Status.INCONCLUSIVE:
        log.info("in_filled_julia: inconclusive after %d iterates, reporting False", res.iterations)
    return res.status is Status.BOUNDED


# -- escape confirmation (spectrum scans) ------------------------------------

class Membership(enum.IntEnum):
    BOUNDED = 0
    ESCAPED = 1
    INCONCLUSIVE = 2


def escape_status(tm: TraceMap, x: ScaledArray, y: ScaledArray, z: ScaledArray,
                  ep: EscapeParams = EscapeParams()) -> np.ndarray:
    """Bounded / Escaped / Inconclusive per point.

    Escaped means the norm stayed above R_escape for three consecutive
    iterates; Inconclusive means it crossed R_escape too close to N_max for
    that to be confirmed.  Unlike ``green_batch`` no Cauchy test is needed,
    so the answer only depends on the orbit itself.
    """
    n_pts = x.shape[0]
    ln_r = math.log(ep.R_escape)
    out = np.full(n_pts, Membership.BOUNDED, dtype=np.int64)
    above = np.zeros(n_pts, dtype=np.int64)
    ever = log_norm3(x, y, z) > ln_r
    above[ever] = 1
    active = np.arange(n_pts)
    for n in range(1, ep.N_max + 1):
        if active.size == 0:
            break
        x, y, z = tm.step(x, y, z)
        hi = log_norm3(x, y, z) > ln_r
        above[active] = np.where(hi, above[active] + 1, 0)
        ever[active] |= hi
        done = above[active] >= CONSECUTIVE
        out[active[done]] = Membership.ESCAPED
        keep = ~done
        active = active[keep]
        x, y, z = x[keep], y[keep], z[keep]
    out[active[ever[active]]] = Membership.INCONCLUSIVE
    return out


# -- local asymptotics near the vertex at infinity ----------------------------

def _chart_logs(p: SurfacePoint, dom: int) -> tuple[float, float]:
    logs = [c.log_abs() if not c.is_zero() else -math.inf for c in (p.x, p.y, p.z)]
    others = [i for i in range(3) if i != dom]
    return logs[others[0]] - logs[dom], logs[others[1]] - logs[dom]


def chart_coordinates(tm: TraceMap, p: SurfacePoint) -> tuple[float, float]:
    """ln|X|, ln|Y|: the two sub-dominant-to-dominant ratios in v+'s chart."""
    dom = infinity_vertex(tm).index
    lx, ly = _chart_logs(p, dom)
    lim = math.log(0.1)
    if not (lx < lim and ly < lim):
        raise NotNearInfinity(f"ratios exp({lx:.3g}), exp({ly:.3g}) not below 0.1")
    return lx, ly


def _escaping_orbit(tm: TraceMap, p0: SurfacePoint, steps: int, ep: EscapeParams) -> list[tuple[float, float, float]]:
    """(G, ln|X|, ln|Y|) along the first ``steps`` iterates inside v+'s chart."""
    dom = infinity_vertex(tm).index
    out = []
    p = p0
    lim = math.log(0.1)
    for _ in range(steps + 200):
        p = tm.apply(p)
        lx, ly = _chart_logs(p, dom)
        if lx < lim and ly < lim:
            res = green_plus(tm, p, ep)
            if res.status is Status.BOUNDED:
                break
            out.append((res.value, lx, ly))
            if len(out) == steps:
                break
    return out


CALIBRATION_STEPS = 8


@lru_cache(maxsize=32)
def _calibrated_order(tm: TraceMap) -> bool:
    """True when alpha pairs with the first chart coordinate X."""
    ab = tm.abelian
    ep = EscapeParams(N_max=80)
    spread = {True: [], False: []}
    for x0, y0 in PROBES_XY:
        orbit = _escaping_orbit(tm, SurfacePoint.from_xy(x0, y0, tm.D), CALIBRATION_STEPS, ep)
        if len(orbit) < 3:
            continue
        arr = np.array(orbit)
        for order in (True, False):
            a, b = (ab.alpha, ab.beta) if order else (ab.beta, ab.alpha)
            r = arr[:, 0] + a * arr[:, 1] + b * arr[:, 2]
            spread[order].append(np.var(r[2:]))
    if not spread[True]:
        raise NotNearInfinity("no probe orbit reached the chart at infinity")
    return float(np.sum(spread[True])) <= float(np.sum(spread[False]))


def local_asymptotics_residual(tm: TraceMap, p: SurfacePoint, ep: EscapeParams = EscapeParams(N_max=80),
                               alpha: float | None = None, beta: float | None = None) -> float:
    """G(p) + alpha ln|X| + beta ln|Y| for p in the chart of v+.

    The pairing of (alpha, beta) with the chart coordinates is calibrated
    once per map by minimal residual variance over fixed probe orbits.
    ``alpha``/``beta`` override the map's values (used for negative controls).
    """
    ab = tm.abelian
    alpha = ab.alpha if alpha is None else alpha
    beta = ab.beta if beta is None else beta
    lx, ly = chart_coordinates(tm, p)
    res = green_plus(tm, p, ep)
    if res.status is Status.BOUNDED:
        raise NotNearInfinity("point has a bounded orbit")
    a, b = (alpha, beta) if _calibrated_order(tm) else (beta, alpha)
    return res.value + a * lx + b * ly


def residual_sequence(tm: TraceMap, p0: SurfacePoint, steps: int = 12, ep: EscapeParams = EscapeParams(N_max=80),
                      alpha: float | None = None, beta: float | None = None) -> np.ndarray:
    """Residuals along the forward orbit of p0, from its first iterate in the chart."""
    ab = tm.abelian
    alpha = ab.alpha if alpha is None else alpha
    beta = ab.beta if beta is None else beta
    arr = np.array(_escaping_orbit(tm, p0, steps, ep)).reshape(-1, 3)
    a, b = (alpha, beta) if _calibrated_order(tm) else (beta, alpha)
    return arr[:, 0] + a * arr[:, 1] + b * arr[:, 2]


# -- Hoelder exponent ----------------------------------------------------------

MIN_PROBES = 20


def holder_estimate(tm: TraceMap, probe_pairs, ep: EscapeParams = EscapeParams(N_max=120)) -> float:
    """Least-squares slope of ln G against ln(distance proxy).

    ``probe_pairs`` is a sequence of (SurfacePoint, distance) with distances
    measured to the nearest accepted spectrum sample.  Probes with bounded
    orbits (G = 0) carry no slope information and are skipped.
    """
    pairs = list(probe_pairs)
    if len(pairs) < MIN_PROBES:
        raise InsufficientProbes(f"need at least {MIN_PROBES} probes, got {len(pairs)}")
    pts = [p for p, _ in pairs]
    dist = np.array([d for _, d in pairs], dtype=float)
    b = green_batch(tm, *_points_to_arrays(pts), ep=ep)
    good = (b.value > 0) & (dist > 0)
    if good.sum() < MIN_PROBES // 2:
        raise InsufficientProbes(f"only {int(good.sum())} probes escaped")
    slope = np.polyfit(np.log(dist[good]), np.log(b.value[good]), 1)[0]
    return float(np.clip(slope, np.finfo(float).tiny, 2.0))
