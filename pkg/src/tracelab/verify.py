"""The acceptance suite: ten numbered criteria, each a measured value
checked against a target at a stated tolerance.

``run_all`` returns a Report; ``Report.to_json`` is the machine-readable
form written by ``tracelab verify``.  Quick mode shrinks N, L and grids
(see QUICK below) and loosens only the tolerances that depend on them.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .green import EscapeParams, Status, green_batch, holder_estimate, residual_sequence
from .numerics.intervals import IntervalSet, box_dimension, cantor_set, hausdorff_distance
from .numerics.measure import SpectralMeasure, kolmogorov_distance, kolmogorov_to_cdf
from .numerics.scaled import ScaledArray, ScaledComplex
from .numerics.tridiag import tridiag_eigenvalues
from .schrodinger import (
    OperatorFamily, capacity_check, density_of_states, free_ids, holder_estimate_ids, integrated_laplacian,
    laplacian_grid, lyapunov_direct_batch, lyapunov_green_batch, lyapunov_thouless_batch, mixed_bc_eigenvalues,
    refine_edge, schrodinger_point, spectrum_escape,
)
from .substitution import FIBONACCI
from .surface import PROBES_XY, SurfacePoint, TraceMap, infinity_vertex

PHI = (1 + math.sqrt(5)) / 2
GAMMA_FREE_3 = math.log((3 + math.sqrt(5)) / 2)
# Avron-Simon windows are spread along the word; see density_of_states
AS_STRIDE = 101


def seed() -> int:
    return int(os.environ.get("TRACELAB_SEED", "20240607"))


@dataclass
class CriterionResult:
    id: int
    name: str
    measured: float
    target: str
    tolerance: float
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"[{flag}] criterion {self.id:2d} {self.name}: measured {self.measured:.6g} "
                f"(target {self.target}, tol {self.tolerance:g}) in {self.seconds:.1f}s")


@dataclass
class Report:
    results: list[CriterionResult]
    quick: bool
    seed: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> str:
        return json.dumps({
            "version": __version__,
            "quick": self.quick,
            "seed": self.seed,
            "passed": self.passed,
            "criteria": [asdict(r) for r in self.results],
        }, indent=2, default=float)


@dataclass(frozen=True)
class Settings:
    N: int = 10_000
    L: int = 2000
    windows: int = 64
    step: float = 0.005
    grid_n: int = 5
    lap_h: float = 0.05
    as_lengths: tuple = (250, 500, 1000, 2000)
    lambda_powers: tuple = (9, 12, 14)  # word lengths 89, 377, 987
    holder_probes: int = 24
    thouless_tol: float = 2e-3


FULL = Settings()
QUICK = Settings(N=5000, L=500, windows=32, step=0.01, grid_n=3, lap_h=0.1, as_lengths=(250, 500, 1000),
                 lambda_powers=(9, 11, 12), holder_probes=20, thouless_tol=5e-3)


def _timed(fn):
    def wrap(*args, **kwargs):
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t
        return res
    wrap.__name__ = fn.__name__
    wrap.__doc__ = fn.__doc__
    return wrap


def _random_surface_points(rng, n: int, D: float, box: float = 3.0) -> list[SurfacePoint]:
    xy = rng.uniform(-box, box, size=(n, 4))
    return [SurfacePoint.from_xy(complex(a, b), complex(c, d), D) for a, b, c, d in xy]


@_timed
def criterion_1(s: Settings = FULL) -> CriterionResult:
    """Fibonacci closed forms: abelianization, inverse-direction map, its vertex."""
    M = FIBONACCI.abelianization()
    ok_M = np.array_equal(M, [[1, 1], [1, 0]])
    inv = TraceMap(FIBONACCI).inverse_map()
    rng = np.random.default_rng(seed())
    err = 0.0
    for p in _random_surface_points(rng, 100, 4.0, box=2.0):
        q = inv.apply(p)
        x, y, z = p.coords()
        want = (y, x * y - z, x)
        got = q.coords()
        err = max(err, max(abs(g - w) / max(1.0, abs(w)) for g, w in zip(got, want)))
    vertex = str(infinity_vertex(inv))
    passed = ok_M and err < 1e-9 and vertex == "[0:1:0:0]"
    return CriterionResult(1, "Fibonacci closed forms", err, "0 (map error); M=[[1,1],[1,0]]; v+=[0:1:0:0]", 1e-9,
                           passed, details={"abelianization": M.tolist(), "vertex": vertex})


@_timed
def criterion_2(s: Settings = FULL) -> CriterionResult:
    """Free operator: spectrum, arcsine DOS, Lyapunov at E=3 by three methods."""
    of = OperatorFamily(kappa=0.0)
    scan = spectrum_escape(of, step=s.step, ep=EscapeParams(N_max=40))
    haus = hausdorff_distance(scan.outer, IntervalSet(np.array([[-2.0, 2.0]])))
    dos = density_of_states(of, s.L, s.windows)
    kol = kolmogorov_to_cdf(dos, free_ids)
    g_direct = float(lyapunov_direct_batch(of, np.array([3.0]), s.N)[0])
    g_green = float(lyapunov_green_batch(of, np.array([3.0]))[0])
    g_th = float(lyapunov_thouless_batch(np.array([3.0]), dos)[0])
    errs = {"Direct": abs(g_direct - GAMMA_FREE_3), "Green": abs(g_green - GAMMA_FREE_3),
            "Thouless": abs(g_th - GAMMA_FREE_3)}
    tols = {"Direct": 1e-3, "Green": 1e-6, "Thouless": s.thouless_tol}
    passed = haus < 0.05 and kol < 1e-2 and all(errs[k] < tols[k] for k in errs)
    return CriterionResult(2, "free-operator oracle", max(errs.values()), f"gamma(3)={GAMMA_FREE_3:.6f}",
                           s.thouless_tol, passed,
                           details={"hausdorff": haus, "kolmogorov_arcsine": kol, "errors": errs, "tolerances": tols})


@_timed
def criterion_3(s: Settings = FULL, alpha_offset: float = 0.0) -> CriterionResult:
    """Green function on the curve over (alpha + beta) equals gamma at kappa = 1."""
    of = OperatorFamily(kappa=1.0)
    E = (np.linspace(2.5, 4.0, s.grid_n)[None, :] + 1j * np.linspace(0.1, 1.0, s.grid_n)[:, None]).ravel()
    d = lyapunov_direct_batch(of, E, s.N)
    g = lyapunov_green_batch(of, E, alpha_offset=alpha_offset)
    t = lyapunov_thouless_batch(E, density_of_states(of, s.L, s.windows))
    worst = max(np.abs(d - g).max(), np.abs(d - t).max(), np.abs(g - t).max())
    return CriterionResult(3, "three-method dictionary at kappa=1", float(worst), "0", 2e-2, bool(worst < 2e-2),
                           details={"alpha_offset": alpha_offset,
                                    "direct_green": float(np.abs(d - g).max()),
                                    "direct_thouless": float(np.abs(d - t).max()),
                                    "green_thouless": float(np.abs(g - t).max())})


RESIDUAL_SETTLE = 5


def _residual_drift(tm: TraceMap, alpha_offset: float) -> float:
    ab = tm.abelian
    worst = 0.0
    for x0, y0 in PROBES_XY:
        r = residual_sequence(tm, SurfacePoint.from_xy(x0, y0, tm.D), steps=12, alpha=ab.alpha + alpha_offset)
        if r.size > RESIDUAL_SETTLE + 1:
            worst = max(worst, float(np.abs(np.diff(r[RESIDUAL_SETTLE:])).max()))
    return worst


@_timed
def criterion_4(s: Settings = FULL) -> CriterionResult:
    """Functional equation, positivity, zero set and local asymptotics of G+."""
    tm = TraceMap(FIBONACCI, D=5.0)
    rng = np.random.default_rng(seed())
    pts = _random_surface_points(rng, 200, tm.D)
    x, y, z = (ScaledArray.from_scalars([getattr(p, c) for p in pts]) for c in "xyz")
    ep = EscapeParams()
    g0 = green_batch(tm, x, y, z, ep)
    g1 = green_batch(tm, *tm.step(x, y, z), ep)
    ok = g0.mask(Status.CONVERGED) & g1.mask(Status.CONVERGED)
    idx = np.nonzero(ok)[0][:50]
    rel = np.abs(g1.value[idx] - tm.lam * g0.value[idx]) / (tm.lam * g0.value[idx])
    rel_max = float(rel.max()) if idx.size else math.inf
    # bounded orbits: the Schroedinger curve over the free spectrum
    of = OperatorFamily(kappa=0.0)
    inside = [schrodinger_point(E, 0.0) for E in np.linspace(-1.9, 1.9, 12)]
    xb, yb, zb = (ScaledArray.from_scalars([getattr(p, c) for p in inside]) for c in "xyz")
    gb = green_batch(of.trace_map, xb, yb, zb, ep)
    zero_ok = bool(np.all(gb.mask(Status.BOUNDED)) and np.all(gb.value == 0.0))
    nonneg = bool(np.all(g0.value >= 0) and np.all(gb.value >= 0))
    drift = _residual_drift(tm, 0.0)
    drift_bad = _residual_drift(tm, 0.1)
    passed = idx.size == 50 and rel_max < 1e-6 and zero_ok and nonneg and drift < 1e-3 and drift_bad >= 1e-3
    return CriterionResult(4, "Green function properties", rel_max, "G(f p) = lambda G(p)", 1e-6, passed,
                           details={"escaping_points": int(idx.size), "bounded_zero": zero_ok, "nonnegative": nonneg,
                                    "residual_drift": drift, "perturbed_alpha_drift": drift_bad})


@_timed
def criterion_5(s: Settings = FULL) -> CriterionResult:
    """Logarithmic capacity one: gamma(1000 i) - ln 1000 via the log potential."""
    devs = {}
    for kappa in (0.0, 1.0):
        dos = density_of_states(OperatorFamily(kappa=kappa), s.L, s.windows)
        devs[kappa] = abs(capacity_check(dos, 1e3j))
    worst = max(devs.values())
    return CriterionResult(5, "capacity one", worst, "0", 1e-2, worst < 1e-2,
                           details={str(k): v for k, v in devs.items()})


@_timed
def criterion_6(s: Settings = FULL) -> CriterionResult:
    """Integrated Laplacian of gamma: 2 pi around the spectrum, 0 away from it."""
    h = s.lap_h
    flux, off = {}, {}
    for kappa in (0.0, 1.0):
        of = OperatorFamily(kappa=kappa)
        dos = density_of_states(of, s.L, min(s.windows, 16))
        r = of.spectral_bound() + 0.5
        # rows offset by h/2 so that no node lies on the real axis
        Z = laplacian_grid(-r, r, -1 + h / 2, 1 - h / 2, h)
        flux[kappa] = integrated_laplacian(lyapunov_thouless_batch(Z.ravel(), dos).reshape(Z.shape), h)
        W = laplacian_grid(r + 0.5, r + 1.5, -0.5 + h / 2, 0.5 - h / 2, h)
        off[kappa] = integrated_laplacian(lyapunov_thouless_batch(W.ravel(), dos).reshape(W.shape), h)
    rel = max(abs(v / (2 * math.pi) - 1) for v in flux.values())
    off_max = max(abs(v) for v in off.values())
    return CriterionResult(6, "Laplacian of gamma", rel, "2 pi (relative error)", 0.1, rel < 0.1 and off_max < 1e-3,
                           details={"flux": {str(k): v for k, v in flux.items()},
                                    "off_spectrum": {str(k): v for k, v in off.items()}})


@_timed
def criterion_7(s: Settings = FULL) -> CriterionResult:
    """Kolmogorov distance between DOS at L and 2L shrinks by a factor <= 0.6."""
    details = {}
    worst = 0.0
    for kappa in (0.0, 1.0):
        of = OperatorFamily(kappa=kappa)
        doses = [density_of_states(of, L, s.windows, stride=AS_STRIDE) for L in s.as_lengths]
        k = [kolmogorov_distance(a, b) for a, b in zip(doses, doses[1:])]
        ratios = [b / a for a, b in zip(k, k[1:])]
        details[str(kappa)] = {"kolmogorov": k, "ratios": ratios}
        worst = max(worst, max(ratios))
    return CriterionResult(7, "DOS convergence in L", worst, "<= 0.6", 0.6, worst <= 0.6, details=details)


@_timed
def criterion_8(s: Settings = FULL) -> CriterionResult:
    """Mixed boundary condition roots: Chebyshev values at length 13, weak convergence."""
    of = OperatorFamily(kappa=0.0)
    roots = mixed_bc_eigenvalues(of, 5)  # word length 13
    exact = np.sort(2 * np.cos(2 * np.pi * np.arange(7) / 13))
    cheb_err = (float(np.abs(np.sort(roots.distinct) - exact).max())
                if roots.distinct.size == 7 else math.inf)
    dos = density_of_states(of, s.L, s.windows)
    kol = []
    for n in s.lambda_powers:
        r = mixed_bc_eigenvalues(of, n)
        kol.append(kolmogorov_distance(SpectralMeasure.uniform(r.roots), dos))
    decreasing = all(b < a for a, b in zip(kol, kol[1:]))
    passed = cheb_err < 1e-8 and decreasing and kol[-1] < 0.05
    return CriterionResult(8, "mixed boundary roots", kol[-1], "< 0.05, decreasing", 0.05, passed,
                           details={"chebyshev_error": cheb_err, "distinct": int(roots.distinct.size),
                                    "kolmogorov": kol, "lengths": [len(FIBONACCI.iterate("a", n))
                                                                   for n in s.lambda_powers]})


@_timed
def criterion_9(s: Settings = FULL) -> CriterionResult:
    """Hoelder exponent 1/2 at the free band edge, from G and from the IDS."""
    of = OperatorFamily(kappa=0.0)
    scan = spectrum_escape(of, step=s.step)
    top = float(scan.outer.intervals[-1, 1])
    edge = refine_edge(of, top, top + s.step)
    d = np.geomspace(1e-6, 1e-2, s.holder_probes)
    tau_g = holder_estimate(of.trace_map, [(schrodinger_point(edge + x, 0.0), x) for x in d])
    tau_k = holder_estimate_ids(density_of_states(of, s.L, s.windows), np.geomspace(1e-3, 1e-1, 8))
    worst = max(abs(tau_g - 0.5), abs(tau_k - 0.5))
    return CriterionResult(9, "Hoelder exponents at kappa=0", worst, "0.5 (deviation)", 0.05, worst < 0.05,
                           details={"green": tau_g, "ids": tau_k, "edge": edge})


@_timed
def criterion_10(s: Settings = FULL) -> CriterionResult:
    """Numerics kernel: eigensolver, scaled logs, box dimension."""
    rng = np.random.default_rng(seed())
    eig_err = 0.0
    for L in range(1, 9):
        for _ in range(25):
            d, e = rng.normal(size=L), rng.normal(size=L - 1)
            T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
            eig_err = max(eig_err, float(np.abs(tridiag_eigenvalues(d, e) - np.linalg.eigvalsh(T)).max()))
    log_err = 0.0
    for m, k in zip(rng.normal(size=200) + 1j * rng.normal(size=200), rng.integers(-10**6, 10**6, size=200)):
        v = ScaledComplex(complex(m), int(k))
        want = math.log(abs(m)) + int(k) * math.log(2)
        log_err = max(log_err, abs(v.log_abs() - want) / max(1.0, abs(want)))
    dim = box_dimension(cantor_set(8), 3.0 ** -np.arange(1, 7))
    cantor = math.log(2) / math.log(3)
    passed = eig_err < 1e-8 and log_err < 1e-12 and abs(dim - cantor) < 0.05
    return CriterionResult(10, "numerics kernel", eig_err, "0 (eigensolver error)", 1e-8, passed,
                           details={"log_roundtrip": log_err, "cantor_dimension": dim})


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10)


def run_all(quick: bool = False, alpha_offset: float = 0.0, only=None) -> Report:
    s = QUICK if quick else FULL
    results = []
    for i, crit in enumerate(CRITERIA, start=1):
        if only and i not in only:
            continue
        results.append(crit(s, alpha_offset=alpha_offset) if crit is criterion_3 else crit(s))
    return Report(results, quick, seed())
