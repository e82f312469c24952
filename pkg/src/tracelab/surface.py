"""Cubic surfaces x^2 + y^2 + z^2 - xyz = D and their trace-map automorphisms.

A point (x, y, z) is the character of a pair of SL2 matrices (A, B) with
tr A = x, tr B = y, tr AB = z.  A word w over {a, b, A, B} is sent to the
ordered product rho(w) = M(w[-1]) ... M(w[1]) M(w[0]); the letter
matrices are multiplied on the left one after another, so rho(uv) =
rho(v) rho(u).  Traces do not see the order reversal on single words, but it
fixes how compositions of substitutions act.

The trace map of a substitution iota sends the point with lift rho to
(tr rho(iota(a)), tr rho(iota(b)), tr rho(iota(ab))).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidInput, InverseWordsUnavailable, NoEscapeDetected, NotOnSurface, WordTooLong
from .numerics.scaled import ScaledArray, ScaledComplex, log_norm3
from .substitution import (
    DEFAULT_WORD_CAP,
    FIBONACCI,
    FIBONACCI_INVERSE,
    AbelianData,
    Substitution,
    free_reduce,
)

SURFACE_TOL = 1e-8
VERTICES = ("[1:0:0:0]", "[0:1:0:0]", "[0:0:1:0]")


def fricke_invariant(x, y, z):
    """x^2 + y^2 + z^2 - xyz; works for complex, ScaledComplex or ScaledArray."""
    return x * x + y * y + z * z - x * y * z


def _as_scaled(v) -> ScaledComplex:
    return ScaledComplex.coerce(v)


@dataclass(frozen=True)
class SurfacePoint:
    x: ScaledComplex
    y: ScaledComplex
    z: ScaledComplex
    D: complex
    check: bool = True

    def __post_init__(self):
        for name in "xyz":
            object.__setattr__(self, name, _as_scaled(getattr(self, name)))
        object.__setattr__(self, "D", complex(self.D))
        if self.check:
            err = abs(self.invariant_error())
            if err > SURFACE_TOL * max(1.0, self.norm_sq()):
                raise NotOnSurface(f"|F(x,y,z) - D| = {err:.3g} for D = {self.D}")

    @classmethod
    def from_xy(cls, x: complex, y: complex, D: complex, larger: bool = True) -> "SurfacePoint":
        """Complete (x, y) to a surface point by solving the quadratic for z."""
        b = -x * y
        c = x * x + y * y - D
        s = cmath.sqrt(b * b - 4 * c)
        z1, z2 = (-b + s) / 2, (-b - s) / 2
        z = z1 if (abs(z1) >= abs(z2)) == larger else z2
        return cls(x, y, z, D)

    def coords(self) -> tuple[complex, complex, complex]:
        return self.x.to_complex(), self.y.to_complex(), self.z.to_complex()

    def invariant_error(self) -> complex:
        return (fricke_invariant(self.x, self.y, self.z) - self.D).to_complex()

    def norm_sq(self) -> float:
        return float(math.exp(2 * self.log_norm())) if self.log_norm() < 300 else math.inf

    def log_norm(self) -> float:
        x, y, z = (ScaledArray.from_scalars([c]) for c in (self.x, self.y, self.z))
        return float(log_norm3(x, y, z)[0])

    def drift(self) -> float:
        """|F - D| relative to the size of the terms of F (no re-projection is done)."""
        F = fricke_invariant(self.x, self.y, self.z)
        dev = F - self.D
        if dev.is_zero():
            return 0.0
        ln_scale = max(0.0, 2 * self.log_norm(), (self.x * self.y * self.z).log_abs() if not (self.x * self.y * self.z).is_zero() else 0.0)
        return math.exp(dev.log_abs() - ln_scale)


# -- plain 2x2 matrices -----------------------------------------------------

@dataclass(frozen=True)
class Mat2:
    a: complex
    b: complex
    c: complex
    d: complex

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def trace(self) -> complex:
        return self.a + self.d

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])


def _pick_big_root(z: complex) -> complex:
    s = cmath.sqrt(z * z - 4)
    t1, t2 = (z + s) / 2, (z - s) / 2

    def key(t):
        return (round(abs(t), 12), round(t.real, 12), round(t.imag, 12))

    return t1 if key(t1) >= key(t2) else t2


def lift(p: SurfacePoint, root: str = "big") -> tuple[Mat2, Mat2]:
    """SL2 pair (A, B) with tr A = x, tr B = y, tr AB = z (plain precision)."""
    x, y, z = p.coords()
    t = _pick_big_root(z)
    if root == "small":
        t = 1 / t
    elif root != "big":
        raise InvalidInput("root must be 'big' or 'small'")
    return Mat2(x, -1, 1, 0), Mat2(0, t, -1 / t, y)


# -- scaled matrices over a batch of points ---------------------------------

class _SMat:
    """2x2 matrices with ScaledArray entries (one matrix per batch element)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    def __matmul__(self, o: "_SMat") -> "_SMat":
        return _SMat(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                     self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def adjugate(self) -> "_SMat":
        return _SMat(self.d, -self.b, -self.c, self.a)

    def trace(self) -> ScaledArray:
        return self.a + self.d


def _big_root_scaled(z: ScaledArray) -> ScaledArray:
    s = (z * z - 4.0).sqrt()
    t1 = (z + s) * 0.5
    t2 = (z - s) * 0.5
    l1, l2 = t1.log_abs(), t2.log_abs()
    tie = np.isfinite(l1) & np.isfinite(l2) & (np.abs(l1 - l2) <= 1e-12 * np.maximum(1.0, np.abs(l1)))
    c1, c2 = t1.to_complex(), t2.to_complex()
    with np.errstate(invalid="ignore"):
        by_sign = (c1.real > c2.real + 1e-12) | ((np.abs(c1.real - c2.real) <= 1e-12) & (c1.imag >= c2.imag))
    pick1 = np.where(tie, by_sign, l1 > l2)
    out = t2.copy()
    out[pick1] = t1[pick1]
    return out


def _letter_matrices(x: ScaledArray, y: ScaledArray, z: ScaledArray, root: str = "big") -> dict[str, _SMat]:
    shape = x.shape
    one = ScaledArray(np.ones(shape, dtype=complex))
    zero = ScaledArray(np.zeros(shape, dtype=complex))
    t = _big_root_scaled(z)
    if root == "small":
        t = t.reciprocal()
    A = _SMat(x, -one, one, zero)
    B = _SMat(zero, t, -t.reciprocal(), y)
    return {"a": A, "b": B, "A": A.adjugate(), "B": B.adjugate()}


def _word_product(mats: dict[str, _SMat], w: str, shape) -> _SMat:
    one = ScaledArray(np.ones(shape, dtype=complex))
    zero = ScaledArray(np.zeros(shape, dtype=complex))
    P = _SMat(one, zero, zero, one)
    for c in w:
        P = mats[c] @ P
    return P


def word_trace_arrays(x: ScaledArray, y: ScaledArray, z: ScaledArray, words, root: str = "big",
                      cap: int = DEFAULT_WORD_CAP) -> list[ScaledArray]:
    """Traces of several words at a batch of points, sharing one lift."""
    for w in words:
        if len(w) > cap:
            raise WordTooLong(len(w), cap)
    mats = _letter_matrices(x, y, z, root)
    return [_word_product(mats, w, x.shape).trace() for w in words]


def word_trace(p: SurfacePoint, w: str, root: str = "big", cap: int = DEFAULT_WORD_CAP) -> ScaledComplex:
    x, y, z = (ScaledArray.from_scalars([c]) for c in (p.x, p.y, p.z))
    return word_trace_arrays(x, y, z, [w], root, cap)[0].scalar(0)


# -- trace maps -------------------------------------------------------------

_BUILTIN_INVERSES = {
    FIBONACCI: FIBONACCI_INVERSE,
    FIBONACCI_INVERSE: FIBONACCI,
}


def is_inverse_pair(sub: Substitution, inv: Substitution) -> bool:
    """Both composites reduce to the identity on the generators."""
    for s in (sub.compose(inv), inv.compose(sub)):
        if free_reduce(s.image_a) != "a" or free_reduce(s.image_b) != "b":
            return False
    return True


class TraceMap:
    """The polynomial automorphism of S_D induced by a substitution.

    ``inverse`` is the substitution of the inverse automorphism; it is
    optional and built in for the Fibonacci pair.  A supplied inverse is
    checked by free reduction of both composites.
    """

    def __init__(self, sub: Substitution, D: complex = 4.0, inverse: Substitution | None = None,
                 cap: int = DEFAULT_WORD_CAP):
        self.sub = sub
        self.D = complex(D)
        self.cap = cap
        if inverse is None:
            inverse = _BUILTIN_INVERSES.get(sub)
        elif not is_inverse_pair(sub, inverse):
            raise InvalidInput(f"{inverse} is not inverse to {sub}")
        self.inverse_sub = inverse
        self.words = (sub.image_a, sub.image_b, sub.apply("ab", cap))

    @cached_property
    def abelian(self) -> AbelianData:
        return self.sub.abelian_data()

    @property
    def lam(self) -> float:
        return self.abelian.lam

    @cached_property
    def inverse_words(self) -> tuple[str, str, str]:
        if self.inverse_sub is None:
            raise InverseWordsUnavailable(f"no inverse images known for {self.sub}")
        inv = self.inverse_sub
        return (inv.image_a, inv.image_b, inv.apply("ab", self.cap))

    def inverse_map(self) -> "TraceMap":
        if self.inverse_sub is None:
            raise InverseWordsUnavailable(f"no inverse images known for {self.sub}")
        return TraceMap(self.inverse_sub, self.D, inverse=self.sub, cap=self.cap)

    def step(self, x: ScaledArray, y: ScaledArray, z: ScaledArray, inverse: bool = False):
        words = self.inverse_words if inverse else self.words
        return tuple(word_trace_arrays(x, y, z, words, cap=self.cap))

    def apply(self, p: SurfacePoint) -> SurfacePoint:
        return self._apply(p, inverse=False)

    def apply_inverse(self, p: SurfacePoint) -> SurfacePoint:
        return self._apply(p, inverse=True)

    def _apply(self, p: SurfacePoint, inverse: bool) -> SurfacePoint:
        arrs = [ScaledArray.from_scalars([c]) for c in (p.x, p.y, p.z)]
        x, y, z = self.step(*arrs, inverse=inverse)
        return SurfacePoint(x.scalar(0), y.scalar(0), z.scalar(0), p.D, check=False)

    def orbit_log_coords(self, p: SurfacePoint, n: int, inverse: bool = False) -> np.ndarray:
        """ln|x|, ln|y|, ln|z| along n iterates (rows 1..n)."""
        arrs = [ScaledArray.from_scalars([c]) for c in (p.x, p.y, p.z)]
        out = np.empty((n, 3))
        for k in range(n):
            arrs = list(self.step(*arrs, inverse=inverse))
            out[k] = [a.log_abs()[0] for a in arrs]
        return out


def trace_map_apply(tm: TraceMap, p: SurfacePoint) -> SurfacePoint:
    return tm.apply(p)


def trace_map_apply_inverse(tm: TraceMap, p: SurfacePoint) -> SurfacePoint:
    return tm.apply_inverse(p)


# Fixed probe (x, y) pairs; z is completed on S_D.  Complex values keep the
# orbits away from the real bounded region.
PROBES_XY = ((3.0 + 0.5j, 2.5 - 0.25j), (2.0 + 1.0j, -3.0 + 0.5j), (-2.5 + 0.75j, 1.5 + 1.25j), (4.0, 4.0))
VERTEX_STEPS = 25


@dataclass(frozen=True)
class VertexReport:
    vertex: str
    index: int
    probe: int
    log_ratios: np.ndarray  # (steps, 2): ln of the two sub-dominant ratios

    def __str__(self) -> str:
        return self.vertex


def infinity_vertex(tm: TraceMap, steps: int = VERTEX_STEPS) -> VertexReport:
    """The vertex at infinity that forward orbits converge to.

    Each probe point is iterated ``steps`` times; the coordinate that ends
    up dominant names the vertex, and both ratios of the other coordinates
    to it must be tending to zero over the last ten steps.
    """
    for k, (x0, y0) in enumerate(PROBES_XY):
        p = SurfacePoint.from_xy(x0, y0, tm.D)
        logs = tm.orbit_log_coords(p, steps)
        dom = int(np.argmax(logs[-1]))
        others = [i for i in range(3) if i != dom]
        ratios = logs[:, others] - logs[:, [dom]]
        tail = ratios[-10:]
        if logs[-1, dom] > 50 and (np.diff(tail, axis=0) < 0).all() and (tail[-1] < -10).all():
            return VertexReport(VERTICES[dom], dom, k, ratios)
    raise NoEscapeDetected(f"no probe orbit of {tm.sub} escaped to a vertex within {steps} steps")
