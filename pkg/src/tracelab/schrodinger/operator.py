"""The discrete Schroedinger operator with a substitution potential.

    (H psi)(n) = psi(n+1) + psi(n-1) + kappa v(n) psi(n),   v(n) = [w_n == 'a']

and its transfer matrices M(a) = [[E - kappa, -1], [1, 0]], M(b) = [[E, -1], [1, 0]].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import GreenInconclusive, InvalidInput, PrefixTooShort
from ..green import EscapeParams, GreenBatch, Status, green_batch
from ..numerics.scaled import ScaledArray
from ..substitution import FIBONACCI, Substitution, potential_array
from ..surface import SurfacePoint, TraceMap

DEFAULT_PREFIX = 20_000
RESCALE_EVERY = 16


class Method(str, enum.Enum):
    DIRECT = "Direct"
    GREEN = "Green"
    THOULESS = "Thouless"


@dataclass(frozen=True)
class LyapunovSample:
    E: complex
    gamma: float
    method: Method


@dataclass(frozen=True)
class OperatorFamily:
    sub: Substitution = FIBONACCI
    kappa: float = 0.0
    prefix_length: int = DEFAULT_PREFIX

    def __post_init__(self):
        if not math.isfinite(self.kappa):
            raise InvalidInput("kappa must be finite")

    @cached_property
    def prefix(self) -> str:
        return self.sub.invariant_word_prefix(self.prefix_length)

    @cached_property
    def potential(self) -> np.ndarray:
        return potential_array(self.prefix)

    @property
    def D(self) -> float:
        return 4.0 + self.kappa**2

    @cached_property
    def trace_map(self) -> TraceMap:
        return TraceMap(self.sub, self.D)

    def spectral_bound(self) -> float:
        return 2.0 + abs(self.kappa)

    def need(self, n: int) -> None:
        if n > len(self.prefix):
            raise PrefixTooShort(n, len(self.prefix))


def schrodinger_point(E: complex, kappa: float) -> SurfacePoint:
    """s(E) = (E - kappa, E, E(E - kappa) - 2), a point of S with D = 4 + kappa^2."""
    E = complex(E)
    return SurfacePoint(E - kappa, E, E * (E - kappa) - 2, 4.0 + kappa**2)


def schrodinger_arrays(E, kappa: float) -> tuple[ScaledArray, ScaledArray, ScaledArray]:
    E = np.asarray(E, dtype=complex).ravel()
    return (ScaledArray(E - kappa), ScaledArray(E), ScaledArray(E * (E - kappa) - 2))


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 matrix ``mantissa * 2**exp2`` with one exponent for all entries."""

    mantissa: np.ndarray
    exp2: int

    def to_complex(self) -> np.ndarray:
        return np.ldexp(self.mantissa.real, self.exp2) + 1j * np.ldexp(self.mantissa.imag, self.exp2)

    def det(self) -> complex:
        m = self.mantissa
        return complex((m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) * 4.0**self.exp2)

    def trace(self) -> complex:
        return complex((self.mantissa[0, 0] + self.mantissa[1, 1]) * 2.0**self.exp2)

    def log_norm(self) -> float:
        """ln of the largest Euclidean column norm."""
        cols = np.sqrt((np.abs(self.mantissa) ** 2).sum(axis=0))
        return float(np.log(cols.max()) + self.exp2 * math.log(2))


def transfer_block(potential: np.ndarray, E, kappa: float):
    """Products M_{N-1} ... M_0 for an array of energies.

    Returns (p00, p01, p10, p11, exp2) with all four entries sharing the
    base-2 exponent ``exp2`` per energy.
    """
    E = np.asarray(E, dtype=complex)
    ca = E - kappa
    cb = E
    p00 = np.ones_like(E)
    p01 = np.zeros_like(E)
    p10 = np.zeros_like(E)
    p11 = np.ones_like(E)
    ex = np.zeros(E.shape, dtype=np.int64)
    for i, v in enumerate(potential):
        c = ca if v else cb
        p00, p01, p10, p11 = c * p00 - p10, c * p01 - p11, p00, p01
        if i % RESCALE_EVERY == RESCALE_EVERY - 1:
            big = np.maximum(np.maximum(np.abs(p00), np.abs(p01)), np.maximum(np.abs(p10), np.abs(p11)))
            _, k = np.frexp(big)
            k = k.astype(np.int64)
            p00, p01, p10, p11 = (np.ldexp(q.real, -k) + 1j * np.ldexp(q.imag, -k) for q in (p00, p01, p10, p11))
            ex += k
    return p00, p01, p10, p11, ex


def transfer_product(of: OperatorFamily, E: complex, N: int) -> TransferMatrix:
    of.need(N)
    p00, p01, p10, p11, ex = transfer_block(of.potential[:N], np.array([E]), of.kappa)
    m = np.array([[p00[0], p01[0]], [p10[0], p11[0]]])
    return TransferMatrix(m, int(ex[0]))


def lyapunov_direct_batch(of: OperatorFamily, E, N: int = 10_000) -> np.ndarray:
    if N < 100:
        raise InvalidInput("direct Lyapunov estimate needs N >= 100")
    of.need(N)
    E = np.asarray(E, dtype=complex)
    p00, p01, p10, p11, ex = transfer_block(of.potential[:N], E.ravel(), of.kappa)
    c0 = np.sqrt(np.abs(p00) ** 2 + np.abs(p10) ** 2)
    c1 = np.sqrt(np.abs(p01) ** 2 + np.abs(p11) ** 2)
    g = (np.log(np.maximum(c0, c1)) + ex * math.log(2)) / N
    return g.reshape(E.shape)


def lyapunov_direct(of: OperatorFamily, E: complex, N: int = 10_000) -> LyapunovSample:
    g = float(lyapunov_direct_batch(of, np.array([E]), N)[0])
    return LyapunovSample(complex(E), g, Method.DIRECT)


def green_on_curve(of: OperatorFamily, E, ep: EscapeParams = EscapeParams()) -> GreenBatch:
    return green_batch(of.trace_map, *schrodinger_arrays(E, of.kappa), ep=ep)


def lyapunov_green_batch(of: OperatorFamily, E, ep: EscapeParams = EscapeParams(),
                         alpha_offset: float = 0.0, allow_inconclusive: bool = False) -> np.ndarray:
    """G+(s(E)) / (alpha + beta) on an array of energies.

    ``alpha_offset`` perturbs alpha in the normalization; it exists only so
    that verification runs can confirm a wrong constant is detected.
    """
    E = np.asarray(E, dtype=complex)
    b = green_on_curve(of, E.ravel(), ep)
    if not allow_inconclusive:
        bad = np.nonzero(b.mask(Status.INCONCLUSIVE))[0]
        if bad.size:
            raise GreenInconclusive(b.result(int(bad[0])))
    ab = of.trace_map.abelian
    return (b.value / (ab.alpha + alpha_offset + ab.beta)).reshape(E.shape)


def lyapunov_green(of: OperatorFamily, E: complex, ep: EscapeParams = EscapeParams()) -> LyapunovSample:
    g = float(lyapunov_green_batch(of, np.array([E]), ep)[0])
    return LyapunovSample(complex(E), g, Method.GREEN)
