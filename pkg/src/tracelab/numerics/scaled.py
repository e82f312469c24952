"""Complex numbers with a separate base-2 exponent.

A value is ``mantissa * 2**exp2`` with ``1 <= |mantissa| < 2`` (or exactly
zero with ``exp2 == 0``).  Trace-map orbits grow like exp(C * lambda**n), so
plain doubles overflow after a few dozen iterates; here only the integer
exponent grows.

``ScaledComplex`` is the scalar type.  ``ScaledArray`` holds many values
with identical semantics and is what the vectorized trace-map code uses.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ExponentOverflow, LogOfZero

LN2 = math.log(2.0)
DROP_GAP = 128
EXP_LIMIT = 2**62


def _norm_scalar(m: complex, e: int) -> tuple[complex, int]:
    if m == 0:
        return 0j, 0
    if not (math.isfinite(m.real) and math.isfinite(m.imag)):
        raise ExponentOverflow(f"non-finite mantissa {m!r}")
    _, k = math.frexp(abs(m))
    k -= 1
    m = complex(math.ldexp(m.real, -k), math.ldexp(m.imag, -k))
    e += k
    if abs(e) > EXP_LIMIT:
        raise ExponentOverflow()
    return m, e


@dataclass(frozen=True)
class ScaledComplex:
    mantissa: complex = 0j
    exp2: int = 0

    def __post_init__(self):
        m, e = _norm_scalar(complex(self.mantissa), int(self.exp2))
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exp2", e)

    @classmethod
    def from_complex(cls, value: complex) -> "ScaledComplex":
        return cls(complex(value), 0)

    @classmethod
    def coerce(cls, value) -> "ScaledComplex":
        return value if isinstance(value, ScaledComplex) else cls.from_complex(value)

    def is_zero(self) -> bool:
        return self.mantissa == 0

    def to_complex(self) -> complex:
        """Plain complex value; components overflow to inf when too large."""
        if self.exp2 > 1100:
            return complex(math.copysign(math.inf, self.mantissa.real) if self.mantissa.real else 0.0,
                           math.copysign(math.inf, self.mantissa.imag) if self.mantissa.imag else 0.0)
        if self.exp2 < -1200:
            return 0j
        return complex(math.ldexp(self.mantissa.real, self.exp2), math.ldexp(self.mantissa.imag, self.exp2))

    def log_abs(self) -> float:
        if self.mantissa == 0:
            raise LogOfZero("log of a zero ScaledComplex")
        return math.log(abs(self.mantissa)) + self.exp2 * LN2

    def __neg__(self) -> "ScaledComplex":
        return ScaledComplex(-self.mantissa, self.exp2)

    def __add__(self, other) -> "ScaledComplex":
        other = ScaledComplex.coerce(other)
        if other.mantissa == 0:
            return self
        if self.mantissa == 0:
            return other
        big, small = (self, other) if self.exp2 >= other.exp2 else (other, self)
        gap = small.exp2 - big.exp2
        if gap < -DROP_GAP:
            return big
        m = big.mantissa + complex(math.ldexp(small.mantissa.real, gap), math.ldexp(small.mantissa.imag, gap))
        return ScaledComplex(m, big.exp2)

    __radd__ = __add__

    def __sub__(self, other) -> "ScaledComplex":
        return self + (-ScaledComplex.coerce(other))

    def __rsub__(self, other) -> "ScaledComplex":
        return ScaledComplex.coerce(other) - self

    def __mul__(self, other) -> "ScaledComplex":
        other = ScaledComplex.coerce(other)
        return ScaledComplex(self.mantissa * other.mantissa, self.exp2 + other.exp2)

    __rmul__ = __mul__

    def reciprocal(self) -> "ScaledComplex":
        if self.mantissa == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return ScaledComplex(1.0 / self.mantissa, -self.exp2)

    def __truediv__(self, other) -> "ScaledComplex":
        return self * ScaledComplex.coerce(other).reciprocal()

    def sqrt(self) -> "ScaledComplex":
        """Principal square root."""
        m, e = self.mantissa, self.exp2
        if e % 2:
            m, e = 2 * m, e - 1
        return ScaledComplex(cmath.sqrt(m), e // 2)

    def conjugate(self) -> "ScaledComplex":
        return ScaledComplex(self.mantissa.conjugate(), self.exp2)

    def __repr__(self) -> str:
        return f"ScaledComplex({self.mantissa!r}, 2**{self.exp2})"


def scaled_arith(op: str, x: ScaledComplex, y: ScaledComplex | None = None) -> ScaledComplex:
    """Dispatch ``add``, ``sub``, ``mul`` or ``neg`` on scaled values."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown op {op!r}")


def log_abs(x: ScaledComplex) -> float:
    return x.log_abs()


# -- vectorized -------------------------------------------------------------

def _norm_arrays(m: np.ndarray, e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = np.asarray(m, dtype=np.complex128)
    e = np.asarray(e, dtype=np.int64)
    mag = np.abs(m)
    if not np.isfinite(mag).all():
        raise ExponentOverflow("non-finite mantissa in ScaledArray")
    _, k = np.frexp(mag)
    k = k.astype(np.int64) - 1
    zero = mag == 0
    k = np.where(zero, 0, k)
    m = np.ldexp(m.real, -k) + 1j * np.ldexp(m.imag, -k)
    e = np.where(zero, 0, e + k)
    if e.size and np.abs(e).max() > EXP_LIMIT:
        raise ExponentOverflow()
    return m, e


class ScaledArray:
    """An array of ``ScaledComplex`` values stored as (mantissa, exp2) arrays."""

    __slots__ = ("m", "e")

    def __init__(self, mantissa, exp2=None, *, normalized: bool = False):
        mantissa = np.asarray(mantissa, dtype=np.complex128)
        if exp2 is None:
            exp2 = np.zeros(mantissa.shape, dtype=np.int64)
        exp2 = np.broadcast_to(np.asarray(exp2, dtype=np.int64), mantissa.shape)
        if normalized:
            self.m, self.e = mantissa, np.array(exp2)
        else:
            self.m, self.e = _norm_arrays(mantissa, exp2)

    @classmethod
    def from_complex(cls, values) -> "ScaledArray":
        return cls(np.asarray(values, dtype=np.complex128))

    @classmethod
    def from_scalars(cls, values) -> "ScaledArray":
        values = [ScaledComplex.coerce(v) for v in values]
        return cls(np.array([v.mantissa for v in values], dtype=np.complex128),
                   np.array([v.exp2 for v in values], dtype=np.int64), normalized=True)

    @classmethod
    def full(cls, shape, value: complex) -> "ScaledArray":
        return cls(np.full(shape, value, dtype=np.complex128))

    @property
    def shape(self):
        return self.m.shape

    def __len__(self) -> int:
        return len(self.m)

    def __getitem__(self, idx) -> "ScaledArray":
        return ScaledArray(self.m[idx], self.e[idx], normalized=True)

    def __setitem__(self, idx, value: "ScaledArray") -> None:
        self.m[idx] = value.m
        self.e[idx] = value.e

    def copy(self) -> "ScaledArray":
        return ScaledArray(self.m.copy(), self.e.copy(), normalized=True)

    def scalar(self, i=()) -> ScaledComplex:
        return ScaledComplex(complex(self.m[i]), int(self.e[i]))

    def to_complex(self) -> np.ndarray:
        e = np.clip(self.e, -1200, 1100)
        out = np.empty(self.shape, dtype=np.complex128)
        with np.errstate(over="ignore", under="ignore"):
            out.real = np.ldexp(self.m.real, e)
            out.imag = np.ldexp(self.m.imag, e)
        return out

    def log_abs(self) -> np.ndarray:
        """ln|value|; ``-inf`` where the value is zero."""
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.m)) + self.e * LN2

    @staticmethod
    def _coerce(other, shape) -> "ScaledArray":
        if isinstance(other, ScaledArray):
            return other
        if isinstance(other, ScaledComplex):
            return ScaledArray(np.full(shape, other.mantissa), np.full(shape, other.exp2), normalized=True)
        return ScaledArray(np.broadcast_to(np.asarray(other, dtype=np.complex128), shape))

    def __neg__(self) -> "ScaledArray":
        return ScaledArray(-self.m, self.e, normalized=True)

    def __add__(self, other) -> "ScaledArray":
        other = self._coerce(other, self.shape)
        z1, z2 = self.m == 0, other.m == 0
        e1 = np.where(z1, np.iinfo(np.int64).min // 2, self.e)
        e2 = np.where(z2, np.iinfo(np.int64).min // 2, other.e)
        first_big = e1 >= e2
        eb = np.where(first_big, e1, e2)
        es = np.where(first_big, e2, e1)
        mb = np.where(first_big, self.m, other.m)
        ms = np.where(first_big, other.m, self.m)
        gap = np.maximum(es - eb, -DROP_GAP - 1)
        keep = gap >= -DROP_GAP
        shifted = np.where(keep, np.ldexp(ms.real, gap) + 1j * np.ldexp(ms.imag, gap), 0)
        eb = np.where(z1 & z2, 0, eb)
        return ScaledArray(mb + shifted, eb)

    __radd__ = __add__

    def __sub__(self, other) -> "ScaledArray":
        return self + (-self._coerce(other, self.shape))

    def __rsub__(self, other) -> "ScaledArray":
        return self._coerce(other, self.shape) - self

    def __mul__(self, other) -> "ScaledArray":
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            if other == 0:
                return ScaledArray(np.zeros(self.shape, dtype=np.complex128))
            return ScaledArray(self.m * other, self.e)
        other = self._coerce(other, self.shape)
        return ScaledArray(self.m * other.m, self.e + other.e)

    __rmul__ = __mul__

    def reciprocal(self) -> "ScaledArray":
        with np.errstate(divide="raise", invalid="raise"):
            return ScaledArray(1.0 / self.m, -self.e)

    def __truediv__(self, other) -> "ScaledArray":
        return self * self._coerce(other, self.shape).reciprocal()

    def sqrt(self) -> "ScaledArray":
        odd = (self.e % 2) != 0
        m = np.where(odd, 2 * self.m, self.m)
        e = np.where(odd, self.e - 1, self.e)
        return ScaledArray(np.sqrt(m), e // 2)

    def __repr__(self) -> str:
        return f"ScaledArray(mantissa={self.m!r}, exp2={self.e!r})"


def log_norm3(x: ScaledArray, y: ScaledArray, z: ScaledArray) -> np.ndarray:
    """ln of the Euclidean norm of the triple, computed without overflow."""
    with np.errstate(divide="ignore"):
        logs = np.stack([x.log_abs(), y.log_abs(), z.log_abs()])
    top = logs.max(axis=0)
    safe_top = np.where(np.isfinite(top), top, 0.0)
    with np.errstate(under="ignore"):
        s = np.exp(2.0 * (logs - safe_top)).sum(axis=0)
    return np.where(np.isfinite(top), safe_top + 0.5 * np.log(s), -np.inf)
