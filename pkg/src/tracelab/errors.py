"""Exception hierarchy shared by all tracelab modules."""

from __future__ import annotations


class TracelabError(Exception):
    """Base class for every error raised by the library."""


class InvalidInput(TracelabError, ValueError):
    """Malformed user input (substitution strings, grids, parameters)."""


class SubstitutionParseError(InvalidInput):
    def __init__(self, message: str, text: str, column: int):
        self.text = text
        self.column = column
        super().__init__(f"line 1, column {column + 1}: {message} in {text!r}")


class NotHyperbolic(TracelabError):
    pass


class NormalFormNotFound(TracelabError):
    def __init__(self, depth: int):
        self.depth = depth
        super().__init__(f"no non-negative PGL2(Z) conjugate found within depth {depth}")


class NoFixedSeed(TracelabError):
    pass


class WordTooLong(TracelabError):
    def __init__(self, length: int, cap: int):
        self.length = length
        self.cap = cap
        super().__init__(f"word of length {length} exceeds cap {cap}")


class IndexOutOfRange(TracelabError, IndexError):
    pass


class ExponentOverflow(TracelabError, OverflowError):
    def __init__(self, message: str = "base-2 exponent out of range", iterate: int | None = None):
        self.iterate = iterate
        if iterate is not None:
            message = f"{message} (at iterate {iterate})"
        super().__init__(message)


class LogOfZero(TracelabError, ValueError):
    pass


class NotProbability(TracelabError, ValueError):
    pass


class EmptySet(TracelabError, ValueError):
    pass


class NotOnSurface(TracelabError, ValueError):
    pass


class InverseWordsUnavailable(TracelabError):
    pass


class NoEscapeDetected(TracelabError):
    pass


class NotNearInfinity(TracelabError, ValueError):
    pass


class InsufficientProbes(TracelabError, ValueError):
    pass


class PrefixTooShort(TracelabError, ValueError):
    def __init__(self, needed: int, available: int):
        self.needed = needed
        self.available = available
        super().__init__(f"need {needed} letters of the invariant word, have {available}")


class GreenInconclusive(TracelabError):
    """The orbit escaped but the renormalized logs did not settle within N_max.

    The partial result is kept on ``result`` so callers can still inspect it.
    """

    def __init__(self, result):
        self.result = result
        super().__init__(
            f"Green function inconclusive after {result.iterations} iterates "
            f"(last value {result.value:.6g})"
        )


class AtAtom(TracelabError, ValueError):
    """Log-potential evaluated on an atom of the measure (value is -inf)."""
