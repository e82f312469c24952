"""Spectra of substitution Schroedinger operators and the dynamics of their trace maps."""

__version__ = "0.1.0"

from .errors import TracelabError
from .substitution import FIBONACCI, FIBONACCI_INVERSE, Substitution
from .surface import SurfacePoint, TraceMap, infinity_vertex
from .green import EscapeParams, GreenResult, Status, green_minus, green_plus
from .schrodinger import OperatorFamily

__all__ = [
    "__version__", "TracelabError", "FIBONACCI", "FIBONACCI_INVERSE", "Substitution", "SurfacePoint", "TraceMap",
    "infinity_vertex", "EscapeParams", "GreenResult", "Status", "green_minus", "green_plus", "OperatorFamily",
]
