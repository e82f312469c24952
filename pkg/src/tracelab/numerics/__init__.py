from .scaled import ScaledArray, ScaledComplex, log_abs, log_norm3, scaled_arith
from .tridiag import sturm_count, tridiag_eigenvalues
from .measure import SpectralMeasure, cdf, kolmogorov_distance, kolmogorov_to_cdf, log_potential
from .intervals import IntervalSet, box_count, box_dimension, cantor_set, hausdorff_distance, total_length

__all__ = [
    "ScaledArray", "ScaledComplex", "log_abs", "log_norm3", "scaled_arith",
    "sturm_count", "tridiag_eigenvalues",
    "SpectralMeasure", "cdf", "kolmogorov_distance", "kolmogorov_to_cdf", "log_potential",
    "IntervalSet", "box_count", "box_dimension", "cantor_set", "hausdorff_distance", "total_length",
]
