from .operator import (
    LyapunovSample, Method, OperatorFamily, TransferMatrix, green_on_curve, lyapunov_direct,
    lyapunov_direct_batch, lyapunov_green, lyapunov_green_batch, schrodinger_arrays, schrodinger_point,
    transfer_product,
)
from .dos import (
    capacity_check, circle_mean, density_of_states, dirichlet_eigenvalues, free_ids, free_lyapunov, holder_estimate_ids,
    integrated_laplacian, laplacian_grid, lyapunov_thouless, lyapunov_thouless_batch, max_window_mass,
)
from .spectrum import SpectrumScan, escape_chunk, real_grid, refine_edge, spectrum_escape
from .mixed_bc import MixedRoots, band_spectrum, find_roots, mixed_bc_eigenvalues, trace_and_derivative

__all__ = [
    "LyapunovSample", "Method", "OperatorFamily", "TransferMatrix", "green_on_curve", "lyapunov_direct",
    "lyapunov_direct_batch", "lyapunov_green", "lyapunov_green_batch", "schrodinger_arrays", "schrodinger_point",
    "transfer_product",
    "capacity_check", "circle_mean", "density_of_states", "dirichlet_eigenvalues", "free_ids", "free_lyapunov",
    "holder_estimate_ids", "integrated_laplacian", "laplacian_grid", "lyapunov_thouless",
    "lyapunov_thouless_batch", "max_window_mass",
    "SpectrumScan", "escape_chunk", "real_grid", "refine_edge", "spectrum_escape",
    "MixedRoots", "band_spectrum", "find_roots", "mixed_bc_eigenvalues", "trace_and_derivative",
]
