import math

import numpy as np
import pytest

from tracelab.errors import InvalidInput
from tracelab.numerics.measure import SpectralMeasure, kolmogorov_to_cdf
from tracelab.schrodinger import (
    OperatorFamily, capacity_check, density_of_states, dirichlet_eigenvalues, free_ids, free_lyapunov,
    holder_estimate_ids, integrated_laplacian, laplacian_grid, lyapunov_direct_batch, lyapunov_green_batch,
    lyapunov_thouless, lyapunov_thouless_batch, max_window_mass,
)

GAMMA_3 = math.log((3 + math.sqrt(5)) / 2)


@pytest.fixture(scope="module")
def dos0():
    return density_of_states(OperatorFamily(kappa=0.0), 2000, 64)


@pytest.fixture(scope="module")
def dos1():
    return density_of_states(OperatorFamily(kappa=1.0), 2000, 64)


def test_free_dirichlet_window():
    ev = dirichlet_eigenvalues(OperatorFamily(kappa=0.0), 0, 5)
    assert np.allclose(ev, np.sort(2 * np.cos(np.pi * np.arange(1, 6) / 6)), atol=1e-9)


def test_dirichlet_window_trace_equals_potential_sum():
    of = OperatorFamily(kappa=1.7)
    ev = dirichlet_eigenvalues(of, 37, 40)
    assert ev.sum() == pytest.approx(1.7 * of.potential[37:77].sum(), abs=1e-8)
    assert np.allclose(ev, dirichlet_eigenvalues(of, 37, 40, method="lapack"), atol=1e-9)


def test_free_dos_is_arcsine(dos0):
    assert dos0.is_probability()
    assert kolmogorov_to_cdf(dos0, free_ids) < 1e-2
    assert dos0.mean() == pytest.approx(0.0, abs=1e-9)


def test_dos_mean_and_support(dos1):
    # the mean eigenvalue is kappa times the frequency of 'a'
    assert dos1.mean() == pytest.approx(1 / ((1 + math.sqrt(5)) / 2), abs=2e-3)
    assert dos1.atoms.min() >= -2 - 1e-9 and dos1.atoms.max() <= 3 + 1e-9


def test_stride_must_be_positive():
    with pytest.raises(InvalidInput):
        density_of_states(OperatorFamily(kappa=1.0), 100, 4, stride=0)


def test_thouless_free_values(dos0):
    assert lyapunov_thouless(3.0, dos0).gamma == pytest.approx(GAMMA_3, abs=2e-3)
    E = np.array([50.0, 200j, -1e3])
    assert np.allclose(lyapunov_thouless_batch(E, dos0), np.log(np.abs(E)), atol=1e-3)


@pytest.mark.parametrize("kappa", [0.0, 1.0])
def test_three_routes_agree(kappa, dos0, dos1):
    of = OperatorFamily(kappa=kappa)
    dos = dos0 if kappa == 0 else dos1
    E = np.array([3.0 + 0.2j, -2.6 + 0.5j, 0.5 + 0.8j, 4.0])
    d = lyapunov_direct_batch(of, E)
    g = lyapunov_green_batch(of, E)
    t = lyapunov_thouless_batch(E, dos)
    assert np.abs(d - g).max() < 2e-3
    assert np.abs(d - t).max() < 2e-3
    assert np.abs(g - t).max() < 2e-3


def test_capacity_is_one(dos0, dos1):
    for dos in (dos0, dos1):
        assert abs(capacity_check(dos, 1e3j)) < 1e-2
    with pytest.raises(InvalidInput):
        capacity_check(dos0, 10.0)


def test_log_potential_scale_covariance(dos1):
    # dilating the measure by c shifts the potential at c E by ln c
    c = 2.5
    scaled = SpectralMeasure(c * dos1.atoms, dos1.weights)
    E = np.array([3.5 + 0.1j, -0.2 + 1j])
    assert np.allclose(lyapunov_thouless_batch(c * E, scaled), lyapunov_thouless_batch(E, dos1) + math.log(c),
                       atol=1e-12)


def test_max_window_mass_example():
    m = SpectralMeasure.uniform([0.0, 0.1, 0.15, 1.0])
    assert max_window_mass(m, 0.2) == 0.75
    assert max_window_mass(m, 0.01) == 0.25


def test_ids_holder_exponents(dos1):
    n = 20000
    arcsine = SpectralMeasure.uniform(2 * np.cos(np.pi * (np.arange(n) + 0.5) / n))
    uniform = SpectralMeasure.uniform((np.arange(n) + 0.5) / n)
    deltas = np.geomspace(1e-3, 1e-1, 8)
    assert holder_estimate_ids(arcsine, deltas) == pytest.approx(0.5, abs=0.05)
    assert holder_estimate_ids(uniform, deltas) == pytest.approx(1.0, abs=0.02)
    assert 0 < holder_estimate_ids(dos1, deltas) < 1


def test_discrete_laplacian_of_known_functions():
    h = 0.02
    Z = laplacian_grid(-1, 1, -1 + h / 2, 1 - h / 2, h)
    assert integrated_laplacian(np.real(Z**2), h) == pytest.approx(0.0, abs=1e-9)
    assert integrated_laplacian(np.log(np.abs(Z)), h) == pytest.approx(2 * math.pi, rel=1e-3)
    W = laplacian_grid(-3, 3, -1 + h / 2, 1 - h / 2, h)
    assert integrated_laplacian(free_lyapunov(W), h) == pytest.approx(2 * math.pi, rel=2e-2)
