import math

import numpy as np
import pytest

from tracelab.errors import GreenInconclusive, InvalidInput, PrefixTooShort
from tracelab.green import EscapeParams
from tracelab.schrodinger import (
    Method, OperatorFamily, free_lyapunov, lyapunov_direct, lyapunov_direct_batch, lyapunov_green,
    lyapunov_green_batch, schrodinger_point, transfer_product,
)

GAMMA_3 = math.log((3 + math.sqrt(5)) / 2)


def test_curve_point_examples():
    assert schrodinger_point(0.0, 1.0).coords() == (-1, 0, -2)
    assert schrodinger_point(2.0, 0.0).coords() == (2, 2, 2)
    assert schrodinger_point(1.0, 2.0).D == 8


def test_potential_follows_invariant_word():
    of = OperatorFamily(kappa=1.5)
    assert of.potential[:8].tolist() == [1, 0, 1, 1, 0, 1, 0, 1]
    assert of.D == pytest.approx(6.25)
    with pytest.raises(InvalidInput):
        OperatorFamily(kappa=math.inf)


def test_single_step_transfer_matrix():
    M = transfer_product(OperatorFamily(kappa=0.5), 1.25, 1).to_complex()
    assert np.allclose(M, [[0.75, -1], [1, 0]])


@pytest.mark.parametrize("N", range(1, 11))
def test_free_transfer_traces_are_chebyshev(N):
    # with E = 2 cos(theta), tr M^N = 2 cos(N theta)
    of = OperatorFamily(kappa=0.0)
    for theta in (0.3, 1.1, 2.5):
        T = transfer_product(of, 2 * math.cos(theta), N)
        assert T.trace().real == pytest.approx(2 * math.cos(N * theta), abs=1e-10)
        assert T.det() == pytest.approx(1, abs=1e-10)


def test_long_products_stay_unimodular():
    T = transfer_product(OperatorFamily(kappa=1.0), 3.5 + 0.2j, 5000)
    assert T.exp2 > 1000
    m = T.mantissa
    assert abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) < 1e-12


def test_direct_free_values():
    of = OperatorFamily(kappa=0.0)
    assert lyapunov_direct(of, 3.0).gamma == pytest.approx(GAMMA_3, abs=1e-3)
    assert abs(lyapunov_direct(of, 1.0).gamma) < 1e-3
    E = np.array([0.5 + 0.5j, -3 + 1j, 2.2])
    assert np.allclose(lyapunov_direct_batch(of, E), free_lyapunov(E), atol=1e-3)


def test_direct_is_conjugation_symmetric():
    of = OperatorFamily(kappa=1.0)
    E = np.array([0.3 + 0.4j, 2.9 + 0.1j, -1.5 + 1.0j])
    assert np.allclose(lyapunov_direct_batch(of, E), lyapunov_direct_batch(of, E.conj()), atol=1e-12)


def test_direct_needs_enough_sites():
    of = OperatorFamily(kappa=1.0, prefix_length=500)
    with pytest.raises(InvalidInput):
        lyapunov_direct_batch(of, [3.0], N=10)
    with pytest.raises(PrefixTooShort):
        lyapunov_direct_batch(of, [3.0], N=1000)


def test_green_route_free_value():
    s = lyapunov_green(OperatorFamily(kappa=0.0), 3.0)
    assert s.method is Method.GREEN
    assert s.gamma == pytest.approx(GAMMA_3, abs=1e-9)


def test_green_route_agrees_with_direct_off_axis():
    of = OperatorFamily(kappa=1.0)
    E = 3 + 0.5j
    assert lyapunov_green(of, E).gamma == pytest.approx(lyapunov_direct(of, E).gamma, abs=2e-3)


def test_green_route_reports_inconclusive():
    of = OperatorFamily(kappa=0.0)
    with pytest.raises(GreenInconclusive):
        lyapunov_green_batch(of, np.array([3.0]), EscapeParams(N_max=5))
    out = lyapunov_green_batch(of, np.array([3.0]), EscapeParams(N_max=5), allow_inconclusive=True)
    assert out.shape == (1,)
