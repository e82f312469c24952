import math

import numpy as np
import pytest

from tracelab.errors import GreenInconclusive, InsufficientProbes, InvalidInput
from tracelab.green import (
    EscapeParams, Membership, Status, escape_status, green_batch, green_minus, green_plus, holder_estimate,
    in_filled_julia, residual_sequence,
)
from tracelab.schrodinger import (
    OperatorFamily, circle_mean, refine_edge, schrodinger_arrays, schrodinger_point, spectrum_escape,
)
from tracelab.substitution import FIBONACCI
from tracelab.surface import PROBES_XY, SurfacePoint, TraceMap

PHI = (1 + math.sqrt(5)) / 2
TM0 = OperatorFamily(kappa=0.0).trace_map
TM1 = OperatorFamily(kappa=1.0).trace_map
TM5 = TraceMap(FIBONACCI, 5.0)


def _curve_green(tm, kappa, E, ep=EscapeParams()):
    return green_batch(tm, *schrodinger_arrays(E, kappa), ep=ep)


def test_bounded_orbit_has_zero_green():
    r = green_plus(TM0, schrodinger_point(1.0, 0.0))
    assert r.status is Status.BOUNDED and r.value == 0.0


def test_green_at_three_on_free_curve():
    # independent oracle: (alpha + beta) times the free Lyapunov exponent at 3
    oracle = (PHI**3 / math.sqrt(5)) * math.log((3 + math.sqrt(5)) / 2)
    r = green_plus(TM0, schrodinger_point(3.0, 0.0))
    assert r.status is Status.CONVERGED
    assert r.value == pytest.approx(oracle, abs=1e-9)
    assert r.value == pytest.approx(1.823241532, abs=1e-9)


@pytest.mark.parametrize("probe", PROBES_XY)
def test_forward_functional_equation(probe):
    p = SurfacePoint.from_xy(*probe, TM5.D)
    g0, g1 = green_plus(TM5, p), green_plus(TM5, TM5.apply(p))
    assert g0.status is Status.CONVERGED and g1.status is Status.CONVERGED
    assert g1.value == pytest.approx(PHI * g0.value, rel=1e-7)


@pytest.mark.parametrize("probe", PROBES_XY)
def test_backward_functional_equation(probe):
    p = SurfacePoint.from_xy(*probe, TM5.D)
    g0, g1 = green_minus(TM5, p), green_minus(TM5, TM5.apply_inverse(p))
    assert g0.status is Status.CONVERGED and g1.status is Status.CONVERGED
    assert g1.value == pytest.approx(PHI * g0.value, rel=1e-7)


def test_green_minus_vanishes_on_bounded_orbit():
    r = green_minus(TM0, schrodinger_point(-0.7, 0.0))
    assert r.status is Status.BOUNDED and r.value == 0.0


def test_green_is_nonnegative():
    rng = np.random.default_rng(5)
    E = rng.uniform(-4, 4, 200) + 1j * rng.uniform(-1, 1, 200)
    assert (_curve_green(TM1, 1.0, E).value >= 0).all()


@pytest.mark.parametrize("E, inside", [(1.0, True), (3.0, False), (2.0001, False), (-1.99, True)])
def test_filled_julia_membership(E, inside):
    assert in_filled_julia(TM0, schrodinger_point(E, 0.0)) is inside


def test_escape_status_codes():
    st = escape_status(TM0, *schrodinger_arrays(np.array([0.5, 3.0]), 0.0))
    assert st.tolist() == [Membership.BOUNDED, Membership.ESCAPED]


def test_residual_sequence_settles_to_a_common_constant():
    rng = np.random.default_rng(9)
    finals = []
    for _ in range(10):
        a, b, c, d = rng.uniform(-3, 3, 4)
        r = residual_sequence(TM5, SurfacePoint.from_xy(complex(a, b), complex(c, d), TM5.D))
        assert r.size >= 8
        assert np.abs(np.diff(r[5:])).max() < 1e-3
        finals.append(r[-1])
    assert np.ptp(finals) < 1e-2


def test_residual_sequence_detects_wrong_alpha():
    p = SurfacePoint.from_xy(*PROBES_XY[0], TM5.D)
    r = residual_sequence(TM5, p, alpha=TM5.abelian.alpha + 0.1)
    assert np.abs(np.diff(r[5:])).max() > 1e-3


def test_holder_exponent_at_free_edge():
    d = np.geomspace(1e-6, 1e-2, 24)
    tau = holder_estimate(TM0, [(schrodinger_point(2.0 + x, 0.0), x) for x in d])
    assert tau == pytest.approx(0.5, abs=0.02)
    # the slope is a scale-free quantity: doubling every distance proxy leaves it unchanged
    tau2 = holder_estimate(TM0, [(schrodinger_point(2.0 + x, 0.0), 2 * x) for x in d])
    assert tau2 == pytest.approx(tau, abs=1e-9)


def test_holder_exponent_at_kappa_one_is_in_unit_interval():
    of = OperatorFamily(kappa=1.0)
    scan = spectrum_escape(of, step=0.005)
    top = float(scan.outer.intervals[-1, 1])
    edge = refine_edge(of, top, top + 0.005)
    d = np.geomspace(1e-6, 1e-2, 24)
    tau = holder_estimate(of.trace_map, [(schrodinger_point(edge + x, 1.0), x) for x in d])
    assert 0 < tau <= 1


def test_holder_needs_enough_probes():
    with pytest.raises(InsufficientProbes):
        holder_estimate(TM0, [(schrodinger_point(3.0, 0.0), 1.0)] * 5)


def test_green_is_harmonic_off_the_spectrum():
    gamma = lambda E: _curve_green(TM1, 1.0, E).value
    for c in (3.8 + 0.3j, -0.5 + 0.8j):
        assert circle_mean(gamma, c, radius=0.05, n=32) == pytest.approx(gamma(np.array([c]))[0], abs=1e-4)


def test_green_is_subharmonic_on_the_spectrum():
    gamma = lambda E: _curve_green(TM0, 0.0, E).value
    for c in (0.0, 1.3):
        assert circle_mean(gamma, c, radius=0.05, n=32) > gamma(np.array([c]))[0] + 1e-4


def test_more_iterations_never_lose_convergence():
    E = np.linspace(2.0005, 4.0, 60)
    statuses = [_curve_green(TM0, 0.0, E, EscapeParams(N_max=n)) for n in (10, 20, 40)]
    conv = [b.mask(Status.CONVERGED) for b in statuses]
    assert (conv[0] <= conv[1]).all() and (conv[1] <= conv[2]).all()


def test_strict_mode_raises_when_inconclusive():
    ep = EscapeParams(N_max=5)
    p = schrodinger_point(3.0, 0.0)
    assert green_plus(TM0, p, ep).status is Status.INCONCLUSIVE
    with pytest.raises(GreenInconclusive):
        green_plus(TM0, p, ep, strict=True)


@pytest.mark.parametrize("kw", [dict(R_escape=5.0), dict(N_max=2), dict(tol=0.0)])
def test_escape_params_validation(kw):
    with pytest.raises(InvalidInput):
        EscapeParams(**kw)
