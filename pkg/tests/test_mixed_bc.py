import numpy as np
import pytest
from numpy.polynomial import Polynomial

from tracelab.numerics.intervals import IntervalSet, box_dimension, geometric_eps
from tracelab.numerics.measure import SpectralMeasure, kolmogorov_distance
from tracelab.schrodinger import (
    OperatorFamily, band_spectrum, density_of_states, find_roots, mixed_bc_eigenvalues, spectrum_escape,
    trace_and_derivative,
)
from tracelab.substitution import FIBONACCI, potential_array


def _trace_polynomial(word, kappa):
    # independent oracle: the transfer product as a matrix of exact polynomials in E
    E = Polynomial([0, 1])
    P = [[Polynomial([1]), Polynomial([0])], [Polynomial([0]), Polynomial([1])]]
    for v in potential_array(word):
        c = E - kappa * v
        P = [[c * P[0][0] - P[1][0], c * P[0][1] - P[1][1]], [P[0][0], P[0][1]]]
    return P[0][0] + P[1][1]


@pytest.mark.parametrize("kappa", [0.3, 1.0, 2.0])
def test_roots_match_polynomial_oracle(kappa):
    word = FIBONACCI.iterate("a", 5)
    poly = _trace_polynomial(word, kappa) - 2
    assert poly.degree() == 13
    r = mixed_bc_eigenvalues(OperatorFamily(kappa=kappa), 5)
    # the trace minus 2 has only real roots; compare as a multiset
    oracle = np.sort(poly.roots().real)
    assert r.count == 13
    assert np.abs(r.roots - oracle).max() < 1e-6


def test_free_roots_are_chebyshev_values():
    r = mixed_bc_eigenvalues(OperatorFamily(kappa=0.0), 5)
    assert r.distinct.size == 7
    assert np.abs(r.distinct - np.sort(2 * np.cos(2 * np.pi * np.arange(7) / 13))).max() < 1e-8
    assert r.multiplicity.tolist().count(2) == 6


def test_derivative_matches_finite_difference():
    pot = potential_array(FIBONACCI.iterate("a", 8))
    E = np.array([-1.3, 0.4, 2.6])
    h = 1e-6
    sg, lg, sd, ldg = trace_and_derivative(pot, E, 1.0, 0.0)
    _, lp, _, _ = trace_and_derivative(pot, E + h, 1.0, 0.0)
    sp = trace_and_derivative(pot, E + h, 1.0, 0.0)[0]
    sm, lm, _, _ = trace_and_derivative(pot, E - h, 1.0, 0.0)
    fd = (sp * np.exp(lp) - sm * np.exp(lm)) / (2 * h)
    assert np.allclose(sd * np.exp(ldg), fd, rtol=1e-5)


@pytest.mark.parametrize("n", [6, 9, 11, 13])
@pytest.mark.parametrize("kappa", [0.0, 0.3, 1.0, 4.0])
def test_root_count_equals_word_length(n, kappa):
    r = mixed_bc_eigenvalues(OperatorFamily(kappa=kappa), n)
    assert r.count == r.length == len(FIBONACCI.iterate("a", n))


def test_other_target_against_dense_sign_changes():
    pot = potential_array(FIBONACCI.iterate("a", 9))
    r = find_roots(pot, 2.0, target=3.0)
    E = np.linspace(-5, 6, 400_001)
    sg = np.concatenate([trace_and_derivative(pot, c, 2.0, 3.0)[0] for c in np.array_split(E, 8)])
    assert (r.multiplicity == 1).all()
    assert r.count == int((sg[:-1] * sg[1:] < 0).sum())
    assert 0 < r.count < r.length


def test_target_three_at_strong_coupling():
    r = mixed_bc_eigenvalues(OperatorFamily(kappa=2.0), 12, target=3.0)
    assert 0 < r.count < r.length
    pot = potential_array(FIBONACCI.iterate("a", 12))
    gap = np.diff(r.distinct).min()
    h = min(1e-8, gap / 4)
    left = trace_and_derivative(pot, r.distinct - h, 2.0, 3.0)[0]
    right = trace_and_derivative(pot, r.distinct + h, 2.0, 3.0)[0]
    assert (left * right < 0).all()


def test_counting_measure_approaches_dos():
    of = OperatorFamily(kappa=0.0)
    dos = density_of_states(of, 2000, 64)
    k = [kolmogorov_distance(SpectralMeasure.uniform(mixed_bc_eigenvalues(of, n).roots), dos) for n in (9, 12, 14)]
    assert k[0] > k[1] > k[2]
    assert k[2] < 0.05


def test_free_band_spectrum_is_one_interval():
    assert band_spectrum(OperatorFamily(kappa=0.0), 9).intervals.tolist() == [[-2.0, 2.0]]


def test_band_cover_contains_bounded_energies():
    of = OperatorFamily(kappa=1.0)
    cover = IntervalSet(np.vstack([band_spectrum(of, 12).intervals, band_spectrum(of, 13).intervals]))
    scan = spectrum_escape(of, step=0.005)
    inside = scan.grid[scan.status == 0]
    assert inside.size > 0
    assert cover.contains(inside, tol=1e-6).all()


def test_box_dimension_decreases_with_coupling():
    eps = geometric_eps(1e-2, 1e-4, 6)
    dims = [box_dimension(band_spectrum(OperatorFamily(kappa=k), 13), eps) for k in (0.5, 1.0, 2.0)]
    assert dims[0] > dims[1] > dims[2]
    assert 0 < dims[2] and dims[0] < 1
