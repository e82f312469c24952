import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracelab.errors import InvalidInput
from tracelab.numerics.tridiag import sturm_count, tridiag_eigenvalues


def _char_poly_roots(d, e):
    # independent oracle: bisection on the three-term determinant recurrence
    def det(x):
        p0, p1 = 1.0, d[0] - x
        for i in range(1, len(d)):
            p0, p1 = p1, (d[i] - x) * p1 - e[i - 1] ** 2 * p0
        return p1

    r = sum(abs(v) for v in d) + 2 * sum(abs(v) for v in e) + 1
    xs = np.linspace(-r, r, 20001)
    vals = np.array([det(x) for x in xs])
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]:
        a, b = xs[i], xs[i + 1]
        for _ in range(80):
            m = 0.5 * (a + b)
            if np.sign(det(m)) == np.sign(det(a)):
                a = m
            else:
                b = m
        roots.append(0.5 * (a + b))
    return np.array(roots)


def test_single_entry():
    assert tridiag_eigenvalues([3.5], []).tolist() == [3.5]


def test_three_by_three_closed_form():
    ev = tridiag_eigenvalues([0, 0, 0], [1, 1])
    assert np.allclose(ev, [-math.sqrt(2), 0, math.sqrt(2)], atol=1e-10)


def test_free_laplacian_closed_form():
    L = 50
    ev = tridiag_eigenvalues(np.zeros(L), np.ones(L - 1))
    want = np.sort(2 * np.cos(np.pi * np.arange(1, L + 1) / (L + 1)))
    assert np.abs(ev - want).max() < 1e-10


@pytest.mark.parametrize("L", range(2, 9))
def test_against_characteristic_polynomial(L):
    rng = np.random.default_rng(L)
    for _ in range(5):
        d, e = rng.normal(size=L), rng.uniform(0.3, 1.5, size=L - 1)
        oracle = _char_poly_roots(d, e)
        assert oracle.size == L
        assert np.abs(tridiag_eigenvalues(d, e) - oracle).max() < 1e-9


@given(st.integers(1, 40), st.integers(0, 2**31))
@settings(max_examples=40, deadline=None)
def test_count_and_order(L, s):
    rng = np.random.default_rng(s)
    d, e = rng.normal(size=L), rng.normal(size=L - 1)
    ev = tridiag_eigenvalues(d, e)
    assert ev.size == L
    assert np.all(np.diff(ev) >= 0)
    assert abs(ev.sum() - d.sum()) < 1e-8


@given(st.integers(2, 30), st.integers(0, 2**31))
@settings(max_examples=30, deadline=None)
def test_sturm_count_is_monotone(L, s):
    rng = np.random.default_rng(s)
    d, e = rng.normal(size=L), rng.normal(size=L - 1)
    c = sturm_count(d, e, np.linspace(-10, 10, 201))
    assert np.all(np.diff(c) >= 0)
    assert c[0] == 0 and c[-1] == L


def test_lapack_route_agrees_with_sturm():
    rng = np.random.default_rng(11)
    d, e = rng.normal(size=300), rng.normal(size=299)
    assert np.abs(tridiag_eigenvalues(d, e, method="lapack") - tridiag_eigenvalues(d, e)).max() < 1e-9


def test_bad_shapes_and_method():
    with pytest.raises(InvalidInput):
        tridiag_eigenvalues([1, 2], [1, 2])
    with pytest.raises(InvalidInput):
        tridiag_eigenvalues([], [])
    with pytest.raises(InvalidInput):
        tridiag_eigenvalues([1, 2], [1], method="qr")
