import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tracelab.errors import EmptySet, InvalidInput
from tracelab.numerics.intervals import (
    IntervalSet, box_count, box_dimension, cantor_set, geometric_eps, hausdorff_distance, total_length,
)

interval_lists = st.lists(
    st.tuples(st.floats(-10, 10, allow_nan=False), st.floats(0, 3, allow_nan=False)).map(lambda t: (t[0], t[0] + t[1])),
    min_size=1, max_size=8)


def test_from_samples_merges_adjacent_points():
    s = IntervalSet.from_samples([0.0, 0.1, 0.2, 0.5, 0.6, 1.0], 0.1)
    assert s.intervals.tolist() == [[0.0, 0.2], [0.5, 0.6], [1.0, 1.0]]
    assert IntervalSet.from_samples([], 0.1).is_empty()


def test_overlapping_intervals_merge():
    s = IntervalSet(np.array([[0, 1], [0.5, 2], [3, 4]]))
    assert s.intervals.tolist() == [[0, 2], [3, 4]]
    assert total_length(s) == 3
    with pytest.raises(InvalidInput):
        IntervalSet(np.array([[1.0, 0.0]]))


def test_contains_and_distance():
    s = IntervalSet(np.array([[0, 1], [3, 4]]))
    assert s.contains(0.5) and not s.contains(2.0)
    assert s.distance_to(np.array([2.0, 5.0, 0.5])).tolist() == [1.0, 1.0, 0.0]
    assert IntervalSet(np.array([[0.2, 0.4]])).is_subset(s)


def test_hausdorff_examples():
    a = IntervalSet(np.array([[0.0, 1.0]]))
    b = IntervalSet(np.array([[0.0, 0.4], [0.6, 1.0]]))
    assert hausdorff_distance(a, b) == pytest.approx(0.1)
    assert hausdorff_distance(a, IntervalSet(np.array([[0.0, 1.5]]))) == pytest.approx(0.5)
    with pytest.raises(EmptySet):
        hausdorff_distance(a, IntervalSet.empty())


@given(interval_lists, interval_lists)
def test_hausdorff_against_dense_sampling(a, b):
    A, B = IntervalSet(np.array(a)), IntervalSet(np.array(b))
    pa = np.concatenate([np.linspace(lo, hi, 400) for lo, hi in A])
    pb = np.concatenate([np.linspace(lo, hi, 400) for lo, hi in B])
    dense = max(B.distance_to(pa).max(), A.distance_to(pb).max())
    h = hausdorff_distance(A, B)
    assert h >= dense - 1e-12
    assert h <= dense + 3 * 3 / 399 + 1e-12
    assert h == pytest.approx(hausdorff_distance(B, A))


def test_box_count_of_unit_interval():
    assert box_count(IntervalSet(np.array([[0.0, 1.0]])), 0.1) == 10
    assert IntervalSet(np.array([[0.5, 0.5]])).box_count(0.1) == 1


@pytest.mark.parametrize("depth", range(0, 7))
def test_cantor_approximant(depth):
    c = cantor_set(depth)
    assert len(c) == 2**depth
    assert c.total_length() == pytest.approx((2 / 3) ** depth)


def test_box_dimensions():
    eps = geometric_eps(1e-1, 1e-3, 6)
    assert box_dimension(IntervalSet(np.array([[0.0, 1.0]])), eps) == pytest.approx(1.0, abs=0.01)
    dim = box_dimension(cantor_set(8), 3.0 ** -np.arange(1, 7))
    assert dim == pytest.approx(math.log(2) / math.log(3), abs=0.05)
    with pytest.raises(InvalidInput):
        box_dimension(cantor_set(2), [0.1, 0.01])


def test_geometric_eps():
    e = geometric_eps(1.0, 1e-3, 4)
    assert np.allclose(e, [1, 1e-1, 1e-2, 1e-3])


def test_csv_round_trip(tmp_path):
    s = cantor_set(3)
    s.to_csv(tmp_path / "s.csv")
    assert np.array_equal(IntervalSet.from_csv(tmp_path / "s.csv").intervals, s.intervals)
