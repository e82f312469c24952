import numpy as np
import pytest

from tracelab.errors import InvalidInput
from tracelab.green import Membership
from tracelab.numerics.intervals import IntervalSet, hausdorff_distance
from tracelab.schrodinger import OperatorFamily, real_grid, refine_edge, spectrum_escape


def test_real_grid():
    g = real_grid(-1.0, 1.0, 0.25)
    assert g.tolist() == [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0]


def test_free_spectrum_is_the_interval():
    scan = spectrum_escape(OperatorFamily(kappa=0.0), step=0.005)
    assert hausdorff_distance(scan.outer, IntervalSet(np.array([[-2.0, 2.0]]))) < 0.05
    assert scan.inner.is_subset(scan.outer)


def test_coupled_spectrum_is_thin():
    scan = spectrum_escape(OperatorFamily(kappa=2.0), step=0.005)
    assert scan.outer.total_length() < 1.0
    assert (scan.status == Membership.ESCAPED).sum() > 0.7 * scan.grid.size
    assert scan.outer.intervals.min() >= -2 - 0.01 and scan.outer.intervals.max() <= 4 + 0.01


def test_refined_free_edge():
    of = OperatorFamily(kappa=0.0)
    assert refine_edge(of, 1.9, 2.1) == pytest.approx(2.0, abs=1e-9)
    assert refine_edge(of, -1.9, -2.1) == pytest.approx(-2.0, abs=1e-9)


def test_coarse_grid_rejected():
    with pytest.raises(InvalidInput):
        spectrum_escape(OperatorFamily(kappa=0.0), step=0.05)
