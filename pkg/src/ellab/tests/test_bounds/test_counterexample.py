import math

import numpy as np
import pytest

from ellab.bounds import proportional_counterexample
from ellab.exceptions import ParameterRangeError


def test_power_profile_constants():
    example = proportional_counterexample(0.4, 0.4, 1.0)
    assert example.kind == "power"
    assert example.a == pytest.approx(10.0)
    assert example.c == pytest.approx((1 / 90) ** 5, rel=1e-12)
    assert example.residual <= 1e-8
    assert example.boundary_value is None


def test_half_space_power_vanishes_on_boundary():
    example = proportional_counterexample(0.2, 0.3, 2.0, "half")
    assert example.x[0] == 0.0
    assert example.boundary_value == 0.0
    assert example.a == pytest.approx(4.0)
    assert example.residual <= 1e-8


@pytest.mark.parametrize(("geometry", "kind", "w0"), [("whole", "cosh", 1.0), ("half", "sinh", 0.0)])
def test_exponential_profiles(geometry, kind, w0):
    example = proportional_counterexample(0.5, 0.5, 4.0, geometry)
    assert example.kind == kind
    assert example.residual <= 1e-12
    i = int(np.argmin(np.abs(example.x)))
    assert example.w[i] == pytest.approx(w0, abs=1e-15)
    assert example.w[-1] == pytest.approx(getattr(math, kind)(2.0 * 2.0), rel=1e-14)


def test_rows():
    header, rows = proportional_counterexample(0.4, 0.4, 1.0, points=11).to_rows()
    assert header == ["x", "w"]
    assert len(rows) == 11


@pytest.mark.parametrize(("p", "q"), [(0.6, 0.3), (0.5, 0.6), (0.0, 0.5)])
def test_out_of_range_exponents(p, q):
    with pytest.raises(ParameterRangeError):
        proportional_counterexample(p, q, 1.0)
