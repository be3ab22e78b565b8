"""Rescaled u_k solutions approaching the critical bubble."""

import numpy as np
import pytest

from ellab.exceptions import ParameterRangeError
from ellab.radial import bubble
from ellab.rescaling import critical_limit_check, fit_bubble, rescaled_uk


def test_rescaled_profile_is_normalized():
    v = rescaled_uk(3, 10)
    assert v.center == pytest.approx(1.0, rel=1e-14)
    assert v.params["M"] > 1.0


class TestCriticalLimit:
    def test_residual_decreases_with_k(self):
        table = critical_limit_check(3, [100, 10, 30], y_max=10.0, points=501)
        assert [row.k for row in table.rows] == [10, 30, 100]
        assert table.residual_decreasing
        assert all(row.v0 == pytest.approx(1.0) for row in table.rows)
        assert all(row.q == pytest.approx(2 * row.p - 1) for row in table.rows)

    def test_fitted_constant_approaches_bubble(self):
        """
        Behavior:
          - The least-squares c of (1 + c y^2)^(-1/2) approaches 1/3 as k grows.

        Importance:
          - Identifies the limit profile, not only a vanishing residual.
        """
        table = critical_limit_check(3, [10, 100, 1000], points=501)
        gaps = [abs(row.fit.c - row.fit.exact_c) for row in table.rows]
        assert gaps[0] > gaps[1] > gaps[2]
        assert table.rows[-1].fit.max_deviation < table.rows[0].fit.max_deviation

    def test_rows(self):
        header, rows = critical_limit_check(4, [10], points=101).to_rows()
        assert header == ["k", "v0", "residual", "c", "max_deviation"]
        assert rows[0][0] == 10

    def test_needs_some_k(self):
        with pytest.raises(ParameterRangeError):
            critical_limit_check(3, [])


class TestFitBubble:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_exact_bubble(self, n):
        y = np.linspace(0.0, 10.0, 201)
        fit = fit_bubble(bubble(n).value(y), y, n)
        assert fit.c == pytest.approx(1.0 / (n * (n - 2)), rel=1e-8)
        assert fit.max_deviation <= 1e-10

    def test_mismatched_arrays(self):
        with pytest.raises(ParameterRangeError):
            fit_bubble(np.ones(3), np.linspace(0.0, 1.0, 4))
