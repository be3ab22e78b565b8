"""Regular-variation indices, rescaling limits and f+."""

import math

import numpy as np
import pytest

from ellab.exceptions import ParameterRangeError
from ellab.nonlin import SystemNonlin, f_plus, local_index, numeric_index, regvar_profile
from ellab.nonlin.presets import lane_emden_pair


class TestScalarProfile:
    """
    Fixtures used:
      - log_f: u^2 log(2 + u).
      - benchmark_f: (0.2 + min(1, u^1.5)) u^2.5.
    """

    def test_log_factor_read_structurally(self, log_f):
        """
        Behavior:
          - Index 2 at both ends; at infinity the slow factor is log(s)^1, at zero the constant log 2.

        Importance:
          - The log exponent decides borderline cases of the criteria.
        """
        profile = regvar_profile(log_f)
        assert profile.method == "structural"
        assert profile.index_inf == pytest.approx(2.0)
        assert profile.index_zero == pytest.approx(2.0)
        assert profile.slow_inf[0].log_exponent == pytest.approx(1.0)
        assert profile.slow_zero[0].log_exponent == 0.0
        assert profile.slow_zero[0].coefficient == pytest.approx(math.log(2.0))
        assert local_index(log_f, "inf") == pytest.approx((2.0, 1.0))

    def test_benchmark_indices(self, benchmark_f):
        profile = regvar_profile(benchmark_f)
        assert profile.index("inf") == pytest.approx(2.5)
        assert profile.index("zero") == pytest.approx(2.5)
        # f(s) ~ (K + 1) s^p at infinity and ~ K s^p at zero
        assert profile.slow_inf[0].coefficient == pytest.approx(1.2)
        assert profile.slow_zero[0].coefficient == pytest.approx(0.2)

    def test_limit_is_pure_power(self, benchmark_f):
        profile = regvar_profile(benchmark_f)
        xi = np.array([[0.5, 1.0, 2.0]])
        np.testing.assert_allclose(profile.evaluate_limit("inf", xi)[0], xi[0] ** 2.5)

    def test_numeric_index_for_polynomial(self):
        from ellab.nonlin import ScalarNonlin

        est = numeric_index(ScalarNonlin.parse("u^3 + u"), "inf")
        assert est.converged
        assert est.slope == pytest.approx(3.0, abs=1e-6)
        est0 = numeric_index(ScalarNonlin.parse("u^3 + u"), "zero")
        assert est0.slope == pytest.approx(1.0, abs=1e-6)


class TestSystemProfile:
    def test_lane_emden_limits(self):
        """
        Behavior:
          - For (v^2, u^3) the order is 3 at infinity (second component dominates) and 2 at zero.
          - The limit at infinity is (0, u^3): the subdominant component drops out.

        Importance:
          - Rescaled systems converge to the homogeneous limit used by the blow-up argument.
        """
        profile = regvar_profile(lane_emden_pair(2.0, 3.0))
        assert profile.index_inf == pytest.approx(3.0)
        assert profile.index_zero == pytest.approx(2.0)
        U = np.array([[0.5, 1.0], [0.25, 0.75]])
        limit = profile.evaluate_limit("inf", U)
        np.testing.assert_allclose(limit[0], [0.0, 0.0])
        np.testing.assert_allclose(limit[1], U[0] ** 3)

    def test_scalar_system_uses_scalar_profile(self, log_f):
        profile = regvar_profile(SystemNonlin.from_scalar(log_f))
        assert profile.variables == ("u",)
        assert profile.slow_inf[0].log_exponent == pytest.approx(1.0)


class TestFPlus:
    def test_scalar(self, power_f):
        assert f_plus(power_f, 2.0) == pytest.approx(8.0)

    def test_system_max_norm_sphere(self):
        S = lane_emden_pair(2.0, 3.0)
        assert f_plus(S, 2.0) == pytest.approx(8.0, rel=1e-9)
        assert f_plus(S, 0.5) == pytest.approx(0.25, rel=1e-9)

    @pytest.mark.parametrize("lam", [0.0, -1.0, math.inf])
    def test_lambda_must_be_positive(self, power_f, lam):
        with pytest.raises(ParameterRangeError):
            f_plus(power_f, lam)
