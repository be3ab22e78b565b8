"""theta(K), phi_K and the log family g(s) = s^b log^a(K + s^sigma)."""

import math

import numpy as np
import pytest

from ellab.exceptions import DomainError, ParameterRangeError
from ellab.nonlin import (
    check_log_convexity,
    h_sigma,
    log_family,
    log_family_log_derivative,
    phi_K,
    phi_K_min,
    theta,
)


class TestTheta:
    def test_theta_at_one(self):
        assert theta(1.0) == 1.0

    @pytest.mark.parametrize("K", [1.5, 2.0, math.e, 10.0, 1e6])
    def test_theta_solves_defining_equation(self, K):
        t = theta(K)
        assert t > 1.0
        assert math.exp(t - 1.0) / t == pytest.approx(K, rel=1e-12)

    def test_theta_below_one_is_domain_error(self):
        with pytest.raises(DomainError):
            theta(0.5)

    @pytest.mark.parametrize("K", [1.5, 2.0, 5.0, 100.0])
    def test_min_phi_equals_theta(self, K):
        """
        Behavior:
          - The minimum of (1 + K/s) log(K + s) over s > 0 equals theta(K).
          - It is attained at the root of s = K log(K + s), and a dense grid never goes below it.

        Importance:
          - The log-family exponent windows are stated in terms of theta(K).
        """
        s_K, value = phi_K_min(K)
        assert value == pytest.approx(theta(K), rel=1e-10)
        assert s_K == pytest.approx(K * math.log(K + s_K), rel=1e-10)
        grid = np.geomspace(1e-6, 1e6, 2001)
        assert np.min(phi_K(grid, K)) >= value * (1 - 1e-12)

    def test_phi_min_at_one_is_limit(self):
        assert phi_K_min(1.0) == (0.0, 1.0)


class TestLogFamily:
    """
    Fixtures used:
      - fake: seeded Faker drawing parameters.
    """

    @pytest.mark.parametrize("sigma", [1, -1])
    def test_h_sigma_bounded_by_inverse_theta(self, sigma):
        K = 3.0
        grid = np.geomspace(1e-6, 1e6, 1201)
        values = np.abs(h_sigma(grid, K, sigma))
        assert np.max(values) <= 1.0 / theta(K) * (1 + 1e-12)

    def test_h_sigma_rejects_bad_sigma(self):
        with pytest.raises(ParameterRangeError):
            h_sigma(1.0, 2.0, 0)

    def test_log_derivative_matches_symbolic(self, fake):
        """
        Behavior:
          - s g'(s) / g(s) from the closed form agrees with the symbolic derivative of g.

        Importance:
          - The log-family criteria use the closed form instead of differentiating g.
        """
        p0 = fake.pyfloat(min_value=1.0, max_value=4.0)
        a = fake.pyfloat(min_value=-1.0, max_value=2.0)
        K = fake.pyfloat(min_value=1.0, max_value=5.0)
        for sigma in (1, -1):
            g = log_family(p0, a, K, sigma)
            s = np.geomspace(1e-3, 1e3, 13)
            symbolic = s * g.derivative().raw(s) / g.raw(s)
            np.testing.assert_allclose(log_family_log_derivative(s, p0, a, K, sigma), symbolic, rtol=1e-10)

    def test_convexity_check(self):
        grid = np.geomspace(1e-3, 1e3, 61)
        convex = check_log_convexity(log_family(2.0, 0.5, 2.0, 1), grid)
        assert convex.increasing
        concave = check_log_convexity(log_family(0.0, 0.0, 2.0, 1), grid)  # sqrt(s)
        assert concave.increasing
        assert not concave.convex
        assert concave.min_second < 0.0

    def test_log_family_parameter_checks(self):
        with pytest.raises(ParameterRangeError):
            log_family(2.0, 0.5, 2.0, 2)
        with pytest.raises(ParameterRangeError):
            log_family(2.0, 0.5, -1.0, 1)
