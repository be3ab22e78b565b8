"""Critical exponents and the benchmark thresholds."""

import math

import pytest

from ellab.criteria import Geometry, benchmark_thresholds, exponents, recover_benchmark_thresholds
from ellab.exceptions import ParameterRangeError


class TestExponents:
    @pytest.mark.parametrize(
        "n,p_S,p_star,kappa",
        [
            (3, 5.0, 5.0, 3.0),
            (4, 3.0, 3.0, 2.0),
            (5, 7.0 / 3.0, 2.0, 5.0 / 3.0),
            (6, 2.0, 5.0 / 3.0, 1.5),
        ],
    )
    def test_whole_space(self, n, p_S, p_star, kappa):
        ex = exponents(n)
        assert ex.p_S == pytest.approx(p_S)
        assert ex.p_star == pytest.approx(p_star)
        assert ex.p_star_star == pytest.approx(p_star)
        assert ex.kappa == pytest.approx(kappa)

    def test_half_space_uses_kappa(self):
        ex = exponents(5, Geometry.HALF)
        assert ex.p_star_star == pytest.approx(5.0 / 3.0)
        assert exponents(3, "half").p_star_star == pytest.approx(3.0)

    def test_low_dimension_is_unbounded(self):
        ex = exponents(2)
        assert math.isinf(ex.p_S)
        assert math.isinf(ex.kappa)

    def test_unknown_geometry(self):
        with pytest.raises(ValueError):
            exponents(3, "sphere")


class TestBenchmarkThresholds:
    """
    Closed forms K0 < K3 < K2 < K1 of the benchmark family.

    Rationale:
      - (n, p) = (4, 2.5) is the reference point: (0.2, 2, 1.4, 1).
    """

    def test_reference_point(self):
        t = benchmark_thresholds(4, 2.5)
        assert t.as_tuple() == pytest.approx((0.2, 2.0, 1.4, 1.0))
        assert t.K3 / t.K0 == pytest.approx(5.0)

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
    @pytest.mark.parametrize("fraction", [0.1, 0.35, 0.65, 0.9])
    def test_ordering(self, n, fraction):
        lo, hi = n / (n - 2.0), (n + 2.0) / (n - 2.0)
        t = benchmark_thresholds(n, lo + fraction * (hi - lo))
        assert 0.0 < t.K0 < t.K3 < t.K2 < t.K1

    def test_ratio_K3_over_K0_tends_to_two_at_the_lower_end(self):
        t = benchmark_thresholds(4, 2.0 + 1e-4)
        assert 2.0 - 1e-3 <= t.K3 / t.K0 <= 2.0 + 1e-3

    @pytest.mark.parametrize("p", [2.0, 3.0, 1.5])
    def test_window_enforced(self, p):
        with pytest.raises(ParameterRangeError):
            benchmark_thresholds(4, p)

    @pytest.mark.slow
    def test_recovered_by_bisection(self, scan):
        """
        Behavior:
          - Bisecting in K on the Theorem B, growth and Gidas-Spruck margins reproduces K1, K2, K3.

        Importance:
          - Cross-checks the checkers against the closed forms at a kinked nonlinearity.
        Fixtures:
          - scan
        """
        rec = recover_benchmark_thresholds(4, 2.5, scan)
        errors = rec.relative_errors
        assert errors["K1"] < 1e-6
        assert errors["K2"] < 1e-6
        assert errors["K3"] < 1e-6
        assert rec.to_dict()["exact"]["K0"] == pytest.approx(0.2)
