"""ScalarNonlin construction, evaluation and calculus."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from ellab.exceptions import DomainError, IntegralDivergenceError, NonFiniteValueError, ParameterRangeError
from ellab.nonlin import (
    ScalarNonlin,
    deriv,
    kinks,
    one_sided_derivative,
    primitive,
    weighted_primitive,
    weighted_primitive_grid,
)


class TestScalarNonlin:
    """
    Wrapping, domain checks and the min/max kink bookkeeping.

    Fixtures used:
      - benchmark_f: (K + min(1, u^(p-1))) u^p with p = 2.5, K = 0.2 (kink at u = 1).
      - power_f: u^3.
    """

    def test_positive_flag_and_limit_at_zero(self, power_f):
        assert power_f.positive
        assert power_f.value_at_zero == 0.0
        assert power_f(0.0) == 0.0
        assert power_f(2.0) == pytest.approx(8.0)

    def test_positivity_claim_is_verified(self):
        """
        Behavior:
          - Claiming positivity for u - 1 fails since f(s) <= 0 on (0, 1].

        Importance:
          - Checkers assume f > 0 on (0, inf) when the flag is set.
        """
        with pytest.raises(DomainError):
            ScalarNonlin.parse("u - 1", positive=True)

    def test_negative_and_non_finite_arguments(self, power_f):
        with pytest.raises(DomainError):
            power_f(-1.0)
        with pytest.raises(NonFiniteValueError):
            power_f(math.nan)

    def test_extension_by_zero(self, power_f):
        values = power_f.extended(np.array([-2.0, 0.0, 2.0]))
        np.testing.assert_allclose(values, [0.0, 0.0, 8.0])

    def test_two_variables_rejected(self):
        with pytest.raises(DomainError):
            ScalarNonlin.parse("u * v")

    def test_kinks_of_benchmark(self, benchmark_f):
        assert benchmark_f.kinks() == pytest.approx([1.0])
        assert kinks(benchmark_f, 2.0, 10.0) == []

    def test_one_sided_derivatives_at_kink(self, benchmark_f):
        """
        Behavior:
          - At u = 1 the left derivative uses the u^(2p-1) branch: K p + 2p - 1 = 4.5.
          - The right derivative uses (K + 1) u^p: (K + 1) p = 3.

        Importance:
          - Conditions with f' are evaluated on both sides of every kink.
        """
        assert one_sided_derivative(benchmark_f, 1.0, -1) == pytest.approx(4.5)
        assert one_sided_derivative(benchmark_f, 1.0, 1) == pytest.approx(3.0)
        with pytest.raises(ParameterRangeError):
            one_sided_derivative(benchmark_f, 1.0, 0)

    def test_symbolic_derivative(self, log_f):
        d = deriv(log_f)
        s = np.array([0.3, 2.0, 50.0])
        expected = 2 * s * np.log(2 + s) + s**2 / (2 + s)
        np.testing.assert_allclose(d.raw(s), expected, rtol=1e-13)

    def test_renamed(self, log_f):
        g = log_f.renamed("v")
        assert g.var == "v"
        assert g(3.0) == pytest.approx(log_f(3.0))


class TestPrimitives:
    """int_0^s sigma^w f(sigma) d sigma, closed form for monomial sums and quadrature otherwise."""

    def test_monomial_closed_form(self, power_f):
        assert primitive(power_f, 1.0) == pytest.approx(0.25, rel=1e-15)
        assert weighted_primitive(power_f, 2.0, 2.0) == pytest.approx(64.0 / 6.0, rel=1e-15)

    def test_quadrature_matches_reference(self, log_f):
        """
        Behavior:
          - For u^2 log(2 + u) the quadrature path agrees with a plain scipy reference.

        Importance:
          - F(s) and the weighted primitives feed every Pohozaev-type condition.
        """
        for w, s in ((0.0, 1.0), (1.0, 5.0), (-1.5, 3.0)):
            reference, _ = quad(lambda t: t**w * t**2 * math.log(2 + t), 0.0, s, epsabs=0.0, epsrel=1e-13)
            assert weighted_primitive(log_f, w, s) == pytest.approx(reference, rel=1e-9)

    def test_grid_matches_pointwise(self, benchmark_f):
        grid = np.geomspace(1e-2, 1e2, 17)
        values = weighted_primitive_grid(benchmark_f, 1.0, grid)
        expected = [weighted_primitive(benchmark_f, 1.0, float(s)) for s in grid]
        np.testing.assert_allclose(values, expected, rtol=1e-8)

    def test_divergent_weight(self):
        """
        Behavior:
          - w + p + 1 <= 0 makes the integral diverge at 0; the error carries value = inf.

        Importance:
          - Checkers treat a divergent weighted primitive as a vacuous condition, not a crash.
        """
        f = ScalarNonlin.parse("u")
        with pytest.raises(IntegralDivergenceError) as exc:
            weighted_primitive(f, -3.0, 1.0)
        assert exc.value.value == math.inf
        assert exc.value.exit_code() == 1

    def test_upper_limit_must_be_positive(self, power_f):
        with pytest.raises(ParameterRangeError):
            weighted_primitive(power_f, 0.0, 0.0)
