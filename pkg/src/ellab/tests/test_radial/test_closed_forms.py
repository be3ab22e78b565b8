"""Explicit radial solutions and their ODE residuals."""

import math

import pytest

from ellab.exceptions import ParameterRangeError
from ellab.nonlin.presets import benchmark, power_nonlin
from ellab.radial import (
    benchmark_solution,
    bubble,
    bubble_nonlinearity,
    uk_family,
    uk_nonexistence_bound,
    verify_closed_form,
)


class TestBubble:
    @pytest.mark.parametrize("n", [3, 4, 5, 7])
    def test_bubble_solves_critical_equation(self, n):
        report = verify_closed_form(bubble(n), bubble_nonlinearity(n), r_max=20.0, points=4001)
        assert report.max_rel <= 1e-10

    def test_bubble_fails_a_wrong_power(self):
        report = verify_closed_form(bubble(3), power_nonlin(3.0))
        assert report.max_abs > 1e-2

    def test_bubble_center_and_slope(self):
        form = bubble(3)
        assert form.center == 1.0
        assert float(form.derivative(0.0)) == 0.0
        assert float(form.value(3.0)) == pytest.approx(0.5, rel=1e-14)

    def test_bubble_needs_n_at_least_three(self):
        with pytest.raises(ParameterRangeError):
            bubble(2)


class TestBenchmarkSolution:
    """
    The explicit solution of -Delta u = (K0 + min(1, u^(p-1))) u^p.

    u stays below 1, so only the u^(2p-1) branch of the min is active and the residual must
    vanish to rounding.
    """

    @pytest.mark.parametrize(("n", "p"), [(3, 4.0), (4, 2.5), (5, 2.0), (6, 1.8)])
    def test_residual_vanishes(self, n, p):
        solution = benchmark_solution(n, p)
        assert solution.K0 == pytest.approx(n * (p - 1) / (2 * p) - 1)
        report = verify_closed_form(solution.profile, solution.nonlinearity(), r_max=30.0)
        assert report.max_rel <= 1e-10

    def test_wrong_K_leaves_a_residual(self):
        solution = benchmark_solution(4, 2.5)
        report = verify_closed_form(solution.profile, benchmark(2.5, solution.K0 + 0.5))
        assert report.max_abs > 1e-3

    def test_nonpositive_K0_is_rejected(self):
        """p <= n/(n-2) leaves K0 <= 0."""
        with pytest.raises(ParameterRangeError):
            benchmark_solution(3, 2.0)


class TestUkFamily:
    def test_exponents_and_center(self):
        family = uk_family(3, 10)
        assert family.p == pytest.approx(3.1)
        assert family.q == pytest.approx(5.2)
        assert family.M_power == pytest.approx(62.0)
        assert family.M == pytest.approx(62.0 ** (1 / 2.1))

    @pytest.mark.parametrize(("n", "k"), [(3, 1), (3, 10), (4, 3), (5, 50)])
    def test_residual_vanishes(self, n, k):
        family = uk_family(n, k)
        report = verify_closed_form(family.profile, family.nonlinearity(), r_max=10.0 * family.xi)
        assert report.max_rel <= 1e-9

    @pytest.mark.parametrize("k", [1, 5, 50, 1000])
    def test_explicit_solution_sits_above_bound(self, k):
        bound = uk_nonexistence_bound(3, k)
        assert bound.M_power > bound.bound

    def test_bound_approaches_asymptotic_rate(self):
        """
        Behavior:
          - For large k the bound behaves like n k / ((n-1)(n-2)).

        Importance:
          - Shows that the smallness threshold on u^(p_k-1) cannot be taken uniform in k.
        """
        bound = uk_nonexistence_bound(4, 100_000)
        assert bound.bound / bound.asymptotic == pytest.approx(1.0, rel=1e-3)
        assert bound.asymptotic == pytest.approx(4 * 100_000 / (3 * 2))

    @pytest.mark.parametrize("n", [3, 5])
    def test_doubled_rate_overshoots(self, n):
        k = 100_000
        doubled = 2 * n * k / ((n - 2) * (n - 1))
        assert uk_nonexistence_bound(n, k).bound / doubled == pytest.approx(0.5, rel=1e-3)

    def test_eps_lowers_the_bound(self):
        assert uk_nonexistence_bound(3, 10, eps=0.1).bound < uk_nonexistence_bound(3, 10).bound

    def test_negative_eps_is_rejected(self):
        with pytest.raises(ParameterRangeError):
            uk_nonexistence_bound(3, 10, eps=-0.1)


def test_profile_of_closed_form_is_dense():
    form = bubble(3)
    profile = form.profile([0.0, 1.0, 2.0])
    values, derivs = profile.sample([1.5])
    assert values[0, 0] == pytest.approx(1 / math.sqrt(1.75), rel=1e-14)
    assert derivs[0, 0] == pytest.approx(float(form.derivative(1.5)), rel=1e-14)
