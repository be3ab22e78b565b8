"""Checkers for gradient, proportional and Lane-Emden systems."""

import math

import numpy as np
import pytest

from ellab.criteria import (
    Cor0Params,
    Geometry,
    Holds,
    TheoremId,
    check_mixed_power,
    check_coupled_log,
    check_proportional,
    check_sum_positivity,
    check_thm1_conditions,
    cor0_params,
    lane_emden_region,
)
from ellab.exceptions import DomainError, MissingPotentialError, ParameterRangeError
from ellab.nonlin import log_family, theta
from ellab.nonlin.presets import (
    mixed_power_potential,
    example_proportional_power,
    lane_emden_pair,
    proportional_counterexample_system,
)


class TestPowerPotential:
    """Parameter window and growth conditions for grad(G + H) with two power degrees."""

    def test_window_holds(self, coarse_scan):
        verdict = check_mixed_power(2.0, 3.0, 0.5, 0.5, 1.0, 3, scan=coarse_scan)
        assert verdict.theorem is TheoremId.COR_POWER
        assert verdict.holds is Holds.YES

    @pytest.mark.parametrize(
        "alpha,beta,lam,failing",
        [
            (2.0, 6.0, 0.5, "beta <= p_S"),
            (3.0, 2.0, 0.5, "alpha < beta"),
            (2.0, 3.0, -2.0, "lam > -1"),
        ],
    )
    def test_window_failures(self, coarse_scan, alpha, beta, lam, failing):
        verdict = check_mixed_power(alpha, beta, lam, 0.5, 1.0, 3, scan=coarse_scan)
        assert verdict.holds is Holds.NO
        assert verdict.condition(failing).holds is Holds.NO

    def test_half_space_window(self, coarse_scan):
        # alpha must stay below p** = kappa = 3 in the half-space
        verdict = check_mixed_power(3.5, 4.0, 0.5, 0.5, 1.0, 3, Geometry.HALF, scan=coarse_scan)
        assert verdict.condition("alpha < p**").holds is Holds.NO

    def test_growth_conditions_reported(self, coarse_scan):
        S = mixed_power_potential(2.0, 3.0, 0.5, 0.5, 1.0)
        verdict = check_thm1_conditions(S, 3, M=1.0, p=2.0, q=2.0, scan=coarse_scan)
        names = {c.name for c in verdict.conditions}
        assert {"B: |f| <= C_M |U|^q", "C: Pohozaev lower bound", "D: xi . f >= c_M |U|^p", "exponent window"} <= names
        assert verdict.condition("exponent window").holds is Holds.YES
        assert verdict.values["gap"] == 0.0

    def test_growth_conditions_need_potential(self):
        with pytest.raises(MissingPotentialError):
            check_thm1_conditions(lane_emden_pair(2.0, 3.0), 3)

    def test_growth_exponents_ordered(self):
        S = mixed_power_potential(2.0, 3.0, 0.5, 0.5, 1.0)
        with pytest.raises(ParameterRangeError):
            check_thm1_conditions(S, 3, p=2.0, q=3.0)
        with pytest.raises(ParameterRangeError):
            check_thm1_conditions(S, 3, p=2.0, q=1.0)


class TestLogFamilySystem:
    """
    a0 and lambda0 of the log-family gradient system.

    Rationale:
      - a0 depends on K, sigma and the geometry through p** and theta(K).
    """

    def test_a0_cases(self):
        assert cor0_params(2.0, 1.0, 1, 3, Geometry.HALF).a0 == pytest.approx(0.5)
        assert cor0_params(2.0, 1.0, -1, 3, Geometry.HALF).a0 == pytest.approx(1.5)
        assert cor0_params(2.0, 2.0, 1, 3, Geometry.HALF).a0 == pytest.approx(0.5 * theta(2.0))

    def test_lambda0_curve(self):
        assert Cor0Params.lambda0(0.0) == pytest.approx(1.0)
        assert Cor0Params.lambda0(1.0) == pytest.approx(0.0)
        assert Cor0Params.lambda0(0.5) == pytest.approx(2.0 * math.sqrt(0.5) / 1.5)
        curve = np.array(Cor0Params.lambda0(np.linspace(0.0, 1.0, 21)))
        assert np.all(np.diff(curve) < 0.0)
        with pytest.raises(DomainError):
            Cor0Params.lambda0(1.5)

    def test_p0_outside_window(self):
        with pytest.raises(DomainError):
            cor0_params(3.5, 1.0, 1, 3, Geometry.HALF)

    def test_check(self, coarse_scan):
        """
        Behavior:
          - a = 0.25 with a0 = 0.5 gives rho = 0.5 and lambda0 = 0.9428...; lam = 0.3 passes, 0.95 fails.
          - sigma a < 0 fails regardless of lam.
        """
        ok = check_coupled_log(2.0, 0.25, 1.0, 1, 0.3, 3, Geometry.HALF, coarse_scan)
        assert ok.holds is Holds.YES
        assert ok.values["rho"] == pytest.approx(0.5)
        assert check_coupled_log(2.0, 0.25, 1.0, 1, 0.95, 3, Geometry.HALF, coarse_scan).holds is Holds.NO
        assert check_coupled_log(2.0, -0.25, 1.0, 1, 0.3, 3, Geometry.HALF, coarse_scan).holds is Holds.NO

    def test_sum_positivity_for_convex_g(self, coarse_scan):
        g = log_family(2.0, 0.5, 2.0, 1)
        verdict = check_sum_positivity(g, 0.5, 1.0, coarse_scan)
        assert verdict.holds is Holds.YES


class TestProportional:
    """Hypotheses of the proportionality method."""

    def test_power_example_holds(self, coarse_scan):
        S = example_proportional_power(0.5, 1.0, 2.0, 1.0, 0.5)
        verdict = check_proportional(S, n=3, scan=coarse_scan)
        assert verdict.holds is Holds.YES
        assert verdict.values["eps"] == 0.0

    def test_lambda_one_excluded(self, coarse_scan):
        verdict = check_proportional(proportional_counterexample_system(0.4, 0.4, 1.0), scan=coarse_scan)
        assert verdict.condition("lam != 1").holds is not Holds.YES
        assert verdict.holds is not Holds.YES

    def test_eps_must_vanish_for_positive_lambda(self, coarse_scan):
        with pytest.raises(ParameterRangeError):
            check_proportional(example_proportional_power(0.5, 1.0, 2.0, 1.0, 0.5), eps=0.1, scan=coarse_scan)

    def test_non_proportional_system(self, coarse_scan):
        with pytest.raises(DomainError):
            check_proportional(lane_emden_pair(2.0, 3.0), scan=coarse_scan)


class TestLaneEmdenRegion:
    @pytest.mark.parametrize(
        "p,q,n,status",
        [
            (2.0, 3.0, 3, "subcritical"),
            (5.0, 5.0, 3, "critical"),
            (10.0, 10.0, 3, "supercritical"),
            (1.0, 3.0, 5, "subcritical"),
        ],
    )
    def test_status(self, p, q, n, status):
        verdict = lane_emden_region(p, q, n)
        assert verdict.values["status"] == status
        assert verdict.holds is (Holds.YES if status == "subcritical" else Holds.NO)

    def test_scaling_exponents(self):
        verdict = lane_emden_region(2.0, 3.0, 3)
        assert verdict.values["alpha"] == pytest.approx(6.0 / 5.0)
        assert verdict.values["beta"] == pytest.approx(8.0 / 5.0)

    def test_requires_pq_above_one(self):
        with pytest.raises(ParameterRangeError):
            lane_emden_region(0.5, 1.5, 3)
