"""Radial shooting: classification of trajectories and aiming at a given radius."""

import numpy as np
import pytest

from ellab.exceptions import ParameterRangeError
from ellab.nonlin import ScalarNonlin
from ellab.radial import OutcomeTag, Provenance, bubble, shoot, shoot_to_radius


class TestShootOutcomes:
    """
    Fixtures used:
      - power_f: u^3, subcritical in n = 3.
    """

    def test_subcritical_power_has_first_zero(self, power_f):
        profile, outcome = shoot(power_f, 3, 1.0, r_max=50.0)
        assert outcome.tag == OutcomeTag.FIRST_ZERO
        assert abs(outcome.value) <= 1e-12
        assert outcome.derivative < 0.0
        assert profile.radius == outcome.radius
        assert profile.provenance == Provenance.SHOOTING

    def test_zero_radius_scales_with_center_value(self, power_f):
        """
        Behavior:
          - For f = u^3, u_s(r) = s u_1(s r), so R(s) = R(1) / s.

        Importance:
          - Checks the event location and its refinement independently of any reference value.
        """
        _, one = shoot(power_f, 3, 1.0, r_max=50.0)
        _, four = shoot(power_f, 3, 4.0, r_max=50.0)
        assert four.radius == pytest.approx(one.radius / 4.0, rel=1e-7)

    @pytest.mark.parametrize("p", [2.0, 3.0, 4.0])
    def test_subcritical_powers_vanish_at_covariant_radii(self, p):
        """
        Behavior:
          - For u^p in n = 3 with 1 < p < 5 every center value in {0.5, 1, 2} gives a first zero.
          - u_s(r) = s u_1(s^((p-1)/2) r), so R(s) = R(1) s^(-(p-1)/2).

        Importance:
          - Scale covariance ties the event radii together without a tabulated reference.
        """
        f = ScalarNonlin.parse(f"u^{p:g}")
        radii = {}
        for s0 in (0.5, 1.0, 2.0):
            _, outcome = shoot(f, 3, s0, r_max=100.0)
            assert outcome.tag == OutcomeTag.FIRST_ZERO
            radii[s0] = outcome.radius
        for s0 in (0.5, 2.0):
            assert radii[s0] == pytest.approx(radii[1.0] * s0 ** (-(p - 1.0) / 2.0), rel=1e-6)

    def test_critical_power_follows_the_bubble(self):
        """
        Behavior:
          - u^5 in n = 3 started from 1 stays positive and matches (1 + r^2/3)^(-1/2).

        Importance:
          - The series start and DOP853 tolerances must reproduce a known entire solution.
        """
        f = ScalarNonlin.parse("u^5")
        profile, outcome = shoot(f, 3, 1.0, r_max=50.0, tol=1e-13)
        assert outcome.tag == OutcomeTag.POSITIVE_ON_HORIZON
        assert outcome.radius == 50.0
        radii = np.array([0.5, 2.0, 10.0, 40.0])
        values, _ = profile.sample(radii)
        np.testing.assert_allclose(values[0], bubble(3).value(radii), rtol=1e-8)

    def test_negative_nonlinearity_blows_up(self):
        f = ScalarNonlin.parse("u - u^3")
        _, outcome = shoot(f, 1, 2.0, r_max=10.0, blowup_factor=10.0)
        assert outcome.tag == OutcomeTag.BLOW_UP
        assert 0.0 < outcome.radius < 10.0

    def test_increasing_trajectory_is_inconclusive(self):
        """u starts below the equilibrium u = 1 of u^2 - u and oscillates around it."""
        f = ScalarNonlin.parse("u^2 - u")
        _, outcome = shoot(f, 3, 0.5, r_max=30.0)
        assert outcome.tag == OutcomeTag.INCONCLUSIVE
        assert "u'" in outcome.reason

    def test_through_zero_keeps_integrating(self, power_f):
        stopped, first = shoot(power_f, 3, 1.0, r_max=20.0)
        profile, outcome = shoot(power_f, 3, 1.0, r_max=20.0, through_zero=True)
        assert outcome.tag == OutcomeTag.FIRST_ZERO
        assert outcome.radius == pytest.approx(first.radius, rel=1e-10)
        assert profile.radius > stopped.radius

    def test_outcome_dict(self, power_f):
        _, outcome = shoot(power_f, 3, 1.0, r_max=50.0)
        payload = outcome.to_dict()
        assert payload["tag"] == "first-zero"
        assert payload["reason"] is None

    @pytest.mark.parametrize("s0", [0.0, -1.0])
    def test_nonpositive_center_is_rejected(self, power_f, s0):
        with pytest.raises(ParameterRangeError):
            shoot(power_f, 3, s0)


@pytest.mark.slow
def test_shoot_to_radius_hits_target(power_f):
    _, one = shoot(power_f, 3, 1.0, r_max=50.0)
    _, outcome, s0 = shoot_to_radius(power_f, 3, 2.0)
    assert outcome.tag == OutcomeTag.FIRST_ZERO
    assert outcome.radius == pytest.approx(2.0, rel=1e-8)
    assert s0 == pytest.approx(one.radius / 2.0, rel=1e-7)


def test_shoot_to_radius_needs_positive_radius(power_f):
    with pytest.raises(ParameterRangeError):
        shoot_to_radius(power_f, 3, 0.0)
