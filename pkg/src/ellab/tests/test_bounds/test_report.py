"""Universal-bound measurements over families of Dirichlet solutions, and decay scans."""

import logging

import numpy as np
import pytest

from ellab.bounds import BVPSolution, BoundMode, DecayStatus, InitialGuess, bound_report, decay_scan, solve_ball
from ellab.exceptions import ParameterRangeError
from ellab.nonlin.presets import lane_emden_pair


@pytest.fixture
def ground_states(power_f):
    """Ground states of u^3 on the balls of radius 1 and 2 (n = 3), same mesh."""
    return [
        solve_ball(power_f, 3, 1.0, 0.0, InitialGuess.bump(7.0), cells=128),
        solve_ball(power_f, 3, 2.0, 0.0, InitialGuess.bump(3.5), cells=128),
    ]


class TestBoundReport:
    """
    For f = u^3, f(u) d^2 / u = (u d)^2 is invariant under u_R(r) = u_1(r / R) / R, so the family
    ratio of the sups is 1.

    Fixtures used:
      - ground_states: two rescaled copies of the same solution.
      - power_f: u^3.
    """

    def test_scalar_family_is_uniform(self, ground_states, power_f):
        report = bound_report(ground_states, BoundMode.SCALAR, power_f)
        assert report.ratio == pytest.approx(1.0, rel=1e-6)
        small, large = report.domains
        assert small.sup > 0.0
        assert large.at == pytest.approx(2.0 * small.at)
        assert small.nodes == 128

    def test_system_mode_restricts_to_large_values(self, ground_states, power_f):
        full = bound_report(ground_states, "scalar", power_f)
        restricted = bound_report(ground_states, "system", power_f, lam=1.0)
        assert restricted.lam == 1.0
        for a, b in zip(restricted.domains, full.domains):
            assert a.sup <= b.sup * (1 + 1e-12)
            assert 0 < a.nodes < b.nodes

    def test_system_mode_uses_max_norm(self):
        """
        Behavior:
          - For (v^2, u^3) at U = (3, 4) the max-norms are |U| = 4 and |f(U)| = 27, so the center
            node gives 27 / 4 with d = 1; the Euclidean norms would give 6.28.
          - Lambda = 4.5 drops the center node, whose max-norm is 4 although |U|_2 = 5.
        """
        solution = BVPSolution(
            n=3,
            R=1.0,
            h=0.5,
            r=np.array([0.0, 0.5, 1.0]),
            values=np.array([[3.0, 2.0, 0.0], [4.0, 1.0, 0.0]]),
            boundary=(0.0, 0.0),
            iterations=0,
            residual=0.0,
        )
        S = lane_emden_pair(2.0, 3.0)
        (domain,) = bound_report([solution], BoundMode.SYSTEM, S, lam=0.5).domains
        assert domain.sup == pytest.approx(6.75)
        assert domain.at == 0.0
        assert domain.nodes == 2
        (above,) = bound_report([solution], BoundMode.SYSTEM, S, lam=4.5).domains
        assert above.nodes == 0

    def test_empty_region_is_logged(self, ground_states, power_f, caplog):
        caplog.set_level(logging.WARNING, logger="ellab")
        report = bound_report(ground_states, "system", power_f, lam=1e6)
        assert all(d.nodes == 0 and d.sup == 0.0 for d in report.domains)
        assert report.ratio == 1.0
        assert [r.getMessage() for r in caplog.records].count("bounds.empty_region") == 2

    def test_rows(self, ground_states, power_f):
        header, rows = bound_report(ground_states, "scalar", power_f).to_rows()
        assert header == ["size", "sup", "at", "nodes"]
        assert [row[0] for row in rows] == [1.0, 2.0]

    def test_lane_emden_mode_needs_a_pair(self, ground_states, power_f):
        with pytest.raises(ParameterRangeError):
            bound_report(ground_states, "lane-emden", power_f)

    def test_empty_family(self, power_f):
        with pytest.raises(ParameterRangeError):
            bound_report([], "scalar", power_f)


class TestDecayScan:
    """
    Small-branch solutions of -Delta u = u^3 with boundary value 0.1; the center sits about
    1e-3 (R^2) / 6 above the boundary value.
    """

    def test_rows_in_decreasing_radius(self, power_f):
        table = decay_scan(power_f, 3, 1.0, 0.1, [0.25, 1.0, 0.5], cells=64)
        assert [row.R for row in table.rows] == [1.0, 0.5, 0.25]
        assert all(row.status == DecayStatus.ADMISSIBLE for row in table.rows)
        eta = np.array(table.eta)
        assert np.all(eta > 0.1)
        assert np.all(np.diff(eta) < 0.0)
        assert eta[0] == pytest.approx(0.1 + 1e-3 / 6, rel=1e-4)

    def test_branch_jump_contributes_zero(self, power_f, caplog):
        """
        Behavior:
          - With Lambda just above the boundary value, the R = 1 solution exceeds Lambda and is
            reported as a branch jump with eta = 0 (sup over the empty set), while R = 0.25 stays
            admissible.

        Importance:
          - eta(R) must only collect solutions that stay inside {|U| <= Lambda}.
        """
        caplog.set_level(logging.WARNING, logger="ellab")
        table = decay_scan(power_f, 3, 0.1001, 0.1, [1.0, 0.25], cells=64)
        jump, kept = table.rows
        assert jump.status == DecayStatus.BRANCH_JUMP and jump.eta == 0.0
        assert jump.max > 0.1001
        assert kept.status == DecayStatus.ADMISSIBLE and kept.eta == kept.center
        assert "bounds.branch_jump" in [r.getMessage() for r in caplog.records]

    def test_table_rows(self, power_f):
        header, rows = decay_scan(power_f, 3, 1.0, 0.1, [0.5], cells=64).to_rows()
        assert header == ["R", "status", "center", "max", "eta"]
        assert rows[0][1] == "admissible"

    def test_boundary_above_lambda(self, power_f):
        with pytest.raises(ParameterRangeError):
            decay_scan(power_f, 3, 0.5, 0.6, [1.0])
