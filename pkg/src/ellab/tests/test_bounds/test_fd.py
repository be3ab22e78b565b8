"""Finite-difference Dirichlet solves on balls and slabs."""

import numpy as np
import pytest

from ellab.bounds import GuessKind, InitialGuess, solve_ball, solve_slab
from ellab.exceptions import NewtonDivergenceError, ParameterRangeError
from ellab.nonlin import ScalarNonlin
from ellab.nonlin.presets import lane_emden_pair
from ellab.radial import Provenance

# first zero of the n = 3 Lane-Emden function of index 3
LANE_EMDEN_3_ZERO = 6.896848619


class TestInitialGuess:
    @pytest.mark.parametrize(
        ("text", "kind", "amplitude", "width"),
        [
            ("zero", GuessKind.ZERO, 0.0, 1.0),
            ("const:2.5", GuessKind.CONSTANT, 2.5, 1.0),
            ("bump:7", GuessKind.BUMP, 7.0, 1.0),
            ("bump:7,0.5", GuessKind.BUMP, 7.0, 0.5),
        ],
    )
    def test_parse(self, text, kind, amplitude, width):
        guess = InitialGuess.parse(text)
        assert (guess.kind, guess.amplitude, guess.width) == (kind, amplitude, width)

    @pytest.mark.parametrize("text", ["", "zero:1", "const", "bump:1,2,3", "bump:x", "ramp:1"])
    def test_malformed_guess(self, text):
        with pytest.raises(ParameterRangeError) as info:
            InitialGuess.parse(text)
        assert info.value.fields == ["guess"]

    def test_bump_nodal_values(self):
        r = np.linspace(0.0, 2.0, 5)
        nodal = InitialGuess.bump(4.0).nodal(r, 2.0, np.array([0.5]))
        np.testing.assert_allclose(nodal[0], [4.5, 0.5 + 4.0 * (15 / 16) ** 2, 0.5 + 4.0 * 0.75**2, 0.5 + 4.0 * (7 / 16) ** 2, 0.5])


class TestTorsion:
    """
    -Delta u = 1 has the quadratic solution b + (R^2 - r^2) / (2n), which the second-order
    stencil (ghost node included) reproduces to round-off.
    """

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_ball_is_exact(self, n):
        solution = solve_ball(ScalarNonlin.parse("1"), n, 1.0, 0.5, cells=64)
        exact = 0.5 + (1.0 - solution.r**2) / (2 * n)
        np.testing.assert_allclose(solution.values[0], exact, rtol=0, atol=1e-10)
        assert solution.iterations == 1

    def test_slab_is_the_half_height_problem(self):
        solution = solve_slab(ScalarNonlin.parse("1"), 2.0, cells=128)
        assert solution.geometry == "slab"
        assert solution.size == 2.0
        assert solution.center[0] == pytest.approx(0.5, abs=1e-10)

    def test_rows_and_profile(self):
        solution = solve_ball(ScalarNonlin.parse("1"), 3, 1.0, cells=64)
        header, rows = solution.to_rows()
        assert header == ["r", "d", "u"]
        assert len(rows) == 65
        assert rows[-1] == (1.0, 0.0, 0.0)
        profile = solution.to_profile()
        assert profile.provenance == Provenance.FINITE_DIFFERENCE
        assert profile.derivs[0, -1] == pytest.approx(-1.0 / 3.0, rel=1e-10)

    def test_dict(self):
        payload = solve_ball(ScalarNonlin.parse("1"), 3, 1.0, cells=64).to_dict()
        assert payload["cells"] == 64
        assert payload["boundary"] == [0.0]
        assert payload["size"] == 1.0


class TestGroundState:
    """
    Fixtures used:
      - power_f: u^3 in n = 3; the zero solution and the positive ground state coexist, the
        guess picks the branch.
    """

    def test_bump_guess_reaches_ground_state(self, power_f):
        solution = solve_ball(power_f, 3, 1.0, 0.0, InitialGuess.bump(7.0))
        assert solution.center[0] == pytest.approx(LANE_EMDEN_3_ZERO, rel=1e-3)
        assert np.all(solution.values[0, :-1] > 0.0)

    def test_zero_guess_stays_on_zero_branch(self, power_f):
        solution = solve_ball(power_f, 3, 1.0, 0.0)
        assert np.max(np.abs(solution.values)) == 0.0
        assert solution.iterations == 0

    def test_discrete_scaling(self, power_f):
        """u_R(r) = u_1(r / R) / R holds node by node for the same number of cells."""
        one = solve_ball(power_f, 3, 1.0, 0.0, InitialGuess.bump(7.0), cells=128)
        two = solve_ball(power_f, 3, 2.0, 0.0, InitialGuess.bump(3.5), cells=128)
        np.testing.assert_allclose(two.values[0], one.values[0] / 2.0, rtol=1e-8, atol=1e-12)

    @pytest.mark.slow
    def test_second_order_convergence(self, power_f):
        """
        Behavior:
          - Successive differences of u(0) under mesh halving shrink by about 4.

        Importance:
          - Confirms the ghost-node treatment at r = 0 keeps the scheme second order.
        """
        centers = [
            solve_ball(power_f, 3, 1.0, 0.0, InitialGuess.bump(7.0), cells=cells).center[0]
            for cells in (64, 128, 256, 512)
        ]
        diffs = np.abs(np.diff(centers))
        ratios = diffs[:-1] / diffs[1:]
        assert np.all((ratios > 3.5) & (ratios < 4.5))

    def test_newton_budget_exhausted(self, power_f):
        with pytest.raises(NewtonDivergenceError) as info:
            solve_ball(power_f, 3, 1.0, 0.0, InitialGuess.bump(7.0), max_iter=1)
        error = info.value
        assert error.iterations == 1
        assert error.last_iterate.shape == (1, 256)
        assert error.to_payload()["code"] == "newton_divergence"



class TestRejectedInput:
    def test_too_few_cells(self, power_f):
        with pytest.raises(ParameterRangeError):
            solve_ball(power_f, 3, 1.0, cells=32)

    def test_negative_boundary(self, power_f):
        with pytest.raises(ParameterRangeError):
            solve_ball(power_f, 3, 1.0, -0.1)

    def test_boundary_count_mismatch(self):
        with pytest.raises(ParameterRangeError):
            solve_ball(lane_emden_pair(2.0, 3.0), 3, 1.0, [0.0, 0.0, 0.0])

    def test_nonpositive_height(self, power_f):
        with pytest.raises(ParameterRangeError):
            solve_slab(power_f, 0.0)
