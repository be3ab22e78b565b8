"""Scalar hypothesis checkers on the benchmark family and simple nonlinearities."""

import math

import pytest

from ellab.criteria import (
    Holds,
    TheoremId,
    check_gs_general,
    check_gs_modified,
    check_theorem_A,
    check_theorem_B,
    check_theorem_C_hyp,
    check_thm1_scalar,
    monotone_kappa_bar,
    gs_coefficients,
    search_gs_params,
)
from ellab.criteria.gidas_spruck import gs_param_ranges
from ellab.criteria.verdict import holds_from_margin
from ellab.exceptions import ParameterRangeError
from ellab.nonlin import ScalarNonlin
from ellab.nonlin.presets import benchmark, power_nonlin


def test_holds_from_margin():
    assert holds_from_margin(0.1, 1e-9) is Holds.YES
    assert holds_from_margin(-0.1, 1e-9) is Holds.NO
    assert holds_from_margin(1e-12, 1e-9) is Holds.INDETERMINATE
    assert holds_from_margin(-1e-12, 1e-9, strict=False) is Holds.YES
    assert holds_from_margin(math.nan, 1e-9) is Holds.INDETERMINATE


class TestTheoremA:
    """Pure powers c u^p with 1 < p < p_S."""

    def test_subcritical_power(self, random_power_exponent):
        verdict = check_theorem_A(power_nonlin(random_power_exponent), 3)
        assert verdict.holds is Holds.YES
        assert verdict.margin == pytest.approx(min(random_power_exponent - 1.0, 5.0 - random_power_exponent))

    def test_critical_power_is_not_subcritical(self):
        verdict = check_theorem_A(power_nonlin(6.0), 3)
        assert verdict.holds is Holds.NO
        assert verdict.margin == pytest.approx(-1.0)

    def test_non_power_is_indeterminate(self, log_f):
        verdict = check_theorem_A(log_f, 3)
        assert verdict.holds is Holds.INDETERMINATE
        assert verdict.theorem is TheoremId.A


class TestBenchmarkCheckers:
    """
    Each checker flips exactly at its threshold on the benchmark family at n = 4, p = 2.5
    (K1 = 2, K2 = 1.4, K3 = 1).

    Fixtures used:
      - scan: 32 points per decade on [1e-6, 1e6].
    """

    def test_theorem_B(self, scan):
        """
        Behavior:
          - K = 3 > K1: the sup of s f'/f is (2.5 K + 4) / (K + 1) = 2.875 at the kink, margin 0.125.
          - K = 1 < K1: sup 3.25 exceeds p_S = 3 and the witness sits at the kink.

        Importance:
          - The sup is attained as a one-sided limit; a grid-only scan would miss it.
        """
        yes = check_theorem_B(benchmark(2.5, 3.0), 4, scan)
        assert yes.holds is Holds.YES
        assert yes.margin == pytest.approx(0.125, rel=1e-9)
        no = check_theorem_B(benchmark(2.5, 1.0), 4, scan)
        assert no.holds is Holds.NO
        assert no.values["sup_log_derivative"] == pytest.approx(3.25, rel=1e-9)
        assert no.witnesses[0].point == pytest.approx((1.0,))

    def test_theorem_B_rejects_pure_critical_power(self, scan):
        # s^-p_S f is constant for f = u^5 in n = 3
        verdict = check_theorem_B(power_nonlin(5.0), 3, scan)
        assert verdict.holds is not Holds.YES
        assert verdict.condition("s^-p_S f nonconstant").holds is Holds.NO

    def test_growth_condition(self, scan):
        yes = check_thm1_scalar(benchmark(2.5, 2.0), 4, scan)
        assert yes.holds is Holds.YES
        # sup of s f / F at the kink: (K + 1) / (K / 3.5 + 1 / 5)
        assert yes.values["sup_sf_over_F"] == pytest.approx(3.0 / (2.0 / 3.5 + 0.2), rel=1e-8)
        assert check_thm1_scalar(benchmark(2.5, 1.0), 4, scan).holds is Holds.NO

    def test_gs_modified(self, scan):
        yes = check_gs_modified(benchmark(2.5, 1.5), 4, scan)
        assert yes.holds is Holds.YES
        assert yes.values["Q"] == pytest.approx(2.5 / (1.5 / 1.5 + 1.0 / 3.0), rel=1e-8)
        no = check_gs_modified(benchmark(2.5, 0.5), 4, scan)
        assert no.holds is Holds.NO

    def test_gs_modified_vacuous_when_phi_diverges(self, scan):
        """
        Behavior:
          - For u^1.5 in n = 3, int_0 sigma^-3 f diverges; the condition holds with margin +inf.

        Importance:
          - Divergence is a legitimate outcome, not an error.
        """
        verdict = check_gs_modified(power_nonlin(1.5), 3, scan)
        assert verdict.holds is Holds.YES
        assert verdict.margin == math.inf
        assert verdict.values["vacuous"] is True

    @pytest.mark.parametrize(("p", "n", "expected"), [(0.8, 5, Holds.YES), (1.2, 3, Holds.YES), (6.0, 3, Holds.NO)])
    def test_gs_modified_pure_power_holds_below_sobolev(self, scan, p, n, expected):
        assert check_gs_modified(power_nonlin(p), n, scan).holds is expected

    def test_gs_modified_reports_index_window_without_deciding(self, scan):
        """
        Behavior:
          - u^0.8 in n = 5 has Q = p + 1 - kappa < kappa, so the verdict is yes even though the
            index 0.8 lies outside (1, p_S); the window is only reported.
        """
        verdict = check_gs_modified(power_nonlin(0.8), 5, scan)
        assert verdict.holds is Holds.YES
        assert verdict.values["Q"] == pytest.approx(1.8 - 5.0 / 3.0, rel=1e-5)
        assert verdict.values["indices_in_window"] is False
        assert verdict.values["p1"] == pytest.approx(0.8, abs=1e-6)

    def test_kappa_bar_for_power(self, scan):
        kb = monotone_kappa_bar(power_nonlin(3.0), 3, scan)
        assert kb.p == pytest.approx(3.0)
        assert kb.kappa_bar == pytest.approx(1.0)
        assert kb.Q == pytest.approx(1.0, rel=1e-9)
        assert kb.confirmed

    def test_theorem_C_hyp(self, log_f, scan):
        verdict = check_theorem_C_hyp(log_f, 3, scan)
        assert verdict.holds is Holds.YES
        assert verdict.values["p1"] == pytest.approx(2.0)
        assert verdict.values["p2"] == pytest.approx(2.0)

    def test_non_positive_f_fails_positivity(self, scan):
        f = ScalarNonlin.parse("u^2 - u")
        verdict = check_theorem_B(f, 3, scan)
        assert verdict.holds is Holds.NO
        assert verdict.condition("positive").holds is Holds.NO


class TestGeneralGidasSpruck:
    """The general integral-estimate criterion and its parameter windows."""

    def test_coefficients(self):
        c = gs_coefficients(3, 0.0, 0.0)
        assert (c.alpha, c.beta) == (0.0, 0.0)
        assert c.gamma == pytest.approx(-2.0 / 3.0)

    def test_param_ranges(self):
        (m_lo, m_hi), (g_lo, g_hi) = gs_param_ranges(3)
        assert m_lo == pytest.approx(2.0 / 3.0)
        assert m_hi == pytest.approx(6.0 / 5.0)
        assert (g_lo, g_hi) == (1.0, math.inf)
        assert gs_param_ranges(5)[1] == (1.0, 5.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"q": 0.0, "k": -1.0, "m1": 1.0, "m2": 1.0, "gamma1": 2.0, "gamma2": 2.0},
            {"q": 0.0, "k": 0.5, "m1": 0.5, "m2": 1.0, "gamma1": 2.0, "gamma2": 2.0},
            {"q": 0.0, "k": 0.5, "m1": 1.0, "m2": 1.0, "gamma1": None, "gamma2": 2.0},
            {"q": -3.0, "k": 0.5, "m1": 1.0, "m2": 1.0},
        ],
    )
    def test_out_of_window_parameters(self, power_f, coarse_scan, kwargs):
        with pytest.raises(ParameterRangeError):
            check_gs_general(power_f, 3, scan=coarse_scan, **kwargs)

    def test_zero_index_at_origin_satisfies_lipschitz_bound(self, coarse_scan):
        """
        Behavior:
          - 1 + u^3 has index 0 at the origin; p >= 0 is a non-strict bound and holds there.

        Importance:
          - A bounded f at the origin is the typical Lipschitz case and must not come back
            indeterminate.
        """
        f = ScalarNonlin.parse("1 + u^3")
        verdict = check_gs_general(
            f, 3, q=0.5, k=0.5, m1=1.0, m2=1.0, gamma1=2.0, gamma2=2.0, scan=coarse_scan
        )
        assert verdict.values["index_zero"] == 0.0
        lip = verdict.condition("f-Lip p >= 0")
        assert lip.holds is Holds.YES
        assert lip.margin == 0.0
        assert verdict.condition("f-Lip q > -p").holds is Holds.YES

    @pytest.mark.slow
    def test_search_returns_general_verdict(self, power_f, coarse_scan):
        verdict = search_gs_params(power_f, 3, coarse_scan)
        assert verdict.theorem is TheoremId.GS_GENERAL
        assert verdict.values["searched"] > 0
        assert verdict.condition("alpha > 0") is not None
