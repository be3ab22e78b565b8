"""One smoke run per subcommand family, checking the values that matter."""

import pytest


def test_analyze_scalar(run_cli):
    result = run_cli("analyze", "--f", "u^2*log(2+u)")
    values = result.report["values"]
    assert result.status == 0
    assert values["index_inf"] == 2.0
    assert values["index_zero"] == 2.0
    assert values["positive"] is True


def test_analyze_system_reports_f_plus(run_cli):
    result = run_cli("analyze", "--preset", "lane-emden", "--param", "p=2", "--param", "q=3", "--lams", "2")
    assert result.report["values"]["f_plus"]["2"] == pytest.approx(8.0)


def test_verify_benchmark(run_cli):
    result = run_cli("verify", "--form", "benchmark", "--n", "4", "--p", "2.5")
    values = result.report["values"]
    assert result.status == 0
    assert values["K0"] == pytest.approx(0.2)
    assert values["f_at_center"] == pytest.approx(values["minus_laplacian_at_0"], rel=1e-12)


def test_verify_uk_bound(run_cli):
    result = run_cli("verify", "--form", "uk", "--n", "3", "--k", "10")
    bound = result.report["values"]["nonexistence_bound"]
    assert bound["M_power"] == pytest.approx(62.0)
    assert bound["M_power"] > bound["bound"]


def test_shoot_sweep_in_threads(run_cli):
    result = run_cli("shoot", "--f", "u^3", "--n", "3", "--s0", "1", "4", "--rmax", "50", "--jobs", "2")
    outcomes = result.report["values"]["outcomes"]
    assert result.status == 0
    assert [o["tag"] for o in outcomes] == ["first-zero", "first-zero"]
    assert outcomes[1]["radius"] == pytest.approx(outcomes[0]["radius"] / 4.0, rel=1e-7)


def test_shoot_inconclusive_exits_one(run_cli):
    result = run_cli("shoot", "--f", "u^2 - u", "--n", "3", "--s0", "0.5", "--rmax", "30")
    assert result.status == 1
    assert result.report["values"]["outcomes"][0]["tag"] == "inconclusive"


def test_pohozaev_identity_on_shot(run_cli):
    result = run_cli("pohozaev", "--f", "u^3", "--n", "3", "--s0", "1", "--rmax", "50", "--scan-min", "1e-3", "--scan-max", "1e3")
    values = result.report["values"]
    assert result.status == 0
    assert values["psi"]["s0"] is None
    assert values["identity"]["residual"] <= 1e-6


def test_decay(run_cli):
    result = run_cli("decay", "--f", "u^3", "--lam", "1", "--boundary", "0.1", "--radii", "0.5", "1", "--cells", "64")
    rows = result.report["values"]["rows"]
    assert [row["R"] for row in rows] == [1.0, 0.5]
    assert all(row["status"] == "admissible" for row in rows)


def test_rescale_convergence_with_envelope(run_cli):
    result = run_cli("rescale", "convergence", "--f", "u^3 + u", "--lams", "10", "100", "--theta", "0.5")
    values = result.report["values"]
    assert values["p"] == 3.0
    assert values["strictly_decreasing"] is True
    assert values["envelope"]["lam_theta"] == 10.0


def test_rescale_doubling(run_cli):
    result = run_cli("rescale", "doubling", "--spacing", "0.05", "--k", "1")
    values = result.report["values"]
    assert result.status == 0
    assert values["found"] is True
    assert values["check"]["c"] is True


def test_rescale_critical(run_cli):
    result = run_cli("rescale", "critical", "--ks", "10", "30", "--points", "201")
    values = result.report["values"]
    assert [row["k"] for row in values["rows"]] == [10, 30]
    assert values["residual_decreasing"] is True


def test_rescale_convergence_needs_nonlinearity(run_cli):
    result = run_cli("rescale", "convergence")
    assert result.status == 2
    assert result.report["values"]["error"]["fields"] == ["f"]


@pytest.mark.slow
def test_bound_pure_power_is_scale_free(run_cli):
    """For u^3 the sup of f(u) d^2 / u is the same on every ball, so the family ratio is 1."""
    result = run_cli("bound", "--f", "u^3", "--n", "3", "--radii", "1", "2", "4", "8")
    values = result.report["values"]
    assert result.status == 0
    assert values["ratio"] == pytest.approx(1.0, abs=1e-6)
    sups = [domain["sup"] for domain in values["domains"]]
    assert max(sups) - min(sups) <= 1e-6 * min(sups)


@pytest.mark.slow
def test_bound_log_perturbed_power_stays_bounded(run_cli):
    result = run_cli("bound", "--f", "u^2*log(2+u)^0.5", "--n", "3", "--radii", "1", "2", "4", "8")
    values = result.report["values"]
    assert result.status == 0
    assert all(domain["nodes"] > 0 for domain in values["domains"])
    assert 1.0 <= values["ratio"] <= 3.0


@pytest.mark.slow
def test_decay_small_branch_disappears_on_large_balls(run_cli):
    """
    Behavior:
      - u^2 with boundary value 0.5 keeps a small solution on B_2 only; on B_4, B_8 and B_16
        Newton from the boundary lift finds nothing, so eta vanishes there.
    """
    result = run_cli("decay", "--f", "u^2", "--n", "3", "--boundary", "0.5", "--radii", "2", "4", "8", "16")
    rows = {row["R"]: row for row in result.report["values"]["rows"]}
    assert rows[2.0]["status"] == "admissible"
    assert 0.5 < rows[2.0]["eta"] <= 1.0
    for R in (4.0, 8.0, 16.0):
        assert rows[R]["status"] == "no-solution"
        assert rows[R]["eta"] == 0.0
