"""
CLI contract: exit statuses, report layout, error payloads and byte-stable output.
"""

import json

import pytest


class TestReportLayout:
    """
    Fixtures used:
      - run_cli: in-process runner returning (status, stdout, parsed report).
    """

    def test_exponents(self, run_cli):
        result = run_cli("exponents", "--n", "3")
        assert result.status == 0
        report = result.report
        assert report["command"] == "exponents"
        assert set(report) == {
            "command",
            "inputs",
            "verdicts",
            "values",
            "witnesses",
            "artifacts",
            "duration_ms",
            "version",
        }
        assert report["values"]["p_S"] == 5.0
        assert report["values"]["kappa"] == 3.0
        assert report["values"]["geometry"] == "whole"
        assert report["duration_ms"] is None

    def test_output_is_byte_stable(self, run_cli):
        """
        Behavior:
          - Two identical runs with --no-timing print identical bytes (sorted keys, fixed float format).

        Importance:
          - Reports are diffed across runs and machines.
        """
        first = run_cli("benchmark", "--n", "4", "--p", "2.5")
        second = run_cli("benchmark", "--n", "4", "--p", "2.5")
        assert first.stdout == second.stdout
        assert first.stdout.endswith("\n")

    def test_timing_is_reported_on_request(self, run_cli):
        result = run_cli("exponents", "--n", "4", timing=True)
        assert isinstance(result.report["duration_ms"], float)

    def test_infinite_values_are_strings(self, run_cli):
        result = run_cli("exponents", "--n", "2")
        assert result.report["values"]["p_S"] == "inf"

    def test_constant_expressions_as_numbers(self, run_cli):
        result = run_cli("benchmark", "--n", "4", "--p", "5/2")
        values = result.report["values"]
        assert result.report["inputs"]["p"] == 2.5
        assert values["K0"] == pytest.approx(0.2)
        assert values["ordered"] is True

    def test_out_file(self, run_cli, tmp_path):
        target = tmp_path / "nested" / "report.json"
        result = run_cli("theta", "--K", "1", "2", "--out", str(target))
        assert result.status == 0
        assert result.stdout == ""
        report = json.loads(target.read_text(encoding="utf-8"))
        assert report["values"]["rows"][0]["theta"] == 1.0


class TestExitStatus:
    def test_checker_yes(self, run_cli):
        result = run_cli("check", "--theorem", "A", "--f", "u^3", "--n", "3")
        assert result.status == 0
        verdict = result.report["verdicts"][0]
        assert verdict["holds"] == "yes"
        assert verdict["margin"] == pytest.approx(2.0)

    def test_checker_no_still_writes_report(self, run_cli):
        result = run_cli("check", "--theorem", "A", "--f", "u^6", "--n", "3")
        assert result.status == 1
        assert result.report["verdicts"][0]["holds"] == "no"

    def test_gs_alias(self, run_cli):
        result = run_cli("check", "--theorem", "GS", "--preset", "benchmark", "--param", "p=2.5", "--param", "K=1.5", "--n", "4")
        assert result.report["inputs"]["theorem"] == "GS-modified"
        assert result.report["verdicts"][0]["holds"] == "yes"

    def test_syntax_error_payload(self, run_cli):
        result = run_cli("analyze", "--f", "u^2 $ 3")
        assert result.status == 2
        error = result.report["values"]["error"]
        assert error["code"] == "syntax"
        assert error["offset"] == 4

    def test_unbound_parameter(self, run_cli):
        result = run_cli("analyze", "--f", "u^p")
        assert result.status == 2
        assert result.report["values"]["error"]["fields"] == ["p"]

    def test_missing_theorem_parameters(self, run_cli):
        result = run_cli("check", "--theorem", "cor-power", "--n", "3", "--param", "alpha=2")
        assert result.status == 2
        assert set(result.report["values"]["error"]["fields"]) == {"beta", "lam", "mu", "b"}

    def test_range_error_in_library(self, run_cli):
        result = run_cli("decay", "--f", "u^3", "--lam", "0.5", "--boundary", "0.6", "--radii", "1")
        assert result.status == 2
        assert result.report["values"]["error"]["code"] == "parameter_range"

    @pytest.mark.parametrize(
        "argv",
        [
            ("exponents",),
            ("exponents", "--n", "three"),
            ("check", "--theorem", "Z", "--n", "3"),
            ("nonsense",),
        ],
    )
    def test_usage_errors_print_no_report(self, run_cli, argv):
        result = run_cli(*argv)
        assert result.status == 2
        assert result.report is None


class TestCsvArtifacts:
    def test_counterexample_table(self, run_cli, tmp_path):
        result = run_cli("counterexample", "--p", "0.4", "--q", "0.4", "--points", "11", "--csv", str(tmp_path))
        assert result.status == 0
        path = tmp_path / "counterexample_profile.csv"
        assert result.report["artifacts"] == [str(path)]
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "x,w"
        assert len(lines) == 12
        assert result.report["values"]["a"] == pytest.approx(10.0)

    def test_solve_ball_table(self, run_cli, tmp_path):
        result = run_cli("solve-ball", "--f", "1", "--R", "1", "--cells", "64", "--csv", str(tmp_path))
        assert result.status == 0
        assert result.report["values"]["center"] == pytest.approx([1 / 6], abs=1e-10)
        header = (tmp_path / "solve_ball_solution.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header == "r,d,u"

    def test_no_csv_without_directory(self, run_cli):
        result = run_cli("theta", "--K", "2")
        assert result.report["artifacts"] == []
