"""Fixtures for CLI tests."""

import json
from dataclasses import dataclass
from typing import Any, Callable

import pytest

from ellab.cli.main import run


@dataclass
class CliResult:
    status: int
    stdout: str
    report: dict[str, Any] | None


@pytest.fixture
def run_cli(capsys) -> Callable[..., CliResult]:
    """
    Run the ellab CLI in-process and return (status, stdout, parsed report).

    --no-timing is appended unless the caller passes ``timing=True`` so reports are byte-stable.
    The parsed report is None when nothing was written to stdout (usage errors, --out).
    """

    def _run(*argv: str, timing: bool = False) -> CliResult:
        args = list(argv)
        if not timing and "--no-timing" not in args:
            args.append("--no-timing")
        capsys.readouterr()
        status, _ = run(args)
        out = capsys.readouterr().out
        report = json.loads(out) if out.strip() else None
        return CliResult(status=status, stdout=out, report=report)

    return _run
