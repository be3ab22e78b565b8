"""
ellab command line.

    ellab <subcommand> [options]

Every subcommand writes one JSON report (stdout or --out) and, with --csv DIR, its tables as CSV
files. Exit status: 0 success, 1 checker "no" or solver failure (the report is still written),
2 usage errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
import uuid
from pathlib import Path
from typing import Sequence

from ellab.config import get_settings
from ellab.core.logging import reset_run_id, set_run_id, setup_logging, stop_queue_logging
from ellab.exceptions import EllabError
from ellab.rescaling.critical import DEFAULT_KS
from ellab.utils.project import get_project_version

from .commands import HANDLERS
from .options import add_common, add_geometry, add_nonlinearity, add_scan, constant, integer
from .report import CommandResult, Report, emit_json, write_csv

logger = logging.getLogger(__name__)

# CLI spelling -> TheoremId value
THEOREMS = {
    "A": "A",
    "B": "B",
    "C-hyp": "C-hyp",
    "GS": "GS-modified",
    "GS-modified": "GS-modified",
    "GS-general": "GS-general",
    "thm1": "thm1",
    "cor-power": "cor-power",
    "cor0": "cor0",
    "proportional": "proportional",
    "lane-emden-region": "lane-emden-region",
}


# =====================================================================================================================
# Parser
# =====================================================================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellab",
        description="Numerical laboratory for Liouville-type theorems of semilinear elliptic equations and systems.",
    )
    parser.add_argument("--version", action="version", version=f"ellab {get_project_version()}")

    common = argparse.ArgumentParser(add_help=False)
    add_common(common)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help, description=help, parents=[common])

    # 1) Exponents and scalar criteria
    p = command("exponents", "critical exponents p_S, p*, p** and the Serrin exponent n/(n-2)")
    p.add_argument("--n", type=integer, required=True)
    add_geometry(p)

    p = command("analyze", "regular-variation profile: indices at 0 and infinity, rescaling limits, f+")
    add_nonlinearity(p)
    p.add_argument("--lams", type=constant, nargs="+", default=[1e-3, 1.0, 1e3], help="lambdas for f+ (systems)")

    p = command(
        "check",
        "hypothesis checker of a Liouville theorem (A, B, C-hyp, GS-modified, GS-general, thm1, "
        "cor-power, cor0, proportional, lane-emden-region)",
    )
    p.add_argument("--theorem", choices=sorted(THEOREMS), required=True)
    add_nonlinearity(p, required=False)
    p.add_argument("--n", type=integer, required=True)
    add_geometry(p)
    p.add_argument("--M", type=constant, default=1.0, help="size of the square [0, M]^2 for growth conditions")
    p.add_argument("--exp-p", type=constant, default=2.0, help="exponent p of the thm1 growth conditions")
    p.add_argument("--exp-q", type=constant, default=2.0, help="exponent q of the thm1 growth conditions")
    p.add_argument("--eps", type=constant, default=None, help="shift of k in the proportionality method")
    p.add_argument(
        "--gs", type=constant, nargs=4, metavar=("Q", "K", "M1", "M2"), help="parameter point of the general GS criterion"
    )
    add_scan(p)

    p = command("benchmark", "thresholds K0 < K3 < K2 < K1 of the benchmark family (K + min(1, u^(p-1))) u^p")
    p.add_argument("--n", type=integer, required=True)
    p.add_argument("--p", type=constant, required=True)
    p.add_argument("--recover", action="store_true", help="also recover K1, K2, K3 by bisection on checker margins")
    add_scan(p)

    p = command("theta", "theta(K) and the minimum of phi_K(s) = (1 + K/s) log(K + s)")
    p.add_argument("--K", type=constant, nargs="+", required=True)

    # 2) Radial problems
    p = command("shoot", "radial shooting from u(0) = s0: first zero, positive on the horizon or blow-up")
    add_nonlinearity(p, systems=False)
    p.add_argument("--n", type=integer, required=True)
    p.add_argument("--s0", type=constant, nargs="+", default=[1.0])
    p.add_argument("--rmax", type=constant, default=None)
    p.add_argument("--tol", type=constant, default=None)
    p.add_argument("--through-zero", action="store_true", help="keep integrating past the first zero")

    p = command("verify", "ODE residual of the explicit radial solutions (bubble, benchmark solution, u_k)")
    p.add_argument("--form", choices=["bubble", "benchmark", "uk"], required=True)
    p.add_argument("--n", type=integer, default=3)
    p.add_argument("--p", type=constant, default=2.5, help="benchmark exponent")
    p.add_argument("--k", type=integer, default=10, help="u_k index")
    p.add_argument("--rmax", type=constant, default=10.0)
    p.add_argument("--points", type=integer, default=2001)
    p.add_argument("--max-residual", type=constant, default=1e-8, help="relative residual counted as a pass")

    p = command("pohozaev", "Pohozaev function psi(s) = s f(s) - (p_S + 1) F(s) and the Rellich-Pohozaev identity")
    add_nonlinearity(p)
    p.add_argument("--n", type=integer, required=True)
    p.add_argument("--s0", type=constant, default=None, help="check the identity on the shot from s0")
    p.add_argument("--R", type=constant, default=None, help="check the identity on the Dirichlet solution on B_R")
    p.add_argument("--rmax", type=constant, default=None)
    p.add_argument("--tol", type=constant, default=None)
    p.add_argument("--guess", default=None, help="'zero', 'const:C', 'bump:A' or 'bump:A,W'")
    p.add_argument("--cells", type=integer, default=256)
    add_scan(p)

    # 3) Universal bounds
    p = command("solve-ball", "finite-difference Newton solve of -D Delta U = f(U) on B_R (or a slab)")
    add_nonlinearity(p)
    p.add_argument("--n", type=integer, default=3)
    p.add_argument("--R", type=constant, required=True, help="ball radius (slab: height)")
    p.add_argument("--boundary", type=constant, nargs="+", default=[0.0])
    p.add_argument("--guess", default=None)
    p.add_argument("--cells", type=integer, default=256)
    p.add_argument("--slab", action="store_true", help="solve on the slab (0, R) instead of B_R")

    p = command("bound", "universal-bound measurement f(u) d^2 / u (or its system variants) across a family of balls")
    add_nonlinearity(p)
    p.add_argument("--n", type=integer, default=3)
    p.add_argument("--radii", type=constant, nargs="+", default=[1.0, 2.0, 4.0, 8.0])
    p.add_argument("--mode", choices=["scalar", "system", "lane-emden"], default="scalar")
    p.add_argument("--lam", type=constant, default=None, help="Omega_Lambda threshold (system mode)")
    p.add_argument("--guess", default=None, help="initial guess (default: shooting ground state for scalar f)")
    p.add_argument("--s0", type=constant, default=1.0, help="first center value tried by the shooting guess")
    p.add_argument("--cells", type=integer, default=256)
    add_scan(p)

    p = command("decay", "decay scan eta(R) of small-branch solutions with constant boundary data")
    add_nonlinearity(p)
    p.add_argument("--n", type=integer, default=3)
    p.add_argument("--lam", type=constant, default=None, help="admissibility threshold Lambda")
    p.add_argument("--boundary", type=constant, default=0.0)
    p.add_argument("--radii", type=constant, nargs="+", default=[1.0, 2.0, 4.0, 8.0, 16.0])
    p.add_argument("--cells", type=integer, default=256)

    p = command("counterexample", "unbounded semitrivial solutions (w, 0) of the proportional system with p + q <= 1")
    p.add_argument("--p", type=constant, required=True)
    p.add_argument("--q", type=constant, required=True)
    p.add_argument("--lam", type=constant, default=1.0)
    add_geometry(p)
    p.add_argument("--xmax", type=constant, default=2.0)
    p.add_argument("--points", type=integer, default=401)

    # 4) Rescaling
    p = command("rescale", "rescaling limits: uniform convergence, doubling points, critical limit of u_k")
    p.add_argument("what", choices=["convergence", "doubling", "critical"])
    add_nonlinearity(p, required=False)
    p.add_argument("--direction", choices=["inf", "zero"], default="inf")
    p.add_argument("--lams", type=constant, nargs="+", default=[1e3, 1e6, 1e9, 1e12])
    p.add_argument("--S", type=constant, default=2.0, help="sup over s in [0, S]")
    p.add_argument("--exponent", type=constant, default=None, help="limit exponent p (default: the index)")
    p.add_argument("--theta", type=constant, default=None, help="also report the power envelope of width theta")
    p.add_argument("--k", type=constant, default=1.0, help="doubling constant")
    p.add_argument("--spacing", type=constant, default=0.02, help="grid spacing over B_1")
    p.add_argument("--height", type=constant, default=1e3, help="peak height of the sample field")
    p.add_argument("--width", type=constant, default=0.05, help="peak width of the sample field")
    p.add_argument("--center", type=constant, nargs="+", default=[0.2, 0.1], help="peak location (sets the dimension)")
    p.add_argument("--n", type=integer, default=3)
    p.add_argument("--ks", type=integer, nargs="+", default=list(DEFAULT_KS))
    p.add_argument("--ymax", type=constant, default=10.0)
    p.add_argument("--points", type=integer, default=2001)

    return parser


def _normalize(args: argparse.Namespace) -> argparse.Namespace:
    if args.command == "check":
        args.theorem = THEOREMS[args.theorem]
    if args.command == "solve-ball":
        args.boundary = args.boundary[0] if len(args.boundary) == 1 else list(args.boundary)
    if args.command in ("decay",) and args.lam is None:
        args.lam = get_settings().OMEGA_LAMBDA
    return args


# =====================================================================================================================
# Runner
# =====================================================================================================================


def _configure_logging(level: str | None) -> None:
    settings = get_settings()
    if level:
        settings = settings.model_copy(update={"LOG_LEVEL": level})
    setup_logging(settings)


def run(argv: Sequence[str] | None = None) -> tuple[int, Report | None]:
    """
    Parse, execute and emit. Returns (exit status, report); the report is None on usage errors
    and for --help / --version.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None

    _configure_logging(args.log_level)
    token = set_run_id(uuid.uuid4().hex[:12])
    start = time.perf_counter()
    command = args.command
    result = CommandResult()
    status = 0
    try:
        # 1) Execute
        try:
            args = _normalize(args)
            result = HANDLERS[command](args)
            status = 1 if result.failed else 0
        except EllabError as exc:
            level = logging.WARNING if exc.exit_code() == 1 else logging.INFO
            logger.log(level, "cli.command_failed", extra={"command": command, **exc.to_payload()})
            result.values["error"] = exc.to_payload()
            status = exc.exit_code()
        except Exception as exc:
            logger.exception("cli.unexpected_error", extra={"command": command})
            result.values["error"] = {"detail": str(exc), "code": "internal"}
            status = 1

        # 2) Artifacts
        artifacts: list[str] = []
        if args.csv and result.tables:
            try:
                for table in result.tables:
                    artifacts.append(str(write_csv(table, Path(args.csv), command.replace("-", "_"))))
            except EllabError as exc:
                logger.warning("cli.csv_failed", extra={"command": command, **exc.to_payload()})
                result.values["error"] = exc.to_payload()
                status = max(status, exc.exit_code())

        # 3) Report
        duration_ms = None if args.no_timing else round((time.perf_counter() - start) * 1000, 3)
        report = Report(
            command=command,
            inputs=result.inputs,
            verdicts=result.verdicts,
            values=result.values,
            witnesses=result.witnesses,
            artifacts=artifacts,
            duration_ms=duration_ms,
            version=get_project_version(),
        )
        try:
            emit_json(report, Path(args.out) if args.out else None)
        except EllabError as exc:
            logger.error("cli.report_failed", extra={"command": command, **exc.to_payload()})
            status = max(status, exc.exit_code())
        logger.info("cli.done", extra={"command": command, "status": status, "duration": duration_ms})
        return status, report
    finally:
        reset_run_id(token)
        stop_queue_logging()


def main(argv: Sequence[str] | None = None) -> int:
    status, _ = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
