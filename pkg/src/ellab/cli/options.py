"""
Shared argparse options and their resolution into library objects.

Every float option goes through `evaluate_constant`, so "pS(3)", "kappa(4)+0.5" or "theta(2)" are
accepted wherever a number is.
"""

from __future__ import annotations

import argparse
from typing import Any

from ellab.config import get_settings
from ellab.exceptions import EllabError, ParameterRangeError
from ellab.nonlin import PRESETS, ScalarNonlin, SystemNonlin, build_preset, evaluate_constant, parse_expr
from ellab.utils.scans import ScanConfig


# =====================================================================================================================
# argparse types
# =====================================================================================================================


def constant(text: str) -> float:
    """argparse type: a real number or a named-constant expression."""
    try:
        return evaluate_constant(text)
    except EllabError as exc:
        raise argparse.ArgumentTypeError(exc.message) from exc


def integer(text: str) -> int:
    value = constant(text)
    if value != int(value):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def binding(text: str) -> tuple[str, float]:
    """argparse type for --param NAME=VALUE."""
    name, sep, value = text.partition("=")
    name = name.strip()
    if not sep or not name.isidentifier():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    return name, constant(value)


# =====================================================================================================================
# Option groups
# =====================================================================================================================


def add_common(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("output")
    group.add_argument("--out", metavar="PATH", help="write the JSON report here instead of stdout")
    group.add_argument("--csv", metavar="DIR", help="write CSV tables into this directory")
    group.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        type=str.upper,
        help="override ELLAB_LOG_LEVEL for this run",
    )
    group.add_argument("--jobs", type=integer, default=None, help="worker threads for independent sweep items")
    group.add_argument("--no-timing", action="store_true", help="report duration_ms as null (byte-stable output)")


def add_nonlinearity(parser: argparse.ArgumentParser, *, systems: bool = True, required: bool = True) -> None:
    group = parser.add_argument_group("nonlinearity")
    source = group.add_mutually_exclusive_group(required=required)
    source.add_argument("--f", metavar="EXPR", help='scalar nonlinearity in u, e.g. "u^2*log(2+u)^0.5"')
    source.add_argument("--preset", choices=sorted(PRESETS), help="named family (parameters via --param)")
    if systems:
        source.add_argument("--g1", metavar="EXPR", help="first component of a system in u, v (with --g2)")
        source.add_argument("--potential", metavar="EXPR", help="potential F(u, v) of a gradient system")
        group.add_argument("--g2", metavar="EXPR", help="second component of a system in u, v")
    group.add_argument(
        "--param",
        type=binding,
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="parameter binding (repeatable)",
    )


def add_scan(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("scan")
    group.add_argument("--scan-min", type=constant, default=None, help="lower end of the log grid")
    group.add_argument("--scan-max", type=constant, default=None, help="upper end of the log grid")
    group.add_argument("--per-decade", type=integer, default=None, help="grid points per decade")
    group.add_argument("--scan-tol", type=constant, default=None, help="margins within this count as zero")


def add_geometry(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--geometry", choices=["whole", "half"], default="whole", help="R^n or the half-space")


# =====================================================================================================================
# Resolution
# =====================================================================================================================


def params_of(args: argparse.Namespace) -> dict[str, float]:
    return dict(getattr(args, "param", None) or [])


def resolve_nonlinearity(args: argparse.Namespace) -> ScalarNonlin | SystemNonlin:
    """
    Build the nonlinearity named on the command line.

    Raises:
        ParameterRangeError: --g1 without --g2 (or the reverse).
    """
    params = params_of(args)
    if args.preset:
        return build_preset(args.preset, params)
    if args.f:
        return ScalarNonlin.parse(args.f, params)
    if getattr(args, "potential", None):
        return SystemNonlin.gradient(parse_expr(args.potential, params), label=args.potential)
    if getattr(args, "g1", None) and getattr(args, "g2", None):
        label = f"({args.g1}, {args.g2})"
        return SystemNonlin.generic(parse_expr(args.g1, params), parse_expr(args.g2, params), label=label)
    raise ParameterRangeError("a system needs both --g1 and --g2", fields=["g1", "g2"])


def require_scalar(S: ScalarNonlin | SystemNonlin, command: str) -> ScalarNonlin:
    if isinstance(S, ScalarNonlin):
        return S
    if S.scalar is not None:
        return S.scalar
    raise ParameterRangeError(f"{command} needs a scalar nonlinearity", fields=["f"])


def describe_nonlinearity(S: ScalarNonlin | SystemNonlin) -> dict[str, Any]:
    if isinstance(S, ScalarNonlin):
        return {"kind": "scalar", "text": S.text}
    return {"kind": str(S.kind), "text": S.describe(), "diffusion": list(S.diffusion)}


def resolve_scan(args: argparse.Namespace) -> ScanConfig:
    base = ScanConfig.from_settings()
    scan = ScanConfig(
        lo=args.scan_min if getattr(args, "scan_min", None) is not None else base.lo,
        hi=args.scan_max if getattr(args, "scan_max", None) is not None else base.hi,
        per_decade=args.per_decade if getattr(args, "per_decade", None) is not None else base.per_decade,
        tol=args.scan_tol if getattr(args, "scan_tol", None) is not None else base.tol,
    )
    if not 0.0 < scan.lo < scan.hi:
        raise ParameterRangeError(f"need 0 < scan-min < scan-max, got {scan.lo:g}, {scan.hi:g}", fields=["scan_min"])
    if scan.per_decade < 2 or scan.tol <= 0.0:
        raise ParameterRangeError("per-decade must be >= 2 and scan-tol > 0", fields=["per_decade", "scan_tol"])
    return scan


def resolve_jobs(args: argparse.Namespace) -> int:
    jobs = args.jobs if getattr(args, "jobs", None) is not None else get_settings().JOBS
    if jobs < 1:
        raise ParameterRangeError(f"--jobs must be >= 1, got {jobs}", fields=["jobs"])
    return jobs
