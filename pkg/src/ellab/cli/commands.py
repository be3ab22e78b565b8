"""
Subcommand handlers.

Each handler takes the parsed namespace and returns a CommandResult; the runner in main.py turns
it into a Report, writes CSV tables and picks the exit status. Handlers raise EllabError for bad
inputs and solver failures and never print.
"""

from __future__ import annotations

import argparse
import contextvars
import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, TypeVar

import numpy as np

from ellab.bounds import (
    InitialGuess,
    bound_report,
    decay_scan,
    h_calculus,
    lane_emden_bound_slopes,
    proportional_counterexample,
    solve_ball,
    solve_slab,
)
from ellab.criteria import (
    CheckVerdict,
    Holds,
    TheoremId,
    benchmark_thresholds,
    check_mixed_power,
    check_coupled_log,
    check_gs_general,
    check_gs_modified,
    check_proportional,
    check_theorem_A,
    check_theorem_B,
    check_theorem_C_hyp,
    check_thm1_conditions,
    check_thm1_scalar,
    exponents,
    lane_emden_region,
    recover_benchmark_thresholds,
    search_gs_params,
)
from ellab.exceptions import ParameterRangeError
from ellab.nonlin import ScalarNonlin, SystemNonlin, f_plus, local_index, phi_K_min, regvar_profile, theta
from ellab.nonlin.system import SystemKind
from ellab.radial import (
    OutcomeTag,
    benchmark_solution,
    bubble,
    bubble_nonlinearity,
    profile_to_rows,
    psi_positive_range,
    rellich_pohozaev_residual,
    shoot,
    shoot_to_radius,
    uk_family,
    uk_nonexistence_bound,
    verify_closed_form,
)
from ellab.rescaling import (
    DiscreteField,
    critical_limit_check,
    doubling_point,
    power_envelope,
    uniform_convergence_check,
)

from .options import describe_nonlinearity, params_of, require_scalar, resolve_jobs, resolve_nonlinearity, resolve_scan
from .report import CommandResult, Table

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_jobs(func: Callable[[T], R], items: Iterable[T], jobs: int) -> list[R]:
    """Ordered map over independent sweep items; worker threads inherit the caller's context (run id)."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(contextvars.copy_context().run, func, item) for item in items]
        return [future.result() for future in futures]


def _verdict_result(verdict: CheckVerdict, inputs: dict[str, Any]) -> CommandResult:
    return CommandResult(
        inputs=inputs,
        values=dict(verdict.values),
        verdicts=[verdict.to_dict()],
        witnesses=[w.to_dict() for w in verdict.witnesses],
        failed=verdict.holds is Holds.NO,
    )


# =====================================================================================================================
# exponents / analyze / benchmark / theta
# =====================================================================================================================


def cmd_exponents(args: argparse.Namespace) -> CommandResult:
    ex = exponents(args.n, args.geometry)
    return CommandResult(inputs={"n": args.n, "geometry": args.geometry}, values=ex.to_dict())


def cmd_analyze(args: argparse.Namespace) -> CommandResult:
    S = resolve_nonlinearity(args)
    profile = regvar_profile(S)
    values: dict[str, Any] = {
        "index_inf": profile.index_inf,
        "index_zero": profile.index_zero,
        "limit_inf": [str(e) for e in profile.f_inf],
        "limit_zero": [str(e) for e in profile.f_zero],
        "slow_inf": [s.describe() for s in profile.slow_inf],
        "slow_zero": [s.describe() for s in profile.slow_zero],
        "method": profile.method,
    }
    if isinstance(S, ScalarNonlin):
        values.update({"positive": S.positive, "value_at_zero": S.value_at_zero, "kinks": list(S.kinks())})
    else:
        values["f_plus"] = {f"{lam:g}": f_plus(S, lam) for lam in args.lams}
    return CommandResult(inputs={"nonlinearity": describe_nonlinearity(S), "params": params_of(args)}, values=values)


def cmd_benchmark(args: argparse.Namespace) -> CommandResult:
    K = benchmark_thresholds(args.n, args.p)
    values: dict[str, Any] = {
        "K0": K.K0,
        "K1": K.K1,
        "K2": K.K2,
        "K3": K.K3,
        "ordered": K.K1 > K.K2 > K.K3 > K.K0,
        "K3_over_K0": K.K3 / K.K0 if K.K0 > 0.0 else math.inf,
    }
    if args.recover:
        values["recovery"] = recover_benchmark_thresholds(args.n, args.p, resolve_scan(args)).to_dict()
    return CommandResult(inputs={"n": args.n, "p": args.p, "recover": args.recover}, values=values)


def cmd_theta(args: argparse.Namespace) -> CommandResult:
    rows = []
    for K in args.K:
        s_K, inf_phi = phi_K_min(K)
        rows.append({"K": K, "theta": theta(K), "s_K": s_K, "inf_phi": inf_phi})
    return CommandResult(
        inputs={"K": list(args.K)},
        values={"rows": rows},
        tables=[Table("theta", ["K", "theta", "s_K", "inf_phi"], [tuple(r.values()) for r in rows])],
    )


# =====================================================================================================================
# check
# =====================================================================================================================


def _needs(params: dict[str, float], names: Iterable[str], theorem: str) -> list[float]:
    missing = [name for name in names if name not in params]
    if missing:
        raise ParameterRangeError(f"--theorem {theorem} needs --param {', '.join(missing)}", fields=missing)
    return [params[name] for name in names]


def cmd_check(args: argparse.Namespace) -> CommandResult:
    scan = resolve_scan(args)
    theorem = TheoremId(args.theorem)
    params = params_of(args)
    has_nonlin = any(getattr(args, key, None) for key in ("f", "preset", "g1", "potential"))
    S = resolve_nonlinearity(args) if has_nonlin else None
    inputs: dict[str, Any] = {
        "theorem": theorem.value,
        "n": args.n,
        "geometry": args.geometry,
        "params": params,
        "scan": scan.describe(),
    }
    if S is not None:
        inputs["nonlinearity"] = describe_nonlinearity(S)

    def scalar() -> ScalarNonlin:
        if S is None:
            raise ParameterRangeError(f"--theorem {theorem.value} needs a nonlinearity", fields=["f"])
        return require_scalar(S, f"--theorem {theorem.value}")

    def system() -> SystemNonlin:
        if S is None:
            raise ParameterRangeError(f"--theorem {theorem.value} needs a system", fields=["g1"])
        return S if isinstance(S, SystemNonlin) else SystemNonlin.from_scalar(S)

    match theorem:
        case TheoremId.A:
            verdict = check_theorem_A(scalar(), args.n, scan)
        case TheoremId.B:
            verdict = check_theorem_B(scalar(), args.n, scan)
        case TheoremId.C_HYP:
            verdict = check_theorem_C_hyp(scalar(), args.n, scan)
        case TheoremId.GS_MODIFIED:
            verdict = check_gs_modified(scalar(), args.n, scan)
        case TheoremId.GS_GENERAL:
            if args.gs:
                q, k, m1, m2 = args.gs
                verdict = check_gs_general(scalar(), args.n, q, k, m1, m2, scan=scan)
            else:
                verdict = search_gs_params(scalar(), args.n, scan)
        case TheoremId.THM1:
            if isinstance(S, ScalarNonlin) or (S is not None and S.kind == SystemKind.SCALAR):
                verdict = check_thm1_scalar(scalar(), args.n, scan)
            else:
                verdict = check_thm1_conditions(
                    system(), args.n, args.geometry, M=args.M, p=args.exp_p, q=args.exp_q, scan=scan
                )
        case TheoremId.COR_POWER:
            alpha, beta, lam, mu, b = _needs(params, ("alpha", "beta", "lam", "mu", "b"), theorem.value)
            verdict = check_mixed_power(
                alpha, beta, lam, mu, b, args.n, args.geometry, mixed=bool(params.get("mixed", 0.0)), M=args.M, scan=scan
            )
        case TheoremId.COR_LOG:
            p0, a, K, sigma, lam = _needs(params, ("p0", "a", "K", "sigma", "lam"), theorem.value)
            verdict = check_coupled_log(p0, a, K, int(sigma), lam, args.n, args.geometry, scan)
        case TheoremId.PROPORTIONAL:
            verdict = check_proportional(system(), args.eps, args.geometry, args.n, args.M, scan)
        case TheoremId.LANE_EMDEN_REGION:
            if S is not None and isinstance(S, SystemNonlin) and S.kind == SystemKind.LANE_EMDEN:
                p, _ = local_index(S.lane_emden[0], "inf")
                q, _ = local_index(S.lane_emden[1], "inf")
            else:
                p, q = _needs(params, ("p", "q"), theorem.value)
            verdict = lane_emden_region(p, q, args.n, scan)

    logger.info("check.verdict", extra={"theorem": theorem.value, "holds": verdict.holds.value, "margin": verdict.margin})
    return _verdict_result(verdict, inputs)


# =====================================================================================================================
# Radial: shoot / verify / pohozaev
# =====================================================================================================================


def cmd_shoot(args: argparse.Namespace) -> CommandResult:
    f = require_scalar(resolve_nonlinearity(args), "shoot")
    s0s = list(args.s0)

    def run(s0: float):
        return shoot(f, args.n, s0, r_max=args.rmax, tol=args.tol, through_zero=args.through_zero)

    shots = map_jobs(run, s0s, resolve_jobs(args))
    outcomes = []
    tables = []
    for s0, (profile, outcome) in zip(s0s, shots):
        outcomes.append({"s0": s0, **outcome.to_dict(), "nodes": int(profile.r.size)})
        header, rows = profile_to_rows(profile)
        tables.append(Table("profile" if len(s0s) == 1 else f"profile_s0_{s0:.17g}", header, rows))
    return CommandResult(
        inputs={
            "nonlinearity": describe_nonlinearity(f),
            "n": args.n,
            "s0": s0s,
            "rmax": args.rmax,
            "tol": args.tol,
            "through_zero": args.through_zero,
        },
        values={"outcomes": outcomes},
        tables=tables,
        failed=any(o["tag"] == OutcomeTag.INCONCLUSIVE.value for o in outcomes),
    )


def cmd_verify(args: argparse.Namespace) -> CommandResult:
    values: dict[str, Any] = {}
    match args.form:
        case "bubble":
            form, f = bubble(args.n), bubble_nonlinearity(args.n)
        case "benchmark":
            solution = benchmark_solution(args.n, args.p)
            form, f = solution.profile, solution.nonlinearity()
            values["K0"] = solution.K0
            values["minus_laplacian_at_0"] = float(-form.laplacian(0.0))
            values["f_at_center"] = float(f(form.center))
        case "uk":
            family = uk_family(args.n, args.k)
            form, f = family.profile, family.nonlinearity()
            values["family"] = family.to_dict()
            values["nonexistence_bound"] = dataclasses.asdict(uk_nonexistence_bound(args.n, args.k))
    report = verify_closed_form(form, f, r_max=args.rmax, points=args.points)
    values["closed_form"] = form.to_dict()
    values["residual"] = report.to_dict()
    radii = np.linspace(0.0, args.rmax, args.points)
    header, rows = profile_to_rows(form.profile(radii))
    return CommandResult(
        inputs={"form": args.form, "n": args.n, "p": args.p, "k": args.k, "rmax": args.rmax, "points": args.points},
        values=values,
        tables=[Table("profile", header, rows)],
        failed=not report.max_rel <= args.max_residual,
    )


def cmd_pohozaev(args: argparse.Namespace) -> CommandResult:
    S = resolve_nonlinearity(args)
    values: dict[str, Any] = {}
    failed = False
    if isinstance(S, ScalarNonlin) or S.scalar is not None:
        f = require_scalar(S, "pohozaev")
        values["psi"] = psi_positive_range(f, args.n, resolve_scan(args)).to_dict()
    tables = []
    profile = None
    if args.s0 is not None:
        f = require_scalar(S, "pohozaev --s0")
        profile, outcome = shoot(f, args.n, args.s0, r_max=args.rmax, tol=args.tol)
        values["outcome"] = outcome.to_dict()
        if outcome.tag is not OutcomeTag.FIRST_ZERO:
            logger.info("pohozaev.no_dirichlet_solution", extra={"s0": args.s0, "tag": outcome.tag.value})
            profile, failed = None, True
    elif args.R is not None:
        guess = InitialGuess.parse(args.guess) if args.guess else None
        solution = solve_ball(S, args.n, args.R, 0.0, guess, cells=args.cells)
        values["solution"] = solution.to_dict()
        profile = solution.to_profile()
    if profile is not None:
        residual = rellich_pohozaev_residual(profile, S)
        values["identity"] = residual.to_dict()
        header, rows = profile_to_rows(profile)
        tables.append(Table("profile", header, rows))
    return CommandResult(
        inputs={
            "nonlinearity": describe_nonlinearity(S),
            "n": args.n,
            "s0": args.s0,
            "R": args.R,
            "rmax": args.rmax,
            "tol": args.tol,
        },
        values=values,
        tables=tables,
        failed=failed,
    )


# =====================================================================================================================
# Bounds: solve-ball / bound / decay / counterexample
# =====================================================================================================================


def cmd_solve_ball(args: argparse.Namespace) -> CommandResult:
    S = resolve_nonlinearity(args)
    guess = InitialGuess.parse(args.guess) if args.guess else None
    if args.slab:
        solution = solve_slab(S, args.R, args.boundary, guess, cells=args.cells)
    else:
        solution = solve_ball(S, args.n, args.R, args.boundary, guess, cells=args.cells)
    header, rows = solution.to_rows()
    return CommandResult(
        inputs={
            "nonlinearity": describe_nonlinearity(S),
            "n": 1 if args.slab else args.n,
            "R": args.R,
            "boundary": args.boundary,
            "guess": args.guess or "zero",
            "cells": args.cells,
            "geometry": "slab" if args.slab else "ball",
        },
        values=solution.to_dict(),
        tables=[Table("solution", header, rows)],
    )


def _ground_state(S: ScalarNonlin | SystemNonlin, n: int, R: float, guess: str | None, cells: int, s0: float):
    """Ball solution for the bound sweep; scalar problems default to the shooting ground state as guess."""
    if guess is not None:
        return solve_ball(S, n, R, 0.0, InitialGuess.parse(guess), cells=cells)
    if isinstance(S, ScalarNonlin) or S.scalar is not None:
        f = require_scalar(S, "bound")
        profile, _, _ = shoot_to_radius(f, n, R, s0)
        return solve_ball(S, n, R, 0.0, InitialGuess.from_profile(profile), cells=cells)
    return solve_ball(S, n, R, 0.0, InitialGuess.bump(1.0), cells=cells)


def cmd_bound(args: argparse.Namespace) -> CommandResult:
    S = resolve_nonlinearity(args)
    radii = sorted(args.radii)
    solutions = map_jobs(
        lambda R: _ground_state(S, args.n, R, args.guess, args.cells, args.s0), radii, resolve_jobs(args)
    )
    hcal = None
    values: dict[str, Any] = {}
    if args.mode == "lane-emden":
        if not isinstance(S, SystemNonlin) or S.lane_emden is None:
            raise ParameterRangeError("lane-emden mode needs a Lane-Emden pair", fields=["mode"])
        hcal = h_calculus(*S.lane_emden, scan=resolve_scan(args))
        values["h_calculus"] = hcal.to_dict()
        lo = max(hcal.s0, math.e * 1.01)
        grid = np.geomspace(lo, max(hcal.s_max / 10.0, 10.0 * lo), 200)
        values["slopes"] = lane_emden_bound_slopes(hcal, grid).to_dict()
    report = bound_report(solutions, args.mode, S, hcal=hcal, lam=args.lam)
    values.update(report.to_dict())
    values["centers"] = [solution.center.tolist() for solution in solutions]
    header, rows = report.to_rows()
    return CommandResult(
        inputs={
            "nonlinearity": describe_nonlinearity(S),
            "n": args.n,
            "radii": radii,
            "mode": args.mode,
            "lam": args.lam,
            "guess": args.guess or "shooting",
            "cells": args.cells,
        },
        values=values,
        tables=[Table("bounds", header, rows)],
    )


def cmd_decay(args: argparse.Namespace) -> CommandResult:
    S = resolve_nonlinearity(args)
    table = decay_scan(S, args.n, args.lam, args.boundary, args.radii, cells=args.cells)
    header, rows = table.to_rows()
    return CommandResult(
        inputs={
            "nonlinearity": describe_nonlinearity(S),
            "n": args.n,
            "lam": args.lam,
            "boundary": args.boundary,
            "radii": sorted(args.radii, reverse=True),
            "cells": args.cells,
        },
        values=table.to_dict(),
        tables=[Table("decay", header, rows)],
    )


def cmd_counterexample(args: argparse.Namespace) -> CommandResult:
    result = proportional_counterexample(args.p, args.q, args.lam, args.geometry, x_max=args.xmax, points=args.points)
    header, rows = result.to_rows()
    return CommandResult(
        inputs={"p": args.p, "q": args.q, "lam": args.lam, "geometry": args.geometry, "xmax": args.xmax},
        values=result.to_dict(),
        tables=[Table("profile", header, rows)],
    )


# =====================================================================================================================
# Rescaling
# =====================================================================================================================


def cmd_rescale(args: argparse.Namespace) -> CommandResult:
    match args.what:
        case "convergence":
            return _rescale_convergence(args)
        case "doubling":
            return _rescale_doubling(args)
        case "critical":
            return _rescale_critical(args)
    raise ParameterRangeError(f"unknown rescale mode {args.what!r}", fields=["what"])


def _rescale_convergence(args: argparse.Namespace) -> CommandResult:
    if not any(getattr(args, key, None) for key in ("f", "preset", "g1", "potential")):
        raise ParameterRangeError("rescale convergence needs a nonlinearity", fields=["f"])
    S = resolve_nonlinearity(args)
    table = uniform_convergence_check(S, args.lams, direction=args.direction, S=args.S, p=args.exponent)
    values = table.to_dict()
    if args.theta is not None:
        p = table.p if table.p is not None else regvar_profile(S).index(args.direction)
        values["envelope"] = power_envelope(S, p, args.theta, args.lams, direction=args.direction).to_dict()
    header, rows = table.to_rows()
    return CommandResult(
        inputs={
            "what": "convergence",
            "nonlinearity": describe_nonlinearity(S),
            "direction": args.direction,
            "lams": list(args.lams),
            "S": args.S,
            "exponent": args.exponent,
        },
        values=values,
        tables=[Table("convergence", header, rows)],
    )


def _rescale_doubling(args: argparse.Namespace) -> CommandResult:
    center = np.asarray(args.center, dtype=float)

    def peak(points: np.ndarray) -> np.ndarray:
        r2 = np.sum((points - center) ** 2, axis=1)
        return args.height / (1.0 + r2 / args.width**2)

    field = DiscreteField.on_ball_grid(peak, args.spacing, dim=center.size)
    result = doubling_point(field, args.k)
    tables = []
    if not result.found and result.slack is not None:
        tables.append(
            Table(
                "slack",
                [f"x{i}" for i in range(field.points.shape[1])] + ["slack"],
                [(*map(float, p), float(s)) for p, s in zip(field.points, result.slack)],
            )
        )
    return CommandResult(
        inputs={
            "what": "doubling",
            "k": args.k,
            "spacing": args.spacing,
            "height": args.height,
            "width": args.width,
            "center": center.tolist(),
            "points": field.size,
        },
        values=result.to_dict(),
        tables=tables,
        failed=result.found and not (result.check and result.check.ok),
    )


def _rescale_critical(args: argparse.Namespace) -> CommandResult:
    table = critical_limit_check(args.n, args.ks, y_max=args.ymax, points=args.points)
    header, rows = table.to_rows()
    return CommandResult(
        inputs={"what": "critical", "n": args.n, "ks": sorted(set(args.ks)), "ymax": args.ymax, "points": args.points},
        values=table.to_dict(),
        tables=[Table("critical", header, rows)],
    )


HANDLERS: dict[str, Callable[[argparse.Namespace], CommandResult]] = {
    "exponents": cmd_exponents,
    "analyze": cmd_analyze,
    "check": cmd_check,
    "benchmark": cmd_benchmark,
    "theta": cmd_theta,
    "shoot": cmd_shoot,
    "verify": cmd_verify,
    "pohozaev": cmd_pohozaev,
    "solve-ball": cmd_solve_ball,
    "bound": cmd_bound,
    "decay": cmd_decay,
    "counterexample": cmd_counterexample,
    "rescale": cmd_rescale,
}
