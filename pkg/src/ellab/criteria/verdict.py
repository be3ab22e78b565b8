"""
Verdict types shared by all hypothesis checkers.

A checker evaluates one or more named conditions, each with a signed margin (positive = satisfied
with room to spare) and, when it fails or binds, a witness point. The aggregate verdict is NO as
soon as one condition fails, INDETERMINATE when none fails but one sits within the scan tolerance,
YES otherwise.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any, Iterable, Mapping

logger = logging.getLogger(__name__)


class Holds(StrEnum):
    YES = "yes"
    NO = "no"
    INDETERMINATE = "indeterminate"


class TheoremId(StrEnum):
    A = "A"
    B = "B"
    C_HYP = "C-hyp"
    GS_MODIFIED = "GS-modified"
    GS_GENERAL = "GS-general"
    THM1 = "thm1"
    COR_POWER = "cor-power"
    COR_LOG = "cor0"
    PROPORTIONAL = "proportional"
    LANE_EMDEN_REGION = "lane-emden-region"


@dataclass(frozen=True, slots=True)
class Witness:
    """Point where a condition binds or fails, with the value of the tested quantity there."""

    point: tuple[float, ...]
    value: float
    condition: str
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"point": list(self.point), "value": self.value, "condition": self.condition, "note": self.note}


@dataclass(frozen=True)
class ConditionResult:
    name: str
    holds: Holds
    margin: float
    witness: Witness | None = None
    detail: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "holds": str(self.holds),
            "margin": self.margin,
            "witness": self.witness.to_dict() if self.witness else None,
            "detail": dict(self.detail),
        }


@dataclass(frozen=True)
class CheckVerdict:
    theorem: TheoremId
    holds: Holds
    margin: float
    witnesses: tuple[Witness, ...] = ()
    conditions: tuple[ConditionResult, ...] = ()
    scan: Mapping[str, Any] = field(default_factory=dict)
    values: Mapping[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.holds is Holds.YES

    def condition(self, name: str) -> ConditionResult:
        for cond in self.conditions:
            if cond.name == name:
                return cond
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": str(self.theorem),
            "holds": str(self.holds),
            "margin": self.margin,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "conditions": [c.to_dict() for c in self.conditions],
            "scan": dict(self.scan),
            "values": dict(self.values),
        }


def holds_from_margin(margin: float, tol: float, *, strict: bool = True) -> Holds:
    """
    Classify a signed margin.

    strict=True is for "<" / ">" conditions (|margin| <= tol is INDETERMINATE);
    strict=False for "<=" / ">=" conditions, where margin >= -tol already holds.
    """
    if math.isnan(margin):
        return Holds.INDETERMINATE
    if strict:
        if margin > tol:
            return Holds.YES
        return Holds.NO if margin < -tol else Holds.INDETERMINATE
    return Holds.YES if margin >= -tol else Holds.NO


def condition(
    name: str,
    margin: float,
    tol: float,
    *,
    strict: bool = True,
    witness: Witness | None = None,
    **detail: Any,
) -> ConditionResult:
    return ConditionResult(name, holds_from_margin(margin, tol, strict=strict), float(margin), witness, detail)


def aggregate(
    theorem: TheoremId,
    conditions: Iterable[ConditionResult],
    *,
    scan: Mapping[str, Any] | None = None,
    values: Mapping[str, Any] | None = None,
    margin: float | None = None,
) -> CheckVerdict:
    """Combine conditions; `margin` overrides the default (smallest condition margin)."""
    conditions = tuple(conditions)
    states = {c.holds for c in conditions}
    if Holds.NO in states:
        holds = Holds.NO
    elif Holds.INDETERMINATE in states:
        holds = Holds.INDETERMINATE
    else:
        holds = Holds.YES
    if margin is None:
        margin = min((c.margin for c in conditions), default=math.inf)
    witnesses = tuple(c.witness for c in conditions if c.witness is not None and c.holds is not Holds.YES)
    verdict = CheckVerdict(
        theorem=theorem,
        holds=holds,
        margin=margin,
        witnesses=witnesses,
        conditions=conditions,
        scan=dict(scan or {}),
        values=dict(values or {}),
    )
    log = logger.info if holds is not Holds.YES else logger.debug
    log(
        "check.verdict",
        extra={
            "theorem": str(theorem),
            "holds": str(holds),
            "margin": margin,
            "failed": [c.name for c in conditions if c.holds is Holds.NO],
        },
    )
    return verdict
