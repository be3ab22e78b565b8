"""
Exceptions raised by the ellab library and mapped to CLI exit codes.
"""

from typing import Any, Iterable

# canonical tool-level exception


class EllabError(Exception):
    """
    Base exception for parsing, domain and solver errors.

    - message: human-friendly message (safe to print in reports)
    - fields: optional list of parameter names related to the error (e.g. ['K'])
    - error_code: canonical short code (e.g. 'syntax', 'domain') used in reports and exit-code mapping
    """

    # Map canonical error_code -> process exit status.
    # Usage-type problems exit 2 like argparse errors; numerical failures exit 1.
    ERROR_CODE_TO_EXIT = {
        "syntax": 2,
        "unbound_parameter": 2,
        "unknown_preset": 2,
        "parameter_range": 2,
        "non_finite": 2,
        "domain": 2,
        "missing_potential": 2,
        "divergent_integral": 1,
        "no_regular_variation": 1,
        "newton_divergence": 1,
        "singular_jacobian": 1,
        "onset_not_found": 1,
        "io": 1,
    }

    def __init__(self, message: str, *, fields: Iterable[str] | None = None,
                 error_code: str | None = None):
        super().__init__(message)
        self.message = message
        self.fields = list(fields) if fields else None
        self.error_code = error_code

    def __str__(self) -> str:
        base = self.message
        parts = []
        if self.fields:
            parts.append(f"fields: {', '.join(self.fields)}")
        if self.error_code:
            parts.append(f"code: {self.error_code}")
        if parts:
            return f"{base} ({'; '.join(parts)})"
        return base

    def to_payload(self) -> dict[str, Any]:
        """
        Return a JSON-serializable dict for the report's ``values.error`` entry.
        Shape:
            {
                "detail": "A human-friendly message",
                "code": "syntax",              # optional canonical code
                "fields": ["K"],               # optional parameter names
            }
        """
        payload: dict[str, Any] = {"detail": self.message}
        if self.error_code:
            payload["code"] = self.error_code
        if self.fields:
            payload["fields"] = list(self.fields)
        return payload

    def exit_code(self) -> int:
        """
        Return the process exit status for this error (1 when the code is unknown).
        """
        if self.error_code:
            return self.ERROR_CODE_TO_EXIT.get(self.error_code, 1)
        return 1


# Subclasses fix their canonical error_code so exit_code() is automatic.

class ExprSyntaxError(EllabError):
    """Raised by the expression parser; ``offset`` is the byte offset of the offending token."""

    def __init__(self, message: str, *, offset: int, text: str | None = None):
        super().__init__(f"{message} at offset {offset}", error_code="syntax")
        self.offset = offset
        self.text = text

    def to_payload(self) -> dict[str, Any]:
        payload = super().to_payload()
        payload["offset"] = self.offset
        return payload


class UnboundParameterError(EllabError):
    def __init__(self, name: str):
        super().__init__(f"Unbound parameter '{name}'", fields=[name], error_code="unbound_parameter")


class UnknownPresetError(EllabError):
    def __init__(self, name: str, known: Iterable[str]):
        super().__init__(
            f"Unknown preset '{name}' (known: {', '.join(sorted(known))})",
            fields=[name],
            error_code="unknown_preset",
        )


class ParameterRangeError(EllabError, ValueError):
    """Raised when a parameter falls outside the range an operation is defined on."""

    def __init__(self, message: str, *, fields: Iterable[str] | None = None):
        super().__init__(message, fields=fields, error_code="parameter_range")


class NonFiniteValueError(EllabError, ValueError):
    def __init__(self, message: str, *, fields: Iterable[str] | None = None):
        super().__init__(message, fields=fields, error_code="non_finite")


class DomainError(EllabError, ValueError):
    """Raised when a function is evaluated outside its domain (e.g. theta(K) for K < 1)."""

    def __init__(self, message: str, *, fields: Iterable[str] | None = None):
        super().__init__(message, fields=fields, error_code="domain")


class IntegralDivergenceError(EllabError):
    """
    Raised when a weighted primitive diverges at 0. Callers for which an infinite
    value is meaningful catch it and use ``value`` (always +inf).
    """

    def __init__(self, message: str, *, local_index: float | None = None):
        super().__init__(message, error_code="divergent_integral")
        self.local_index = local_index
        self.value = float("inf")


class RegularVariationError(EllabError):
    def __init__(self, message: str, *, end: str | None = None):
        super().__init__(message, fields=[end] if end else None, error_code="no_regular_variation")


class NewtonDivergenceError(EllabError):
    """Newton did not converge; the last iterate and residual are kept for the report."""

    def __init__(self, message: str, *, last_iterate=None, residual: float | None = None,
                 iterations: int | None = None):
        super().__init__(message, error_code="newton_divergence")
        self.last_iterate = last_iterate
        self.residual = residual
        self.iterations = iterations

    def to_payload(self) -> dict[str, Any]:
        payload = super().to_payload()
        payload["residual"] = self.residual
        payload["iterations"] = self.iterations
        return payload


class SingularJacobianError(EllabError):
    def __init__(self, message: str = "Singular Jacobian in Newton step"):
        super().__init__(message, error_code="singular_jacobian")


class OnsetNotFoundError(EllabError):
    def __init__(self, message: str):
        super().__init__(message, error_code="onset_not_found")


class MissingPotentialError(EllabError):
    def __init__(self, message: str = "Operation needs a gradient system with a potential F"):
        super().__init__(message, error_code="missing_potential")


class ReportIOError(EllabError):
    def __init__(self, message: str, *, path: str):
        super().__init__(f"{message}: {path}", fields=[path], error_code="io")
        self.path = path


__all__ = [
    "EllabError",
    "ExprSyntaxError",
    "UnboundParameterError",
    "UnknownPresetError",
    "ParameterRangeError",
    "NonFiniteValueError",
    "DomainError",
    "IntegralDivergenceError",
    "RegularVariationError",
    "NewtonDivergenceError",
    "SingularJacobianError",
    "OnsetNotFoundError",
    "MissingPotentialError",
    "ReportIOError",
]


r"""
# =================================================================================================================
# Expected outcomes vs. errors
# =================================================================================================================

Not every "negative" result is an exception here:

| Situation                                   | Representation                                  |
| ------------------------------------------- | ----------------------------------------------- |
| A hypothesis fails on the scan grid         | CheckVerdict(holds=NO) with a witness           |
| A sup lands within the scan tolerance of 0  | CheckVerdict(holds=INDETERMINATE)               |
| Shooting reaches the horizon undecided      | ShootOutcome(tag=INCONCLUSIVE, reason=...)      |
| phi(s) = int_0^s sigma^-kappa f = +inf      | IntegralDivergenceError, caught where legal     |
| Newton stalls after the damping budget      | NewtonDivergenceError (last iterate attached)   |
| Malformed expression text                   | ExprSyntaxError with the byte offset            |

Verdicts are data; errors are for inputs an operation is not defined on, or solvers that could not
produce an answer at all. The CLI turns both into a report and chooses the exit status:
verdict NO / solver failure -> 1, usage-type error codes -> 2 (see ERROR_CODE_TO_EXIT).
"""
