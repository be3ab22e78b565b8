"""
Range checks shared by settings and the numerical constructors.

Each helper returns the validated value so it can be used inline
(``n = require_int_at_least(n, 3, "n")``) and raises the matching ``EllabError``
subclass with the offending parameter name in ``fields``.
"""

import math
from numbers import Real

from ..exceptions.base import NonFiniteValueError, ParameterRangeError


def require_finite(value: float, name: str) -> float:
    """Reject NaN and infinities."""
    if not math.isfinite(float(value)):
        raise NonFiniteValueError(f"{name} must be finite, got {value!r}", fields=[name])
    return value


def require_positive(value: Real, name: str) -> Real:
    require_finite(value, name)
    if value <= 0:
        raise ParameterRangeError(f"{name} must be > 0, got {value!r}", fields=[name])
    return value


def require_nonnegative(value: Real, name: str) -> Real:
    require_finite(value, name)
    if value < 0:
        raise ParameterRangeError(f"{name} must be >= 0, got {value!r}", fields=[name])
    return value


def require_int_at_least(value: int, lower: int, name: str) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise ParameterRangeError(f"{name} must be an integer, got {value!r}", fields=[name])
    if value < lower:
        raise ParameterRangeError(f"{name} must be >= {lower}, got {value!r}", fields=[name])
    return int(value)


def require_open_interval(value: float, lower: float, upper: float, name: str) -> float:
    """Check lower < value < upper; either bound may be infinite."""
    require_finite(value, name)
    if not (lower < value < upper):
        raise ParameterRangeError(
            f"{name} must lie in ({lower:g}, {upper:g}), got {value!r}", fields=[name]
        )
    return value
