"""
Normalization of enum-like settings read from the environment.
"""

from typing import Literal


def normalize_case(value: object, case: Literal["upper", "lower"]) -> object:
    """
    Strip surrounding whitespace and fold the case of a string value so ``ELLAB_LOG_LEVEL=" info"``
    still matches its Literal. Non-string values are returned unchanged for pydantic to reject.
    """
    if not isinstance(value, str):
        return value
    value = value.strip()
    return value.upper() if case == "upper" else value.lower()
