"""Type checks for parsed JSON that report failures by JSON path."""

from fractions import Fraction
from typing import Dict, Tuple

from .errors import CorpusError
from .rationals import parse_rational


def expect(value, kind, path: str, what: str):
    if not isinstance(value, kind) or isinstance(value, bool):
        raise CorpusError(path, f"expected {what}")
    return value


def rational_at(value, path: str) -> Fraction:
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise CorpusError(path, str(exc)) from None


def nonnegative_int_at(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise CorpusError(path, f"expected a nonnegative integer, got {value!r}")
    return value


def coefficients_at(value, path: str) -> Dict[str, Fraction]:
    """``{label: rational}`` with every coefficient parsed exactly."""
    expect(value, dict, path, "an object of coefficients")
    return {label: rational_at(c, f"{path}.{label}") for label, c in value.items()}


def bidegree_at(value, path: str) -> Tuple[int, int]:
    if not isinstance(value, list) or len(value) != 2:
        raise CorpusError(path, "expected a bidegree [p, n]")
    return nonnegative_int_at(value[0], f"{path}[0]"), nonnegative_int_at(value[1], f"{path}[1]")
