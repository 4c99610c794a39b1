"""Exact rational scalars: wire format and the infinite sentinel.

Rationals travel as strings "p/q" (or "p" when integral) so that JSON
round-trips are bit-exact.  Floats are refused everywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError

#: Marker for infinite edge lengths and infinite Hausdorff distances.
INFINITE = float("inf")


def is_infinite(value) -> bool:
    return not isinstance(value, Fraction) and value == INFINITE


def parse_rational(value) -> Fraction:
    """Read an exact rational from its wire form ("p/q" or "p", or an int)."""
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    # floats are deliberately rejected: they are not exact
    raise InputError(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_length(value):
    """Edge length from JSON: an exact rational or the string "inf"."""
    if value == "inf":
        return INFINITE
    return parse_rational(value)


def format_length(value) -> str:
    if is_infinite(value):
        return "inf"
    return format_rational(value)
