"""Exact rational parsing and serialization helpers.

Rationals travel through JSON as strings "p/q" (or plain integer strings);
floats are emitted with shortest round-trip repr.  Numbers that may be
either exact or floating are serialized as {"exact": "p/q" | null,
"float": ...} so downstream consumers can re-parse without loss.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import ParseError

Number = Fraction | float


def parse_rational(value) -> Fraction:
    """Parse "p/q" or integer strings (ints pass through) exactly."""
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed rational {value!r}") from exc
    raise ParseError(f"expected a rational string, got {type(value).__name__}")


def parse_number(value) -> Number:
    """Like parse_rational but floats are admitted and kept as floats."""
    if isinstance(value, float):
        return value
    return parse_rational(value)


def fmt_rational(x: Rational) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def num_json(x) -> dict:
    """Serialize an exact-or-float number with both renderings."""
    if x is None:
        return {"exact": None, "float": None}
    if isinstance(x, Rational) and not isinstance(x, int) or isinstance(x, int):
        return {"exact": fmt_rational(Fraction(x)), "float": float(x)}
    return {"exact": None, "float": float(x)}


def as_float(x) -> float:
    return float(x)
