"""Shared exact/float scalar plumbing.

Probabilities, prices and quantile levels travel through the package either as
`fractions.Fraction` (exact mode) or `float`.  Mixed arithmetic falls back to
float automatically, so the helpers here only deal with classification,
parsing and formatting.
"""

from __future__ import annotations

import math
from fractions import Fraction


def is_exact(x) -> bool:
    """True when x is an exact rational scalar (int or Fraction, not bool)."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def all_exact(xs) -> bool:
    return all(is_exact(x) for x in xs)


def parse_scalar(tok):
    """Parse a scalar from user input.

    Strings are parsed exactly: "a/b" as a rational, decimal literals by exact
    decimal expansion ("0.6" -> 3/5).  ints and Fractions stay exact; floats
    stay floats (callers who want exactness must pass rationals).
    """
    if isinstance(tok, bool):
        raise TypeError("booleans are not valid numeric input")
    if isinstance(tok, Fraction):
        return tok
    if isinstance(tok, int):
        return Fraction(tok)
    if isinstance(tok, float):
        return tok
    if isinstance(tok, str):
        try:
            return Fraction(tok.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse numeric literal {tok!r}") from exc
    raise TypeError(f"unsupported numeric type {type(tok).__name__}")


def fmt_exact(x) -> str:
    """Render an exact scalar as a compact rational string ("4/27", "2")."""
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def as_float(x) -> float:
    return float(x)


def log_of(x) -> float:
    """Natural log of an exact or float scalar, with Fraction-aware precision."""
    if isinstance(x, Fraction):
        if x <= 0:
            raise ValueError("log of non-positive value")
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def sgn(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0
