"""Numeric plumbing shared across modules.

Two backends coexist: exact rational arithmetic (``fractions.Fraction``) for
weight families with rational closed forms, and arbitrary-precision floats
(``mpmath``) elsewhere.  Logarithms are always carried as ordinary floats;
rank-20 cylinders already underflow double precision, so everything
downstream of a product of weights works in log space.
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction
from typing import Union

import mpmath

# Mantissa bits for the approximate backend.  128 bits keeps ~38 decimal
# digits, enough to certify digits of depth-30 expansions of typical inputs.
DEFAULT_PRECISION = 128

Number = Union[Fraction, int, float, mpmath.mpf]

# Big-integer decimal rendering is capped by default since Python 3.10.7;
# recursion values in this package legitimately reach tens of thousands of
# digits.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


def log_number(x: Number) -> float:
    """Natural log of a positive number as a float, safe for huge rationals.

    ``math.log`` accepts integers of any size, so numerator and denominator
    are logged separately instead of converting the quotient to a float
    (which would overflow for the big-integer rationals produced by deep
    cylinder words).
    """
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    if isinstance(x, int):
        return math.log(x)
    if isinstance(x, mpmath.mpf):
        return float(mpmath.log(x))
    return math.log(x)


def parse_rational(text) -> Fraction:
    """Parse "p/q", integer, or decimal text into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num.strip()), int(den.strip()))
    return Fraction(s)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_jsonable(x):
    """Recursively convert values to JSON-safe types.

    Exact rationals render as "p/q" strings (lossless); mpmath floats are
    demoted to doubles, which is a serialization concession only.
    """
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, mpmath.mpf):
        return float(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (int, float, str, bool)):
        return x.item()  # numpy scalars
    return x


class NeumaierSum:
    """Streaming compensated accumulator (error-free transformation per add).

    Used for entropy accumulations over schedules whose position counts reach
    ~1e7; naive summation would not hold the 1e-9 agreement targets.
    """

    __slots__ = ("_s", "_c")

    def __init__(self, value: float = 0.0):
        self._s = value
        self._c = 0.0

    def add(self, x: float) -> None:
        t = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - t) + x
        else:
            self._c += (x - t) + self._s
        self._s = t

    @property
    def value(self) -> float:
        return self._s + self._c
