"""Digit codec: points of [0,1) to digit words and words back to intervals.

The unit interval is split left-to-right into semi-open pieces of lengths
q_0, q_1, ... and each piece is split again by the same proportions, so the
rank-n piece for a word a_1..a_n has length prod q_{a_i}.  A point on a
boundary belongs to the right-hand piece; this makes encoding total on
[0, 1) and deterministic.

Exact vectors run on Fraction arithmetic throughout.  Approximate vectors
run the encoder on outward-rounded intervals (mpmath.iv); when the interval
around the remainder cannot be certified to lie inside a single digit cell,
``PrecisionError`` is raised instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Tuple

import mpmath
from mpmath import iv

from .backend import format_rational, log_number, to_jsonable
from .qvector import StochasticVector


class PrecisionError(ArithmeticError):
    """The working precision cannot separate the remainder from a digit boundary."""


@dataclass(frozen=True)
class DigitSequence:
    """A finite digit word; ``zero_tail`` marks the exact left endpoint.

    With ``zero_tail`` the word denotes the point inf of its cylinder (the
    expansion continues with zeros); without it the word only names a prefix.
    """

    digits: Tuple[int, ...]
    zero_tail: bool = False

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if any(d < 0 for d in self.digits):
            raise ValueError("digits must be non-negative")

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def with_zero_tail(self) -> "DigitSequence":
        return DigitSequence(self.digits, zero_tail=True)

    def extended(self, digit: int) -> "DigitSequence":
        return DigitSequence(self.digits + (int(digit),), zero_tail=False)

    def to_csv_row(self) -> str:
        return ",".join(str(d) for d in self.digits)


def word(*digits, zero_tail: bool = False) -> DigitSequence:
    if len(digits) == 1 and isinstance(digits[0], (list, tuple)):
        digits = tuple(digits[0])
    return DigitSequence(tuple(digits), zero_tail=zero_tail)


@dataclass(frozen=True)
class Cylinder:
    """Semi-open interval [left, left+length) of all points whose word starts as given."""

    word: DigitSequence
    left: object
    length: object
    log_length: float

    @property
    def right(self):
        return self.left + self.length

    def contains(self, x) -> bool:
        return self.left <= x < self.right

    def to_json(self) -> dict:
        return {
            "word": list(self.word.digits),
            "left": to_jsonable(self.left),
            "length": to_jsonable(self.length),
            "log_length": self.log_length,
        }


def _check_domain(x) -> None:
    if not (0 <= x < 1):
        raise ValueError(f"point {x!r} outside [0, 1)")


def encode(x, v: StochasticVector, depth: int) -> DigitSequence:
    """First ``depth`` digits of the expansion of x under v.

    Each step locates the digit cell containing the remainder (boundary
    points go right) and rescales the remainder to [0, 1) by the affine map
    of that cell.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if v.exact:
        return _encode_exact(x, v, depth)
    return _encode_interval(x, v, depth)


def _encode_exact(x, v: StochasticVector, depth: int) -> DigitSequence:
    r = Fraction(x)
    _check_domain(r)
    digits: List[int] = []
    for _ in range(depth):
        d = v.digit_at(r)
        digits.append(d)
        r = (r - v.prefix_sum(d)) / v.weight(d)
    return DigitSequence(tuple(digits), zero_tail=(r == 0))


def _weight_interval(v: StochasticVector, i: int):
    """Outward enclosure of q_i for the approximate backend."""
    w = v.weight(i)
    pad = mpmath.mpf(2) ** (-(v.precision - 2))
    return iv.mpf(w) * iv.mpf([1 - pad, 1 + pad])


def _iv_prefix(v: StochasticVector, upto: int):
    cache = getattr(v, "_iv_prefix_cache", None)
    if cache is None:
        cache = [iv.mpf(0)]
        v._iv_prefix_cache = cache
    while len(cache) <= upto:
        k = len(cache) - 1
        cache.append(cache[-1] + _weight_interval(v, k))
    return cache


def _encode_interval(x, v: StochasticVector, depth: int) -> DigitSequence:
    old_prec = iv.prec
    iv.prec = v.precision + 16
    try:
        if isinstance(x, Fraction):
            r = iv.mpf(x.numerator) / iv.mpf(x.denominator)
        else:
            r = iv.mpf(x)
        if not (0 <= mpmath.mpf(r.a)) or not (mpmath.mpf(r.b) < 1):
            _check_domain(mpmath.mpf(r.a) if mpmath.mpf(r.a) < 0 else mpmath.mpf(r.b))
        digits: List[int] = []
        for step in range(depth):
            with v.workprec():
                d = v.digit_at(mpmath.mpf(r.a))
            prefix = _iv_prefix(v, d + 1)
            c_lo, c_hi = prefix[d], prefix[d + 1]
            # certify c_d <= r < c_{d+1} from the enclosures
            if not (mpmath.mpf(c_lo.b) <= mpmath.mpf(r.a)
                    and mpmath.mpf(r.b) < mpmath.mpf(c_hi.a)):
                raise PrecisionError(
                    f"digit {step + 1}: remainder enclosure spans a cell boundary "
                    f"(precision {v.precision} bits exhausted)")
            digits.append(d)
            r = (r - c_lo) / _weight_interval(v, d)
    finally:
        iv.prec = old_prec
    return DigitSequence(tuple(digits))


def cylinder_of(w, v: StochasticVector) -> Cylinder:
    """The semi-open interval of the word: left = sum of scaled offsets,
    length = product of weights, natural log carried alongside."""
    if not isinstance(w, DigitSequence):
        w = DigitSequence(tuple(w))
    left = Fraction(0) if v.exact else mpmath.mpf(0)
    scale = Fraction(1) if v.exact else mpmath.mpf(1)
    log_len = 0.0
    for d in w.digits:
        left += scale * v.prefix_sum(d)
        q = v.weight(d)
        scale *= q
        log_len += log_number(q)
    return Cylinder(word=w, left=left, length=scale, log_length=log_len)


def decode(w: DigitSequence, v: StochasticVector):
    """The exact point named by a zero-tail word (the inf of its cylinder)."""
    if not w.zero_tail:
        raise ValueError("decode needs a zero-tail word; a bare prefix names an "
                         "interval, not a point")
    return cylinder_of(w, v).left


def children(c: Cylinder, v: StochasticVector, lo: int, hi: int) -> List[Cylinder]:
    """Sub-cylinders for appended digits lo..hi, adjacent left-to-right."""
    if lo > hi or lo < 0:
        raise ValueError("need 0 <= lo <= hi")
    out = []
    left = c.left + c.length * v.prefix_sum(lo)
    for d in range(lo, hi + 1):
        q = v.weight(d)
        length = c.length * q
        out.append(Cylinder(word=c.word.extended(d), left=left, length=length,
                            log_length=c.log_length + log_number(q)))
        left = left + length
    return out


def luroth_classical_digits(x, depth: int) -> List[int]:
    """Digits a_k >= 2 of the classical quadratic-decay expansion of x in (0,1).

    a_k is the unique integer with x_k in [1/a_k, 1/(a_k - 1)); the remainder
    map is x -> (a-1)(a x - 1).  Terminating expansions (x_k rational with
    x_{k+1} = 0) stop early.  This is the decreasing-order digit convention;
    it matches the increasing-order encoder through the reflection
    x -> 1 - x together with the index shift a = digit + 2.
    """
    x = Fraction(x)
    if not (0 < x < 1):
        raise ValueError("classical digits are defined on (0, 1)")
    digits: List[int] = []
    for _ in range(depth):
        a = math.ceil(Fraction(1) / x)
        digits.append(a)
        x = (a - 1) * (a * x - 1)
        if x == 0:
            break
    return digits
