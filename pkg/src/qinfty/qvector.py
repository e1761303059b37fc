"""Stochastic weight vectors over the infinite digit alphabet.

A vector is a sequence of positive weights (q_0, q_1, ...) with sum 1; it
fixes the contraction ratios of the linear maps whose attractor structure
underlies the expansion.  Families implemented here:

* ``luroth``      q_i = 1/((i+1)(i+2)), exact rationals.
* ``geometric``   q_i = (1-r) r^i, exact when r is rational.
* ``polynomial``  q_0 free, q_i proportional to i^(-m0) for i >= 1,
                  arbitrary-precision floats (the zeta normalizer is
                  irrational).
* ``explicit``    a finite list of weights plus a declared tail rule.

Besides point evaluation each family supplies the closed-form oracles the
rest of the package leans on: prefix sums, tail mass, tail power sums with
certified enclosures, the limit of q_{n+1}/q_n, and polynomial-decay
bracketing constants.
"""

from __future__ import annotations

import bisect
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .backend import DEFAULT_PRECISION, log_number, parse_rational


class IncompleteVectorError(ValueError):
    """An operation needed tail information that an explicit vector lacks."""


@dataclass(frozen=True)
class TailPowerSum:
    """Enclosure of sum_{k>i} q_k^alpha.

    ``certified`` means the enclosure (or the divergence claim) follows from
    a closed form or an integral comparison, not from a finite scan.
    """

    lower: float
    upper: float
    certified: bool
    divergent: bool = False

    @property
    def value(self) -> float:
        if self.divergent:
            return math.inf
        return 0.5 * (self.lower + self.upper)


@dataclass(frozen=True)
class PolynomialBracket:
    """Constants m0, A, B with A/i^m0 <= q_i <= B/i^m0 on the stated range."""

    m0: float
    A: object
    B: object
    certified: bool
    note: str = ""


@dataclass(frozen=True)
class Condition2Certificate:
    """Family-level answer to: is sup_i (sum_{k>i} q_k^a) / q_i^a finite?"""

    kind: str  # "bounded" | "unbounded"
    constant: Optional[float] = None
    note: str = ""


class StochasticVector:
    """Base class: lazy weights plus an append-only prefix-sum cache.

    The cache is grown under a lock by a single writer; entries are immutable
    once appended, so concurrent readers may scan the list without locking.
    """

    exact: bool = True
    label: str = "vector"
    precision: int = DEFAULT_PRECISION

    def __init__(self):
        self._prefix = [self._zero()]
        self._lock = threading.Lock()

    # -- family interface -------------------------------------------------

    def weight(self, i: int):
        raise NotImplementedError

    def _zero(self):
        return Fraction(0) if self.exact else mpmath.mpf(0)

    def _prefix_closed(self, i: int):
        """Closed form for c_i = sum_{j<i} q_j, or None."""
        return None

    def tail_mass(self, i: int):
        """sum_{k>i} q_k, or None when the family has no tail oracle."""
        return None

    def tail_power_sum(self, i: int, alpha: float) -> Optional[TailPowerSum]:
        return None

    def condition2_certificate(self, alpha: float) -> Optional[Condition2Certificate]:
        return None

    def ratio_limit(self):
        """Closed-form limit of q_{n+1}/q_n, or None."""
        return None

    def polynomial_bracket(self) -> Optional[PolynomialBracket]:
        return None

    def max_weight(self):
        return max(self.weight(0), self.weight(1))

    def workprec(self):
        return mpmath.workprec(self.precision)

    # -- prefix sums --------------------------------------------------------

    def _extend_to(self, n: int) -> None:
        with self._lock:
            while len(self._prefix) <= n:
                k = len(self._prefix) - 1
                self._prefix.append(self._prefix[-1] + self.weight(k))

    def prefix_sum(self, i: int):
        """c_i = sum_{j<i} q_j."""
        if i < len(self._prefix):
            return self._prefix[i]
        closed = self._prefix_closed(i)
        if closed is not None:
            return closed
        self._extend_to(i)
        return self._prefix[i]

    def prefix_sums(self, upto: int) -> list:
        """The cumulative sums (c_0, c_1, ..., c_{upto+1}), cache-extending."""
        if upto < 0:
            raise ValueError("upto must be >= 0")
        self._extend_to(upto + 1)
        return self._prefix[: upto + 2]

    # -- digit location ------------------------------------------------------

    def digit_at(self, r):
        """The digit d with c_d <= r < c_{d+1} for r in [0, 1).

        Searches the materialized prefix cache first (binary search); falls
        back to the family's closed-form locator, else grows the cache
        geometrically until it brackets ``r``.
        """
        if not (0 <= r < 1):
            raise ValueError(f"remainder {r!r} outside [0, 1)")
        cache = self._prefix
        j = bisect.bisect_right(cache, r) - 1
        if j + 1 < len(cache):
            return j
        d = self._digit_by_closed_form(r)
        if d is not None:
            return d
        n = max(8, 2 * len(cache))
        while True:
            self._extend_to(n)
            if self._prefix[-1] > r:
                break
            n *= 2
        return bisect.bisect_right(self._prefix, r) - 1

    def _digit_by_closed_form(self, r):
        return None

    # -- misc ---------------------------------------------------------------

    def as_float(self, x) -> float:
        return float(x)

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class LurothVector(StochasticVector):
    """q_i = 1/((i+1)(i+2)); prefix sums telescope to c_i = i/(i+1)."""

    exact = True
    label = "luroth"

    def weight(self, i: int) -> Fraction:
        if i < 0:
            raise ValueError("digit index must be >= 0")
        return Fraction(1, (i + 1) * (i + 2))

    def _prefix_closed(self, i: int) -> Fraction:
        return Fraction(i, i + 1)

    def tail_mass(self, i: int) -> Fraction:
        return Fraction(1, i + 2)

    def tail_mass_inverse(self, t: Fraction) -> int:
        """Smallest i with tail_mass(i) <= t (t in (0, 1])."""
        t = Fraction(t)
        if t <= 0:
            raise ValueError("tail target must be positive")
        return max(0, math.ceil(1 / t) - 2)

    def weighted_index_in_range(self, lo: int, hi: int, u_num: int, u_den: int) -> int:
        """Inverse CDF of the law q_i / gamma on {lo..hi} at u = u_num/u_den.

        Pure integer arithmetic: ranges reach ~1e5-digit endpoints where
        Fraction normalization (gcd) would dominate the cost.
        """
        if not (0 <= u_num < u_den):
            raise ValueError("u must satisfy 0 <= u < 1")
        # tail(i) = 1/(i+2); target t = tail(lo-1) - u*gamma with
        # gamma = (hi-lo+1)/D, D = (lo+1)(hi+2);  digit = smallest i with
        # tail(i) < t, i.e. i = floor(1/t) - 1.
        D = (lo + 1) * (hi + 2)
        t_num = u_den * (hi + 2) - u_num * (hi - lo + 1)
        # 1/t = u_den*D / t_num
        i = (u_den * D) // t_num - 1
        return min(max(i, lo), hi)

    def tail_power_sum(self, i: int, alpha: float) -> TailPowerSum:
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        if alpha == 1:
            t = float(Fraction(1, i + 2))
            return TailPowerSum(t, t, certified=True)
        if alpha <= 0.5:
            # q_k^a >= (k+2)^(-2a) and sum (k+2)^(-2a) diverges for 2a <= 1
            return TailPowerSum(math.inf, math.inf, certified=True, divergent=True)
        with mpmath.workprec(80):
            lower = mpmath.zeta(2 * alpha, i + 3)
            upper = mpmath.zeta(2 * alpha, i + 2)
        return TailPowerSum(float(lower), float(upper), certified=True)

    def condition2_certificate(self, alpha: float) -> Condition2Certificate:
        if alpha <= 0.5:
            note = "tail power sums diverge (integral comparison, 2a <= 1)"
        else:
            note = ("tail power sums ~ i^(1-2a) while q_i^a ~ i^(-2a); "
                    "the quotient grows like i")
        return Condition2Certificate("unbounded", note=note)

    def ratio_limit(self) -> Fraction:
        # q_{n+1}/q_n = (n+1)/(n+3) -> 1
        return Fraction(1)

    def polynomial_bracket(self) -> PolynomialBracket:
        # i^2 q_i = i^2/((i+1)(i+2)) increases strictly from 1/6 at i=1
        # toward 1 (ratio of consecutive terms is (i+1)^3 / (i^2(i+3)) > 1).
        return PolynomialBracket(
            m0=2.0, A=Fraction(1, 6), B=Fraction(1), certified=True,
            note="min of i^2 q_i at i=1; sup approaches 1 from below",
        )

    def max_weight(self) -> Fraction:
        return Fraction(1, 2)

    def _digit_by_closed_form(self, r):
        # largest d with d/(d+1) <= r  <=>  d <= r/(1-r)
        r = Fraction(r)
        d = (r.numerator) // (r.denominator - r.numerator) if r.numerator else 0
        # guard against rounding at the boundary
        while Fraction(d + 1, d + 2) <= r:
            d += 1
        while d > 0 and Fraction(d, d + 1) > r:
            d -= 1
        return d


class GeometricVector(StochasticVector):
    """q_i = (1-r) r^i; exact when the ratio is rational."""

    def __init__(self, r):
        self.r = parse_rational(r) if not isinstance(r, float) else r
        if isinstance(self.r, float):
            self.exact = False
            self.r = mpmath.mpf(self.r)
        if not (0 < self.r < 1):
            raise ValueError("geometric ratio must lie in (0, 1)")
        self.label = f"geometric({self.r})"
        super().__init__()

    def weight(self, i: int):
        if i < 0:
            raise ValueError("digit index must be >= 0")
        return (1 - self.r) * self.r ** i

    def _prefix_closed(self, i: int):
        return 1 - self.r ** i

    def tail_mass(self, i: int):
        return self.r ** (i + 1)

    def tail_power_sum(self, i: int, alpha: float) -> TailPowerSum:
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        r = float(self.r)
        value = float(self.weight(i)) ** alpha * r ** alpha / (1 - r ** alpha)
        return TailPowerSum(value, value, certified=True)

    def condition2_certificate(self, alpha: float) -> Condition2Certificate:
        r = float(self.r)
        c = r ** alpha / (1 - r ** alpha)
        return Condition2Certificate(
            "bounded", constant=c,
            note="quotient is r^a/(1-r^a), independent of i",
        )

    def ratio_limit(self):
        return self.r

    def polynomial_bracket(self) -> Optional[PolynomialBracket]:
        # i^m0 q_i -> 0 for every m0: no polynomial-decay bracket exists.
        return None

    def max_weight(self):
        return self.weight(0)

    def _digit_by_closed_form(self, r):
        # largest d with 1 - self.r^d <= r  <=>  self.r^d >= 1 - r
        target = 1 - r
        d, p = 0, self.r
        while p >= target:
            d += 1
            p *= self.r
        return d


class PolynomialVector(StochasticVector):
    """q_0 given, q_i = (1-q_0) i^(-m0) / zeta(m0) for i >= 1.

    The normalizer makes i^m0 q_i constant, so the decay bracket is certified
    with A = B exactly.  Arbitrary-precision backend (zeta is irrational).
    """

    exact = False

    def __init__(self, m0, q0=Fraction(1, 2), precision: int = DEFAULT_PRECISION):
        m0 = float(m0)
        if m0 <= 1:
            raise ValueError("polynomial decay needs m0 > 1 (the series diverges otherwise)")
        q0 = parse_rational(q0)
        if not (0 < q0 < 1):
            raise ValueError("q0 must lie in (0, 1)")
        self.m0 = m0
        self.q0 = q0
        self.precision = precision
        self.label = f"polynomial(m0={m0})"
        with mpmath.workprec(precision + 20):
            self._zeta_m0 = mpmath.zeta(mpmath.mpf(m0))
            self._scale = (1 - mpmath.mpf(q0.numerator) / q0.denominator) / self._zeta_m0
        self._power_prefix = [mpmath.mpf(0)]  # sums of k^(-m0), k <= i
        super().__init__()

    def weight(self, i: int):
        if i < 0:
            raise ValueError("digit index must be >= 0")
        with self.workprec():
            if i == 0:
                return mpmath.mpf(self.q0.numerator) / self.q0.denominator
            return self._scale * mpmath.power(i, -self.m0)

    def _power_sum_upto(self, i: int):
        with self.workprec():
            while len(self._power_prefix) <= i:
                k = len(self._power_prefix)
                self._power_prefix.append(self._power_prefix[-1] + mpmath.power(k, -self.m0))
        return self._power_prefix[i]

    def tail_mass(self, i: int):
        with self.workprec():
            if i < 0:
                return mpmath.mpf(1)
            return self._scale * (self._zeta_m0 - self._power_sum_upto(i))

    def tail_power_sum(self, i: int, alpha: float) -> TailPowerSum:
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        s = self.m0 * alpha
        if s <= 1:
            return TailPowerSum(math.inf, math.inf, certified=True, divergent=True)
        with mpmath.workprec(80):
            value = float(mpmath.power(self._scale, alpha) * mpmath.zeta(s, i + 1))
        return TailPowerSum(value, value, certified=True)

    def condition2_certificate(self, alpha: float) -> Condition2Certificate:
        if self.m0 * alpha <= 1:
            note = "tail power sums diverge (m0*a <= 1)"
        else:
            note = "quotient grows like i/(m0*a - 1)"
        return Condition2Certificate("unbounded", note=note)

    def ratio_limit(self) -> float:
        return 1.0

    def polynomial_bracket(self) -> PolynomialBracket:
        with self.workprec():
            const = self._scale
        return PolynomialBracket(
            m0=self.m0, A=const, B=const, certified=True,
            note="i^m0 q_i is constant by construction for i >= 1",
        )


class ExplicitVector(StochasticVector):
    """Finite weight list plus a declared tail rule.

    tail = ("geometric", rho) continues q_{n-1+j} = q_{n-1} rho^j and must
    close the total mass to exactly 1.  tail = None leaves the vector
    incomplete: evaluation beyond the prefix raises, and certification-style
    oracles are unavailable.
    """

    def __init__(self, weights: Sequence, tail=None):
        ws = [parse_rational(w) for w in weights]
        if not ws or any(w <= 0 for w in ws):
            raise ValueError("explicit weights must be positive")
        self.weights = ws
        self.tail = None
        if tail is not None:
            kind, rho = tail
            if kind != "geometric":
                raise ValueError(f"unknown tail rule {kind!r}")
            rho = parse_rational(rho)
            if not (0 < rho < 1):
                raise ValueError("tail ratio must lie in (0, 1)")
            total = sum(ws) + ws[-1] * rho / (1 - rho)
            if total != 1:
                raise ValueError(f"weights plus geometric tail sum to {total}, not 1")
            self.tail = rho
        else:
            if sum(ws) >= 1:
                raise ValueError("prefix-only weights must sum to < 1")
        self.label = f"explicit[{len(ws)}]"
        super().__init__()

    @property
    def complete(self) -> bool:
        return self.tail is not None

    def weight(self, i: int):
        if i < 0:
            raise ValueError("digit index must be >= 0")
        n = len(self.weights)
        if i < n:
            return self.weights[i]
        if self.tail is None:
            raise IncompleteVectorError(
                f"index {i} beyond the explicit prefix (no tail rule declared)")
        return self.weights[-1] * self.tail ** (i - n + 1)

    def tail_mass(self, i: int):
        if self.tail is None:
            return None
        n = len(self.weights)
        if i >= n - 1:
            return self.weights[-1] * self.tail ** (i - n + 2) / (1 - self.tail)
        return sum(self.weights[i + 1:]) + self.weights[-1] * self.tail / (1 - self.tail)

    def ratio_limit(self):
        return self.tail  # None when incomplete

    def polynomial_bracket(self) -> Optional[PolynomialBracket]:
        # Finite-range fit only; never certified.
        n = len(self.weights)
        if n < 3:
            return None
        xs = [math.log(i) for i in range(1, n)]
        ys = [log_number(self.weights[i]) for i in range(1, n)]
        mean_x = sum(xs) / len(xs)
        mean_y = sum(ys) / len(ys)
        slope = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys)) / sum(
            (x - mean_x) ** 2 for x in xs)
        m0 = -slope
        if m0 <= 1:
            return None
        vals = [float(self.weights[i]) * i ** m0 for i in range(1, n)]
        return PolynomialBracket(m0=m0, A=min(vals), B=max(vals), certified=False,
                                 note=f"least-squares fit on i < {n}")

    def max_weight(self):
        return max(self.weights)


def luroth_vector() -> LurothVector:
    """The classical quadratic-decay family, exact rational arithmetic."""
    return LurothVector()


def geometric_vector(r) -> GeometricVector:
    return GeometricVector(r)


def polynomial_vector(m0, q0=Fraction(1, 2), precision: int = DEFAULT_PRECISION) -> PolynomialVector:
    return PolynomialVector(m0, q0=q0, precision=precision)


def explicit_vector(weights, tail=None) -> ExplicitVector:
    return ExplicitVector(weights, tail=tail)
