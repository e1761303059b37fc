"""Sufficient-condition checks for whether the cylinder net distorts
Hausdorff dimension.

Two certified regimes are known for these nets:

* summable-tail regime (theorem 1 here): if for every a > 0 there is a
  constant c(a) with sum_{k>i} q_k^a <= c(a) q_i^a for all i, the net is
  faithful; in particular (corollary) it suffices that limsup q_{n+1}/q_n < 1.
* polynomial-decay regime (theorem 2 here): if A/i^m0 <= q_i <= B/i^m0 for
  all i >= 1 with m0 > 1, the net is NOT faithful.

Both hypotheses quantify over all i, so a finite scan proves nothing;
"certified" fields record when a family-level closed form or monotonicity
argument backs the claim.  Outside both regimes the honest verdict is
Unknown: no necessary-and-sufficient characterization is currently known.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from .backend import to_jsonable
from .qvector import PolynomialBracket, StochasticVector

DEFAULT_ALPHA_GRID = (0.1, 0.25, 0.5, 0.75, 0.9, 1.0)
DEFAULT_I_MAX = 10_000
_SCAN_POINTS = (1, 2, 5, 10, 100, 1_000, 10_000)

UNKNOWN_EXPLANATION = (
    "Neither sufficient condition could be certified for this vector. "
    "No necessary-and-sufficient test for faithfulness of these cylinder "
    "nets is known; outside the certified regimes the question is open."
)


class Verdict(Enum):
    FAITHFUL_THM1 = "FaithfulByThm1"
    FAITHFUL_COROLLARY = "FaithfulByCorollary"
    NON_FAITHFUL_THM2 = "NonFaithfulByThm2"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ConditionEntry:
    """One row of the c(alpha) table: sup_i of (tail power sum)/q_i^alpha."""

    alpha: float
    value: float  # sup over the scanned range, or inf when certified unbounded
    certified: bool
    divergent: bool = False
    note: str = ""


@dataclass(frozen=True)
class RatioEstimate:
    max_over_window: float
    window: Tuple[int, int]
    limit: Optional[object]  # closed-form limit of q_{n+1}/q_n when available
    certified: bool


@dataclass
class FaithfulnessReport:
    verdict: Verdict
    c_of_alpha: List[ConditionEntry]
    ratio_limsup: RatioEstimate
    poly_fit: Optional[PolynomialBracket]
    explanation: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "c_of_alpha": [
                {"alpha": e.alpha, "value": e.value if math.isfinite(e.value) else "inf",
                 "certified": e.certified, "divergent": e.divergent, "note": e.note}
                for e in self.c_of_alpha
            ],
            "ratio_limsup": {
                "max_over_window": self.ratio_limsup.max_over_window,
                "window": list(self.ratio_limsup.window),
                "limit": to_jsonable(self.ratio_limsup.limit),
                "certified": self.ratio_limsup.certified,
            },
            "poly_fit": None if self.poly_fit is None else {
                "m0": self.poly_fit.m0,
                "A": to_jsonable(self.poly_fit.A),
                "B": to_jsonable(self.poly_fit.B),
                "certified": self.poly_fit.certified,
                "note": self.poly_fit.note,
            },
            "explanation": self.explanation,
        }


def _ratio_at(v: StochasticVector, i: int, alpha: float) -> Optional[float]:
    tps = v.tail_power_sum(i, alpha)
    if tps is None:
        return None
    if tps.divergent:
        return math.inf
    qa = float(v.weight(i)) ** alpha
    return tps.value / qa


def check_thm1(v: StochasticVector, alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
               i_max: int = DEFAULT_I_MAX) -> List[ConditionEntry]:
    """The c(alpha) table for the summable-tail condition.

    With a family certificate the sup is exact (bounded regime) or known
    infinite (unbounded regime) and only spot values are scanned for the
    report; without one the scan value is reported uncertified.
    """
    entries = []
    for alpha in alpha_grid:
        if not (0 < alpha <= 1):
            raise ValueError("alpha grid must lie in (0, 1]")
        cert = v.condition2_certificate(alpha)
        scan_points = [i for i in _SCAN_POINTS if i <= i_max]
        if cert is not None and cert.kind == "bounded":
            entries.append(ConditionEntry(alpha=alpha, value=cert.constant,
                                          certified=True, note=cert.note))
            continue
        if cert is not None and cert.kind == "unbounded":
            entries.append(ConditionEntry(alpha=alpha, value=math.inf, certified=True,
                                          divergent=True, note=cert.note))
            continue
        # no certificate: scan and mark uncertified
        values = []
        for i in scan_points:
            r = _ratio_at(v, i, alpha)
            if r is not None:
                values.append(r)
        value = max(values) if values else math.nan
        entries.append(ConditionEntry(alpha=alpha, value=value, certified=False,
                                      note=f"finite scan over i <= {i_max}"))
    return entries


def check_ratio_corollary(v: StochasticVector, window: int = 256,
                          offset: int = 1) -> RatioEstimate:
    """Max of q_{n+1}/q_n over a tail window plus the closed-form limit."""
    if window < 2:
        raise ValueError("window must be >= 2")
    hi = offset + window
    mx = 0.0
    for n in range(offset, hi):
        try:
            r = float(v.weight(n + 1)) / float(v.weight(n))
        except Exception:
            break
        mx = max(mx, r)
    limit = v.ratio_limit()
    return RatioEstimate(max_over_window=mx, window=(offset, hi), limit=limit,
                         certified=limit is not None)


def check_thm2_hypothesis(v: StochasticVector) -> Optional[PolynomialBracket]:
    """Polynomial-decay bracket (m0, A, B), certified only via the family's
    closed form; absence of a fit is a valid outcome."""
    return v.polynomial_bracket()


def verdict(v: StochasticVector, alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
            i_max: int = DEFAULT_I_MAX, window: int = 256) -> FaithfulnessReport:
    """Run all three checks and emit the strongest certified verdict.

    Certificates are mutually exclusive by the mathematics (polynomial decay
    forces the small-alpha tail condition to fail); this is asserted, not
    assumed.
    """
    table = check_thm1(v, alpha_grid=alpha_grid, i_max=i_max)
    ratio = check_ratio_corollary(v, window=window)
    fit = check_thm2_hypothesis(v)

    thm2_certified = fit is not None and fit.certified
    corollary_certified = ratio.certified and ratio.limit is not None and ratio.limit < 1
    thm1_certified = all(e.certified and not e.divergent for e in table)

    if thm2_certified and (corollary_certified or thm1_certified):
        raise AssertionError(
            f"{v.label}: faithful and non-faithful certificates cannot coexist")

    if thm2_certified:
        result = Verdict.NON_FAITHFUL_THM2
        explanation = (f"certified polynomial decay: {to_jsonable(fit.A)}/i^{fit.m0} "
                       f"<= q_i <= {to_jsonable(fit.B)}/i^{fit.m0} for all i >= 1, "
                       f"so the cylinder net is not faithful")
    elif corollary_certified:
        result = Verdict.FAITHFUL_COROLLARY
        explanation = (f"certified limit of q_(n+1)/q_n is {to_jsonable(ratio.limit)} < 1, "
                       f"so the net is faithful")
    elif thm1_certified:
        result = Verdict.FAITHFUL_THM1
        explanation = "c(alpha) certified finite on the whole grid, so the net is faithful"
    else:
        result = Verdict.UNKNOWN
        explanation = UNKNOWN_EXPLANATION

    return FaithfulnessReport(verdict=result, c_of_alpha=table, ratio_limsup=ratio,
                              poly_fit=fit, explanation=explanation)
