"""Digit-frequency counting and finite-depth normality diagnostics.

Membership in the normal/non-normal classes is a tail property and is not
decidable from any finite prefix, so everything here is explicitly a
prefix-depth diagnostic: exact counts, running frequencies at checkpoints,
and oscillation evidence.  No function emits an asymptotic verdict.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .qvector import StochasticVector


@dataclass
class FrequencyReport:
    """Exact digit counts for a prefix of stated depth.

    ``running`` holds, per tracked digit, the series (n, N_i(x,n)/n) at the
    requested checkpoints; ``oscillation`` the (min, max) of the running
    frequency over a trailing window.
    """

    counts: Dict[int, int]
    depth: int
    running: Dict[int, List[Tuple[int, float]]] = field(default_factory=dict)
    oscillation: Dict[int, Tuple[float, float]] = field(default_factory=dict)

    def frequency(self, digit: int) -> float:
        if self.depth == 0:
            return 0.0
        return self.counts.get(digit, 0) / self.depth


def _digit_list(word) -> list:
    if hasattr(word, "digits"):
        return list(word.digits)
    return list(word)


def digit_counts(word, track: Sequence[int] = (), checkpoints: Optional[Sequence[int]] = None,
                 window: Optional[int] = None) -> FrequencyReport:
    """Count digits in a word; optionally track running frequencies.

    Counts are sparse (the alphabet is infinite but a prefix touches finitely
    many digits) and additive over concatenation.
    """
    digits = _digit_list(word)
    n = len(digits)
    counts = dict(Counter(digits))
    report = FrequencyReport(counts=counts, depth=n)
    if not track:
        return report
    if checkpoints is None:
        checkpoints = [n] if n else []
    for cp in checkpoints:
        if not (1 <= cp <= n):
            raise ValueError(f"checkpoint {cp} outside [1, {n}]")
    for d in track:
        hits = np.fromiter((1 if x == d else 0 for x in digits), dtype=np.int64, count=n)
        cum = np.cumsum(hits)
        report.running[d] = [(cp, float(cum[cp - 1] / cp)) for cp in checkpoints]
        if window is not None and n:
            lo = max(1, n - window + 1)
            tail_freqs = cum[lo - 1:] / np.arange(lo, n + 1)
            report.oscillation[d] = (float(tail_freqs.min()), float(tail_freqs.max()))
    return report


def oscillation_profile(word, digit: int, checkpoints: Sequence[int]) -> List[Tuple[int, float]]:
    """Running frequency of one digit sampled at the checkpoints.

    This is the raw material for exhibiting distinct accumulation points of
    N_i(x, n)/n along structured prefixes.
    """
    digits = _digit_list(word)
    n = len(digits)
    for cp in checkpoints:
        if not (1 <= cp <= n):
            raise ValueError(f"checkpoint {cp} beyond word length {n}")
    hits = np.fromiter((1 if x == digit else 0 for x in digits), dtype=np.int64, count=n)
    cum = np.cumsum(hits)
    return [(int(cp), float(cum[cp - 1] / cp)) for cp in checkpoints]


@dataclass(frozen=True)
class LLNRow:
    digit: int
    count: int
    frequency: float
    expected: float
    z_score: float


_CHUNK = 1 << 23  # draws per vectorized batch; fixed so results are seed-stable


def lln_harness(v: StochasticVector, samples: int, depth: int, seed: int,
                digits: Sequence[int] = (0, 1, 2, 3, 4)) -> List[LLNRow]:
    """Digit-frequency table for `samples` uniform points expanded to `depth`.

    The digit stream of a uniform point is i.i.d. with law q, so the harness
    samples that process directly (inverse CDF on uniforms, vectorized in
    fixed-size chunks).  Expanding explicit uniform reals to depth ~1e3 is
    numerically impossible in any backend; the digit process is the faithful
    equivalent.  Deterministic for a fixed seed.
    """
    if samples < 0 or depth < 1:
        raise ValueError("need samples >= 0 and depth >= 1")
    if samples == 0:
        return []
    cap = max(digits) + 1
    bounds = np.array([float(v.prefix_sum(i)) for i in range(1, cap + 1)])
    total = samples * depth
    counts = np.zeros(cap + 1, dtype=np.int64)
    rng = np.random.Generator(np.random.PCG64(seed))
    remaining = total
    while remaining > 0:
        m = min(_CHUNK, remaining)
        u = rng.random(m)
        idx = np.searchsorted(bounds, u, side="right")
        counts += np.bincount(idx, minlength=cap + 1)
        remaining -= m
    rows = []
    for d in digits:
        q = float(v.weight(d))
        freq = counts[d] / total
        sigma = math.sqrt(q * (1 - q) / total)
        rows.append(LLNRow(digit=int(d), count=int(counts[d]), frequency=freq,
                           expected=q, z_score=(freq - q) / sigma))
    return rows
