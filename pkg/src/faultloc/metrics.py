"""Effectiveness scores and technique-comparison statistics."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Iterable, Sequence

from .errors import InputError
from .sbfl import Ranking

RHO = 0.5


@dataclass(frozen=True)
class EffectivenessScore:
    value: float
    inspected: int
    universe: int


def _inspected(ranking: Ranking, faulty: Iterable, universe) -> int:
    uset = set(universe)
    hits = [ranking.rank[f] for f in faulty if f in uset]
    if not hits:
        raise InputError("no faulty statement lies in the universe")
    return min(hits)


def score_from_ranking(ranking: Ranking, faulty: Iterable, universe: Sequence) -> EffectivenessScore:
    """score = 1 - |S|/|P|, where |S| is the rank of the best-ranked fault.

    Works for both ordinal and tiered rankings because the rank value already
    encodes how many statements the developer has examined at that point.
    """
    size = len(universe)
    k = _inspected(ranking, faulty, universe)
    return EffectivenessScore(1 - k / size, k, size)


def expense_and_mult_score(ranking: Ranking, faults: Iterable, universe: Sequence) -> tuple[float, float]:
    """Expense (percent of P examined to the first localized fault) and score_mult."""
    statements = [s for group in faults for s in group]
    k = _inspected(ranking, statements, universe)
    expense = k / len(universe) * 100
    return expense, 1 - expense / 100


def odds_ratio(a: int, b: int, rho: float = RHO) -> float:
    if a < 0 or b < 0:
        raise InputError("success counts must be non-negative")
    n = a + b
    return ((a + rho) / (n + rho - a)) / ((b + rho) / (n + rho - b))


def brute_force_u(sample_a: Sequence, sample_b: Sequence) -> float:
    """U for sample_a by enumerating every cross pair; ties count one half."""
    return sum(1.0 if x > y else 0.5 if x == y else 0.0 for x in sample_a for y in sample_b)


def _midranks(values: Sequence) -> list:
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def mann_whitney_u(sample_a: Sequence, sample_b: Sequence) -> tuple[float, float]:
    """Two-sided Mann-Whitney U test via the tie-corrected normal approximation.

    Returns U for `sample_a` and the p-value (with continuity correction).
    """
    n1, n2 = len(sample_a), len(sample_b)
    if n1 == 0 or n2 == 0:
        raise InputError("Mann-Whitney U needs two non-empty samples")
    pooled = list(sample_a) + list(sample_b)
    ranks = _midranks(pooled)
    u = sum(ranks[:n1]) - n1 * (n1 + 1) / 2
    n = n1 + n2
    ties = sum(t ** 3 - t for t in Counter(pooled).values())
    var = n1 * n2 / 12 * ((n + 1) - ties / (n * (n - 1)))
    if var <= 0:
        return u, 1.0
    diff = abs(u - n1 * n2 / 2)
    z = max(diff - 0.5, 0.0) / math.sqrt(var)
    return u, min(1.0, math.erfc(z / math.sqrt(2)))


def cumulative_frequency(counts: Sequence) -> list:
    """Running percentage of bugs localized within each distinct inspected count."""
    if not counts:
        raise InputError("cumulative frequency of an empty sample")
    if any(c < 1 for c in counts):
        raise InputError("inspected counts must be >= 1")
    tally = Counter(counts)
    total = len(counts)
    curve, running = [], 0
    for c in sorted(tally):
        running += tally[c]
        curve.append((c, running / total * 100))
    return curve


def round_half_even(x: float, places: int = 2) -> Decimal:
    return Decimal(repr(x)).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)


@dataclass(frozen=True)
class ComparisonStats:
    odds_ratio: float
    u: float
    u_p_value: float
    wins_a: int
    wins_b: int
    ties: int


def compare_inspected(inspected_a: Sequence, inspected_b: Sequence,
                      scores_a: Sequence | None = None,
                      scores_b: Sequence | None = None) -> ComparisonStats:
    """Pairwise comparison over the same bugs.

    A wins a bug when it needs strictly fewer inspections; equal counts are
    ties and favour neither side. The U test runs over scores when given,
    otherwise over the inspected counts.
    """
    if len(inspected_a) != len(inspected_b):
        raise InputError("techniques must be compared over the same bugs")
    wins_a = sum(1 for x, y in zip(inspected_a, inspected_b) if x < y)
    wins_b = sum(1 for x, y in zip(inspected_a, inspected_b) if y < x)
    ties = len(inspected_a) - wins_a - wins_b
    sa = list(scores_a) if scores_a is not None else list(inspected_a)
    sb = list(scores_b) if scores_b is not None else list(inspected_b)
    u, p = mann_whitney_u(sa, sb)
    return ComparisonStats(odds_ratio(wins_a, wins_b), u, p, wins_a, wins_b, ties)
