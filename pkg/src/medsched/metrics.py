"""Evaluation metrics: idle time ratio, trip count, constraint flags, rank test.

The Mann-Whitney U test uses the normal approximation with average ranks,
tie-corrected variance and a continuity correction; benchmark samples are
large enough (>= 20 per group) for that to be accurate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .constraints import (
    check_incompatibilities,
    check_travel_gaps,
    find_overlaps,
    segment_trips,
)
from .model import IncompatibilityRule, Schedule


@dataclass(frozen=True)
class SolutionMetrics:
    """Per-solution summary: journey density, mobility and constraint flags."""

    itr: float | None
    trips: int
    overlap_ok: bool
    compatibility_ok: bool
    travel_ok: bool
    fully_scheduled: bool


class ConstraintFlags(NamedTuple):
    overlap_ok: bool
    compatibility_ok: bool
    travel_ok: bool
    fully_scheduled: bool


def idle_time_ratio(schedule: Schedule) -> float | None:
    """Idle minutes between consecutive appointments over the journey span.

    Undefined (None) for fewer than two assignments.  Negative gaps from
    overlapping slots count as zero idle so the ratio stays computable for
    baseline outputs.
    """
    if len(schedule) < 2:
        return None
    ordered = schedule.sorted_by_start()
    idle = 0
    for (_, slot_a), (_, slot_b) in zip(ordered, ordered[1:]):
        gap = slot_b.start - slot_a.end
        if gap > 0:
            idle += gap
    span = ordered[-1][1].end - ordered[0][1].start
    return idle / span


def trip_count(schedule: Schedule) -> int:
    """Number of trips (facility changes or >2h breaks) in the journey."""
    return len(segment_trips(schedule).segments)


def constraint_fulfillment(
    schedule: Schedule, rules: Iterable[IncompatibilityRule], act_count: int
) -> ConstraintFlags:
    """Flags for the three scheduling constraints plus full coverage of the request."""
    return ConstraintFlags(
        overlap_ok=not find_overlaps(schedule),
        compatibility_ok=not check_incompatibilities(schedule, rules),
        travel_ok=not check_travel_gaps(schedule),
        fully_scheduled=len(schedule) == act_count,
    )


def solution_metrics(
    schedule: Schedule, rules: Iterable[IncompatibilityRule], act_count: int
) -> SolutionMetrics:
    """Bundle ITR, trip count and constraint flags for one solution."""
    flags = constraint_fulfillment(schedule, rules, act_count)
    return SolutionMetrics(
        itr=idle_time_ratio(schedule),
        trips=trip_count(schedule) if schedule.assignments else 0,
        overlap_ok=flags.overlap_ok,
        compatibility_ok=flags.compatibility_ok,
        travel_ok=flags.travel_ok,
        fully_scheduled=flags.fully_scheduled,
    )


def _average_ranks(values: Sequence[float]) -> list[float]:
    # Fractional ranking: tied values share the mean of their rank positions.
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def mann_whitney_u(
    sample_a: Sequence[float], sample_b: Sequence[float]
) -> tuple[float, float]:
    """Two-sided Mann-Whitney U test; returns (min(U_a, U_b), p).

    When every value in both samples is identical the statistic carries no
    information and p is 1.0 by convention.
    """
    if not sample_a or not sample_b:
        raise ValueError("both samples must be non-empty")
    n_a, n_b = len(sample_a), len(sample_b)
    ranks = _average_ranks(list(sample_a) + list(sample_b))
    rank_sum_a = sum(ranks[:n_a])
    u_a = rank_sum_a - n_a * (n_a + 1) / 2
    u_b = n_a * n_b - u_a
    u = min(u_a, u_b)

    n = n_a + n_b
    tie_term = 0
    i = 0
    ordered = sorted(ranks)
    while i < n:
        j = i
        while j + 1 < n and ordered[j + 1] == ordered[i]:
            j += 1
        t = j - i + 1
        tie_term += t**3 - t
        i = j + 1
    variance = n_a * n_b / 12 * (n + 1 - tie_term / (n * (n - 1)))
    if variance <= 0:
        return u, 1.0

    mean = n_a * n_b / 2
    z = max(0.0, abs(u - mean) - 0.5) / math.sqrt(variance)
    p = min(1.0, math.erfc(z / math.sqrt(2)))
    return u, p
