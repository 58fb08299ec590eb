"""Feasibility checks: overlaps, incompatibility rules, trips and travel gaps.

Gap conventions, fixed once here and reused by fitness and metrics:
a rule's separation is measured from the earlier slot's end to the later
slot's start; trip boundaries trigger on a gap strictly greater than
``TRIP_GAP_MINUTES``; inter-facility travel needs at least
``TRAVEL_GAP_MINUTES``.  Raw gaps may be negative when slots overlap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .model import IncompatibilityRule, RuleLogic, Schedule, TimeSlot, slots_overlap

TRIP_GAP_MINUTES = 120
TRAVEL_GAP_MINUTES = 180


class ViolationKind(str, Enum):
    OVERLAP = "overlap"
    INCOMPATIBILITY = "incompatibility"
    TRAVEL_GAP = "travel_gap"
    MISSING_SLOT = "missing_slot"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    acts: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class Trip:
    """A maximal chronological run of assignments at one facility."""

    facility: str
    assignments: tuple[tuple[int, TimeSlot], ...]


@dataclass(frozen=True)
class TripSegmentation:
    segments: tuple[Trip, ...]


@dataclass(frozen=True)
class ActOrder:
    """A precedence-respecting permutation of act indices.

    ``has_cycle`` flags contradictory rules; the permutation is still total
    (cycle members keep their original request order).
    """

    order: tuple[int, ...]
    has_cycle: bool


def find_overlaps(schedule: Schedule) -> list[Violation]:
    """One violation per unordered pair of assignments whose slots overlap."""
    pairs = schedule.sorted_by_start()
    violations = []
    for i in range(len(pairs)):
        act_i, slot_i = pairs[i]
        for j in range(i + 1, len(pairs)):
            act_j, slot_j = pairs[j]
            if slot_j.start >= slot_i.end:
                break  # starts are sorted: nothing later overlaps slot_i
            if slots_overlap(slot_i, slot_j):
                violations.append(
                    Violation(
                        kind=ViolationKind.OVERLAP,
                        acts=(act_i, act_j),
                        detail=f"{slot_i.id} overlaps {slot_j.id}",
                    )
                )
    return violations


def _separation(a: TimeSlot, b: TimeSlot) -> int:
    """Minutes from the earlier slot's end to the later slot's start (may be < 0)."""
    earlier, later = (a, b) if (a.start, a.end) <= (b.start, b.end) else (b, a)
    return later.start - earlier.end


def check_incompatibilities(
    schedule: Schedule, rules: Iterable[IncompatibilityRule]
) -> list[Violation]:
    """One violation per (rule, assignment pair) whose separation breaks the rule.

    BEFORE and AFTER also fail when the pair is scheduled in the wrong order,
    not merely when the gap is too small.
    """
    by_exam: dict[str, list[tuple[int, TimeSlot]]] = {}
    for act, slot in schedule.assignments:
        by_exam.setdefault(slot.exam, []).append((act, slot))
    violations = []
    for rule in rules:
        firsts = by_exam.get(rule.first)
        seconds = by_exam.get(rule.second)
        if not firsts or not seconds:
            continue
        for act_1, slot_1 in firsts:
            for act_2, slot_2 in seconds:
                if act_1 == act_2:
                    continue
                if rule.logic is RuleLogic.BEFORE:
                    ok = slot_2.start - slot_1.end >= rule.gap_minutes
                elif rule.logic is RuleLogic.AFTER:
                    ok = slot_1.start - slot_2.end >= rule.gap_minutes
                else:
                    ok = _separation(slot_1, slot_2) >= rule.gap_minutes
                if not ok:
                    violations.append(
                        Violation(
                            kind=ViolationKind.INCOMPATIBILITY,
                            acts=(act_1, act_2),
                            detail=(
                                f"rule {rule.first} {rule.logic.value} {rule.second} "
                                f"(gap {rule.gap_minutes}m) broken by {slot_1.id}/{slot_2.id}"
                            ),
                        )
                    )
    return violations


def segment_trips(schedule: Schedule) -> TripSegmentation:
    """Split the chronological assignment sequence into trips.

    A new trip starts on a facility change or on an idle gap strictly
    greater than two hours.
    """
    if not schedule.assignments:
        raise ValueError("cannot segment an empty schedule")
    ordered = schedule.sorted_by_start()
    segments: list[Trip] = []
    run = [ordered[0]]
    for prev, cur in zip(ordered, ordered[1:]):
        facility_change = cur[1].facility != prev[1].facility
        gap = cur[1].start - prev[1].end
        if facility_change or gap > TRIP_GAP_MINUTES:
            segments.append(Trip(run[0][1].facility, tuple(run)))
            run = [cur]
        else:
            run.append(cur)
    segments.append(Trip(run[0][1].facility, tuple(run)))
    return TripSegmentation(segments=tuple(segments))


def check_travel_gaps(schedule: Schedule) -> list[Violation]:
    """Flag consecutive assignments at different facilities with under 3h between."""
    ordered = schedule.sorted_by_start()
    violations = []
    for (act_a, slot_a), (act_b, slot_b) in zip(ordered, ordered[1:]):
        if slot_a.facility == slot_b.facility:
            continue
        gap = slot_b.start - slot_a.end
        if gap < TRAVEL_GAP_MINUTES:
            violations.append(
                Violation(
                    kind=ViolationKind.TRAVEL_GAP,
                    acts=(act_a, act_b),
                    detail=(
                        f"{gap}m between {slot_a.facility} and {slot_b.facility} "
                        f"({slot_a.id} -> {slot_b.id})"
                    ),
                )
            )
    return violations


def optimal_act_order(
    acts: Sequence[str], rules: Iterable[IncompatibilityRule]
) -> ActOrder:
    """Order act indices so that rule-implied predecessors come first.

    Builds edges i -> j whenever some rule forces act i's exam before act
    j's exam, then topologically sorts with lowest-index tie-breaking.  If
    the rules contradict each other the leftover (cyclic) acts are appended
    in original request order and the result is flagged; the output is a
    permutation of all act indices in every case.
    """
    n = len(acts)
    edges: set[tuple[int, int]] = set()
    for rule in rules:
        if rule.logic is RuleLogic.BEFORE:
            pred_exam, succ_exam = rule.first, rule.second
        elif rule.logic is RuleLogic.AFTER:
            pred_exam, succ_exam = rule.second, rule.first
        else:
            continue  # BOTH constrains the gap, not the order
        for i in range(n):
            if acts[i] != pred_exam:
                continue
            for j in range(n):
                if i != j and acts[j] == succ_exam:
                    edges.add((i, j))

    indegree = [0] * n
    successors: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        successors[i].append(j)
        indegree[j] += 1

    order: list[int] = []
    ready = sorted(i for i in range(n) if indegree[i] == 0)
    while ready:
        node = ready.pop(0)
        order.append(node)
        changed = False
        for succ in successors[node]:
            indegree[succ] -= 1
            if indegree[succ] == 0:
                ready.append(succ)
                changed = True
        if changed:
            ready.sort()

    has_cycle = len(order) < n
    if has_cycle:
        placed = set(order)
        order.extend(i for i in range(n) if i not in placed)
    return ActOrder(order=tuple(order), has_cycle=has_cycle)
