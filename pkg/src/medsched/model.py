"""Domain vocabulary: exams, incompatibility rules, facilities, slots, requests.

All instants are integer minutes counted from 00:00 of day 0 of the planning
horizon, so every gap and penalty computation is exact integer arithmetic.
Slot intervals are half-open [start, end): two slots that meet exactly at a
boundary do not overlap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

MINUTES_PER_DAY = 1440


class Specialty(str, Enum):
    RADIOLOGY = "Radiology"
    CARDIOLOGY = "Cardiology"
    DERMATOLOGY = "Dermatology"
    GENERAL_PRACTICE = "GeneralPractice"
    GASTROENTEROLOGY = "Gastroenterology"


class RuleLogic(str, Enum):
    """How an incompatibility rule constrains its ordered exam pair.

    BEFORE: the first exam must end at least ``gap_minutes`` before the
    second starts.  AFTER: the second exam must end at least ``gap_minutes``
    before the first starts.  BOTH: whichever exam comes first, the gap
    between its end and the other's start must be at least ``gap_minutes``.
    """

    BEFORE = "before"
    AFTER = "after"
    BOTH = "both"


@dataclass(frozen=True)
class ExamType:
    """One bookable kind of medical act."""

    id: str
    name: str
    specialty: Specialty


@dataclass(frozen=True)
class IncompatibilityRule:
    """Mandatory temporal separation between an ordered pair of exam types."""

    first: str
    second: str
    logic: RuleLogic
    gap_minutes: int

    def __post_init__(self) -> None:
        if self.first == self.second:
            raise ValueError(f"rule pairs an exam with itself: {self.first}")
        if self.gap_minutes <= 0:
            raise ValueError(f"gap must be positive, got {self.gap_minutes}")


@dataclass(frozen=True)
class Facility:
    id: str
    name: str
    rooms: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class TimeSlot:
    """One bookable interval in one room.

    ``start`` is absolute minutes since the horizon epoch; the slot covers
    [start, start + duration_minutes) and never spans midnight.
    """

    id: str
    exam: str
    facility: str
    room: str
    practitioner: str
    start: int
    duration_minutes: int

    def __post_init__(self) -> None:
        if self.start < 0:
            raise ValueError(f"slot {self.id} starts before the horizon epoch")
        if self.duration_minutes <= 0:
            raise ValueError(f"slot {self.id} has non-positive duration")
        if self.start // MINUTES_PER_DAY != (self.end - 1) // MINUTES_PER_DAY:
            raise ValueError(f"slot {self.id} crosses midnight")

    @property
    def end(self) -> int:
        return self.start + self.duration_minutes

    @property
    def day(self) -> int:
        return self.start // MINUTES_PER_DAY

    @property
    def minute_of_day(self) -> int:
        return self.start % MINUTES_PER_DAY


@dataclass(frozen=True)
class ScheduleRequest:
    """A patient's booking request: which acts, from when, with what filters.

    ``acts`` may repeat an exam type; each occurrence is a distinct act with
    its own slot selection.  ``start_day`` is the first day index eligible
    for booking.  Preference sets of ``None`` mean "no restriction".
    """

    acts: tuple[str, ...]
    start_day: int = 0
    preferred_facilities: frozenset[str] | None = None
    preferred_practitioners: frozenset[str] | None = None

    def __post_init__(self) -> None:
        if not self.acts:
            raise ValueError("request must name at least one act")
        if self.start_day < 0:
            raise ValueError("start_day must be non-negative")


@dataclass(frozen=True)
class Schedule:
    """Slot assignments for a request: one (act index, slot) pair per booked act.

    Acts that could not be booked simply have no entry; penalty and metric
    code treats the count mismatch as a missing-slot condition.
    """

    assignments: tuple[tuple[int, TimeSlot], ...]

    def sorted_by_start(self) -> list[tuple[int, TimeSlot]]:
        """Assignments in chronological order of slot start."""
        return sorted(self.assignments, key=lambda pair: (pair[1].start, pair[1].id))

    def __len__(self) -> int:
        return len(self.assignments)


def slots_overlap(a: TimeSlot, b: TimeSlot) -> bool:
    """True iff the half-open intervals of the two slots intersect."""
    return a.start < b.end and b.start < a.end


def gap_minutes(earlier: TimeSlot, later: TimeSlot) -> int:
    """Idle minutes between the end of ``earlier`` and the start of ``later``.

    Back-to-back slots have a gap of 0.  Callers must order the pair first.
    """
    if earlier.end > later.start:
        raise ValueError(
            f"slots out of order: {earlier.id} ends at {earlier.end}, "
            f"{later.id} starts at {later.start}"
        )
    return later.start - earlier.end
