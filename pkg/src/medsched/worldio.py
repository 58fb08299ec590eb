"""File formats: world/request/solution JSON documents and CSV tables.

Instants appear twice in JSON: as the absolute minute offset (exact integer
used by all arithmetic) and as a ``<day>T<minute-of-day>`` label such as
``"3T630"`` (day 3, 10:30) for human readers.  JSON is dumped with sorted
keys and a trailing newline so identical inputs produce byte-identical
files; CSV uses LF line endings and '.' decimals.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

from .datagen import World, WorldConfig
from .fitness import PenaltyBreakdown
from .metrics import SolutionMetrics
from .model import (
    MINUTES_PER_DAY,
    ExamType,
    Facility,
    IncompatibilityRule,
    RuleLogic,
    Schedule,
    ScheduleRequest,
    Specialty,
    TimeSlot,
)


def instant_label(minutes: int) -> str:
    """Label an absolute minute offset as ``<day>T<minute-of-day>``."""
    return f"{minutes // MINUTES_PER_DAY}T{minutes % MINUTES_PER_DAY}"


def parse_instant_label(label: str) -> int:
    """Inverse of :func:`instant_label`."""
    day_part, _, minute_part = label.partition("T")
    day, minute = int(day_part), int(minute_part)
    if not 0 <= minute < MINUTES_PER_DAY:
        raise ValueError(f"minute-of-day out of range in label {label!r}")
    return day * MINUTES_PER_DAY + minute


def _dump_json(document: dict[str, Any], path: Path) -> None:
    path.write_text(
        json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _slot_to_dict(slot: TimeSlot) -> dict[str, Any]:
    return {
        "id": slot.id,
        "exam": slot.exam,
        "facility": slot.facility,
        "room": slot.room,
        "practitioner": slot.practitioner,
        "start": slot.start,
        "start_label": instant_label(slot.start),
        "duration_minutes": slot.duration_minutes,
    }


def _slot_from_dict(entry: dict[str, Any]) -> TimeSlot:
    return TimeSlot(
        id=entry["id"],
        exam=entry["exam"],
        facility=entry["facility"],
        room=entry["room"],
        practitioner=entry["practitioner"],
        start=entry["start"],
        duration_minutes=entry["duration_minutes"],
    )


def world_to_dict(world: World) -> dict[str, Any]:
    cfg = world.config
    return {
        "config": {
            "seed": cfg.seed,
            "horizon_days": cfg.horizon_days,
            "facilities": cfg.facilities,
            "rooms_per_facility": cfg.rooms_per_facility,
            "day_open": cfg.day_open,
            "day_close": cfg.day_close,
            "practitioner_pool": cfg.practitioner_pool,
            "rule_count": cfg.rule_count,
            "specialties": cfg.specialties,
            "exams_per_specialty": cfg.exams_per_specialty,
            "duration_choices": list(cfg.duration_choices),
            "gap_choices": list(cfg.gap_choices),
        },
        "exams": [
            {"id": e.id, "name": e.name, "specialty": e.specialty.value}
            for e in world.exams
        ],
        "rules": [
            {
                "first": r.first,
                "second": r.second,
                "logic": r.logic.value,
                "gap_minutes": r.gap_minutes,
            }
            for r in world.rules
        ],
        "facilities": [
            {"id": f.id, "name": f.name, "rooms": list(f.rooms)}
            for f in world.facilities
        ],
        "slots": [_slot_to_dict(s) for s in world.slots],
    }


def world_from_dict(document: dict[str, Any]) -> World:
    cfg = document["config"]
    config = WorldConfig(
        seed=cfg["seed"],
        horizon_days=cfg["horizon_days"],
        facilities=cfg["facilities"],
        rooms_per_facility=cfg["rooms_per_facility"],
        day_open=cfg["day_open"],
        day_close=cfg["day_close"],
        practitioner_pool=cfg["practitioner_pool"],
        rule_count=cfg["rule_count"],
        specialties=cfg["specialties"],
        exams_per_specialty=cfg["exams_per_specialty"],
        duration_choices=tuple(cfg["duration_choices"]),
        gap_choices=tuple(cfg["gap_choices"]),
    )
    return World(
        config=config,
        exams=tuple(
            ExamType(id=e["id"], name=e["name"], specialty=Specialty(e["specialty"]))
            for e in document["exams"]
        ),
        rules=tuple(
            IncompatibilityRule(
                first=r["first"],
                second=r["second"],
                logic=RuleLogic(r["logic"]),
                gap_minutes=r["gap_minutes"],
            )
            for r in document["rules"]
        ),
        facilities=tuple(
            Facility(id=f["id"], name=f["name"], rooms=tuple(f["rooms"]))
            for f in document["facilities"]
        ),
        slots=tuple(_slot_from_dict(s) for s in document["slots"]),
    )


def save_world(world: World, path: Path) -> None:
    _dump_json(world_to_dict(world), path)


def load_world(path: Path) -> World:
    return world_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def request_to_dict(request: ScheduleRequest) -> dict[str, Any]:
    return {
        "acts": list(request.acts),
        "start_day": request.start_day,
        "preferred_facilities": (
            sorted(request.preferred_facilities)
            if request.preferred_facilities is not None
            else None
        ),
        "preferred_practitioners": (
            sorted(request.preferred_practitioners)
            if request.preferred_practitioners is not None
            else None
        ),
    }


def request_from_dict(document: dict[str, Any]) -> ScheduleRequest:
    facilities = document.get("preferred_facilities")
    practitioners = document.get("preferred_practitioners")
    return ScheduleRequest(
        acts=tuple(document["acts"]),
        start_day=document.get("start_day", 0),
        preferred_facilities=frozenset(facilities) if facilities is not None else None,
        preferred_practitioners=(
            frozenset(practitioners) if practitioners is not None else None
        ),
    )


def save_request(request: ScheduleRequest, path: Path) -> None:
    _dump_json(request_to_dict(request), path)


def load_request(path: Path) -> ScheduleRequest:
    return request_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def solution_to_dict(
    algorithm: str,
    request: ScheduleRequest,
    schedule: Schedule,
    penalties: PenaltyBreakdown,
    score: float,
    metrics: SolutionMetrics,
) -> dict[str, Any]:
    return {
        "algorithm": algorithm,
        "request": request_to_dict(request),
        "assignments": [
            {"act": act, "slot": _slot_to_dict(slot)}
            for act, slot in schedule.sorted_by_start()
        ],
        "penalties": {
            "missing_slot": penalties.missing_slot,
            "hard_violations": penalties.hard_violations,
            "trips": penalties.trips,
            "travel_gap": penalties.travel_gap,
            "wait": penalties.wait,
            "lead": penalties.lead,
            "total": penalties.total(),
        },
        "fitness": score,
        "metrics": {
            "itr": metrics.itr,
            "trips": metrics.trips,
            "overlap_ok": metrics.overlap_ok,
            "compatibility_ok": metrics.compatibility_ok,
            "travel_ok": metrics.travel_ok,
            "fully_scheduled": metrics.fully_scheduled,
        },
    }


def save_solution(document: dict[str, Any], path: Path) -> None:
    _dump_json(document, path)


def write_csv(
    path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> None:
    """Write one CSV table with a header row, LF endings and '.' decimals."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
