"""Shared fixtures and builders for the test suite."""

from __future__ import annotations

import pytest

from medsched.datagen import WorldConfig, generate_world
from medsched.model import Schedule, TimeSlot

DAY = 1440


def make_slot(
    id: str = "S1",
    start: int = 540,
    duration: int = 30,
    exam: str = "E00",
    facility: str = "F1",
    room: str | None = None,
    practitioner: str = "P1",
) -> TimeSlot:
    """A TimeSlot with compact defaults for constraint/fitness tests."""
    return TimeSlot(
        id=id,
        exam=exam,
        facility=facility,
        room=room if room is not None else f"{facility}-R1",
        practitioner=practitioner,
        start=start,
        duration_minutes=duration,
    )


def make_schedule(*slots: TimeSlot) -> Schedule:
    """Schedule assigning act i to the i-th slot."""
    return Schedule(assignments=tuple(enumerate(slots)))


@pytest.fixture(scope="session")
def default_world():
    """The default benchmark world; generated once per test session."""
    return generate_world(WorldConfig())
