"""Slot calculus, system parameters and customer records.

Slots are identified by ``(day, half)`` where ``half`` is the 1-based index of
the window within a day. Ordinals count slots from the morning of day 1, so the
pre-existing assignments made on day 0 never need negative indices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence


@dataclass(frozen=True)
class SlotCalendar:
    slots_per_day: int = 2
    lookahead_days: int = 5
    day_length: float = 9.0
    windows: tuple[tuple[float, float], ...] = ((0.0, 5.0), (4.0, 9.0))

    def __post_init__(self):
        if self.slots_per_day < 1 or self.lookahead_days < 1:
            raise ValueError("slots_per_day and lookahead_days must be positive")
        windows = tuple((float(a), float(b)) for a, b in self.windows)
        object.__setattr__(self, "windows", windows)
        if len(windows) != self.slots_per_day:
            raise ValueError(
                f"expected {self.slots_per_day} windows, got {len(windows)}")
        for a, b in windows:
            if not 0.0 <= a <= b <= self.day_length:
                raise ValueError(
                    f"window ({a}, {b}) violates 0 <= a <= b <= {self.day_length}")

    @property
    def n_slots(self) -> int:
        """Number of assignable slots at any decision epoch."""
        return self.slots_per_day * self.lookahead_days


@dataclass(frozen=True, order=True)
class SlotId:
    """A service slot; ordering is lexicographic in (day, half)."""

    day: int
    half: int

    def ordinal(self, n_s: int) -> int:
        return (self.day - 1) * n_s + self.half

    @classmethod
    def from_ordinal(cls, ordinal: int, n_s: int) -> "SlotId":
        day, rem = divmod(ordinal - 1, n_s)
        return cls(day + 1, rem + 1)

    def __str__(self):
        return f"({self.day},{self.half})"


def to_window_label(slot: SlotId, n_s: int) -> int:
    """Label counted from the day-2 morning (= 1), the first slot a day-1 arrival can get."""
    return slot.ordinal(n_s) - n_s


def from_window_label(label: int, n_s: int) -> SlotId:
    return SlotId.from_ordinal(label + n_s, n_s)


@dataclass(frozen=True)
class SystemParams:
    n_v: int = 2
    alpha: float = 2.0
    beta: float = 3.0
    p_tra: float = 1.0
    p_ser: float = 2.0 / 3.0
    calendar: SlotCalendar = field(default_factory=SlotCalendar)

    def __post_init__(self):
        if self.n_v < 1:
            raise ValueError("n_v must be >= 1")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if not self.p_tra > 0:
            raise ValueError("p_tra must be positive")
        if self.p_ser < 0:
            raise ValueError("p_ser must be non-negative")


@dataclass(frozen=True)
class Customer:
    id: int
    coords: tuple[float, float]
    arrival_day: int
    arrival_time: float
    preferences: tuple[SlotId, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", (float(self.coords[0]), float(self.coords[1])))
        object.__setattr__(self, "preferences", tuple(sorted(self.preferences)))
        if len(set(self.preferences)) != len(self.preferences):
            raise ValueError(f"customer {self.id}: duplicate preferences")
        if self.arrival_day < 0:
            raise ValueError(f"customer {self.id}: negative arrival day")

    def check_lookahead(self, calendar: SlotCalendar):
        lo = self.arrival_day + 1
        hi = self.arrival_day + calendar.lookahead_days
        for slot in self.preferences:
            if not (lo <= slot.day <= hi and 1 <= slot.half <= calendar.slots_per_day):
                raise ValueError(
                    f"customer {self.id}: preference {slot} outside lookahead "
                    f"days {lo}..{hi}")


@lru_cache(maxsize=4096)
def _assignable(t: int, n_s: int, n_d: int) -> tuple[SlotId, ...]:
    return tuple(SlotId(day, half) for day in range(t + 1, t + n_d + 1)
                 for half in range(1, n_s + 1))


def assignable_slots(t: int, calendar: SlotCalendar) -> tuple[SlotId, ...]:
    """Slots covering days ``t+1 .. t+n_d`` in ordinal order."""
    if t < 0:
        raise ValueError("day index must be non-negative")
    return _assignable(t, calendar.slots_per_day, calendar.lookahead_days)


def slot_window(slot: SlotId, calendar: SlotCalendar) -> tuple[float, float]:
    if not 1 <= slot.half <= calendar.slots_per_day:
        raise ValueError(f"slot {slot} has no window in this calendar")
    return calendar.windows[slot.half - 1]


def assignment_penalty(prefs: Iterable[SlotId], chosen: SlotId, alpha: float) -> float:
    return 0.0 if chosen in set(prefs) else float(alpha)


def distance(p: Sequence[float], q: Sequence[float]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def travel_time(params: SystemParams, p: Sequence[float], q: Sequence[float]) -> float:
    """Travel hours between two points: ``p_tra`` times Euclidean distance."""
    return params.p_tra * distance(p, q)
