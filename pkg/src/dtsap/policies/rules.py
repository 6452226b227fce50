"""Myopic rule-based policies: uniform random and angular segmentation."""
from __future__ import annotations

import math

from .._validation import check_is_fitted
from ..calendar import SlotCalendar, SlotId
from .base import BasePolicy


def ran_decide(state, allowed, rng) -> SlotId:
    if not allowed:
        raise ValueError("no allowed slots")
    return allowed[int(rng.integers(0, len(allowed)))]


def seg_region(coords, depot, n_regions: int = 10) -> int:
    """Sector index 1..n_regions, counter-clockwise from the positive x-axis.

    Sector boundaries belong to the sector that starts there. A point on the
    depot falls in region 1.
    """
    dx, dy = coords[0] - depot[0], coords[1] - depot[1]
    if dx == 0 and dy == 0:
        return 1
    angle = math.degrees(math.atan2(dy, dx)) % 360.0
    return min(n_regions, 1 + int(angle // (360.0 / n_regions)))


def seg_slot(coords, day: int, depot, calendar: SlotCalendar) -> SlotId:
    """Segmentation slot for a customer arriving on ``day``.

    Regions are paired per service day; the pair index ``p`` maps to the unique
    day in the lookahead window congruent to ``p + 1`` modulo ``n_d``, so every
    region keeps a fixed weekday-like rotation.
    """
    n_s, n_d = calendar.slots_per_day, calendar.lookahead_days
    region = seg_region(coords, depot, n_s * n_d)
    pair = (region - 1) // n_s + 1
    half = (region - 1) % n_s + 1
    for d in range(day + 1, day + n_d + 1):
        if (d - pair - 1) % n_d == 0:
            return SlotId(d, half)
    raise AssertionError("unreachable: the lookahead window covers every residue")


def seg_decide(state, depot, calendar: SlotCalendar) -> SlotId:
    if state.new_customer is None:
        raise ValueError("no customer to assign")
    return seg_slot(state.new_customer.coords, state.day, depot, calendar)


class RandomPolicy(BasePolicy):
    """Uniform draw over the assignable slots."""

    state_independent = True

    def __init__(self):
        pass

    def decide(self, state, allowed, rng):
        return ran_decide(state, allowed, rng)

    def candidate_actions(self, state, allowed):
        return [(slot, 1.0 / len(allowed)) for slot in allowed]


class SegmentationPolicy(BasePolicy):
    """Assign by angular sector around the depot."""

    state_independent = True

    def __init__(self):
        pass

    def decide(self, state, allowed, rng):
        check_is_fitted(self, "sys_")
        return seg_decide(state, self.gen_.depot, self.sys_.calendar)

    def candidate_actions(self, state, allowed):
        chosen = self.decide(state, allowed, None)
        return [(slot, float(slot == chosen)) for slot in allowed]
