"""Sampled future arrivals, shared by the rollout and scenario planners."""
from __future__ import annotations

import numpy as np

from ..calendar import Customer, SlotCalendar, assignable_slots
from ..instance import GenParams, sample_count, sample_locations


def sample_future_customers(day: int, epoch: int, until: int, dist: GenParams,
                            calendar: SlotCalendar, rng, first_id: int = -1) -> dict:
    """Arrivals after epoch ``epoch`` of ``day`` through the end of day ``until``.

    The current day gets a fresh daily count minus the ``epoch`` arrivals
    already seen (clamped at zero); later days get full daily draws. Ids count
    down from ``first_id`` so they never collide with real customers.
    """
    out = {}
    next_id = first_id
    n_slots = calendar.n_slots
    for d in range(day, until + 1):
        k = sample_count(dist.n_daily_mean, dist.count_sd, rng)
        if d == day:
            k = max(0, k - epoch)
        if k == 0:
            out[d] = []
            continue
        xy = sample_locations(k, dist, rng)
        picks = np.argsort(rng.random((k, n_slots)), axis=1)[:, :dist.n_p]
        slots = assignable_slots(d, calendar)
        day_list = []
        for i in range(k):
            prefs = tuple(slots[j] for j in picks[i])
            day_list.append(Customer(next_id, (xy[i, 0], xy[i, 1]), d, 0.0, prefs))
            next_id -= 1
        out[d] = day_list
    return out
