"""Scenario-based planning: sample futures, plan each scenario, vote."""
from __future__ import annotations

import math
from collections import Counter

from .._validation import check_is_fitted, check_positive_int
from ..calendar import SlotCalendar, SlotId, slot_window
from ..routing import MultiPeriodPlanner, PeriodJob
from .base import BasePolicy
from .sampling import sample_future_customers

INFINITE = "infinite"
FINITE = "finite"


def consensus(votes) -> SlotId:
    """Most frequent slot; ties go to the earliest slot."""
    if not votes:
        raise ValueError("empty votes")
    counts = Counter(votes)
    top = max(counts.values())
    return min(s for s, n in counts.items() if n == top)


def slot_at(day: int, start: float, calendar: SlotCalendar) -> SlotId:
    """The slot of ``day`` whose window contains ``start``.

    In an overlap the earlier slot wins; a start outside every window maps to
    the nearest window.
    """
    best, best_gap = None, math.inf
    for half, (a, b) in enumerate(calendar.windows, start=1):
        gap = max(a - start, 0.0, start - b)
        if gap < best_gap:
            best, best_gap = half, gap
    return SlotId(day, best)


def _days(prefs):
    return sorted({s.day for s in prefs})


class ScenarioPolicy(BasePolicy):
    """Scenario-based planning with frequency consensus.

    Parameters
    ----------
    q : int
        Number of sampled scenarios.
    sampling_horizon : int
        Days of future arrivals per scenario, starting with the rest of today.
    future_window : {"infinite", "finite"}
        Sampled customers get an open-ended window on each preferred day, or
        the windows of their preferred slots.
    dist : GenParams or None
        Arrival distribution; defaults to the one seen in fit.
    max_sweeps : int
        Local-search budget for the scenario plans.
    """

    def __init__(self, q=30, sampling_horizon=1, future_window=INFINITE, dist=None,
                 max_sweeps=500):
        self.q = q
        self.sampling_horizon = sampling_horizon
        self.future_window = future_window
        self.dist = dist
        self.max_sweeps = max_sweeps

    def fit(self, sys, gen):
        super().fit(sys, gen)
        check_positive_int(self.q, "q")
        check_positive_int(self.sampling_horizon, "sampling_horizon")
        if self.future_window not in (INFINITE, FINITE):
            raise ValueError(f"future_window must be {INFINITE!r} or {FINITE!r}")
        self.dist_ = gen if self.dist is None else self.dist
        return self

    def _future_job(self, cust, cal):
        if self.future_window == INFINITE:
            cands = tuple((d, (0.0, math.inf)) for d in _days(cust.preferences))
        else:
            cands = tuple((s.day, slot_window(s, cal)) for s in cust.preferences)
        return PeriodJob(cust.id, cust.coords, cands)

    def decide(self, state, allowed, rng):
        check_is_fitted(self, "dist_")
        cust = state.new_customer
        if cust is None:
            raise ValueError("no customer to assign")
        sys = self.sys_
        cal = sys.calendar
        fixed = [PeriodJob(c.id, c.coords, ((s.day, slot_window(s, cal)),))
                 for c, s in zip(state.assigned, state.decisions)]
        planner = MultiPeriodPlanner(self.gen_.depot, fixed, sys, self.max_sweeps)
        current = PeriodJob(cust.id, cust.coords,
                            tuple((d, (0.0, cal.day_length)) for d in _days(cust.preferences)))
        until = min(state.day + self.sampling_horizon - 1, self.dist_.horizon_days - 1)
        votes = []
        for _ in range(self.q):
            futures = sample_future_customers(state.day, state.epoch, until, self.dist_, cal, rng)
            flexible = [current] + [self._future_job(c, cal)
                                    for d in sorted(futures) for c in futures[d]]
            plan = planner.plan(flexible)
            votes.append(slot_at(plan.day[cust.id], plan.start[cust.id], cal))
        self.last_votes_ = votes
        return consensus(votes)
