"""Rollout enhancement of a base policy.

For each of ``m`` sampled futures, every candidate slot is tried for the
arriving customer; the base policy then assigns all sampled future arrivals
and every remaining service day is routed with a fast solver. The candidate
with the lowest mean remaining-horizon cost wins. The same future sample is
used for all candidates within one rollout index (common random numbers).
"""
from __future__ import annotations

import numpy as np
from sklearn.base import clone

from .._validation import check_is_fitted, check_positive_int
from ..calendar import assignable_slots, assignment_penalty, slot_window
from ..routing import VRPSTWSolver, RoutingTask, Job
from .base import BasePolicy
from .rules import RandomPolicy
from .sampling import sample_future_customers

ALL = "all"
BASE_PRUNED = "base-pruned"


def default_fast_router():
    return VRPSTWSolver(max_sweeps=1, n_restarts=0)


class DayCostCache:
    """Routing cost per service day, memoised on the day's (customer, slot) content."""

    def __init__(self, router, sys, depot):
        self.router = router
        self.sys = sys
        self.depot = depot
        self._memo = {}
        self._fast = hasattr(router, "cost_arrays")

    def cost(self, day: int, members) -> float:
        key = (day, frozenset((c.id, s.half) for c, s in members))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        members = sorted(members, key=lambda cs: cs[0].id)
        cal = self.sys.calendar
        if self._fast:
            n = len(members)
            xy = np.empty((n + 1, 2))
            a = np.zeros(n + 1)
            b = np.full(n + 1, np.inf)
            xy[0] = self.depot
            for k, (c, s) in enumerate(members, start=1):
                xy[k] = c.coords
                a[k], b[k] = cal.windows[s.half - 1]
            value = self.router.cost_arrays(xy, a, b, self.sys)
        else:
            task = RoutingTask(self.depot, tuple(Job(c.id, c.coords, slot_window(s, cal))
                                                 for c, s in members), self.sys)
            value = self.router.solve(task, None)[1].objective
        self._memo[key] = value
        return value


class RolloutPolicy(BasePolicy):
    """Rollout wrapper around any base policy.

    Parameters
    ----------
    base : BasePolicy
        Policy used for every sampled future decision (cloned on fit).
    m : int
        Number of sampled futures.
    action_set : {"all", "base-pruned"}
        Candidate slots: every assignable slot, or the slots the base policy
        scores above zero.
    fast_router : solver or None
        Router for the simulated days; defaults to cheapest insertion with
        a single local-search sweep.
    dist : GenParams or None
        Arrival distribution for the futures; defaults to the one seen in fit.
    """

    def __init__(self, base=None, m=10, action_set=ALL, fast_router=None, dist=None):
        self.base = base
        self.m = m
        self.action_set = action_set
        self.fast_router = fast_router
        self.dist = dist

    def fit(self, sys, gen):
        super().fit(sys, gen)
        check_positive_int(self.m, "m")
        if self.action_set not in (ALL, BASE_PRUNED):
            raise ValueError(f"action_set must be {ALL!r} or {BASE_PRUNED!r}")
        base = RandomPolicy() if self.base is None else self.base
        self.base_ = clone(base).fit(sys, gen)
        self.router_ = default_fast_router() if self.fast_router is None else self.fast_router
        self.dist_ = gen if self.dist is None else self.dist
        return self

    def actions(self, state, allowed):
        if self.action_set == ALL:
            return list(allowed)
        return [slot for slot, score in self.base_.candidate_actions(state, allowed) if score > 0]

    def decide(self, state, allowed, rng):
        check_is_fitted(self, "base_")
        if state.new_customer is None:
            raise ValueError("no customer to assign")
        actions = sorted(self.actions(state, allowed))
        if not actions:
            raise ValueError("empty action set")
        totals = np.zeros(len(actions))
        for _ in range(self.m):
            fut_rng, base_rng = rng.spawn(2)
            futures = sample_future_customers(state.day, state.epoch, self.dist_.horizon_days - 1,
                                              self.dist_, self.sys_.calendar, fut_rng)
            base_seed = int(base_rng.integers(2**63))
            totals += self._rollout_costs(state, actions, futures, base_seed)
        means = totals / self.m
        self.last_estimates_ = dict(zip(actions, means))
        return actions[int(np.argmin(means))]

    def _rollout_costs(self, state, actions, futures, base_seed) -> np.ndarray:
        sys = self.sys_
        cache = DayCostCache(self.router_, sys, self.gen_.depot)
        cust = state.new_customer
        if self.base_.state_independent:
            fut_pen, buckets = self._continue(state, None, futures, base_seed)
            out = np.empty(len(actions))
            base_total = sum(cache.cost(d, m) for d, m in buckets.items())
            for i, a in enumerate(actions):
                day_members = buckets.get(a.day, [])
                with_new = cache.cost(a.day, day_members + [(cust, a)])
                without = cache.cost(a.day, day_members) if day_members else 0.0
                out[i] = (assignment_penalty(cust.preferences, a, sys.alpha) + fut_pen
                          + base_total - without + with_new)
            return out
        out = np.empty(len(actions))
        for i, a in enumerate(actions):
            fut_pen, buckets = self._continue(state, a, futures, base_seed)
            out[i] = (assignment_penalty(cust.preferences, a, sys.alpha) + fut_pen
                      + sum(cache.cost(d, m) for d, m in buckets.items()))
        return out

    def _continue(self, state, action, futures, base_seed):
        """Let the base policy assign every sampled arrival.

        Returns the future assignment penalties and the customers per service
        day. With ``action=None`` the arriving customer is left out.
        """
        from ..engine import State

        sys = self.sys_
        cal = sys.calendar
        rng = np.random.default_rng(base_seed)
        assigned = list(zip(state.assigned, state.decisions))
        if action is not None:
            assigned.append((state.new_customer, action))
        routed = []
        pen = 0.0
        independent = self.base_.state_independent
        for day in sorted(futures):
            allowed = assignable_slots(day, cal)
            epoch = state.epoch if day == state.day else 0
            for cust in futures[day]:
                epoch += 1
                if independent:
                    view = State(day, epoch, cust)
                else:
                    view = State(day, epoch, cust, tuple(c for c, _ in assigned),
                                 tuple(s for _, s in assigned))
                slot = self.base_.decide(view, allowed, rng)
                if slot not in allowed:
                    raise ValueError(f"base policy returned {slot} outside the window of day {day}")
                pen += assignment_penalty(cust.preferences, slot, sys.alpha)
                assigned.append((cust, slot))
            # end of day: next day's customers leave the state
            routed.extend(cs for cs in assigned if cs[1].day == day + 1)
            assigned = [cs for cs in assigned if cs[1].day != day + 1]
        buckets = {}
        for c, s in routed + assigned:
            buckets.setdefault(s.day, []).append((c, s))
        return pen, buckets
