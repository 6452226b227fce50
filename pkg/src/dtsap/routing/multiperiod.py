"""Multi-day insertion planning for scenario-based slot assignment.

Jobs carry one or more candidate ``(day, window)`` pairs. Jobs with a single
candidate are routed first, day by day, in the order given. The remaining
(flexible) jobs are then inserted one at a time, always taking the cheapest
``(job, candidate, route, position)`` over everything still unplaced, and each
day that received a flexible job is re-optimised by local search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .._validation import check_coords
from ..calendar import SystemParams
from . import _kernels as K
from .solver import construct_routes, improve


@dataclass(frozen=True)
class PeriodJob:
    id: Hashable
    coords: tuple[float, float]
    candidates: tuple[tuple[int, tuple[float, float]], ...]

    def __post_init__(self):
        if not self.candidates:
            raise ValueError(f"job {self.id!r} has no candidate day")


@dataclass(frozen=True)
class ScenarioPlan:
    day: dict
    start: dict
    routes: dict
    objective: float


def _schedule(route, D, a, s):
    """Service start per node along a route."""
    out = {}
    clock, prev = 0.0, 0
    for j in route:
        z = clock + D[prev, j]
        start = max(z, a[j])
        out[j] = start
        clock, prev = start + s, j
    return out


class MultiPeriodPlanner:
    """Routes the single-candidate jobs once, then plans flexible jobs on top.

    Reusing one planner across scenarios that share their committed customers
    avoids re-routing those customers for every scenario.
    """

    def __init__(self, depot, fixed: Sequence[PeriodJob], params: SystemParams,
                 max_sweeps: int = 500):
        self.depot = check_coords(depot, "depot")
        self.params = params
        self.max_sweeps = max_sweeps
        self.fixed = tuple(fixed)
        for job in self.fixed:
            if len(job.candidates) != 1:
                raise ValueError(f"fixed job {job.id!r} must have exactly one candidate")
        n = len(self.fixed)
        self._xy = np.empty((n + 1, 2))
        self._a = np.zeros(n + 1)
        self._b = np.full(n + 1, np.inf)
        self._xy[0] = self.depot
        by_day: dict[int, list[int]] = {}
        for k, job in enumerate(self.fixed, start=1):
            day, (a, b) = job.candidates[0]
            self._xy[k] = job.coords
            self._a[k], self._b[k] = a, b
            by_day.setdefault(day, []).append(k)
        p = params
        D = K.travel_matrix(self._xy, p.p_tra)
        self._base = {}
        for day, nodes in sorted(by_day.items()):
            routes, lens, costs = construct_routes(D, self._a, self._b, p.n_v, p.p_ser, p.beta,
                                                   order=np.asarray(nodes, dtype=np.int64))
            improve(routes, lens, costs, D, self._a, self._b, p.p_ser, p.beta, max_sweeps)
            self._base[day] = (routes, lens, costs)

    def plan(self, flexible: Sequence[PeriodJob] = ()) -> ScenarioPlan:
        p = self.params
        n_fixed = len(self.fixed)
        n = n_fixed + len(flexible)
        xy = np.empty((n + 1, 2))
        xy[:n_fixed + 1] = self._xy
        a = np.zeros(n + 1)
        b = np.full(n + 1, np.inf)
        a[:n_fixed + 1] = self._a
        b[:n_fixed + 1] = self._b
        for k, job in enumerate(flexible, start=n_fixed + 1):
            xy[k] = job.coords
        D = K.travel_matrix(xy, p.p_tra)

        cap = n + 1
        days = {}
        for day, (routes, lens, costs) in self._base.items():
            r = np.zeros((p.n_v, cap), dtype=np.int64)
            r[:, :routes.shape[1]] = routes
            days[day] = [r, lens.copy(), costs.copy()]

        def day_state(day):
            if day not in days:
                days[day] = [np.zeros((p.n_v, cap), dtype=np.int64),
                             np.zeros(p.n_v, dtype=np.int64), np.zeros(p.n_v)]
            return days[day]

        touched = set()
        chosen_day = {}
        pending = list(range(len(flexible)))
        while pending:
            best = (math.inf, -1, -1, -1, -1)
            for idx in pending:
                node = n_fixed + 1 + idx
                for c, (day, (wa, wb)) in enumerate(flexible[idx].candidates):
                    a[node], b[node] = wa, wb
                    routes, lens, costs = day_state(day)
                    delta, r, pos = K.best_insertion(routes, lens, costs, node, D, a, b,
                                                     p.p_ser, p.beta)
                    if delta < best[0] - K.EPS:
                        best = (delta, idx, c, r, pos)
            delta, idx, c, r, pos = best
            node = n_fixed + 1 + idx
            day, (wa, wb) = flexible[idx].candidates[c]
            a[node], b[node] = wa, wb
            routes, lens, costs = days[day]
            K.apply_insertion(routes, lens, r, pos, node)
            costs[r] += delta
            chosen_day[node] = day
            touched.add(day)
            pending.remove(idx)

        for day in touched:
            routes, lens, costs = days[day]
            for r in range(p.n_v):
                costs[r] = K.seq_cost(routes[r], lens[r], D, a, b, p.p_ser, p.beta)
            improve(routes, lens, costs, D, a, b, p.p_ser, p.beta, self.max_sweeps)

        ids = [job.id for job in self.fixed] + [job.id for job in flexible]
        day_of, start_of, plan_routes = {}, {}, {}
        objective = 0.0
        for day in sorted(days):
            routes, lens, costs = days[day]
            objective += float(costs.sum())
            day_routes = []
            for r in range(p.n_v):
                seq = [int(v) for v in routes[r, :lens[r]]]
                for node, start in _schedule(seq, D, a, p.p_ser).items():
                    day_of[ids[node - 1]] = day
                    start_of[ids[node - 1]] = start
                day_routes.append(tuple(ids[v - 1] for v in seq))
            plan_routes[day] = tuple(day_routes)
        return ScenarioPlan(day_of, start_of, plan_routes, objective)


def solve_multiperiod(jobs: Sequence[PeriodJob], horizon: Sequence[int], params: SystemParams,
                      depot, max_sweeps: int = 500) -> ScenarioPlan:
    """Plan every job onto one of its candidate days within ``horizon``."""
    allowed = set(horizon)
    for job in jobs:
        if not any(day in allowed for day, _ in job.candidates):
            raise ValueError(f"job {job.id!r} has no candidate day inside the horizon")
    jobs = [PeriodJob(j.id, j.coords, tuple(c for c in j.candidates if c[0] in allowed))
            for j in jobs]
    fixed = [j for j in jobs if len(j.candidates) == 1]
    flexible = [j for j in jobs if len(j.candidates) > 1]
    return MultiPeriodPlanner(depot, fixed, params, max_sweeps).plan(flexible)
