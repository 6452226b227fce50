"""Routing tasks, plans and exact schedule evaluation by forward recursion."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .._validation import check_coords
from ..calendar import SystemParams


class RoutingError(ValueError):
    pass


@dataclass(frozen=True)
class Job:
    id: Hashable
    coords: tuple[float, float]
    window: tuple[float, float]


@dataclass(frozen=True)
class RoutingTask:
    depot: tuple[float, float]
    jobs: tuple[Job, ...]
    params: SystemParams

    def __post_init__(self):
        object.__setattr__(self, "depot", check_coords(self.depot, "depot"))
        jobs = tuple(j if isinstance(j, Job) else Job(*j) for j in self.jobs)
        object.__setattr__(self, "jobs", jobs)
        seen = set()
        for j in jobs:
            if j.id in seen:
                raise RoutingError(f"duplicate job id {j.id!r}")
            seen.add(j.id)
            a, b = j.window
            if not 0.0 <= a <= b:
                raise RoutingError(f"job {j.id!r}: window ({a}, {b}) violates 0 <= a <= b")
        object.__setattr__(self, "_index", {j.id: k for k, j in enumerate(jobs)})

    def job(self, job_id) -> Job:
        try:
            return self.jobs[self._index[job_id]]
        except KeyError:
            raise RoutingError(f"unknown job id {job_id!r}") from None

    def index(self, job_id) -> int:
        """1-based node index of a job (0 is the depot)."""
        try:
            return self._index[job_id] + 1
        except KeyError:
            raise RoutingError(f"unknown job id {job_id!r}") from None

    def arrays(self):
        """Node arrays with the depot at index 0: coordinates, earliest and deadline."""
        n = len(self.jobs)
        xy = np.empty((n + 1, 2))
        a = np.zeros(n + 1)
        b = np.full(n + 1, np.inf)
        xy[0] = self.depot
        for k, j in enumerate(self.jobs, start=1):
            xy[k] = j.coords
            a[k], b[k] = j.window
        return xy, a, b


@dataclass(frozen=True)
class RoutePlan:
    routes: tuple[tuple, ...]

    def __post_init__(self):
        object.__setattr__(self, "routes", tuple(tuple(r) for r in self.routes))


@dataclass(frozen=True)
class JobSchedule:
    id: Hashable
    arrival: float
    wait: float
    delay: float


@dataclass(frozen=True)
class RouteEvaluation:
    schedule: tuple[JobSchedule, ...]
    route_costs: tuple[float, ...]
    travel: float
    wait: float
    delay: float
    delay_penalty: float
    objective: float

    @property
    def ttc(self) -> float:
        return self.travel

    @property
    def dp(self) -> float:
        return self.delay_penalty

    def start_of(self, job_id) -> float:
        for js in self.schedule:
            if js.id == job_id:
                return js.arrival + js.wait
        raise KeyError(job_id)


EMPTY_EVALUATION = RouteEvaluation((), (), 0.0, 0.0, 0.0, 0.0, 0.0)


def evaluate_route(route: Sequence, task: RoutingTask) -> RouteEvaluation:
    """Schedule one vehicle tour that leaves the depot at time 0.

    The vehicle waits only until the window opens (``w = max(0, a - z)``); any
    longer wait costs one unit per hour and can only push later arrivals back.
    Delay is measured on the arrival time.
    """
    p = task.params
    prev = task.depot
    clock = 0.0
    travel = wait = delay = 0.0
    sched = []
    for job_id in route:
        job = task.job(job_id)
        leg = p.p_tra * math.hypot(job.coords[0] - prev[0], job.coords[1] - prev[1])
        z = clock + leg
        a, b = job.window
        w = max(0.0, a - z)
        d = max(0.0, z - b)
        travel += leg
        wait += w
        delay += d
        sched.append(JobSchedule(job_id, z, w, d))
        clock = z + w + p.p_ser
        prev = job.coords
    if sched:
        travel += p.p_tra * math.hypot(task.depot[0] - prev[0], task.depot[1] - prev[1])
    dp = p.beta * delay
    cost = travel + wait + dp
    return RouteEvaluation(tuple(sched), (cost,), travel, wait, delay, dp, cost)


def evaluate_plan(plan: RoutePlan, task: RoutingTask) -> RouteEvaluation:
    routes = plan.routes if isinstance(plan, RoutePlan) else tuple(tuple(r) for r in plan)
    if len(routes) > task.params.n_v:
        raise RoutingError(f"plan uses {len(routes)} routes but only {task.params.n_v} vehicles exist")
    seen = set()
    for r in routes:
        for job_id in r:
            if job_id in seen:
                raise RoutingError(f"job {job_id!r} is visited more than once")
            task.job(job_id)
            seen.add(job_id)
    missing = [j.id for j in task.jobs if j.id not in seen]
    if missing:
        raise RoutingError(f"plan does not visit jobs {missing!r}")

    parts = [evaluate_route(r, task) for r in routes]
    return RouteEvaluation(
        schedule=tuple(s for e in parts for s in e.schedule),
        route_costs=tuple(e.objective for e in parts),
        travel=sum(e.travel for e in parts),
        wait=sum(e.wait for e in parts),
        delay=sum(e.delay for e in parts),
        delay_penalty=sum(e.delay_penalty for e in parts),
        objective=sum(e.objective for e in parts),
    )
