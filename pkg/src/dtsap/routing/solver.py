"""Cheapest-insertion construction plus first-improvement local search."""
from __future__ import annotations

import time

import numpy as np
from sklearn.base import BaseEstimator

from .._validation import check_rng
from . import _kernels as K
from .evaluate import RoutePlan, RouteEvaluation, RoutingTask, evaluate_plan


def _empty_routes(n_v, n_nodes):
    return (np.zeros((n_v, max(n_nodes, 1)), dtype=np.int64),
            np.zeros(n_v, dtype=np.int64), np.zeros(n_v))


def improve(routes, lens, costs, D, a, b, s, beta, max_sweeps, deadline=None):
    """Run local-search sweeps in place until a local optimum or the budget ends."""
    scratch = np.empty(routes.shape[1], dtype=np.int64)
    for _ in range(max_sweeps):
        if not K.sweep(routes, lens, costs, D, a, b, s, beta, scratch):
            break
        if deadline is not None and time.perf_counter() >= deadline:
            break
    return float(costs.sum())


def construct_routes(D, a, b, n_v, s, beta, order=None):
    n = D.shape[0] - 1
    if order is None:
        order = np.argsort(a[1:], kind="stable") + 1
    routes, lens, costs = _empty_routes(n_v, n)
    K.construct(np.asarray(order, dtype=np.int64), routes, lens, costs, D, a, b, s, beta)
    return routes, lens, costs


class VRPSTWSolver(BaseEstimator):
    """Heuristic solver for one day's routing with soft time windows.

    Parameters
    ----------
    max_sweeps : int
        Local-search sweep budget; 0 keeps the construction as is.
    n_restarts : int
        Extra constructions from random insertion orders, each followed by
        local search. The best plan found is returned.
    time_limit : float or None
        Optional wall-clock cap in seconds, checked between sweeps. Leave it
        unset when results must be reproducible.
    """

    def __init__(self, max_sweeps=500, n_restarts=10, time_limit=None):
        self.max_sweeps = max_sweeps
        self.n_restarts = n_restarts
        self.time_limit = time_limit

    def solve_arrays(self, D, a, b, n_v, s, beta, rng=None):
        """Return ``(routes, lens, cost)`` on node-index arrays (depot at 0)."""
        n = D.shape[0] - 1
        if n == 0:
            routes, lens, _ = _empty_routes(n_v, 0)
            return routes, lens, 0.0
        deadline = None if self.time_limit is None else time.perf_counter() + self.time_limit
        routes, lens, costs = construct_routes(D, a, b, n_v, s, beta)
        best = improve(routes, lens, costs, D, a, b, s, beta, self.max_sweeps, deadline)
        if self.n_restarts:
            rng = check_rng(rng)
            for _ in range(self.n_restarts):
                if deadline is not None and time.perf_counter() >= deadline:
                    break
                order = rng.permutation(n) + 1
                r2, l2, c2 = construct_routes(D, a, b, n_v, s, beta, order)
                cost = improve(r2, l2, c2, D, a, b, s, beta, self.max_sweeps, deadline)
                if cost < best - K.EPS:
                    routes, lens, best = r2, l2, cost
        return routes, lens, best

    def cost_arrays(self, xy, a, b, params, rng=None) -> float:
        D = K.travel_matrix(np.ascontiguousarray(xy, dtype=float), params.p_tra)
        return self.solve_arrays(D, a, b, params.n_v, params.p_ser, params.beta, rng)[2]

    def solve(self, task: RoutingTask, rng=None) -> tuple[RoutePlan, RouteEvaluation]:
        p = task.params
        xy, a, b = task.arrays()
        D = K.travel_matrix(xy, p.p_tra)
        routes, lens, _ = self.solve_arrays(D, a, b, p.n_v, p.p_ser, p.beta, rng)
        ids = [j.id for j in task.jobs]
        plan = RoutePlan(tuple(tuple(ids[k - 1] for k in routes[r, :lens[r]])
                               for r in range(p.n_v)))
        return plan, evaluate_plan(plan, task)


def solve_vrpstw(task: RoutingTask, max_sweeps=500, n_restarts=10, time_limit=None, rng=None):
    return VRPSTWSolver(max_sweeps, n_restarts, time_limit).solve(task, rng)


def construction_plan(task: RoutingTask) -> tuple[RoutePlan, RouteEvaluation]:
    """The cheapest-insertion plan before any local search."""
    return VRPSTWSolver(max_sweeps=0, n_restarts=0).solve(task)
