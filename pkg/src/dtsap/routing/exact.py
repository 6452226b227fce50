"""Exhaustive VRPSTW oracle for small tasks.

Every ordered sequence of distinct jobs is a candidate single-vehicle route, so
one depth-first walk over sequences yields the cheapest route for every job
subset. The best plan is then the cheapest split of the job set into at most
``n_v`` subsets.
"""
from __future__ import annotations

import itertools
import math

from .evaluate import RoutePlan, RouteEvaluation, RoutingError, RoutingTask, evaluate_plan

MAX_EXACT_JOBS = 9
TIE_TOL = 1e-9


def _best_routes_by_subset(task: RoutingTask):
    p = task.params
    jobs = task.jobs
    n = len(jobs)
    pts = [task.depot] + [j.coords for j in jobs]
    D = [[p.p_tra * math.hypot(u[0] - v[0], u[1] - v[1]) for v in pts] for u in pts]
    a = [0.0] + [j.window[0] for j in jobs]
    b = [math.inf] + [j.window[1] for j in jobs]
    s, beta = p.p_ser, p.beta
    best = {0: (0.0, ())}

    def walk(mask, seq, prev, clock, cost):
        for j in range(1, n + 1):
            bit = 1 << (j - 1)
            if mask & bit:
                continue
            leg = D[prev][j]
            z = clock + leg
            c = cost + leg
            start = z
            if z < a[j]:
                c += a[j] - z
                start = a[j]
            if z > b[j]:
                c += beta * (z - b[j])
            m2 = mask | bit
            seq2 = seq + (j,)
            closed = c + D[j][0]
            cur = best.get(m2)
            if cur is None or closed < cur[0] - TIE_TOL:
                best[m2] = (closed, seq2)
            walk(m2, seq2, j, start + s, c)

    walk(0, (), 0, 0.0, 0.0)
    return best


def _partitions(mask, k):
    """Set partitions of ``mask`` into at most ``k`` non-empty blocks."""
    if mask == 0:
        yield ()
        return
    if k == 0:
        return
    low = mask & -mask
    rest = mask ^ low
    sub = rest
    while True:
        block = sub | low
        for tail in _partitions(mask ^ block, k - 1):
            yield (block,) + tail
        if sub == 0:
            break
        sub = (sub - 1) & rest


def solve_vrpstw_exact(task: RoutingTask) -> tuple[RoutePlan, RouteEvaluation]:
    """Global minimizer by enumeration; ties go to the lexicographically smallest plan.

    Plans are compared as lists of job-index sequences, non-empty routes sorted
    and empty routes last.
    """
    n = len(task.jobs)
    if n > MAX_EXACT_JOBS:
        raise RoutingError(f"instance too large for exact solve: {n} jobs > {MAX_EXACT_JOBS}")
    n_v = task.params.n_v
    best_by_subset = _best_routes_by_subset(task)
    full = (1 << n) - 1
    best_cost, best_key = math.inf, None
    for blocks in _partitions(full, n_v):
        cost = sum(best_by_subset[blk][0] for blk in blocks)
        key = tuple(sorted(best_by_subset[blk][1] for blk in blocks))
        if cost < best_cost - TIE_TOL or (cost <= best_cost + TIE_TOL and key < best_key):
            best_cost, best_key = cost, key
    ids = [j.id for j in task.jobs]
    routes = [tuple(ids[k - 1] for k in seq) for seq in best_key]
    routes += [()] * (n_v - len(routes))
    plan = RoutePlan(tuple(routes))
    return plan, evaluate_plan(plan, task)


def iter_plans(task: RoutingTask):
    """Every assignment of ordered job sequences to the labelled vehicles.

    Brute force over ``n_v**n`` vehicle labellings times the orderings within
    each vehicle; intended only for cross-checking on tiny tasks.
    """
    ids = [j.id for j in task.jobs]
    n_v = task.params.n_v
    for labels in itertools.product(range(n_v), repeat=len(ids)):
        groups = [[ids[i] for i in range(len(ids)) if labels[i] == v] for v in range(n_v)]
        for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
            yield RoutePlan(tuple(perms))
