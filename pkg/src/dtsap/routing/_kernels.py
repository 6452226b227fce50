"""Compiled inner loops for the routing heuristics.

Every kernel works on node indices into a travel-time matrix ``D`` whose row 0
is the depot, with per-node earliest times ``a`` and soft deadlines ``b``.
Routes live in an ``(n_v, cap)`` int64 array plus a length vector.
"""
import numpy as np
from numba import njit

EPS = 1e-9


@njit(cache=True)
def seq_cost(seq, n, D, a, b, s, beta):
    if n == 0:
        return 0.0
    cost = 0.0
    clock = 0.0
    prev = 0
    for k in range(n):
        j = seq[k]
        leg = D[prev, j]
        z = clock + leg
        cost += leg
        start = z
        if z < a[j]:
            cost += a[j] - z
            start = a[j]
        if z > b[j]:
            cost += beta * (z - b[j])
        clock = start + s
        prev = j
    return cost + D[prev, 0]


@njit(cache=True)
def insert_cost(seq, n, node, pos, D, a, b, s, beta):
    """Cost of ``seq[:n]`` with ``node`` inserted before position ``pos``."""
    cost = 0.0
    clock = 0.0
    prev = 0
    for k in range(n + 1):
        if k < pos:
            j = seq[k]
        elif k == pos:
            j = node
        else:
            j = seq[k - 1]
        leg = D[prev, j]
        z = clock + leg
        cost += leg
        start = z
        if z < a[j]:
            cost += a[j] - z
            start = a[j]
        if z > b[j]:
            cost += beta * (z - b[j])
        clock = start + s
        prev = j
    return cost + D[prev, 0]


@njit(cache=True)
def replace_cost(seq, n, pos, node, D, a, b, s, beta):
    cost = 0.0
    clock = 0.0
    prev = 0
    for k in range(n):
        j = node if k == pos else seq[k]
        leg = D[prev, j]
        z = clock + leg
        cost += leg
        start = z
        if z < a[j]:
            cost += a[j] - z
            start = a[j]
        if z > b[j]:
            cost += beta * (z - b[j])
        clock = start + s
        prev = j
    return cost + D[prev, 0]


@njit(cache=True)
def reversed_cost(seq, n, i, jj, D, a, b, s, beta):
    """Cost of ``seq[:n]`` with the segment ``i..jj`` reversed (2-opt)."""
    cost = 0.0
    clock = 0.0
    prev = 0
    for k in range(n):
        if i <= k <= jj:
            j = seq[i + jj - k]
        else:
            j = seq[k]
        leg = D[prev, j]
        z = clock + leg
        cost += leg
        start = z
        if z < a[j]:
            cost += a[j] - z
            start = a[j]
        if z > b[j]:
            cost += beta * (z - b[j])
        clock = start + s
        prev = j
    return cost + D[prev, 0]


@njit(cache=True)
def best_insertion(routes, lens, costs, node, D, a, b, s, beta):
    """Cheapest (delta, route, position) for inserting ``node``.

    Only the first empty route is tried; all empty routes are equivalent.
    """
    best = np.inf
    best_r = -1
    best_p = -1
    seen_empty = False
    for r in range(routes.shape[0]):
        n = lens[r]
        if n == 0:
            if seen_empty:
                continue
            seen_empty = True
        for p in range(n + 1):
            delta = insert_cost(routes[r], n, node, p, D, a, b, s, beta) - costs[r]
            if delta < best - EPS:
                best = delta
                best_r = r
                best_p = p
    return best, best_r, best_p


@njit(cache=True)
def apply_insertion(routes, lens, r, p, node):
    n = lens[r]
    for k in range(n, p, -1):
        routes[r, k] = routes[r, k - 1]
    routes[r, p] = node
    lens[r] = n + 1


@njit(cache=True)
def construct(order, routes, lens, costs, D, a, b, s, beta):
    """Sequential cheapest insertion of ``order`` into the given routes (in place)."""
    for k in range(order.shape[0]):
        node = order[k]
        delta, r, p = best_insertion(routes, lens, costs, node, D, a, b, s, beta)
        apply_insertion(routes, lens, r, p, node)
        costs[r] += delta
    total = 0.0
    for r in range(routes.shape[0]):
        costs[r] = seq_cost(routes[r], lens[r], D, a, b, s, beta)
        total += costs[r]
    return total


@njit(cache=True)
def relocate_pass(routes, lens, costs, D, a, b, s, beta, scratch):
    nv = routes.shape[0]
    for r1 in range(nv):
        n1 = lens[r1]
        for i in range(n1):
            node = routes[r1, i]
            m = 0
            for k in range(n1):
                if k != i:
                    scratch[m] = routes[r1, k]
                    m += 1
            c_removed = seq_cost(scratch, m, D, a, b, s, beta)
            first_empty = -1
            for r2 in range(nv):
                if r2 == r1:
                    for p in range(m + 1):
                        if p == i:
                            continue
                        c = insert_cost(scratch, m, node, p, D, a, b, s, beta)
                        if c < costs[r1] - EPS:
                            for k in range(m):
                                routes[r1, k] = scratch[k]
                            lens[r1] = m
                            apply_insertion(routes, lens, r1, p, node)
                            costs[r1] = c
                            return True
                    continue
                n2 = lens[r2]
                if n2 == 0:
                    if first_empty >= 0 or n1 == 1:
                        continue
                    first_empty = r2
                for p in range(n2 + 1):
                    c = insert_cost(routes[r2], n2, node, p, D, a, b, s, beta)
                    if c_removed + c < costs[r1] + costs[r2] - EPS:
                        for k in range(m):
                            routes[r1, k] = scratch[k]
                        lens[r1] = m
                        costs[r1] = c_removed
                        apply_insertion(routes, lens, r2, p, node)
                        costs[r2] = c
                        return True
    return False


@njit(cache=True)
def two_opt_pass(routes, lens, costs, D, a, b, s, beta):
    for r in range(routes.shape[0]):
        n = lens[r]
        for i in range(n - 1):
            for j in range(i + 1, n):
                c = reversed_cost(routes[r], n, i, j, D, a, b, s, beta)
                if c < costs[r] - EPS:
                    lo = i
                    hi = j
                    while lo < hi:
                        tmp = routes[r, lo]
                        routes[r, lo] = routes[r, hi]
                        routes[r, hi] = tmp
                        lo += 1
                        hi -= 1
                    costs[r] = c
                    return True
    return False


@njit(cache=True)
def swap_pass(routes, lens, costs, D, a, b, s, beta):
    nv = routes.shape[0]
    for r1 in range(nv):
        for r2 in range(r1 + 1, nv):
            n1 = lens[r1]
            n2 = lens[r2]
            for i in range(n1):
                u = routes[r1, i]
                for j in range(n2):
                    v = routes[r2, j]
                    c1 = replace_cost(routes[r1], n1, i, v, D, a, b, s, beta)
                    c2 = replace_cost(routes[r2], n2, j, u, D, a, b, s, beta)
                    if c1 + c2 < costs[r1] + costs[r2] - EPS:
                        routes[r1, i] = v
                        routes[r2, j] = u
                        costs[r1] = c1
                        costs[r2] = c2
                        return True
    return False


@njit(cache=True)
def sweep(routes, lens, costs, D, a, b, s, beta, scratch):
    """One improvement sweep: relocate, then 2-opt, then swap, each to exhaustion.

    Returns the number of improving moves applied.
    """
    moves = 0
    while relocate_pass(routes, lens, costs, D, a, b, s, beta, scratch):
        moves += 1
    while two_opt_pass(routes, lens, costs, D, a, b, s, beta):
        moves += 1
    while swap_pass(routes, lens, costs, D, a, b, s, beta):
        moves += 1
    return moves


@njit(cache=True)
def travel_matrix(xy, p_tra):
    n = xy.shape[0]
    D = np.empty((n, n))
    for i in range(n):
        D[i, i] = 0.0
        for j in range(i + 1, n):
            dx = xy[i, 0] - xy[j, 0]
            dy = xy[i, 1] - xy[j, 1]
            d = p_tra * np.sqrt(dx * dx + dy * dy)
            D[i, j] = d
            D[j, i] = d
    return D
