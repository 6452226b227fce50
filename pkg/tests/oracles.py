"""Reference implementations used only by the tests.

Each one is written from the model definition, without reusing the package's
evaluation or search code.
"""
from __future__ import annotations

import json
import math
import re

import numpy as np

# (criterion, passed, detail) lines filled in by the acceptance tests
ACCEPTANCE_LINES = []

GRID_STEP = 0.05
GRID_MAX = 1.0


def wait_grid_minimum(depot, jobs, route, p_tra, p_ser, beta,
                      step=GRID_STEP, max_extra=GRID_MAX):
    """Best route cost when each job may add extra waiting on a grid.

    ``jobs`` maps id -> (coords, (a, b)). Every reachable departure time is
    kept (no dominance pruning); duplicates are merged on the minimum cost.
    """
    extras = np.arange(0.0, max_extra + step / 2, step)
    times = np.array([0.0])
    costs = np.array([0.0])
    prev = depot
    for jid in route:
        xy, (a, b) = jobs[jid]
        leg = p_tra * math.dist(prev, xy)
        z = times + leg
        natural = np.maximum(z, a)
        start = natural[:, None] + extras[None, :]
        cost = (costs + leg + beta * np.maximum(0.0, z - b))[:, None] + (start - z[:, None])
        t_next = (start + p_ser).ravel()
        c_next = cost.ravel()
        key = np.round(t_next, 9)
        order = np.lexsort((c_next, key))
        key, c_next, t_next = key[order], c_next[order], t_next[order]
        first = np.ones(len(key), dtype=bool)
        first[1:] = key[1:] != key[:-1]
        times, costs = t_next[first], c_next[first]
        prev = xy
    back = p_tra * math.dist(prev, depot) if route else 0.0
    return float(costs.min() + back)


def ledger_fold(lines):
    """Total cost and routed ids from an epoch trace (one JSON object per line)."""
    total = 0.0
    routed = []
    assigned = {}
    for line in lines:
        rec = json.loads(line)
        total += rec["cost"]
        if rec["kind"] == "TSA":
            assigned[rec["customer"]] = tuple(rec["slot"])
        else:
            for r in rec["routes"]:
                routed.extend(r)
    return total, routed, assigned


# -- MILP ---------------------------------------------------------------------


def _parse_terms(text):
    text = text.strip()
    out = {}
    if text == "0":
        return out
    tokens = text.split()
    sign, coef = 1.0, None
    for tok in tokens:
        if tok in "+-":
            sign = -1.0 if tok == "-" else 1.0
        elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            out[tok] = out.get(tok, 0.0) + sign * (1.0 if coef is None else coef)
            sign, coef = 1.0, None
        else:
            coef = float(tok)
    return out


def parse_lp(text):
    """Minimal reader for the LP subset the exporter writes."""
    section = None
    objective, constraints, bounds, binaries = {}, [], {}, []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line in ("Minimize", "Subject To", "Bounds", "Binaries", "End"):
            section = line
            continue
        if section == "Minimize":
            objective = _parse_terms(line.split(":", 1)[1])
        elif section == "Subject To":
            name, body = line.split(":", 1)
            m = re.match(r"(.*)\s(<=|>=|=)\s(\S+)$", body)
            constraints.append((name.strip(), _parse_terms(m.group(1)), m.group(2),
                                float(m.group(3))))
        elif section == "Bounds":
            lo, var, hi = re.match(r"(\S+) <= (\S+) <= (\S+)", line).groups()
            bounds[var] = (float(lo), float(hi))
        elif section == "Binaries":
            binaries.append(line)
    return objective, constraints, bounds, binaries


def solve_lp_text(text):
    """Solve an exported model with scipy's HiGHS wrapper; returns the optimum."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    objective, constraints, bounds, binaries = parse_lp(text)
    names = list(binaries) + [v for v in bounds if v not in set(binaries)]
    for _, row, _, _ in constraints:
        for v in row:
            if v not in bounds and v not in binaries:
                raise AssertionError(f"undeclared variable {v}")
    idx = {v: k for k, v in enumerate(names)}
    c = np.zeros(len(names))
    for v, coef in objective.items():
        c[idx[v]] = coef
    A = np.zeros((len(constraints), len(names)))
    lo = np.empty(len(constraints))
    hi = np.empty(len(constraints))
    for r, (_, row, sense, rhs) in enumerate(constraints):
        for v, coef in row.items():
            A[r, idx[v]] += coef
        lo[r] = rhs if sense in (">=", "=") else -np.inf
        hi[r] = rhs if sense in ("<=", "=") else np.inf
    lb = np.array([bounds.get(v, (0.0, 1.0))[0] for v in names])
    ub = np.array([bounds.get(v, (0.0, 1.0))[1] for v in names])
    integrality = np.array([1 if v in set(binaries) else 0 for v in names])
    res = milp(c, constraints=LinearConstraint(A, lo, hi), bounds=Bounds(lb, ub),
               integrality=integrality, options={"mip_rel_gap": 1e-9})
    if not res.success:
        raise AssertionError(res.message)
    return float(res.fun)
