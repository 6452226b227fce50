"""Mixed-integer formulation of one day's routing, for external cross-validation.

Variables: ``y_i_j_v`` (vehicle ``v`` drives from node ``i`` to ``j``),
``z_i`` arrival, ``w_i`` wait and ``d_i`` delay, with node 0 the depot.

With ``pin_arrivals`` (default) two extra constraint families make ``z`` the
physical arrival time: the time-propagation inequality becomes an equality on
used arcs, and the depot departs without waiting. Without them a solver may
report a later ``z`` than the vehicle needs and hide waiting time, so the
optimum becomes a lower bound on the scheduled cost.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .evaluate import RoutingTask


@dataclass
class LinearModel:
    objective: dict = field(default_factory=dict)
    constraints: list = field(default_factory=list)   # (name, {var: coef}, sense, rhs)
    bounds: dict = field(default_factory=dict)        # var -> (lo, hi)
    binaries: list = field(default_factory=list)

    @property
    def variables(self) -> list:
        names = list(self.binaries)
        names += [v for v in self.bounds if v not in set(self.binaries)]
        return names


def build_milp(task: RoutingTask, pin_arrivals: bool = True) -> LinearModel:
    p = task.params
    pts = [task.depot] + [j.coords for j in task.jobs]
    n = len(task.jobs)
    nodes = range(n + 1)
    cust = range(1, n + 1)
    vehicles = range(p.n_v)
    D = [[p.p_tra * math.hypot(u[0] - q[0], u[1] - q[1]) for q in pts] for u in pts]
    a = [0.0] + [j.window[0] for j in task.jobs]
    b = [math.inf] + [j.window[1] for j in task.jobs]
    serv = [0.0] + [p.p_ser] * n

    d_max = max((max(row) for row in D), default=0.0)
    a_max = max(a)
    t_max = a_max + n * (p.p_ser + d_max) + d_max
    big_m = t_max + p.p_ser + d_max + a_max

    m = LinearModel()

    def y(i, j, v):
        return f"y_{i}_{j}_{v}"

    for v in vehicles:
        for i in nodes:
            for j in nodes:
                if i != j:
                    m.binaries.append(y(i, j, v))
                    m.bounds[y(i, j, v)] = (0.0, 1.0)
                    if D[i][j]:
                        m.objective[y(i, j, v)] = D[i][j]
    for i in nodes:
        m.bounds[f"z_{i}"] = (0.0, t_max)
        m.bounds[f"w_{i}"] = (0.0, a_max)
        m.bounds[f"d_{i}"] = (0.0, t_max)
    for i in cust:
        m.objective[f"w_{i}"] = 1.0
        if p.beta:
            m.objective[f"d_{i}"] = p.beta

    for i in cust:
        m.constraints.append((f"visit_{i}", {y(i, j, v): 1.0 for v in vehicles
                                              for j in nodes if j != i}, "=", 1.0))
    for v in vehicles:
        back = {y(i, 0, v): 1.0 for i in cust}
        out = {y(0, j, v): -1.0 for j in cust}
        m.constraints.append((f"depot_balance_{v}", {**back, **out}, "=", 0.0))
        m.constraints.append((f"depot_once_{v}", {y(0, j, v): 1.0 for j in cust}, "<=", 1.0))
        for i in cust:
            row = {}
            for j in nodes:
                if j != i:
                    row[y(i, j, v)] = row.get(y(i, j, v), 0.0) + 1.0
                    row[y(j, i, v)] = row.get(y(j, i, v), 0.0) - 1.0
            m.constraints.append((f"flow_{i}_{v}", row, "=", 0.0))
    # the return leg carries no timing constraint: z_0 is the departure time
    for v in vehicles:
        for i in nodes:
            for j in cust:
                if i == j:
                    continue
                row = {f"z_{j}": 1.0, f"z_{i}": -1.0, f"w_{i}": -1.0, y(i, j, v): -big_m}
                m.constraints.append((f"time_{i}_{j}_{v}", row, ">=", serv[i] + D[i][j] - big_m))
                if pin_arrivals:
                    row = {f"z_{j}": 1.0, f"z_{i}": -1.0, f"w_{i}": -1.0, y(i, j, v): big_m}
                    m.constraints.append((f"pin_{i}_{j}_{v}", row, "<=",
                                          serv[i] + D[i][j] + big_m))
    for i in cust:
        m.constraints.append((f"early_{i}", {f"z_{i}": 1.0, f"w_{i}": 1.0}, ">=", a[i]))
        if math.isfinite(b[i]):
            m.constraints.append((f"late_{i}", {f"z_{i}": 1.0, f"d_{i}": -1.0}, "<=", b[i]))
    m.constraints.append(("depart", {"z_0": 1.0}, "=", 0.0))
    if pin_arrivals:
        m.constraints.append(("depart_nowait", {"w_0": 1.0}, "=", 0.0))
    return m


def _terms(coefs: dict) -> str:
    out = []
    for k, (var, c) in enumerate(coefs.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = var if mag == 1.0 else f"{mag!r} {var}"
        out.append(f"{sign} {body}" if k or sign == "-" else body)
    return " ".join(out) if out else "0"


def export_milp(task: RoutingTask, pin_arrivals: bool = True) -> str:
    """Render the formulation in CPLEX LP text form."""
    m = build_milp(task, pin_arrivals)
    lines = [f"\\ VRPSTW: {len(task.jobs)} jobs, {task.params.n_v} vehicles",
             "Minimize", f" obj: {_terms(m.objective)}", "Subject To"]
    for name, row, sense, rhs in m.constraints:
        lines.append(f" {name}: {_terms(row)} {sense} {rhs!r}")
    lines.append("Bounds")
    binaries = set(m.binaries)
    for var, (lo, hi) in m.bounds.items():
        if var not in binaries:
            lines.append(f" {lo!r} <= {var} <= {hi!r}")
    lines.append("Binaries")
    lines.extend(f" {v}" for v in m.binaries)
    lines.append("End")
    return "\n".join(lines) + "\n"
