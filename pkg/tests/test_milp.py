import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dtsap.calendar import SystemParams
from dtsap.routing import Job, RoutingTask, build_milp, export_milp, solve_vrpstw_exact

from oracles import parse_lp, solve_lp_text

pytest.importorskip("scipy")


def small_task(seed, n=3, n_v=2):
    rng = np.random.default_rng(seed)
    windows = ((0.0, 5.0), (4.0, 9.0), (0.0, 1.0))
    jobs = tuple(Job(k, tuple(rng.uniform(0, 2, 2)), windows[rng.integers(3)])
                 for k in range(1, n + 1))
    params = SystemParams(n_v=n_v, p_tra=float(rng.uniform(0.8, 2.0)), p_ser=0.7)
    return RoutingTask((1.0, 1.0), jobs, params)


def test_lp_text_parses_back_to_the_model():
    task = small_task(0)
    model = build_milp(task)
    objective, constraints, bounds, binaries = parse_lp(export_milp(task))
    assert objective == pytest.approx(model.objective)
    assert binaries == model.binaries
    assert len(constraints) == len(model.constraints)
    for (name, row, sense, rhs), (n2, r2, s2, h2) in zip(model.constraints, constraints):
        assert (name, sense) == (n2, s2)
        assert h2 == pytest.approx(rhs)
        assert r2 == pytest.approx(row)
    assert set(bounds) == set(model.bounds) - set(model.binaries)


def test_model_size():
    task = small_task(1, n=4, n_v=3)
    model = build_milp(task)
    assert len(model.binaries) == 3 * 5 * 4
    names = {c[0] for c in model.constraints}
    assert {"visit_1", "depot_once_2", "flow_4_0", "early_3", "depart"} <= names
    assert not any(n.startswith("time_") and n.split("_")[2] == "0" for n in names)
    literal = build_milp(task, pin_arrivals=False)
    assert not any(c[0].startswith("pin_") for c in literal.constraints)


def test_open_deadline_has_no_late_constraint():
    task = RoutingTask((0, 0), (Job(1, (1, 0), (0.0, math.inf)),), SystemParams(n_v=1))
    names = {c[0] for c in build_milp(task).constraints}
    assert "late_1" not in names and "early_1" in names


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_pinned_model_optimum_equals_exact_oracle(seed):
    task = small_task(seed)
    exact = solve_vrpstw_exact(task)[1].objective
    assert solve_lp_text(export_milp(task)) == pytest.approx(exact, abs=1e-5)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_literal_model_is_a_lower_bound(seed):
    task = small_task(seed)
    exact = solve_vrpstw_exact(task)[1].objective
    assert solve_lp_text(export_milp(task, pin_arrivals=False)) <= exact + 1e-5
