"""Day-by-day simulation of slot commitments and end-of-day routing.

Each day runs one assignment epoch per arriving customer and then one routing
epoch for the next day's committed customers. After the last arrival day,
routing-only epochs clear the customers still committed to later days.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from ._validation import check_rng
from .calendar import (Customer, SlotId, SystemParams, assignable_slots, assignment_penalty,
                       slot_window)
from .instance import Instance
from .routing import EMPTY_EVALUATION, Job, RouteEvaluation, RoutePlan, RoutingTask

TSA = "TSA"
RP = "RP"


class PolicyError(RuntimeError):
    pass


@dataclass(frozen=True)
class State:
    day: int
    epoch: int
    new_customer: Optional[Customer]
    assigned: tuple[Customer, ...] = ()
    decisions: tuple[SlotId, ...] = ()

    def __post_init__(self):
        if len(self.assigned) != len(self.decisions):
            raise ValueError("assigned customers and decisions must align")


@dataclass(frozen=True)
class EpochOutcome:
    kind: str
    day: int
    epoch: int
    cost: float
    n_assigned: int = 0
    customer_id: Optional[int] = None
    slot: Optional[SlotId] = None
    satisfied: Optional[bool] = None
    service_day: Optional[int] = None
    plan: Optional[RoutePlan] = None
    evaluation: Optional[RouteEvaluation] = None
    decision_time: float = 0.0


@dataclass
class EpisodeResult:
    ledger: list = field(default_factory=list)
    served: dict = field(default_factory=dict)
    # customer id -> (preferences, slot, arrived dynamically)
    decisions: dict = field(default_factory=dict)

    @property
    def total_cost(self) -> float:
        return sum(epoch_cost(o) for o in self.ledger)

    @property
    def penalties(self) -> float:
        return sum(o.cost for o in self.ledger if o.kind == TSA)

    def _route_sum(self, attr):
        return sum(getattr(o.evaluation, attr) for o in self.ledger if o.kind == RP)

    @property
    def travel(self) -> float:
        return self._route_sum("travel")

    @property
    def wait(self) -> float:
        return self._route_sum("wait")

    @property
    def delay_penalty(self) -> float:
        return self._route_sum("delay_penalty")

    @property
    def decision_times(self) -> list:
        return [o.decision_time for o in self.ledger if o.kind == TSA]

    @property
    def n_dynamic(self) -> int:
        return sum(1 for *_, dyn in self.decisions.values() if dyn)

    @property
    def n_satisfied(self) -> int:
        return sum(1 for prefs, slot, dyn in self.decisions.values() if dyn and slot in prefs)


def apply_tsa(state: State, slot: SlotId, calendar) -> State:
    if state.new_customer is None:
        raise PolicyError("no customer awaits an assignment")
    if slot not in assignable_slots(state.day, calendar):
        raise PolicyError(
            f"slot {slot} is outside the assignable window of day {state.day}")
    return State(state.day, state.epoch + 1, None,
                 state.assigned + (state.new_customer,), state.decisions + (slot,))


def routing_task(customers: Sequence[Customer], slots: Sequence[SlotId], depot,
                 params: SystemParams) -> RoutingTask:
    cal = params.calendar
    jobs = tuple(Job(c.id, c.coords, slot_window(s, cal)) for c, s in zip(customers, slots))
    return RoutingTask(depot, jobs, params)


def apply_rp(state: State, router, depot, params: SystemParams, rng=None):
    """Route the customers committed to ``state.day + 1`` and advance the day."""
    if state.new_customer is not None:
        raise PolicyError("routing epoch reached with an unassigned customer")
    target = state.day + 1
    picked = [(c, s) for c, s in zip(state.assigned, state.decisions) if s.day == target]
    kept = [(c, s) for c, s in zip(state.assigned, state.decisions) if s.day != target]
    if picked:
        task = routing_task([c for c, _ in picked], [s for _, s in picked], depot, params)
        plan, evaluation = router.solve(task, rng)
    else:
        plan, evaluation = RoutePlan(((),) * params.n_v), EMPTY_EVALUATION
    outcome = EpochOutcome(RP, state.day, state.epoch, evaluation.objective,
                           n_assigned=len(state.assigned), service_day=target,
                           plan=plan, evaluation=evaluation)
    nxt = State(target, 1, None, tuple(c for c, _ in kept), tuple(s for _, s in kept))
    return nxt, outcome


def epoch_cost(outcome: EpochOutcome) -> float:
    return outcome.cost


def _ensure_fitted(policy, inst: Instance):
    fitted = getattr(policy, "__sklearn_is_fitted__", None)
    if fitted is not None and not fitted():
        policy.fit(inst.params, inst.gen)


def run_episode(inst: Instance, policy, router, rng=None) -> EpisodeResult:
    rng = check_rng(rng)
    policy_rng, router_rng = rng.spawn(2)
    _ensure_fitted(policy, inst)
    params = inst.params
    cal = params.calendar
    T = inst.gen.horizon_days
    result = EpisodeResult()
    for c, s in inst.preexisting:
        result.decisions[c.id] = (c.preferences, s, False)
    state = State(0, 1, None, tuple(c for c, _ in inst.preexisting),
                  tuple(s for _, s in inst.preexisting))

    def route(state):
        state, out = apply_rp(state, router, inst.depot, params, router_rng)
        result.ledger.append(out)
        result.served[out.service_day] = sum(len(r) for r in out.plan.routes)
        return state

    for t in range(T):
        allowed = assignable_slots(t, cal)
        for k, cust in enumerate(inst.arrivals[t], start=1):
            state = replace(state, day=t, epoch=k, new_customer=cust)
            tic = time.perf_counter()
            slot = policy.decide(state, allowed, policy_rng)
            elapsed = time.perf_counter() - tic
            if slot not in allowed:
                raise PolicyError(
                    f"{type(policy).__name__} returned slot {slot} for customer {cust.id} "
                    f"on day {t}, epoch {k}; allowed days are {allowed[0].day}..{allowed[-1].day}")
            pen = assignment_penalty(cust.preferences, slot, params.alpha)
            result.ledger.append(EpochOutcome(
                TSA, t, k, pen, n_assigned=len(state.assigned), customer_id=cust.id,
                slot=slot, satisfied=slot in cust.preferences,
                decision_time=elapsed))
            result.decisions[cust.id] = (cust.preferences, slot, True)
            state = apply_tsa(state, slot, cal)
        state = replace(state, day=t, epoch=len(inst.arrivals[t]) + 1)
        state = route(state)
    for t in range(T, T + cal.lookahead_days - 1):
        state = route(replace(state, day=t, epoch=1))
    if state.assigned:
        raise RuntimeError(f"{len(state.assigned)} customers left unrouted after the tail days")
    return result


def trace_lines(result: EpisodeResult):
    """One JSON document per epoch."""
    for o in result.ledger:
        rec = {"kind": o.kind, "day": o.day, "epoch": o.epoch, "n_assigned": o.n_assigned,
               "cost": o.cost}
        if o.kind == TSA:
            rec.update(customer=o.customer_id, slot=[o.slot.day, o.slot.half],
                       satisfied=o.satisfied)
        else:
            rec.update(service_day=o.service_day,
                       routes=[list(r) for r in o.plan.routes])
        yield json.dumps(rec)


def write_trace(result: EpisodeResult, path):
    with open(path, "w") as fh:
        for line in trace_lines(result):
            fh.write(line + "\n")
