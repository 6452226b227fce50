"""Single-day and multi-day routing with soft time windows."""
from .evaluate import (EMPTY_EVALUATION, Job, JobSchedule, RouteEvaluation, RoutePlan,
                       RoutingError, RoutingTask, evaluate_plan, evaluate_route)
from .exact import MAX_EXACT_JOBS, iter_plans, solve_vrpstw_exact
from .milp import build_milp, export_milp
from .multiperiod import MultiPeriodPlanner, PeriodJob, ScenarioPlan, solve_multiperiod
from .solver import VRPSTWSolver, construction_plan, solve_vrpstw

__all__ = [
    "EMPTY_EVALUATION", "Job", "JobSchedule", "RouteEvaluation", "RoutePlan", "RoutingError",
    "RoutingTask", "evaluate_plan", "evaluate_route", "MAX_EXACT_JOBS", "iter_plans",
    "solve_vrpstw_exact", "build_milp", "export_milp", "MultiPeriodPlanner", "PeriodJob",
    "ScenarioPlan", "solve_multiperiod", "VRPSTWSolver", "construction_plan", "solve_vrpstw",
]
