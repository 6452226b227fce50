"""Slot-assignment policies."""
from .base import BasePolicy
from .rollout import ALL, BASE_PRUNED, DayCostCache, RolloutPolicy, default_fast_router
from .rules import RandomPolicy, SegmentationPolicy, ran_decide, seg_decide, seg_region, seg_slot
from .sampling import sample_future_customers
from .sbp import FINITE, INFINITE, ScenarioPolicy, consensus, slot_at


def make_policy(name: str, **params) -> BasePolicy:
    """Build a policy from its benchmark name (RAN, SEG, RAN-RE, SEG-RE, SBP)."""
    key = name.upper()
    if key == "RAN":
        return RandomPolicy(**params)
    if key == "SEG":
        return SegmentationPolicy(**params)
    if key == "RAN-RE":
        return RolloutPolicy(base=RandomPolicy(), **params)
    if key == "SEG-RE":
        return RolloutPolicy(base=SegmentationPolicy(), **params)
    if key == "SBP":
        return ScenarioPolicy(**params)
    raise ValueError(f"unknown policy {name!r}")


__all__ = [
    "BasePolicy", "ALL", "BASE_PRUNED", "DayCostCache", "RolloutPolicy", "default_fast_router",
    "RandomPolicy", "SegmentationPolicy", "ran_decide", "seg_decide", "seg_region", "seg_slot",
    "sample_future_customers", "FINITE", "INFINITE", "ScenarioPolicy", "consensus", "slot_at",
    "make_policy",
]
