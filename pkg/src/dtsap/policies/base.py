from __future__ import annotations

from sklearn.base import BaseEstimator

from ..calendar import SystemParams
from ..instance import GenParams


class BasePolicy(BaseEstimator):
    """Slot-assignment policy.

    ``fit(sys, gen)`` records the system and the arrival distribution the policy
    plans against; ``decide(state, allowed, rng)`` returns one of ``allowed``.
    Subclasses that never look at the already-assigned customers set
    ``state_independent = True``, which lets the rollout reuse their future
    decisions across candidate actions.
    """

    state_independent = False

    def fit(self, sys: SystemParams, gen: GenParams):
        self.sys_ = sys
        self.gen_ = gen
        return self

    def __sklearn_is_fitted__(self):
        return hasattr(self, "sys_")

    def decide(self, state, allowed, rng):
        raise NotImplementedError

    def candidate_actions(self, state, allowed):
        """Scored slots; rollouts with pruning keep those with a non-zero score."""
        return [(slot, 1.0) for slot in allowed]
