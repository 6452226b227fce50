"""System presets S1-S6 (customer volumes, fleet size, travel and service scaling)."""
from __future__ import annotations

from .calendar import SystemParams
from .instance import GenParams

# name: (n_pre, n_daily, n_v, p_tra, p_ser)
_TABLE = {
    "S1": (30, 15, 2, 1.0, 0.6667),
    "S2": (30, 15, 3, 1.5, 1.0),
    "S3": (30, 15, 4, 2.0, 1.3333),
    "S4": (40, 20, 2, 0.75, 0.5),
    "S5": (40, 20, 3, 1.125, 0.75),
    "S6": (40, 20, 4, 1.5, 1.0),
}

PRESETS = tuple(_TABLE)


def preset(name: str, horizon_days: int = 10, alpha: float = 2.0,
           beta: float = 3.0) -> tuple[SystemParams, GenParams]:
    try:
        n_pre, n_daily, n_v, p_tra, p_ser = _TABLE[name.upper()]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    sys = SystemParams(n_v=n_v, alpha=alpha, beta=beta, p_tra=p_tra, p_ser=p_ser)
    gen = GenParams(horizon_days=horizon_days, n_pre_mean=n_pre, n_daily_mean=n_daily)
    return sys, gen
