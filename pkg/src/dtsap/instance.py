"""Stochastic instance generation, instance files and location pools."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ._validation import check_coords, check_rng
from .calendar import (Customer, SlotCalendar, SlotId, SystemParams,
                       assignable_slots)

SCHEMA_VERSION = 1


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GenParams:
    horizon_days: int = 10
    n_pre_mean: float = 30.0
    n_daily_mean: float = 15.0
    count_sd: float = 3.0
    area: float = 2.0
    depot: Optional[tuple[float, float]] = None
    n_p: int = 3
    location_pool: Optional[tuple[tuple[float, float], ...]] = None

    def __post_init__(self):
        if self.horizon_days < 1:
            raise ValueError("horizon_days must be >= 1")
        if self.n_pre_mean < 0 or self.n_daily_mean < 0 or self.count_sd < 0:
            raise ValueError("count means and count_sd must be non-negative")
        if not self.area > 0:
            raise ValueError("area must be positive")
        if self.n_p < 1:
            raise ValueError("n_p must be >= 1")
        depot = self.depot
        if depot is None:
            depot = (self.area / 2.0, self.area / 2.0)
        object.__setattr__(self, "depot", check_coords(depot, "depot"))
        if self.location_pool is not None:
            pool = tuple(check_coords(p, "pool entry") for p in self.location_pool)
            if not pool:
                raise ValueError("empty pool")
            object.__setattr__(self, "location_pool", pool)


@dataclass(frozen=True)
class Instance:
    params: SystemParams
    gen: GenParams
    preexisting: tuple[tuple[Customer, SlotId], ...]
    arrivals: tuple[tuple[Customer, ...], ...]

    @property
    def depot(self) -> tuple[float, float]:
        return self.gen.depot

    @property
    def n_customers(self) -> int:
        return len(self.preexisting) + sum(len(day) for day in self.arrivals)

    def validate(self):
        cal = self.params.calendar
        if len(self.arrivals) != self.gen.horizon_days:
            raise InstanceFormatError(
                f"arrivals cover {len(self.arrivals)} days, horizon is {self.gen.horizon_days}")
        ids = set()
        day0 = set(assignable_slots(0, cal))
        customers = [c for c, _ in self.preexisting]
        for cust, slot in self.preexisting:
            if cust.arrival_day != 0:
                raise InstanceFormatError(f"pre-existing customer {cust.id} must arrive on day 0")
            if slot not in day0:
                raise InstanceFormatError(
                    f"pre-existing customer {cust.id}: slot {slot} outside assignable_slots(0)")
            if slot not in cust.preferences:
                raise InstanceFormatError(
                    f"pre-existing customer {cust.id}: assignment {slot} not among preferences")
        for t, day in enumerate(self.arrivals):
            times = [c.arrival_time for c in day]
            if times != sorted(times):
                raise InstanceFormatError(f"arrivals on day {t} are not sorted by arrival_time")
            for c in day:
                if c.arrival_day != t:
                    raise InstanceFormatError(f"customer {c.id} listed on day {t} but arrives on {c.arrival_day}")
                if not 0.0 <= c.arrival_time < cal.day_length:
                    raise InstanceFormatError(f"customer {c.id}: arrival_time outside [0, U)")
            customers.extend(day)
        pool = set(self.gen.location_pool) if self.gen.location_pool else None
        for c in customers:
            if c.id in ids:
                raise InstanceFormatError(f"duplicate customer id {c.id}")
            ids.add(c.id)
            if len(c.preferences) != self.gen.n_p:
                raise InstanceFormatError(
                    f"customer {c.id}: expected {self.gen.n_p} preferences, got {len(c.preferences)}")
            try:
                c.check_lookahead(cal)
            except ValueError as exc:
                raise InstanceFormatError(str(exc)) from None
            if pool is not None:
                if c.coords not in pool:
                    raise InstanceFormatError(f"customer {c.id}: coordinates not in location pool")
            elif not all(0.0 <= v <= self.gen.area for v in c.coords):
                raise InstanceFormatError(f"customer {c.id}: coordinates outside service area")
        return self


def sample_count(mean: float, sd: float, rng) -> int:
    """Rounded normal draw clamped below at zero."""
    if sd < 0:
        raise ValueError("sd must be non-negative")
    rng = check_rng(rng)
    draw = rng.normal(mean, sd) if sd > 0 else float(mean)
    return max(0, int(round(draw)))


def sample_preferences(t: int, n_p: int, calendar: SlotCalendar, rng) -> tuple[SlotId, ...]:
    slots = assignable_slots(t, calendar)
    if n_p > len(slots):
        raise ValueError(f"cannot draw {n_p} preferences from {len(slots)} slots")
    rng = check_rng(rng)
    idx = rng.choice(len(slots), size=n_p, replace=False)
    return tuple(sorted(slots[i] for i in idx))


def sample_locations(n: int, gen: GenParams, rng) -> np.ndarray:
    if gen.location_pool is not None:
        pool = np.asarray(gen.location_pool, dtype=float)
        return pool[rng.integers(0, len(pool), size=n)]
    return rng.uniform(0.0, gen.area, size=(n, 2))


def generate_instance(sys: SystemParams, gen: GenParams, seed) -> Instance:
    """Draw one instance; a pure function of ``(sys, gen, seed)``."""
    rng = check_rng(seed)
    cal = sys.calendar
    next_id = 0

    n_pre = sample_count(gen.n_pre_mean, gen.count_sd, rng)
    xy = sample_locations(n_pre, gen, rng)
    pre = []
    for i in range(n_pre):
        prefs = sample_preferences(0, gen.n_p, cal, rng)
        chosen = prefs[int(rng.integers(0, len(prefs)))]
        cust = Customer(next_id, (float(xy[i, 0]), float(xy[i, 1])), 0, 0.0, prefs)
        pre.append((cust, chosen))
        next_id += 1

    arrivals = []
    for t in range(gen.horizon_days):
        k = sample_count(gen.n_daily_mean, gen.count_sd, rng)
        xy = sample_locations(k, gen, rng)
        times = np.sort(rng.uniform(0.0, cal.day_length, size=k))
        day = []
        for i in range(k):
            prefs = sample_preferences(t, gen.n_p, cal, rng)
            day.append(Customer(next_id, (float(xy[i, 0]), float(xy[i, 1])), t,
                                float(times[i]), prefs))
            next_id += 1
        arrivals.append(tuple(day))
    return Instance(sys, gen, tuple(pre), tuple(arrivals))


def load_location_pool(path) -> list[tuple[float, float]]:
    """Read ``x y`` pairs, one per line; blank lines and ``#`` comments are skipped."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"location pool not found: {path}")
    pool = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        try:
            if len(parts) != 2:
                raise ValueError
            x, y = float(parts[0]), float(parts[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError
        except ValueError:
            raise InstanceFormatError(f"{path}:{lineno}: malformed row {raw!r}") from None
        pool.append((x, y))
    if not pool:
        raise InstanceFormatError(f"{path}: empty pool")
    return pool


# -- serialization -----------------------------------------------------------

def _slot(s: SlotId):
    return [s.day, s.half]


def _customer_doc(c: Customer):
    return {"id": c.id, "coords": list(c.coords), "arrival_day": c.arrival_day,
            "arrival_time": c.arrival_time, "preferences": [_slot(s) for s in c.preferences]}


def params_to_dict(sys: SystemParams) -> dict:
    cal = sys.calendar
    return {"n_v": sys.n_v, "alpha": sys.alpha, "beta": sys.beta, "p_tra": sys.p_tra,
            "p_ser": sys.p_ser,
            "calendar": {"slots_per_day": cal.slots_per_day,
                         "lookahead_days": cal.lookahead_days,
                         "day_length": cal.day_length,
                         "windows": [list(w) for w in cal.windows]}}


def params_from_dict(doc: dict) -> SystemParams:
    doc = dict(doc)
    cal = doc.pop("calendar", None)
    calendar = SlotCalendar(**{**cal, "windows": tuple(tuple(w) for w in cal["windows"])}) \
        if cal is not None else SlotCalendar()
    return SystemParams(calendar=calendar, **doc)


def gen_to_dict(gen: GenParams) -> dict:
    return {"horizon_days": gen.horizon_days, "n_pre_mean": gen.n_pre_mean,
            "n_daily_mean": gen.n_daily_mean, "count_sd": gen.count_sd, "area": gen.area,
            "depot": list(gen.depot), "n_p": gen.n_p,
            "location_pool": None if gen.location_pool is None
            else [list(p) for p in gen.location_pool]}


def gen_from_dict(doc: dict) -> GenParams:
    doc = dict(doc)
    if doc.get("depot") is not None:
        doc["depot"] = tuple(doc["depot"])
    if doc.get("location_pool") is not None:
        doc["location_pool"] = tuple(tuple(p) for p in doc["location_pool"])
    return GenParams(**doc)


def encode_instance(inst: Instance) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "params": params_to_dict(inst.params),
        "gen": gen_to_dict(inst.gen),
        "preexisting": [{**_customer_doc(c), "slot": _slot(s)} for c, s in inst.preexisting],
        "arrivals": [[_customer_doc(c) for c in day] for day in inst.arrivals],
    }
    return json.dumps(doc, indent=1)


def _customer_from_doc(d) -> Customer:
    return Customer(int(d["id"]), tuple(d["coords"]), int(d["arrival_day"]),
                    float(d["arrival_time"]), tuple(SlotId(*p) for p in d["preferences"]))


def decode_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not a valid instance document: {exc}") from None
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise InstanceFormatError(
            f"schema mismatch: document has version {version!r}, expected {SCHEMA_VERSION}")
    try:
        params = params_from_dict(doc["params"])
        gen = gen_from_dict(doc["gen"])
        pre = tuple((_customer_from_doc(d), SlotId(*d["slot"])) for d in doc["preexisting"])
        arrivals = tuple(tuple(_customer_from_doc(d) for d in day) for day in doc["arrivals"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"invalid instance document: {exc}") from None
    return Instance(params, gen, pre, arrivals).validate()


def save_instance(inst: Instance, path):
    Path(path).write_text(encode_instance(inst))


def load_instance(path) -> Instance:
    return decode_instance(Path(path).read_text())


# -- routing task files --------------------------------------------------------

def encode_task(task) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "depot": list(task.depot),
           "params": params_to_dict(task.params),
           "jobs": [{"id": j.id, "coords": list(j.coords), "window": list(j.window)}
                    for j in task.jobs]}
    return json.dumps(doc, indent=1)


def decode_task(text: str):
    """Parse a routing task document; ``params`` may be partial (defaults fill in)."""
    from .routing import Job, RoutingError, RoutingTask

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not a valid task document: {exc}") from None
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise InstanceFormatError(
            f"schema mismatch: document has version {version!r}, expected {SCHEMA_VERSION}")
    try:
        params = params_from_dict(doc.get("params", {}))
        jobs = tuple(Job(d["id"], tuple(d["coords"]), tuple(float(x) for x in d["window"]))
                     for d in doc["jobs"])
        return RoutingTask(tuple(doc["depot"]), jobs, params)
    except (KeyError, TypeError, RoutingError) as exc:
        raise InstanceFormatError(f"invalid task document: {exc}") from None


def load_task(path):
    return decode_task(Path(path).read_text())
