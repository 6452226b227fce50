"""Seeded benchmark runs, the metric suite and report files."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import traceback
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml
from joblib import Parallel, delayed

from . import __version__
from .calendar import SystemParams
from .engine import EpisodeResult, run_episode, trace_lines
from .instance import (GenParams, gen_from_dict, gen_to_dict, generate_instance,
                       load_location_pool, params_from_dict, params_to_dict)
from .policies import make_policy
from .presets import preset
from .routing import VRPSTWSolver

log = logging.getLogger(__name__)


@dataclass
class PolicySpec:
    name: str
    params: dict = field(default_factory=dict)
    label: Optional[str] = None

    @property
    def key(self) -> str:
        return self.label or self.name


@dataclass
class BenchConfig:
    sys: SystemParams
    gen: GenParams
    policies: list
    n_instances: int = 100
    seed: int = 0
    router: dict = field(default_factory=lambda: {"max_sweeps": 500, "n_restarts": 10})
    jobs: int = 1
    out: Optional[str] = None
    system: Optional[str] = None
    traces: bool = False

    def __post_init__(self):
        if self.n_instances < 1:
            raise ValueError("instance count must be >= 1")
        if not self.policies:
            raise ValueError("policy list must be non-empty")
        self.policies = [p if isinstance(p, PolicySpec) else PolicySpec(**p)
                         for p in self.policies]
        keys = [p.key for p in self.policies]
        if len(set(keys)) != len(keys):
            raise ValueError(f"policy labels must be unique, got {keys}")

    def to_dict(self) -> dict:
        return {"system": self.system, "params": params_to_dict(self.sys),
                "gen": gen_to_dict(self.gen),
                "policies": [asdict(p) for p in self.policies],
                "instances": self.n_instances, "seed": self.seed, "router": dict(self.router)}

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def load_config(path=None, **overrides) -> BenchConfig:
    """Read a YAML/JSON config; keyword overrides (e.g. from CLI flags) win.

    Recognised keys: system, params, gen, horizon_days, location_pool, depot,
    policies, instances, seed, router, jobs, out.
    """
    doc = {}
    if path is not None:
        doc = yaml.safe_load(Path(path).read_text()) or {}
    doc.update({k: v for k, v in overrides.items() if v is not None})
    system = doc.get("system")
    if system:
        sys, gen = preset(system)
    else:
        sys, gen = SystemParams(), GenParams()
    if "params" in doc:
        sys = params_from_dict({**params_to_dict(sys), **doc["params"]})
    gen_doc = gen_to_dict(gen)
    gen_doc.update(doc.get("gen", {}))
    if "horizon_days" in doc:
        gen_doc["horizon_days"] = doc["horizon_days"]
    if "depot" in doc:
        gen_doc["depot"] = doc["depot"]
    if doc.get("location_pool"):
        gen_doc["location_pool"] = load_location_pool(doc["location_pool"])
    gen = gen_from_dict(gen_doc)
    policies = doc.get("policies") or [{"name": "RAN"}]
    policies = [{"name": p} if isinstance(p, str) else p for p in policies]
    return BenchConfig(sys=sys, gen=gen, policies=policies,
                       n_instances=int(doc.get("instances", 100)), seed=int(doc.get("seed", 0)),
                       router=doc.get("router", {"max_sweeps": 500, "n_restarts": 10}),
                       jobs=int(doc.get("jobs", 1)), out=doc.get("out"), system=system,
                       traces=bool(doc.get("traces", False)))


# -- metrics -------------------------------------------------------------------

@dataclass(frozen=True)
class Metrics:
    n: int
    TC: float
    TTC: float
    wait: float
    DP: float
    penalties: float
    SAR: float
    SE: float
    DT: float
    SEM: float


def episode_sar(result: EpisodeResult) -> float:
    """Share (%) of dynamically arriving customers given a preferred slot."""
    return 100.0 * result.n_satisfied / result.n_dynamic if result.n_dynamic else 100.0


def episode_se(result: EpisodeResult) -> float:
    """Population standard deviation of customers served per routed day."""
    counts = [result.served[d] for d in sorted(result.served)]
    return float(np.std(counts)) if counts else 0.0


def sem(values) -> float:
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def compute_metrics(results) -> Metrics:
    if not results:
        raise ValueError("no episode results to aggregate")
    tc = [r.total_cost for r in results]
    times = [t for r in results for t in r.decision_times]
    return Metrics(
        n=len(results),
        TC=float(np.mean(tc)),
        TTC=float(np.mean([r.travel for r in results])),
        wait=float(np.mean([r.wait for r in results])),
        DP=float(np.mean([r.delay_penalty for r in results])),
        penalties=float(np.mean([r.penalties for r in results])),
        SAR=float(np.mean([episode_sar(r) for r in results])),
        SE=float(np.mean([episode_se(r) for r in results])),
        DT=float(np.mean(times)) if times else 0.0,
        SEM=sem(tc),
    )


# -- benchmark -----------------------------------------------------------------

ROW_FIELDS = ["policy", "instance", "seed", "status", "TC", "TTC", "wait", "DP", "penalties",
              "n_customers", "n_dynamic", "n_satisfied", "SAR", "SE", "served", "error",
              "config_hash", "version"]


def instance_seed(base: int, instance: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base, 0, instance])


def episode_seed(base: int, policy: int, instance: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base, policy + 1, instance])


def _run_one(cfg: BenchConfig, p_idx: int, i_idx: int):
    ps = cfg.policies[p_idx]
    row = {"policy": ps.key, "instance": i_idx, "seed": f"{cfg.seed}-{p_idx + 1}-{i_idx}"}
    try:
        inst = generate_instance(cfg.sys, cfg.gen, instance_seed(cfg.seed, i_idx))
        policy = make_policy(ps.name, **ps.params).fit(cfg.sys, cfg.gen)
        router = VRPSTWSolver(**cfg.router)
        result = run_episode(inst, policy, router, episode_seed(cfg.seed, p_idx, i_idx))
    except Exception as exc:  # recorded, excluded from metrics
        log.error("episode %s/%d failed: %s", ps.key, i_idx, exc)
        row.update(status="error", error=f"{type(exc).__name__}: {exc}")
        log.debug(traceback.format_exc())
        return row, None
    row.update(status="ok", TC=result.total_cost, TTC=result.travel, wait=result.wait,
               DP=result.delay_penalty, penalties=result.penalties,
               n_customers=inst.n_customers, n_dynamic=result.n_dynamic,
               n_satisfied=result.n_satisfied, SAR=episode_sar(result), SE=episode_se(result),
               served=";".join(str(result.served[d]) for d in sorted(result.served)), error="")
    return row, result


@dataclass
class Report:
    config: BenchConfig
    rows: list
    summary: dict
    timing: dict
    results: dict
    traces: dict = field(default_factory=dict)

    @property
    def n_failed(self) -> int:
        return sum(1 for r in self.rows if r["status"] != "ok")

    def episodes_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=ROW_FIELDS, lineterminator="\n")
        writer.writeheader()
        digest = self.config.digest()
        for row in self.rows:
            out = {k: row.get(k, "") for k in ROW_FIELDS}
            out.update(config_hash=digest, version=__version__)
            for k, v in out.items():
                if isinstance(v, float):
                    out[k] = repr(v)
            writer.writerow(out)
        return buf.getvalue()

    def summary_json(self) -> str:
        return json.dumps(self.summary, indent=2, sort_keys=True) + "\n"

    def timing_json(self) -> str:
        return json.dumps(self.timing, indent=2, sort_keys=True) + "\n"

    def write(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "episodes.csv").write_text(self.episodes_csv())
        (out / "summary.json").write_text(self.summary_json())
        (out / "timing.json").write_text(self.timing_json())
        if self.traces:
            tdir = out / "traces"
            tdir.mkdir(exist_ok=True)
            for (policy, i), lines in sorted(self.traces.items()):
                (tdir / f"{policy}_{i:04d}.jsonl").write_text("".join(x + "\n" for x in lines))
        return out


def run_benchmark(cfg: BenchConfig, keep_results: bool = False) -> Report:
    """Run every policy on every instance.

    Instances are shared across policies. The summary and per-episode rows are
    deterministic; decision wall-clock times go to a separate timing record.
    """
    pairs = [(p, i) for p in range(len(cfg.policies)) for i in range(cfg.n_instances)]
    outputs = Parallel(n_jobs=cfg.jobs)(delayed(_run_one)(cfg, p, i) for p, i in pairs)
    rows, results, timing, summary_policies, traces = [], {}, {}, {}, {}
    for (p, i), (row, result) in sorted(zip(pairs, outputs), key=lambda x: x[0]):
        rows.append(row)
        if result is not None:
            results.setdefault(cfg.policies[p].key, []).append(result)
            if cfg.traces:
                traces[(cfg.policies[p].key, i)] = list(trace_lines(result))
    for ps in cfg.policies:
        done = results.get(ps.key, [])
        if not done:
            continue
        m = compute_metrics(done)
        summary_policies[ps.key] = {k: v for k, v in asdict(m).items() if k != "DT"}
        times = [t for r in done for t in r.decision_times]
        timing[ps.key] = {"DT_mean": m.DT, "DT_max": max(times) if times else 0.0,
                          "epochs": len(times)}
    summary = {"tool": "dtsap", "version": __version__, "config_hash": cfg.digest(),
               "config": cfg.to_dict(), "policies": summary_policies,
               "failed": sum(1 for r in rows if r["status"] != "ok")}
    report = Report(cfg, rows, summary, timing, results if keep_results else {}, traces)
    if cfg.out:
        report.write(cfg.out)
    return report
