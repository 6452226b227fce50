import csv
import io
import json

import numpy as np
import pytest

from dtsap import __version__
from dtsap.bench import (BenchConfig, compute_metrics, episode_se, episode_seed, instance_seed,
                         load_config, run_benchmark)
from dtsap.calendar import SlotId
from dtsap.engine import EpisodeResult
from dtsap.presets import preset


def small_cfg(**kw):
    sys, gen = preset("S1", horizon_days=3)
    base = dict(sys=sys, gen=gen, policies=[{"name": "RAN"}, {"name": "SEG"}], n_instances=3,
                seed=4, router={"max_sweeps": 50, "n_restarts": 2})
    base.update(kw)
    return BenchConfig(**base)


def fake_result(served, satisfied, dynamic):
    r = EpisodeResult()
    r.served = dict(served)
    prefs = (SlotId(1, 1),)
    for k in range(dynamic):
        slot = SlotId(1, 1) if k < satisfied else SlotId(1, 2)
        r.decisions[k] = (prefs, slot, True)
    r.decisions[-1] = (prefs, SlotId(1, 2), False)
    return r


def test_metric_examples():
    all_ok = fake_result({1: 4, 2: 4, 3: 4}, 5, 5)
    m = compute_metrics([all_ok])
    assert m.SAR == 100 and m.SE == 0 and m.SEM == 0
    half = fake_result({1: 1, 2: 3}, 1, 2)
    assert episode_se(half) == pytest.approx(1.0)
    assert compute_metrics([all_ok, half]).SAR == pytest.approx(75)
    with pytest.raises(ValueError):
        compute_metrics([])


def test_config_validation():
    with pytest.raises(ValueError):
        small_cfg(n_instances=0)
    with pytest.raises(ValueError):
        small_cfg(policies=[])
    with pytest.raises(ValueError):
        small_cfg(policies=[{"name": "RAN"}, {"name": "RAN"}])
    small_cfg(policies=[{"name": "RAN"}, {"name": "RAN-RE", "params": {"m": 2}, "label": "r2"}])


def test_seed_derivation_is_injective():
    states = {tuple(episode_seed(3, p, i).generate_state(4)) for p in range(5) for i in range(50)}
    states |= {tuple(instance_seed(3, i).generate_state(4)) for i in range(50)}
    assert len(states) == 5 * 50 + 50


def test_rows_summary_and_reaggregation(tmp_path):
    report = run_benchmark(small_cfg(out=str(tmp_path)))
    rows = list(csv.DictReader(io.StringIO((tmp_path / "episodes.csv").read_text())))
    assert len(rows) == 6
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert sorted(summary["policies"]) == ["RAN", "SEG"]
    assert summary["version"] == __version__ and rows[0]["version"] == __version__
    assert summary["config_hash"] == rows[0]["config_hash"]
    assert report.n_failed == 0 and summary["failed"] == 0
    for pol, m in summary["policies"].items():
        mine = [r for r in rows if r["policy"] == pol]
        tc = np.array([float(r["TC"]) for r in mine])
        assert m["TC"] == pytest.approx(tc.mean(), rel=1e-12)
        assert m["SEM"] == pytest.approx(tc.std(ddof=1) / np.sqrt(len(tc)), rel=1e-9)
        sar = [100 * int(r["n_satisfied"]) / int(r["n_dynamic"]) for r in mine]
        assert m["SAR"] == pytest.approx(np.mean(sar), rel=1e-12)
        se = [np.std([int(v) for v in r["served"].split(";")]) for r in mine]
        assert m["SE"] == pytest.approx(np.mean(se), rel=1e-12)
        assert m["TC"] == pytest.approx(
            np.mean([float(r["TTC"]) + float(r["wait"]) + float(r["DP"]) + float(r["penalties"])
                     for r in mine]), rel=1e-12)
    timing = json.loads((tmp_path / "timing.json").read_text())
    assert set(timing) == {"RAN", "SEG"}


def test_policies_share_instances():
    report = run_benchmark(small_cfg())
    by = {(r["policy"], r["instance"]): r for r in report.rows}
    for i in range(3):
        assert by[("RAN", i)]["n_customers"] == by[("SEG", i)]["n_customers"]


def test_reports_are_byte_identical(tmp_path):
    a = run_benchmark(small_cfg(out=str(tmp_path / "a")))
    b = run_benchmark(small_cfg(out=str(tmp_path / "b"), jobs=2))
    for name in ("episodes.csv", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert a.summary == b.summary


def test_failed_episodes_are_recorded():
    cfg = small_cfg(policies=[{"name": "RAN"}, {"name": "SBP", "params": {"q": 0}}])
    report = run_benchmark(cfg)
    assert report.n_failed == 3
    assert all(r["status"] == "error" and "q" in r["error"]
               for r in report.rows if r["policy"] == "SBP")
    assert list(report.summary["policies"]) == ["RAN"]


def test_load_config(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("system: S2\ninstances: 4\nseed: 9\nhorizon_days: 3\n"
                    "policies:\n  - RAN\n  - name: RAN-RE\n    params: {m: 3}\n")
    cfg = load_config(path, seed=11)
    assert cfg.seed == 11 and cfg.n_instances == 4
    assert cfg.sys.n_v == 3 and cfg.sys.p_tra == 1.5 and cfg.gen.horizon_days == 3
    assert cfg.policies[1].params == {"m": 3}
    other = load_config(path, seed=12)
    assert cfg.digest() != other.digest()


def test_config_with_location_pool(tmp_path):
    pool = tmp_path / "pool.txt"
    pool.write_text("0.1 0.2\n0.5 0.5\n")
    path = tmp_path / "c.yaml"
    path.write_text(f"location_pool: {pool}\ndepot: [0.3, 0.3]\ninstances: 1\n")
    cfg = load_config(path)
    assert cfg.gen.location_pool == ((0.1, 0.2), (0.5, 0.5))
    assert cfg.gen.depot == (0.3, 0.3)
