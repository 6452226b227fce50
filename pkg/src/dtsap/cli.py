"""Command-line entry point: generate, run, solve, oracle, export-milp."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .bench import instance_seed, load_config, run_benchmark
from .instance import InstanceFormatError, generate_instance, load_task, save_instance
from .routing import RoutingError, export_milp, solve_vrpstw, solve_vrpstw_exact

log = logging.getLogger("dtsap")


def _common(p):
    p.add_argument("--seed", type=int, default=None, help="base seed")
    p.add_argument("--jobs", type=int, default=None, help="parallel workers")
    p.add_argument("--out", default=None, help="output directory or file")


def _plan_doc(plan, ev):
    return {"routes": [list(r) for r in plan.routes],
            "objective": ev.objective, "travel": ev.travel, "wait": ev.wait,
            "delay": ev.delay, "delay_penalty": ev.delay_penalty,
            "route_costs": list(ev.route_costs),
            "schedule": [{"id": s.id, "arrival": s.arrival, "wait": s.wait, "delay": s.delay}
                         for s in ev.schedule]}


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    cfg = load_config(args.config, seed=args.seed, instances=args.instances, system=args.system)
    out = Path(args.out or "instances")
    out.mkdir(parents=True, exist_ok=True)
    for i in range(cfg.n_instances):
        inst = generate_instance(cfg.sys, cfg.gen, instance_seed(cfg.seed, i))
        save_instance(inst, out / f"instance_{i:04d}.json")
    print(f"wrote {cfg.n_instances} instances to {out}")
    return 0


def cmd_run(args) -> int:
    cfg = load_config(args.config, seed=args.seed, jobs=args.jobs, out=args.out,
                      instances=args.instances, system=args.system,
                      traces=True if args.traces else None)
    report = run_benchmark(cfg)
    cols = ["n", "TC", "TTC", "DP", "SAR", "SE", "SEM"]
    print("policy".ljust(12) + "".join(c.rjust(10) for c in cols) + "DT".rjust(10))
    for key, m in report.summary["policies"].items():
        vals = "".join(f"{m[c]:10.2f}" if c != "n" else f"{m[c]:10d}" for c in cols)
        print(key.ljust(12) + vals + f"{report.timing[key]['DT_mean']:10.4f}")
    if report.n_failed:
        print(f"{report.n_failed} episode(s) failed", file=sys.stderr)
        return 1
    return 0


def cmd_solve(args) -> int:
    task = load_task(args.task)
    plan, ev = solve_vrpstw(task, max_sweeps=args.max_sweeps, n_restarts=args.restarts,
                            rng=args.seed if args.seed is not None else 0)
    _emit(json.dumps(_plan_doc(plan, ev), indent=2) + "\n", args.out)
    return 0


def cmd_oracle(args) -> int:
    task = load_task(args.task)
    plan, ev = solve_vrpstw_exact(task)
    _emit(json.dumps(_plan_doc(plan, ev), indent=2) + "\n", args.out)
    return 0


def cmd_export_milp(args) -> int:
    task = load_task(args.task)
    _emit(export_milp(task, pin_arrivals=not args.literal), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dtsap", description=__doc__)
    parser.add_argument("--version", action="version", version=f"dtsap {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write instance files")
    p.add_argument("config", nargs="?", default=None)
    p.add_argument("--system", default=None, help="preset S1..S6")
    p.add_argument("--instances", type=int, default=None)
    _common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="benchmark policies from a config file")
    p.add_argument("config", nargs="?", default=None)
    p.add_argument("--system", default=None, help="preset S1..S6")
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--traces", action="store_true", help="write per-episode epoch traces")
    _common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("solve", help="heuristic solve of one routing task file")
    p.add_argument("task")
    p.add_argument("--max-sweeps", type=int, default=500)
    p.add_argument("--restarts", type=int, default=10)
    _common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact solve of a small routing task file")
    p.add_argument("task")
    _common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export-milp", help="write the routing model in LP format")
    p.add_argument("task")
    p.add_argument("--literal", action="store_true",
                   help="omit the constraints tying start times to arrivals")
    _common(p)
    p.set_defaults(func=cmd_export_milp)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InstanceFormatError, RoutingError, ValueError, FileNotFoundError) as exc:
        print(f"dtsap: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
