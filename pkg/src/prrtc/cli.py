"""Command-line entry point: plan, track, bench, and render subcommands."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import harness, planner_connect, render, tracking, world
from .planner_rrt import PlannerParams
from .tracking import MpcParams

# --param key=value -> (target object, attribute)
_PLANNER_KEYS = {
    "lambda": "lam",
    "lam": "lam",
    "sigma": "sigma",
    "N": "max_iters",
    "max_iters": "max_iters",
    "dT": "horizon",
    "horizon": "horizon",
    "dt": "dt",
    "r_goal": "goal_radius",
    "cell_size": "cell_size",
    "spacing": "outline_spacing",
    "max_repairs": "max_repairs",
}
_MPC_KEYS = {
    "w1": "w1",
    "w2": "w2",
    "w3": "w3",
    "Np": "horizon",
    "Nc": "control_horizon",
    "mpc_dt": "dt",
}
_OTHER_KEYS = ("stanley_k",)


def _parse_overrides(pairs: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"--param expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        key = key.strip()
        if key not in _PLANNER_KEYS and key not in _MPC_KEYS and key not in _OTHER_KEYS:
            raise ValueError(f"unknown --param key {key!r}")
        out[key] = float(value)
    return out


def _apply(overrides: dict[str, float]) -> tuple[PlannerParams, MpcParams, float]:
    planner_kwargs = {}
    mpc_kwargs = {}
    stanley_gain = tracking.DEFAULT_STANLEY_GAIN
    for key, value in overrides.items():
        if key in _PLANNER_KEYS:
            attr = _PLANNER_KEYS[key]
            planner_kwargs[attr] = int(value) if attr in ("max_iters", "max_repairs") else value
        elif key in _MPC_KEYS:
            attr = _MPC_KEYS[key]
            mpc_kwargs[attr] = int(value) if attr in ("horizon", "control_horizon") else value
        elif key == "stanley_k":
            stanley_gain = value
    return PlannerParams(**planner_kwargs), MpcParams(**mpc_kwargs), stanley_gain


def _cmd_plan(args) -> int:
    scenario = world.load_scenario(args.scenario)
    params, _, _ = _apply(_parse_overrides(args.param))
    rng = np.random.default_rng(args.seed)
    result = planner_connect.plan(scenario, params, rng)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    harness.save_plan(result, out / "plan.json")
    render.render_svg(scenario, result, out_path=out / "plan.svg")
    print(
        f"planned {scenario.name or args.scenario}: {result.total_iterations} iterations, "
        f"{len(result.trees)} trees, hindering obstacles {result.hindering_ids}"
    )
    print(f"wrote {out / 'plan.json'} and {out / 'plan.svg'}")
    return 0


def _cmd_track(args) -> int:
    scenario = world.load_scenario(args.scenario)
    params, mpc, stanley_gain = _apply(_parse_overrides(args.param))
    mpc = replace(mpc, v_max=min(mpc.v_max, scenario.ego.v_max))
    rng = np.random.default_rng(args.seed)
    result = planner_connect.plan(scenario, params, rng)
    tracked = tracking.track(result.smooth, scenario.start, scenario.ego, mpc, stanley_gain)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    harness.save_plan(result, out / "plan.json")
    harness.export_trajectory_csv(tracked.trajectory, out / "trajectory.csv")
    render.render_svg(scenario, result, tracked.trajectory, out / "track.svg")
    print(
        f"tracked {len(tracked.trajectory)} steps over {tracked.elapsed:.1f} s "
        f"({'reached the path end' if tracked.success else tracked.reason})"
    )
    print(f"wrote {out / 'trajectory.csv'} and {out / 'track.svg'}")
    return 0 if tracked.success else 1


def _cmd_bench(args) -> int:
    overrides = _parse_overrides(args.param)
    params, _, _ = _apply(overrides)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    config = harness.BenchmarkConfig(
        scenario_path=args.scenario,
        methods=methods,
        trials=args.trials,
        base_seed=args.seed,
        params={m: params for m in methods},
    )
    stats = harness.run_benchmark(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    harness.write_stats_csv(stats, out / "stats.csv")
    harness.write_timings_csv(stats, out / "timings.csv")
    print(harness.format_stats_table(stats))
    print(f"wrote {out / 'stats.csv'} and {out / 'timings.csv'}")
    return 0


def _cmd_render(args) -> int:
    scenario = world.load_scenario(args.scenario)
    result = harness.load_plan(args.plan)
    render.render_svg(scenario, result, out_path=args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prrtc", description="Goal-biased RRT planning with intermediate-goal repair."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_seed=True):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        if needs_seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument(
            "--param", action="append", default=[], metavar="KEY=VALUE",
            help="override a parameter (lambda, sigma, N, dT, dt, r_goal, w1..w3, Np, Nc, ...)",
        )

    p_plan = sub.add_parser("plan", help="plan a scenario and write plan.json + plan.svg")
    common(p_plan)
    p_plan.add_argument("--out", required=True, help="output directory")
    p_plan.set_defaults(func=_cmd_plan)

    p_track = sub.add_parser("track", help="plan, then track the smoothed path")
    common(p_track)
    p_track.add_argument("--out", required=True, help="output directory")
    p_track.set_defaults(func=_cmd_track)

    p_bench = sub.add_parser("bench", help="run the seeded planner comparison")
    common(p_bench)
    p_bench.add_argument("--trials", type=int, default=100)
    p_bench.add_argument("--methods", default="rrt,prrt,prrt_connect")
    p_bench.add_argument("--out", required=True, help="output directory")
    p_bench.set_defaults(func=_cmd_bench)

    p_render = sub.add_parser("render", help="render a saved plan to SVG")
    p_render.add_argument("--scenario", required=True)
    p_render.add_argument("--plan", required=True, help="plan.json from the plan subcommand")
    p_render.add_argument("--out", required=True, help="output SVG file")
    p_render.set_defaults(func=_cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, planner_connect.PlanningError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
