"""Benchmark harness and file exports.

One trial draws a fresh generator seeded with base_seed + trial index, and
every method replays the same per-trial seeds, so the comparison is paired.
The uniform-sampling baseline is the biased planner with the bias forced to
zero; both baselines know every obstacle up front, while the multi-tree
method discovers hindering obstacles as its paths conflict with them.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import planner_connect
from .geom import Point2
from .planner_connect import PlanningError, PlanResult
from .planner_rrt import PlannerParams, Tree, prrt
from .sampling import generate_ppm
from .smoothing import SmoothPath
from .tracking import Trajectory, TrajectoryRecord
from .vehicle import ControlInput, VehicleState
from .world import Scenario, load_scenario

METHODS = ("rrt", "prrt", "prrt_connect")


@dataclass
class BenchmarkConfig:
    scenario_path: str | Path
    methods: tuple[str, ...] = METHODS
    trials: int = 100
    base_seed: int = 0
    params: dict[str, PlannerParams] = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods: {unknown}")

    def params_for(self, method: str) -> PlannerParams:
        base = self.params.get(method, PlannerParams())
        if method == "rrt":
            base = replace(base, lam=0.0)
        return base


@dataclass
class MethodStats:
    method: str
    mean_iterations: float
    std_iterations: float
    success_rate: float
    mean_wall_ms: float
    trials: int


@dataclass
class BenchmarkStats:
    rows: list[MethodStats]

    def by_method(self, method: str) -> MethodStats:
        for row in self.rows:
            if row.method == method:
                return row
        raise KeyError(method)


def _run_single_tree_method(
    scenario: Scenario, params: PlannerParams, seed: int
) -> tuple[bool, int]:
    rng = np.random.default_rng(seed)
    ppm = generate_ppm(
        scenario.goal, params.lam, params.sigma, scenario.bounds,
        scenario.obstacles, params.cell_size,
    )
    res = prrt(
        scenario.start, scenario.goal, ppm, params, scenario.ego,
        scenario.bounds, scenario.obstacles, rng,
    )
    return res.success, res.iterations


def _run_connect_method(
    scenario: Scenario, params: PlannerParams, seed: int
) -> tuple[bool, int]:
    rng = np.random.default_rng(seed)
    try:
        result = planner_connect.plan(scenario, params, rng)
        return True, result.total_iterations
    except PlanningError as err:
        return False, err.iterations


def run_benchmark(config: BenchmarkConfig) -> BenchmarkStats:
    scenario = load_scenario(config.scenario_path)
    rows: list[MethodStats] = []
    for method in config.methods:
        params = config.params_for(method)
        iters: list[int] = []
        wall: list[float] = []
        failures = 0
        for k in range(config.trials):
            seed = config.base_seed + k
            t0 = time.perf_counter()
            if method == "prrt_connect":
                ok, n = _run_connect_method(scenario, params, seed)
            else:
                ok, n = _run_single_tree_method(scenario, params, seed)
            wall.append((time.perf_counter() - t0) * 1000.0)
            if ok:
                iters.append(n)
            else:
                failures += 1
        arr = np.array(iters, dtype=float)
        rows.append(
            MethodStats(
                method=method,
                mean_iterations=float(arr.mean()) if len(arr) else math.nan,
                std_iterations=float(arr.std()) if len(arr) else math.nan,
                success_rate=(config.trials - failures) / config.trials,
                mean_wall_ms=float(np.mean(wall)),
                trials=config.trials,
            )
        )
    return BenchmarkStats(rows)


def write_stats_csv(stats: BenchmarkStats, path: str | Path) -> None:
    """Deterministic per-method statistics. Wall time varies run to run and
    lives in the timings sidecar instead."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("method,mean_iters,std_iters,success_rate\n")
        for row in stats.rows:
            fh.write(
                f"{row.method},{row.mean_iterations:.3f},{row.std_iterations:.3f},"
                f"{row.success_rate:.4f}\n"
            )


def write_timings_csv(stats: BenchmarkStats, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("method,mean_ms\n")
        for row in stats.rows:
            fh.write(f"{row.method},{row.mean_wall_ms:.3f}\n")


def format_stats_table(stats: BenchmarkStats) -> str:
    lines = [f"{'method':<14}{'mean iters':>12}{'std':>10}{'success':>10}{'mean ms':>10}"]
    for row in stats.rows:
        lines.append(
            f"{row.method:<14}{row.mean_iterations:>12.1f}{row.std_iterations:>10.1f}"
            f"{row.success_rate:>10.2f}{row.mean_wall_ms:>10.1f}"
        )
    return "\n".join(lines)


def export_trajectory_csv(trajectory: Trajectory, path: str | Path) -> None:
    """Write `t,px,py,psi,v,delta,v_cmd` rows at six decimal places."""
    if not len(trajectory):
        raise ValueError("cannot export an empty trajectory")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,px,py,psi,v,delta,v_cmd\n")
        for rec in trajectory:
            s, u = rec.state, rec.control
            fh.write(
                f"{rec.t:.6f},{s.px:.6f},{s.py:.6f},{s.psi:.6f},{s.v:.6f},"
                f"{u.delta:.6f},{u.v_cmd:.6f}\n"
            )


def read_trajectory_csv(path: str | Path) -> Trajectory:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "t,px,py,psi,v,delta,v_cmd":
            raise ValueError(f"unexpected trajectory header: {header!r}")
        for line in fh:
            t, px, py, psi, v, delta, v_cmd = map(float, line.strip().split(","))
            records.append(
                TrajectoryRecord(t, VehicleState(px, py, psi, v), ControlInput(delta, v_cmd))
            )
    return Trajectory(records)


# --- plan file (for the render subcommand) ----------------------------------


def _tree_to_dict(tree: Tree) -> dict:
    return {
        "nodes": [
            {
                "state": [n.state.px, n.state.py, n.state.psi, n.state.v],
                "control": [n.control.delta, n.control.v_cmd],
                "parent": n.parent,
            }
            for n in tree.nodes
        ]
    }


def _tree_from_dict(data: dict) -> Tree:
    nodes = data["nodes"]
    root = nodes[0]
    tree = Tree(VehicleState(*root["state"]))
    for n in nodes[1:]:
        tree.add(VehicleState(*n["state"]), ControlInput(*n["control"]), n["parent"])
    return tree


def plan_result_to_dict(result: PlanResult) -> dict:
    return {
        "path": [[p.x, p.y] for p in result.path],
        "trees": [_tree_to_dict(t) for t in result.trees],
        "goals_used": [[g.x, g.y] for g in result.goals_used],
        "total_iterations": result.total_iterations,
        "hindering_ids": list(result.hindering_ids),
    }


def plan_result_from_dict(data: dict) -> PlanResult:
    path = [Point2(x, y) for x, y in data["path"]]
    smooth = SmoothPath.from_samples(np.array([[p.x, p.y] for p in path]))
    return PlanResult(
        path=path,
        smooth=smooth,
        trees=[_tree_from_dict(t) for t in data["trees"]],
        goals_used=[Point2(x, y) for x, y in data["goals_used"]],
        total_iterations=int(data["total_iterations"]),
        hindering_ids=[int(i) for i in data["hindering_ids"]],
    )


def save_plan(result: PlanResult, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plan_result_to_dict(result), fh, sort_keys=True)
        fh.write("\n")


def load_plan(path: str | Path) -> PlanResult:
    with open(path, "r", encoding="utf-8") as fh:
        return plan_result_from_dict(json.load(fh))
