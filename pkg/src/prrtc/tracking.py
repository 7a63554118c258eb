"""Closed-loop path tracking: MPC speed command plus Stanley steering.

The speed optimizer works in arc-length progress coordinates, which turns
the tracking objective into a box-constrained convex quadratic solved by
projected coordinate descent. Steering is a plain Stanley law on the
cross-track error at the nearest path point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geom import wrap_angle
from .smoothing import SmoothPath
from .vehicle import ControlInput, EgoParams, VehicleState, ZERO_CONTROL, step

DEFAULT_STANLEY_GAIN = 2.5
STANLEY_SPEED_SOFTENING = 0.1


@dataclass(frozen=True)
class MpcParams:
    horizon: int = 20  # prediction steps
    control_horizon: int = 15
    dt: float = 0.1
    w1: float = 1.0  # progress tracking weight
    w2: float = 0.5  # curvature-speed weight
    w3: float = 0.2  # speed-cap pull weight
    v_max: float = 4.47

    def __post_init__(self):
        if self.control_horizon > self.horizon:
            raise ValueError("control horizon cannot exceed prediction horizon")
        if self.control_horizon < 1 or self.dt <= 0 or self.v_max <= 0:
            raise ValueError("invalid horizon, dt, or v_max")
        if min(self.w1, self.w2, self.w3) < 0:
            raise ValueError("weights must be non-negative")


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    state: VehicleState
    control: ControlInput


@dataclass
class Trajectory:
    records: list[TrajectoryRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass
class TrackResult:
    trajectory: Trajectory
    success: bool
    elapsed: float
    reason: str = ""


def stanley_steer(
    state: VehicleState,
    path: SmoothPath,
    gain: float = DEFAULT_STANLEY_GAIN,
    delta_max: float = 0.6,
) -> float:
    """Steering angle: heading error plus atan2(gain * e, v + eps), where e
    is the cross-track offset of the path relative to the vehicle (positive
    when the path lies to the vehicle's left), clamped to +/- delta_max."""
    proj = path.project(state.px, state.py)
    heading_error = wrap_angle(proj.heading - state.psi)
    # proj.lateral is positive when the vehicle is left of the path
    e = -proj.lateral
    delta = heading_error + math.atan2(gain * e, state.v + STANLEY_SPEED_SOFTENING)
    return min(max(delta, -delta_max), delta_max)


def mpc_speed(state: VehicleState, path: SmoothPath, params: MpcParams) -> np.ndarray:
    """Speed sequence over the control horizon minimizing progress error,
    curvature-weighted speed, and distance from the speed cap.

    Predicted progress advances by v_j * dt per step from the current
    projection; the reference advances at v_max. Speeds beyond the control
    horizon are held at the last optimized value. Solved by projected
    coordinate descent with exact per-coordinate minimization.
    """
    n_pred = params.horizon
    n_ctrl = params.control_horizon
    dt = params.dt
    v_max = params.v_max

    proj = path.project(state.px, state.py)
    s0 = proj.s
    steps = np.arange(1, n_pred + 1)
    s_ref = s0 + v_max * dt * steps
    k_curv = np.asarray(path.curvature_at(np.clip(s_ref, 0.0, path.length)))
    k_ctrl = k_curv[:n_ctrl]

    # multiplicity of each control variable in the progress prefix sums
    mult = np.zeros((n_pred, n_ctrl))
    for m in range(n_pred):
        for j in range(min(m, n_ctrl - 1) + 1):
            mult[m, j] += 1.0
        if m >= n_ctrl:
            mult[m, n_ctrl - 1] += float(m - n_ctrl + 1)

    def objective(v: np.ndarray) -> float:
        s = s0 + dt * (mult @ v)
        err = s - s_ref
        return float(
            params.w1 * err @ err
            + params.w2 * (k_ctrl * v * v).sum()
            + params.w3 * ((v - v_max) ** 2).sum()
        )

    v = np.full(n_ctrl, v_max)
    probe = 0.5 * v_max
    for _ in range(200):
        biggest = 0.0
        for j in range(n_ctrl):
            vj = v[j]
            v[j] = 0.0
            f0 = objective(v)
            v[j] = probe
            f1 = objective(v)
            v[j] = 2.0 * probe
            f2 = objective(v)
            a = (f2 - 2.0 * f1 + f0) / (2.0 * probe * probe)
            b = (4.0 * f1 - 3.0 * f0 - f2) / (2.0 * probe)
            if a > 1e-15:
                best = -b / (2.0 * a)
            elif b > 0:
                best = 0.0
            elif b < 0:
                best = v_max
            else:
                best = vj
            best = min(max(best, 0.0), v_max)
            v[j] = best
            biggest = max(biggest, abs(best - vj))
        if biggest < 1e-7:
            break
    return v


def track(
    path: SmoothPath,
    start: VehicleState,
    ego: EgoParams,
    mpc: MpcParams | None = None,
    stanley_gain: float = DEFAULT_STANLEY_GAIN,
) -> TrackResult:
    """Simulate tracking the path at a fixed control rate until the vehicle
    reaches the path end (within the ego goal radius) or a time cap passes.
    """
    if mpc is None:
        mpc = MpcParams(v_max=ego.v_max)
    head = path.start
    if math.hypot(start.px - head.x, start.py - head.y) > 2.0:
        raise ValueError("start state is more than 2 m from the path head")
    end = path.end
    time_cap = 3.0 * path.length / (0.25 * ego.v_max)

    records: list[TrajectoryRecord] = []
    state = start
    t = 0.0
    while True:
        if math.hypot(state.px - end.x, state.py - end.y) <= ego.goal_radius:
            records.append(TrajectoryRecord(t, state, ZERO_CONTROL))
            return TrackResult(Trajectory(records), True, t)
        if t > time_cap + 1e-9:
            records.append(TrajectoryRecord(t, state, ZERO_CONTROL))
            return TrackResult(
                Trajectory(records), False, t, reason="time cap exceeded before the path end"
            )
        delta = stanley_steer(state, path, stanley_gain, ego.delta_max)
        v_cmd = float(mpc_speed(state, path, mpc)[0])
        control = ControlInput(delta, v_cmd)
        records.append(TrajectoryRecord(t, state, control))
        state = step(state, control, mpc.dt, ego)
        t += mpc.dt
