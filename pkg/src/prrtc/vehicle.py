"""Kinematic bicycle model: forward integration and best-of-grid steering.

The same integrator drives tree extension in the planner and closed-loop
tracking, so a stored control replayed from a parent state reproduces the
child state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import TAU, Point2, wrap_angle


@dataclass(frozen=True)
class EgoParams:
    """Ego vehicle geometry and actuation limits."""

    width: float = 1.8
    wheelbase: float = 2.7
    v_max: float = 4.47  # 10 mph
    delta_max: float = 0.6
    goal_radius: float = 1.0

    def __post_init__(self):
        for name in ("width", "wheelbase", "v_max", "delta_max", "goal_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.delta_max >= math.pi / 2:
            raise ValueError("delta_max must be below pi/2")


@dataclass(frozen=True)
class VehicleState:
    """Pose plus speed: (px, py, psi, v). Heading is wrapped to (-pi, pi]."""

    px: float
    py: float
    psi: float
    v: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.px, self.py, self.psi, self.v))):
            raise ValueError("non-finite vehicle state")
        if self.v < 0:
            raise ValueError("speed must be non-negative")
        object.__setattr__(self, "psi", wrap_angle(self.psi))

    @property
    def position(self) -> Point2:
        return Point2(self.px, self.py)


@dataclass(frozen=True)
class ControlInput:
    """Steering angle and commanded speed."""

    delta: float
    v_cmd: float

    def __post_init__(self):
        if not (math.isfinite(self.delta) and math.isfinite(self.v_cmd)):
            raise ValueError("non-finite control input")


ZERO_CONTROL = ControlInput(0.0, 0.0)


def step(state: VehicleState, u: ControlInput, dt: float, ego: EgoParams) -> VehicleState:
    """One forward-Euler step of the rear-axle kinematic bicycle.

    The speed is set directly to the clamped command before the position
    update, so a zero command stops the vehicle within the same step.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    v = min(max(u.v_cmd, 0.0), ego.v_max)
    delta = min(max(u.delta, -ego.delta_max), ego.delta_max)
    px = state.px + v * math.cos(state.psi) * dt
    py = state.py + v * math.sin(state.psi) * dt
    psi = state.psi + (v / ego.wheelbase) * math.tan(delta) * dt
    return VehicleState(px, py, psi, v)


def control_grid(ego: EgoParams, n_steer: int = 9) -> list[ControlInput]:
    """Default candidate controls: a symmetric steering fan at two speeds."""
    if n_steer % 2 == 1:
        # build from one half so +d / -d pairs negate exactly
        half = np.linspace(0.0, ego.delta_max, n_steer // 2 + 1)
        deltas = np.concatenate([-half[:0:-1], half])
    else:
        deltas = np.linspace(-ego.delta_max, ego.delta_max, n_steer)
    speeds = (0.5 * ego.v_max, ego.v_max)
    return [ControlInput(float(d), float(s)) for d in deltas for s in speeds]


def integrate_candidates(
    state: VehicleState,
    ego: EgoParams,
    horizon: float,
    dt: float,
    candidates: list[ControlInput],
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """End states of every candidate control integrated for `horizon`
    seconds in substeps of `dt`. Returns (px, py, psi, speeds) arrays."""
    if not (horizon >= dt > 0):
        raise ValueError("need horizon >= dt > 0")
    n_sub = max(1, int(round(horizon / dt)))
    deltas = np.array([min(max(c.delta, -ego.delta_max), ego.delta_max) for c in candidates])
    speeds = np.array([min(max(c.v_cmd, 0.0), ego.v_max) for c in candidates])
    px = np.full(len(candidates), state.px)
    py = np.full(len(candidates), state.py)
    psi = np.full(len(candidates), state.psi)
    yaw_rate = speeds / ego.wheelbase * np.tan(deltas)
    for _ in range(n_sub):
        px = px + speeds * np.cos(psi) * dt
        py = py + speeds * np.sin(psi) * dt
        psi = psi + yaw_rate * dt
        psi = np.mod(psi, TAU)
        psi = np.where(psi > math.pi, psi - TAU, psi)
    return px, py, psi, speeds


def rank_candidates(d2: np.ndarray, candidates: list[ControlInput]) -> list[int]:
    """Candidate indices from best to worst: closest end point first, ties
    broken by smaller |steering|, then by candidate order."""
    return sorted(range(len(candidates)), key=lambda i: (d2[i], abs(candidates[i].delta), i))


def steer_toward(
    state: VehicleState,
    target: Point2,
    ego: EgoParams,
    horizon: float = 0.5,
    dt: float = 0.1,
    candidates: list[ControlInput] | None = None,
) -> tuple[VehicleState, ControlInput]:
    """Pick the candidate control whose end state lands closest to target.

    Each candidate is integrated for `horizon` seconds in substeps of `dt`.
    Ties are broken by smaller |steering|, then by candidate order.
    """
    if candidates is None:
        candidates = control_grid(ego)
    px, py, psi, speeds = integrate_candidates(state, ego, horizon, dt, candidates)
    d2 = (px - target.x) ** 2 + (py - target.y) ** 2
    best = rank_candidates(d2, candidates)[0]
    end = VehicleState(float(px[best]), float(py[best]), float(psi[best]), float(speeds[best]))
    return end, candidates[best]
