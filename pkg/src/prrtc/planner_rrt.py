"""Goal-biased RRT over the kinematic bicycle model.

A tree is grown by drawing points from a position probability map, steering
the nearest node toward each draw, and keeping extensions that stay inside
the bounds with at least half an ego width of clearance from the obstacles
the planner currently knows about. Bias zero recovers plain uniform RRT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .geom import Point2, Rect
from .sampling import DEFAULT_CELL_SIZE, PositionProbabilityMap, sample
from .vehicle import (
    ZERO_CONTROL,
    ControlInput,
    EgoParams,
    VehicleState,
    control_grid,
    integrate_candidates,
    rank_candidates,
)
from .world import DEFAULT_OUTLINE_SPACING, Obstacle, segment_clears


@dataclass(frozen=True)
class TreeNode:
    id: int
    state: VehicleState
    control: ControlInput  # control that produced this node; zero at the root
    parent: int | None


class Tree:
    """Append-only search tree rooted at a vehicle state."""

    def __init__(self, root_state: VehicleState):
        self.nodes: list[TreeNode] = [TreeNode(0, root_state, ZERO_CONTROL, None)]
        self._xy = np.empty((64, 2), dtype=float)
        self._xy[0] = (root_state.px, root_state.py)

    @property
    def root_state(self) -> VehicleState:
        return self.nodes[0].state

    def __len__(self) -> int:
        return len(self.nodes)

    def positions(self) -> np.ndarray:
        return self._xy[: len(self.nodes)]

    def add(self, state: VehicleState, control: ControlInput, parent: int) -> int:
        if not 0 <= parent < len(self.nodes):
            raise ValueError(f"invalid parent id {parent}")
        node_id = len(self.nodes)
        self.nodes.append(TreeNode(node_id, state, control, parent))
        if node_id >= len(self._xy):
            grown = np.empty((2 * len(self._xy), 2), dtype=float)
            grown[:node_id] = self._xy[:node_id]
            self._xy = grown
        self._xy[node_id] = (state.px, state.py)
        return node_id

    def path_ids(self, node_id: int) -> list[int]:
        """Node ids from the root to `node_id`."""
        ids = []
        cur: int | None = node_id
        while cur is not None:
            ids.append(cur)
            cur = self.nodes[cur].parent
        ids.reverse()
        return ids

    def path_points(self, node_id: int) -> list[Point2]:
        return [self.nodes[i].state.position for i in self.path_ids(node_id)]


@dataclass(frozen=True)
class PlannerParams:
    """Knobs shared by every planner variant."""

    lam: float = 1000.0  # goal bias scale; 0 = uniform sampling
    sigma: float = 0.05  # gaussian spread as a fraction of the world diagonal
    max_iters: int = 3000
    horizon: float = 0.5  # tree-extension integration time, seconds
    dt: float = 0.1  # integration substep, seconds
    goal_radius: float = 1.0
    cell_size: float = DEFAULT_CELL_SIZE
    outline_spacing: float = DEFAULT_OUTLINE_SPACING
    max_repairs: int = 8

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        for name in ("sigma", "horizon", "dt", "goal_radius", "cell_size", "outline_spacing"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.lam < 0:
            raise ValueError("lam must be non-negative")


def nearest_node(tree: Tree, point: Point2) -> int:
    """Id of the node closest to `point`; ties go to the lowest id."""
    xy = tree.positions()
    d2 = (xy[:, 0] - point.x) ** 2 + (xy[:, 1] - point.y) ** 2
    return int(np.argmin(d2))


@dataclass
class RrtResult:
    tree: Tree
    path: list[int] | None  # root-to-goal node ids; None when exhausted
    iterations: int

    @property
    def success(self) -> bool:
        return self.path is not None

    def path_points(self) -> list[Point2]:
        if self.path is None:
            raise ValueError("no path: planner exhausted its iteration budget")
        return [self.tree.nodes[i].state.position for i in self.path]


def prrt(
    start: VehicleState,
    goal: Point2,
    ppm: PositionProbabilityMap,
    params: PlannerParams,
    ego: EgoParams,
    bounds: Rect,
    obstacles: list[Obstacle] | tuple[Obstacle, ...],
    rng: np.random.Generator,
) -> RrtResult:
    """Grow a tree from `start` until a node lands within goal_radius of
    `goal` or the iteration budget runs out.

    Every sample costs one iteration, including draws whose extension is
    rejected for leaving the bounds or for passing closer than half an ego
    width to a known obstacle.
    """
    tree = Tree(start)
    margin = ego.width / 2.0
    if math.hypot(start.px - goal.x, start.py - goal.y) <= params.goal_radius:
        return RrtResult(tree, [0], 0)
    grid = control_grid(ego)

    for i in range(1, params.max_iters + 1):
        target = sample(ppm, rng)
        near_id = nearest_node(tree, target)
        px, py, psi, speeds = integrate_candidates(
            tree.nodes[near_id].state, ego, params.horizon, params.dt, grid
        )
        d2 = (px - target.x) ** 2 + (py - target.y) ** 2
        # best candidate that produces a node the tree does not already have;
        # re-adding an identical end state would stall growth near the goal
        xy = tree.positions()
        best = None
        for c in rank_candidates(d2, grid):
            if ((xy[:, 0] - px[c]) ** 2 + (xy[:, 1] - py[c]) ** 2).min() >= 1e-18:
                best = c
                break
        if best is None:
            continue
        new_state = VehicleState(
            float(px[best]), float(py[best]), float(psi[best]), float(speeds[best])
        )
        if not bounds.contains(new_state.px, new_state.py):
            continue
        parent_pos = tree.nodes[near_id].state.position
        if any(
            not segment_clears(parent_pos, new_state.position, ob, margin) for ob in obstacles
        ):
            continue
        node_id = tree.add(new_state, grid[best], near_id)
        if math.hypot(new_state.px - goal.x, new_state.py - goal.y) <= params.goal_radius:
            return RrtResult(tree, tree.path_ids(node_id), i)

    return RrtResult(tree, None, params.max_iters)
