"""Multi-tree planning around hindering obstacles.

The first tree is grown as if the world were empty. While the concatenated
path still conflicts with an obstacle, that obstacle's outline is pruned to
interest points, a safety circle of one ego width is placed on each, and
tangent lines from the broken segment's endpoints to the circle are
intersected to produce two candidate intermediate goals. Two partial trees
are grown to the first workable goal and spliced in place of the broken
segment. A later conflict inside a spliced segment discards only that
segment and repairs the gap the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import Point2, cross2, line_intersection
from .planner_rrt import PlannerParams, RrtResult, Tree, prrt
from .sampling import generate_ppm
from .smoothing import SmoothPath, connect_and_smooth
from .vehicle import VehicleState
from .world import (
    Obstacle,
    Scenario,
    clearance,
    discretize_outline,
    path_collides,
    segment_clears,
    select_interest_points,
)


@dataclass(frozen=True)
class SafetyCircle:
    """Clearance circle around an obstacle interest point."""

    center: Point2
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class IntermediateGoalPair:
    g1: Point2  # nearer to the segment start
    g2: Point2


class PlanningError(RuntimeError):
    """Planning failed; carries where and how far it got."""

    def __init__(self, message: str, stage: str, obstacle_id: int | None = None, iterations: int = 0):
        super().__init__(message)
        self.stage = stage
        self.obstacle_id = obstacle_id
        self.iterations = iterations


@dataclass
class PlanResult:
    path: list[Point2]  # smoothed samples
    smooth: SmoothPath
    trees: list[Tree]  # partial trees forming the final path, in order
    goals_used: list[Point2]
    total_iterations: int
    hindering_ids: list[int]


def tangent_points(p: Point2, center: Point2, radius: float) -> tuple[Point2, Point2]:
    """The two points where the tangents from `p` touch the circle.

    Raises when `p` is inside or on the circle (no tangent exists).
    """
    lx, ly = center.x - p.x, center.y - p.y
    dist2 = lx * lx + ly * ly
    if dist2 <= radius * radius:
        raise ValueError("point inside or on safety circle")
    h = math.sqrt(dist2 - radius * radius)
    beta = math.atan2(ly, lx)
    alpha = math.atan2(radius, h)
    t_minus = Point2(p.x + h * math.cos(beta - alpha), p.y + h * math.sin(beta - alpha))
    t_plus = Point2(p.x + h * math.cos(beta + alpha), p.y + h * math.sin(beta + alpha))
    return t_minus, t_plus


def _fallback_goals(start: Point2, goal: Point2, circle: SafetyCircle) -> IntermediateGoalPair:
    # offset perpendicular to the start-goal axis by twice the radius
    dx, dy = goal.x - start.x, goal.y - start.y
    norm = math.hypot(dx, dy)
    if norm < 1e-9:
        dx, dy = circle.center.x - start.x, circle.center.y - start.y
        norm = math.hypot(dx, dy)
    if norm < 1e-9:
        dx, dy, norm = 1.0, 0.0, 1.0
    nx, ny = -dy / norm, dx / norm
    off = 2.0 * circle.radius
    a = Point2(circle.center.x + off * nx, circle.center.y + off * ny)
    b = Point2(circle.center.x - off * nx, circle.center.y - off * ny)
    if a.dist(start) <= b.dist(start):
        return IntermediateGoalPair(a, b)
    return IntermediateGoalPair(b, a)


def intermediate_goals(start: Point2, goal: Point2, circle: SafetyCircle) -> IntermediateGoalPair:
    """Intersect same-side tangents from `start` and `goal` to the circle.

    A start tangent pairs with the goal tangent that keeps the circle on the
    same side while travelling start -> intersection -> goal, which selects
    the two detour corners flanking the circle. Near-parallel pairs fall
    back to points offset perpendicular from the center by two radii.
    """
    o = circle.center
    ts = tangent_points(start, o, circle.radius)
    tg = tangent_points(goal, o, circle.radius)
    goals: list[Point2] = []
    for t_s in ts:
        side_s = cross2(t_s.x - start.x, t_s.y - start.y, o.x - start.x, o.y - start.y)
        for t_g in tg:
            side_g = cross2(goal.x - t_g.x, goal.y - t_g.y, o.x - t_g.x, o.y - t_g.y)
            if side_s * side_g <= 0:
                continue
            x = line_intersection(start, t_s, goal, t_g)
            if x is not None:
                goals.append(x)
    if len(goals) < 2:
        return _fallback_goals(start, goal, circle)
    goals.sort(key=lambda g: (g.dist(start), g.y, g.x))
    return IntermediateGoalPair(goals[0], goals[1])


def connect(path1: list[Point2], path2: list[Point2], goal_tolerance: float) -> list[Point2]:
    """Merge two partial-tree paths that end at the same intermediate goal.

    The second path was grown from the far side, so it is reversed; the
    shared endpoint collapses to a single point (midpoint when they differ).
    """
    if not path1 or not path2:
        raise ValueError("cannot connect empty paths")
    e1, e2 = path1[-1], path2[-1]
    gap = e1.dist(e2)
    if gap > 2.0 * goal_tolerance:
        raise ValueError(f"partial trees end {gap:.3f} m apart, beyond the connect tolerance")
    merged = e1 if gap == 0.0 else Point2(0.5 * (e1.x + e2.x), 0.5 * (e1.y + e2.y))
    return list(path1[:-1]) + [merged] + list(reversed(path2[:-1]))


@dataclass
class _Segment:
    points: list[Point2]
    tree: Tree
    goal_used: Point2 | None = None  # intermediate goal this segment grew toward


def _find_conflict(
    point_lists: list[list[Point2]],
    obstacles: tuple[Obstacle, ...],
    margin: float,
    exclude_id: int | None = None,
) -> tuple[Obstacle, int, Point2] | None:
    """First obstacle (in scenario order) within `margin` of the chained
    path; returns the obstacle, the index of the offending point list, and
    the point on the path nearest the obstacle."""
    for ob in obstacles:
        if exclude_id is not None and ob.id == exclude_id:
            continue
        for k, pts in enumerate(point_lists):
            for i in range(max(1, len(pts) - 1)):
                p = pts[i]
                q = pts[min(i + 1, len(pts) - 1)]
                if not segment_clears(p, q, ob, margin):
                    loc = _closest_point_on_segment(p, q, ob)
                    return ob, k, loc
    return None


def _closest_point_on_segment(p: Point2, q: Point2, ob: Obstacle) -> Point2:
    best, best_d = p, math.inf
    steps = 16
    for i in range(steps + 1):
        t = i / steps
        c = Point2(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
        d = ob.distance(c.x, c.y)
        if d < best_d:
            best, best_d = c, d
    return best


def plan(scenario: Scenario, params: PlannerParams, rng: np.random.Generator) -> PlanResult:
    """Plan from the scenario start to its goal, repairing around each
    hindering obstacle with pairs of partial trees, then smooth the result.
    """
    ego = scenario.ego
    margin = ego.width / 2.0
    total_iterations = 0
    hindering: list[int] = []

    def grow(start_state: VehicleState, target: Point2, context: list[Obstacle]) -> RrtResult:
        nonlocal total_iterations
        ppm = generate_ppm(
            target, params.lam, params.sigma, scenario.bounds, context, params.cell_size
        )
        result = prrt(
            start_state, target, ppm, params, ego, scenario.bounds, context, rng
        )
        total_iterations += result.iterations
        return result

    first = grow(scenario.start, scenario.goal, [])
    if not first.success:
        raise PlanningError(
            "initial tree exhausted its iteration budget",
            stage="initial",
            iterations=total_iterations,
        )
    segments = [_Segment(first.path_points(), first.tree)]

    exclude: int | None = None
    repairs = 0
    while True:
        conflict = _find_conflict(
            [seg.points for seg in segments], scenario.obstacles, margin, exclude
        )
        exclude = None
        if conflict is None:
            # the node polyline clears everything; make sure the smoothed
            # curves do too, since a Bezier can cut inside its polygon
            conflict = _find_conflict(
                [connect_and_smooth([seg.points]).points() for seg in segments],
                scenario.obstacles,
                margin,
            )
        if conflict is None:
            break
        obstacle, broken_idx, conflict_loc = conflict
        if repairs >= params.max_repairs:
            raise PlanningError(
                f"exceeded {params.max_repairs} repairs while avoiding obstacle {obstacle.id}",
                stage="repair-depth",
                obstacle_id=obstacle.id,
                iterations=total_iterations,
            )
        repairs += 1
        if obstacle.id not in hindering:
            hindering.append(obstacle.id)
        context = [scenario.obstacle_by_id(i) for i in hindering]

        broken = segments[broken_idx]
        seg_start = broken.points[0]
        seg_goal = broken.points[-1]
        start_state = (
            scenario.start
            if broken_idx == 0
            else None  # synthesized per candidate goal below
        )

        interest = select_interest_points(
            discretize_outline(obstacle, params.outline_spacing), margin
        )
        interest.sort(key=lambda p: p.dist(conflict_loc))

        replaced = _repair_segment(
            scenario, params, rng, grow, context, margin,
            seg_start, seg_goal, start_state, interest, ego.width,
        )
        if replaced is None:
            raise PlanningError(
                f"all interest points of obstacle {obstacle.id} exhausted",
                stage="repair",
                obstacle_id=obstacle.id,
                iterations=total_iterations,
            )
        segments[broken_idx : broken_idx + 1] = replaced
        exclude = obstacle.id

    smooth = connect_and_smooth([seg.points for seg in segments])
    return PlanResult(
        path=smooth.points(),
        smooth=smooth,
        trees=[seg.tree for seg in segments],
        goals_used=[seg.goal_used for seg in segments if seg.goal_used is not None],
        total_iterations=total_iterations,
        hindering_ids=hindering,
    )


def _repair_segment(
    scenario: Scenario,
    params: PlannerParams,
    rng: np.random.Generator,
    grow,
    context: list[Obstacle],
    margin: float,
    seg_start: Point2,
    seg_goal: Point2,
    start_state: VehicleState | None,
    interest: list[Point2],
    circle_radius: float,
) -> list[_Segment] | None:
    """Try interest points in order; return the two replacement segments for
    the first intermediate goal both partial trees can reach.

    Candidates whose straight legs to both endpoints already clear the known
    obstacles are tried first; only if none of those splice does the search
    fall back to the remaining candidates, where tree growth itself has to
    discover a way around.
    """

    def candidate_goals(radius: float) -> tuple[list[Point2], float]:
        min_tangent_dist = math.inf
        goals: list[Point2] = []
        for center in interest:
            l_start = center.dist(seg_start)
            l_goal = center.dist(seg_goal)
            min_tangent_dist = min(min_tangent_dist, l_start, l_goal)
            if l_start <= radius or l_goal <= radius:
                continue  # tangent undefined from inside the circle
            pair = intermediate_goals(seg_start, seg_goal, SafetyCircle(center, radius))
            for g in (pair.g1, pair.g2):
                if not scenario.bounds.contains(g.x, g.y):
                    continue
                if clearance(g, context) < margin:
                    continue
                goals.append(g)
        return goals, min_tangent_dist

    def line_of_sight(a: Point2, b: Point2) -> bool:
        return all(segment_clears(a, b, ob, margin) for ob in context)

    def attempt(goals: list[Point2]) -> list[_Segment] | None:
        tried: set[int] = set()
        for require_los in (True, False):
            for idx, g in enumerate(goals):
                if idx in tried:
                    continue
                if require_los and not (
                    line_of_sight(seg_start, g) and line_of_sight(seg_goal, g)
                ):
                    continue
                tried.add(idx)
                root1 = start_state if start_state is not None else _anchor_state(seg_start, g)
                t1 = grow(root1, g, context)
                if not t1.success:
                    continue
                t2 = grow(_anchor_state(seg_goal, g), g, context)
                if not t2.success:
                    continue
                p1 = t1.path_points()
                p2 = t2.path_points()
                merged = connect(p1, p2, params.goal_radius)
                m = merged[len(p1) - 1]  # the deduplicated goal point
                # keep the chain anchored exactly at the old segment endpoints
                left = [p1[0], m] if len(p1) == 1 else list(p1[:-1]) + [m]
                right = [m, p2[0]] if len(p2) == 1 else [m] + list(reversed(list(p2[:-1])))
                return [
                    _Segment(left, t1.tree, goal_used=g),
                    _Segment(right, t2.tree),
                ]
        return None

    goals, min_dist = candidate_goals(circle_radius)
    result = attempt(goals)
    if result is not None:
        return result
    if min_dist <= circle_radius:
        # an endpoint sat inside some safety circle: shrink once and retry
        shrunk = max(circle_radius / 2.0, 0.9 * min_dist)
        if shrunk < circle_radius:
            goals, _ = candidate_goals(shrunk)
            result = attempt(goals)
    return result


def _anchor_state(at: Point2, toward: Point2) -> VehicleState:
    heading = math.atan2(toward.y - at.y, toward.x - at.x)
    return VehicleState(at.x, at.y, heading, 0.0)
