"""Scenario representation and the geometric queries the planners rely on:
outline discretization, interest-point pruning, collision and clearance.

All types are immutable after construction and safe to share between
concurrently running plans.
"""

from __future__ import annotations

import importlib.resources
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .geom import (
    Point2,
    Rect,
    point_in_polygon,
    point_segment_distance,
    segment_segments_distance,
    segments_intersect,
)
from .vehicle import EgoParams, VehicleState

OBSTACLE_KINDS = ("vehicle", "pothole", "other")

DEFAULT_OUTLINE_SPACING = 0.3


@dataclass(frozen=True)
class Obstacle:
    """A simple polygon given by its ordered outline vertices."""

    id: int
    outline: tuple[Point2, ...]
    kind: str = "other"

    def __post_init__(self):
        object.__setattr__(self, "outline", tuple(self.outline))
        if len(self.outline) < 3:
            raise ValueError(f"obstacle {self.id}: outline needs at least 3 points")
        if self.kind not in OBSTACLE_KINDS:
            raise ValueError(f"obstacle {self.id}: unknown kind {self.kind!r}")
        _check_simple(self.outline, self.id)

    @cached_property
    def vertices(self) -> np.ndarray:
        return np.array([(p.x, p.y) for p in self.outline], dtype=float)

    @cached_property
    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        v = self.vertices
        return v, np.roll(v, -1, axis=0)

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        v = self.vertices
        return (
            float(v[:, 0].min()),
            float(v[:, 1].min()),
            float(v[:, 0].max()),
            float(v[:, 1].max()),
        )

    def perimeter(self) -> float:
        a, b = self.edges
        return float(np.hypot(*(b - a).T).sum())

    def contains(self, x: float, y: float) -> bool:
        xmin, ymin, xmax, ymax = self.bbox
        if not (xmin <= x <= xmax and ymin <= y <= ymax):
            return False
        return point_in_polygon(x, y, self.vertices)

    def boundary_distance(self, x: float, y: float) -> float:
        """Distance from a point to the polygon outline (ignores containment)."""
        a, b = self.edges
        best = math.inf
        for i in range(len(a)):
            d = point_segment_distance(x, y, a[i, 0], a[i, 1], b[i, 0], b[i, 1])
            if d < best:
                best = d
        return best

    def distance(self, x: float, y: float) -> float:
        """Distance to the filled polygon: zero inside."""
        if self.contains(x, y):
            return 0.0
        return self.boundary_distance(x, y)


def _check_simple(outline: tuple[Point2, ...], ob_id: int) -> None:
    pts = [(p.x, p.y) for p in outline]
    n = len(pts)
    edges = []
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if a != b:
            edges.append((i, a, b))
    for ei in range(len(edges)):
        i, a1, a2 = edges[ei]
        for ej in range(ei + 1, len(edges)):
            j, b1, b2 = edges[ej]
            adjacent = (j - i) % n == 1 or (i - j) % n == 1
            if adjacent:
                continue
            if segments_intersect(a1, a2, b1, b2):
                raise ValueError(f"obstacle {ob_id}: polygon is self-intersecting")


@dataclass(frozen=True)
class Scenario:
    """World bounds, obstacles, start state, goal point, and ego parameters."""

    bounds: Rect
    obstacles: tuple[Obstacle, ...]
    start: VehicleState
    goal: Point2
    ego: EgoParams = field(default_factory=EgoParams)
    lanes: tuple[tuple[Point2, ...], ...] = ()  # render-only decoration
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "lanes", tuple(tuple(l) for l in self.lanes))
        self.validate()

    def validate(self) -> None:
        ids = [ob.id for ob in self.obstacles]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate obstacle ids")
        for label, p in (("start", (self.start.px, self.start.py)), ("goal", (self.goal.x, self.goal.y))):
            if not self.bounds.contains(*p):
                raise ValueError(f"{label} lies outside world bounds")
            for ob in self.obstacles:
                if ob.contains(*p):
                    raise ValueError(f"{label} lies inside obstacle {ob.id}")

    def obstacle_by_id(self, ob_id: int) -> Obstacle:
        for ob in self.obstacles:
            if ob.id == ob_id:
                return ob
        raise KeyError(ob_id)


def discretize_outline(obstacle: Obstacle, spacing: float = DEFAULT_OUTLINE_SPACING) -> list[Point2]:
    """Walk the closed outline inserting points so consecutive gaps stay
    within `spacing`. Every original vertex is kept."""
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    if obstacle.perimeter() <= 0.0:
        raise ValueError(f"obstacle {obstacle.id}: degenerate outline (zero perimeter)")
    out: list[Point2] = []
    verts = obstacle.outline
    n = len(verts)
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        out.append(a)
        length = a.dist(b)
        if length == 0.0:
            continue
        pieces = math.ceil(length / spacing - 1e-12)
        for k in range(1, pieces):
            t = k / pieces
            out.append(Point2(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
    return out


def select_interest_points(outline_points: list[Point2], half_width: float) -> list[Point2]:
    """Greedy subsample in input order: keep a point only when it is more
    than half_width away from the previously kept one."""
    if half_width <= 0:
        raise ValueError("half_width must be positive")
    kept: list[Point2] = []
    for p in outline_points:
        if not kept or p.dist(kept[-1]) > half_width:
            kept.append(p)
    return kept


def _segment_obstacle_distance(p: Point2, q: Point2, ob: Obstacle) -> float:
    if ob.contains(p.x, p.y) or ob.contains(q.x, q.y):
        return 0.0
    a, b = ob.edges
    return segment_segments_distance((p.x, p.y), (q.x, q.y), a, b)


def segment_clears(p: Point2, q: Point2, ob: Obstacle, margin: float) -> bool:
    """Fast check that segment p-q keeps at least `margin` from an obstacle."""
    xmin, ymin, xmax, ymax = ob.bbox
    if (
        max(p.x, q.x) < xmin - margin
        or min(p.x, q.x) > xmax + margin
        or max(p.y, q.y) < ymin - margin
        or min(p.y, q.y) > ymax + margin
    ):
        return True
    return _segment_obstacle_distance(p, q, ob) >= margin


def path_collides(
    path: list[Point2], obstacles: list[Obstacle] | tuple[Obstacle, ...], half_width: float
) -> int | None:
    """Id of the first obstacle (in the given order) that comes within
    half_width of any path segment; None when the whole path keeps at least
    half_width of clearance."""
    if not path:
        raise ValueError("path must be non-empty")
    if len(path) == 1:
        segs = [(path[0], path[0])]
    else:
        segs = list(zip(path[:-1], path[1:]))
    for ob in obstacles:
        for p, q in segs:
            if not segment_clears(p, q, ob, half_width):
                return ob.id
    return None


def clearance(point: Point2, obstacles: list[Obstacle] | tuple[Obstacle, ...]) -> float:
    """Minimum distance from a point to any obstacle; zero inside one,
    +inf when there are no obstacles."""
    best = math.inf
    for ob in obstacles:
        d = ob.distance(point.x, point.y)
        if d < best:
            best = d
            if best == 0.0:
                break
    return best


# --- scenario file format ---------------------------------------------------


def scenario_to_dict(scn: Scenario) -> dict:
    return {
        "name": scn.name,
        "bounds": {
            "xmin": scn.bounds.xmin,
            "ymin": scn.bounds.ymin,
            "xmax": scn.bounds.xmax,
            "ymax": scn.bounds.ymax,
        },
        "start": {"x": scn.start.px, "y": scn.start.py, "psi": scn.start.psi, "v": scn.start.v},
        "goal": {"x": scn.goal.x, "y": scn.goal.y},
        "ego": {
            "width": scn.ego.width,
            "wheelbase": scn.ego.wheelbase,
            "v_max": scn.ego.v_max,
            "delta_max": scn.ego.delta_max,
            "goal_radius": scn.ego.goal_radius,
        },
        "obstacles": [
            {"id": ob.id, "kind": ob.kind, "outline": [[p.x, p.y] for p in ob.outline]}
            for ob in scn.obstacles
        ],
        "lanes": [[[p.x, p.y] for p in lane] for lane in scn.lanes],
    }


def scenario_from_dict(data: dict) -> Scenario:
    b = data["bounds"]
    s = data["start"]
    g = data["goal"]
    ego = EgoParams(**data.get("ego", {}))
    obstacles = tuple(
        Obstacle(
            id=int(ob["id"]),
            outline=tuple(Point2(float(x), float(y)) for x, y in ob["outline"]),
            kind=ob.get("kind", "other"),
        )
        for ob in data.get("obstacles", [])
    )
    lanes = tuple(
        tuple(Point2(float(x), float(y)) for x, y in lane) for lane in data.get("lanes", [])
    )
    return Scenario(
        bounds=Rect(float(b["xmin"]), float(b["ymin"]), float(b["xmax"]), float(b["ymax"])),
        obstacles=obstacles,
        start=VehicleState(float(s["x"]), float(s["y"]), float(s.get("psi", 0.0)), float(s.get("v", 0.0))),
        goal=Point2(float(g["x"]), float(g["y"])),
        ego=ego,
        lanes=lanes,
        name=data.get("name", ""),
    )


def load_scenario(path: str | Path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))


def save_scenario(scn: Scenario, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(scn), fh, indent=2, sort_keys=True)
        fh.write("\n")


def bundled_scenario_names() -> list[str]:
    res = importlib.resources.files("prrtc") / "scenarios"
    return sorted(p.name.removesuffix(".json") for p in res.iterdir() if p.name.endswith(".json"))


def load_bundled(name: str) -> Scenario:
    res = importlib.resources.files("prrtc") / "scenarios" / f"{name}.json"
    return scenario_from_dict(json.loads(res.read_text(encoding="utf-8")))
