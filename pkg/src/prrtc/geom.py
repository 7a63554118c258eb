"""Planar geometry primitives shared by the planner modules."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TAU = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = angle % TAU
    if a > math.pi:
        a -= TAU
    return a


@dataclass(frozen=True)
class Point2:
    """A point in the plane, in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x!r}, {self.y!r})")

    def dist(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle, used for world bounds."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("degenerate rectangle")

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


def cross2(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def point_segment_distance(
    px: float, py: float, ax: float, ay: float, bx: float, by: float
) -> float:
    """Distance from point (px, py) to segment (a, b)."""
    dx, dy = bx - ax, by - ay
    seg2 = dx * dx + dy * dy
    if seg2 == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / seg2
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _point_segments_d2(px: float, py: float, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared distances from one point to many segments. a, b: (E, 2)."""
    d = b - a
    seg2 = (d * d).sum(axis=1)
    seg2_safe = np.where(seg2 == 0.0, 1.0, seg2)
    t = ((px - a[:, 0]) * d[:, 0] + (py - a[:, 1]) * d[:, 1]) / seg2_safe
    t = np.clip(np.where(seg2 == 0.0, 0.0, t), 0.0, 1.0)
    cx = a[:, 0] + t * d[:, 0]
    cy = a[:, 1] + t * d[:, 1]
    return (px - cx) ** 2 + (py - cy) ** 2


def segment_segments_distance(
    p: tuple[float, float], q: tuple[float, float], a: np.ndarray, b: np.ndarray
) -> float:
    """Min distance from segment p-q to a batch of segments (a[i], b[i])."""
    px, py = p
    qx, qy = q
    dqx, dqy = qx - px, qy - py
    # orientation of each endpoint of (a, b) w.r.t. p->q and vice versa
    d1 = dqx * (a[:, 1] - py) - dqy * (a[:, 0] - px)
    d2 = dqx * (b[:, 1] - py) - dqy * (b[:, 0] - px)
    ex = b[:, 0] - a[:, 0]
    ey = b[:, 1] - a[:, 1]
    d3 = ex * (py - a[:, 1]) - ey * (px - a[:, 0])
    d4 = ex * (qy - a[:, 1]) - ey * (qx - a[:, 0])
    crossing = (d1 * d2 < 0) & (d3 * d4 < 0)
    if bool(crossing.any()):
        return 0.0
    pq_a = np.stack([np.full(len(a), px), np.full(len(a), py)], axis=1)
    pq_b = np.stack([np.full(len(a), qx), np.full(len(a), qy)], axis=1)
    d2_all = np.minimum.reduce(
        [
            _point_segments_d2(px, py, a, b),
            _point_segments_d2(qx, qy, a, b),
            _pointwise_segments_d2(a, pq_a, pq_b),
            _pointwise_segments_d2(b, pq_a, pq_b),
        ]
    )
    return math.sqrt(float(d2_all.min()))


def _pointwise_segments_d2(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared distance of pts[i] to segment (a[i], b[i])."""
    d = b - a
    seg2 = (d * d).sum(axis=1)
    seg2_safe = np.where(seg2 == 0.0, 1.0, seg2)
    t = ((pts - a) * d).sum(axis=1) / seg2_safe
    t = np.clip(np.where(seg2 == 0.0, 0.0, t), 0.0, 1.0)
    c = a + t[:, None] * d
    return ((pts - c) ** 2).sum(axis=1)


def point_in_polygon(x: float, y: float, verts: np.ndarray) -> bool:
    """Crossing-number containment test. Boundary points are not guaranteed
    either way; callers that care pair this with a distance query."""
    inside = False
    n = len(verts)
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        if (y1 <= y < y2) or (y2 <= y < y1):
            xin = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < xin:
                inside = not inside
    return inside


def points_in_polygon(pts: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Vectorized crossing-number test for many points. pts: (N, 2)."""
    x = pts[:, 0][:, None]
    y = pts[:, 1][:, None]
    x1 = verts[:, 0][None, :]
    y1 = verts[:, 1][None, :]
    x2 = np.roll(verts[:, 0], -1)[None, :]
    y2 = np.roll(verts[:, 1], -1)[None, :]
    cond = ((y1 <= y) & (y < y2)) | ((y2 <= y) & (y < y1))
    with np.errstate(divide="ignore", invalid="ignore"):
        xin = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
    crossings = (cond & (x < xin)).sum(axis=1)
    return (crossings % 2) == 1


def segments_intersect(
    p1: tuple[float, float],
    p2: tuple[float, float],
    p3: tuple[float, float],
    p4: tuple[float, float],
) -> bool:
    """True if segments p1-p2 and p3-p4 intersect, touching included."""

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def on_segment(a, b, c):
        return (
            min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and on_segment(p3, p4, p1):
        return True
    if d2 == 0 and on_segment(p3, p4, p2):
        return True
    if d3 == 0 and on_segment(p1, p2, p3):
        return True
    if d4 == 0 and on_segment(p1, p2, p4):
        return True
    return False


def line_intersection(
    p1: Point2, p2: Point2, p3: Point2, p4: Point2, rel_eps: float = 1e-12
) -> Point2 | None:
    """Intersection of the infinite lines p1-p2 and p3-p4, or None if parallel."""
    d1x, d1y = p2.x - p1.x, p2.y - p1.y
    d2x, d2y = p4.x - p3.x, p4.y - p3.y
    denom = cross2(d1x, d1y, d2x, d2y)
    scale = math.hypot(d1x, d1y) * math.hypot(d2x, d2y)
    if scale == 0.0 or abs(denom) <= rel_eps * scale:
        return None
    t = cross2(p3.x - p1.x, p3.y - p1.y, d2x, d2y) / denom
    return Point2(p1.x + t * d1x, p1.y + t * d1y)
