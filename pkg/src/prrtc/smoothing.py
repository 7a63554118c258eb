"""Bezier smoothing of tree-node control polygons.

Each path segment becomes one Bezier curve whose control points are the
segment's node positions; long segments are split at their middle node to
keep the polynomial degree manageable. Sampled curves carry an arc-length
table and a finite-difference curvature estimate for the tracking stage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geom import Point2

MAX_CONTROL_POINTS = 25
SAMPLE_SPACING = 0.2
MIN_SAMPLES = 20


def bernstein(n: int, i: int, t: float) -> float:
    """Bernstein basis value C(n,i) * (1-t)^(n-i) * t^i."""
    if i < 0 or i > n:
        raise ValueError(f"basis index {i} out of range for degree {n}")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    return math.comb(n, i) * (1.0 - t) ** (n - i) * t**i


@dataclass(frozen=True)
class ControlPolygon:
    points: tuple[Point2, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) < 2:
            raise ValueError("control polygon needs at least 2 points")

    @property
    def n(self) -> int:
        return len(self.points) - 1


class Projection(NamedTuple):
    s: float  # arc length of the nearest point
    lateral: float  # signed offset, positive when the query is left of the path
    heading: float  # path tangent heading at the nearest point


@dataclass(frozen=True)
class SmoothPath:
    samples: np.ndarray  # (M, 2)
    arc: np.ndarray  # (M,) cumulative arc length
    curvature: np.ndarray  # (M,) unsigned, 1/m

    @classmethod
    def from_samples(cls, pts: np.ndarray) -> "SmoothPath":
        pts = np.asarray(pts, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 1:
            raise ValueError("need an (M, 2) array of sample points")
        seg = np.hypot(*(np.diff(pts, axis=0)).T) if len(pts) > 1 else np.zeros(0)
        arc = np.concatenate([[0.0], np.cumsum(seg)])
        return cls(pts, arc, _menger_curvature(pts))

    @property
    def length(self) -> float:
        return float(self.arc[-1])

    @property
    def start(self) -> Point2:
        return Point2(float(self.samples[0, 0]), float(self.samples[0, 1]))

    @property
    def end(self) -> Point2:
        return Point2(float(self.samples[-1, 0]), float(self.samples[-1, 1]))

    def points(self) -> list[Point2]:
        return [Point2(float(x), float(y)) for x, y in self.samples]

    def point_at(self, s: float) -> tuple[float, float]:
        """Linear interpolation along the sampled polyline."""
        x = float(np.interp(s, self.arc, self.samples[:, 0]))
        y = float(np.interp(s, self.arc, self.samples[:, 1]))
        return x, y

    def points_at(self, s: np.ndarray) -> np.ndarray:
        return np.stack(
            [np.interp(s, self.arc, self.samples[:, 0]), np.interp(s, self.arc, self.samples[:, 1])],
            axis=1,
        )

    def curvature_at(self, s: np.ndarray | float):
        return np.interp(s, self.arc, self.curvature)

    def project(self, x: float, y: float) -> Projection:
        """Nearest point on the polyline, with signed lateral offset."""
        pts = self.samples
        if len(pts) == 1:
            return Projection(0.0, math.hypot(x - pts[0, 0], y - pts[0, 1]), 0.0)
        a = pts[:-1]
        d = pts[1:] - a
        seg2 = (d * d).sum(axis=1)
        seg2_safe = np.where(seg2 == 0.0, 1.0, seg2)
        t = ((x - a[:, 0]) * d[:, 0] + (y - a[:, 1]) * d[:, 1]) / seg2_safe
        t = np.clip(np.where(seg2 == 0.0, 0.0, t), 0.0, 1.0)
        cx = a[:, 0] + t * d[:, 0]
        cy = a[:, 1] + t * d[:, 1]
        d2 = (x - cx) ** 2 + (y - cy) ** 2
        j = int(np.argmin(d2))
        seg_len = math.sqrt(seg2[j]) if seg2[j] > 0 else 0.0
        s = float(self.arc[j] + t[j] * seg_len)
        if seg_len > 0:
            tx, ty = d[j, 0] / seg_len, d[j, 1] / seg_len
        else:
            tx, ty = 1.0, 0.0
        lateral = tx * (y - cy[j]) - ty * (x - cx[j])
        return Projection(s, float(lateral), math.atan2(ty, tx))


def _menger_curvature(pts: np.ndarray) -> np.ndarray:
    """Unsigned curvature per sample from circumscribed circles of
    consecutive point triples; exact on circular arcs."""
    m = len(pts)
    k = np.zeros(m)
    if m < 3:
        return k
    a, b, c = pts[:-2], pts[1:-1], pts[2:]
    ab = b - a
    bc = c - b
    ca = a - c
    area2 = ab[:, 0] * (-ca[:, 1]) - ab[:, 1] * (-ca[:, 0])  # cross(ab, ac)
    denom = np.hypot(*ab.T) * np.hypot(*bc.T) * np.hypot(*ca.T)
    with np.errstate(divide="ignore", invalid="ignore"):
        mk = np.where(denom > 0, 2.0 * np.abs(area2) / denom, 0.0)
    k[1:-1] = mk
    k[0] = k[1]
    k[-1] = k[-2]
    return k


def default_num_samples(points: list[Point2] | tuple[Point2, ...]) -> int:
    length = sum(points[i].dist(points[i + 1]) for i in range(len(points) - 1))
    return max(MIN_SAMPLES, math.ceil(length / SAMPLE_SPACING))


def bezier_path(polygon: ControlPolygon, num_samples: int) -> SmoothPath:
    """Sample the Bezier curve of a control polygon at uniform parameters."""
    if num_samples < 2:
        raise ValueError("need at least 2 samples")
    n = polygon.n
    t = np.linspace(0.0, 1.0, num_samples)
    ctrl = np.array([(p.x, p.y) for p in polygon.points])
    basis = np.empty((num_samples, n + 1))
    for i in range(n + 1):
        basis[:, i] = math.comb(n, i) * (1.0 - t) ** (n - i) * t**i
    pts = basis @ ctrl
    pts[0] = ctrl[0]
    pts[-1] = ctrl[-1]
    return SmoothPath.from_samples(pts)


def _split_polygon(points: list[Point2]) -> list[list[Point2]]:
    if len(points) <= MAX_CONTROL_POINTS:
        return [points]
    mid = len(points) // 2
    return _split_polygon(points[: mid + 1]) + _split_polygon(points[mid:])


def connect_and_smooth(
    segments: list[list[Point2]], num_samples: int | None = None
) -> SmoothPath:
    """One Bezier per segment, concatenated at their shared endpoints.

    Segments with more than 25 control points are split at their middle
    node first. Continuity at junctions is positional only.
    """
    if not segments:
        raise ValueError("no segments to smooth")
    for a, b in zip(segments[:-1], segments[1:]):
        if a[-1].dist(b[0]) > 1e-6:
            raise ValueError("consecutive segments do not share endpoints")

    pieces: list[list[Point2]] = []
    for seg in segments:
        if len(seg) == 1:
            seg = [seg[0], seg[0]]
        pieces.extend(_split_polygon(list(seg)))

    all_pts: list[np.ndarray] = []
    for idx, piece in enumerate(pieces):
        ns = num_samples if num_samples is not None else default_num_samples(piece)
        curve = bezier_path(ControlPolygon(tuple(piece)), ns)
        pts = curve.samples
        if idx > 0:
            pts = pts[1:]  # drop the duplicated junction sample
        all_pts.append(pts)
    return SmoothPath.from_samples(np.concatenate(all_pts, axis=0))
