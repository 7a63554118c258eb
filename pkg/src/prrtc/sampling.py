"""Goal-biased sampling over a discretized position probability map.

Cell weights follow 1 + bias * gaussian(distance to goal), with cells whose
centers fall inside an obstacle zeroed out. A bias of zero degenerates to
uniform sampling over free cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geom import Point2, Rect
from .geom import points_in_polygon
from .world import Obstacle

DEFAULT_CELL_SIZE = 0.25


@dataclass(frozen=True)
class PositionProbabilityMap:
    origin: Point2
    cell_size: float
    nx: int
    ny: int
    weights: np.ndarray  # (nx, ny), non-negative, sums to 1
    cumulative: np.ndarray  # flattened prefix sums, last entry == 1

    @classmethod
    def from_weights(cls, origin: Point2, cell_size: float, weights: np.ndarray) -> "PositionProbabilityMap":
        w = np.asarray(weights, dtype=float)
        if w.ndim != 2:
            raise ValueError("weights must be a 2-d grid")
        if (w < 0).any():
            raise ValueError("weights must be non-negative")
        total = float(w.sum())
        if total <= 0:
            raise ValueError("no free space: all cell weights are zero")
        w = w / total
        cum = np.cumsum(w.ravel())
        cum[-1] = 1.0
        return cls(origin, float(cell_size), w.shape[0], w.shape[1], w, cum)

    def cell_center(self, ix: int, iy: int) -> Point2:
        return Point2(
            self.origin.x + (ix + 0.5) * self.cell_size,
            self.origin.y + (iy + 0.5) * self.cell_size,
        )

    def cell_of(self, p: Point2) -> tuple[int, int]:
        ix = int((p.x - self.origin.x) // self.cell_size)
        iy = int((p.y - self.origin.y) // self.cell_size)
        return min(max(ix, 0), self.nx - 1), min(max(iy, 0), self.ny - 1)


def generate_ppm(
    goal: Point2,
    bias: float,
    sigma: float,
    bounds: Rect,
    obstacles: list[Obstacle] | tuple[Obstacle, ...] = (),
    cell_size: float = DEFAULT_CELL_SIZE,
) -> PositionProbabilityMap:
    """Build the sampling map for a goal.

    `sigma` is dimensionless: the gaussian spread is sigma times the world
    diagonal. `bias` scales the peak; zero gives uniform weights over free
    cells.
    """
    if cell_size <= 0:
        raise ValueError("cell_size must be positive")
    if bias < 0:
        raise ValueError("bias must be non-negative")
    if not bounds.contains(goal.x, goal.y):
        raise ValueError("goal lies outside bounds")
    nx = max(1, math.ceil(bounds.width / cell_size - 1e-9))
    ny = max(1, math.ceil(bounds.height / cell_size - 1e-9))
    xs = bounds.xmin + (np.arange(nx) + 0.5) * cell_size
    ys = bounds.ymin + (np.arange(ny) + 0.5) * cell_size
    cx, cy = np.meshgrid(xs, ys, indexing="ij")

    if bias == 0.0:
        w = np.ones((nx, ny))
    else:
        spread = sigma * bounds.diagonal
        d2 = (cx - goal.x) ** 2 + (cy - goal.y) ** 2
        w = 1.0 + bias * np.exp(-d2 / (2.0 * spread * spread))

    if obstacles:
        centers = np.stack([cx.ravel(), cy.ravel()], axis=1)
        occupied = np.zeros(len(centers), dtype=bool)
        for ob in obstacles:
            occupied |= points_in_polygon(centers, ob.vertices)
        w = w.ravel()
        w[occupied] = 0.0
        w = w.reshape(nx, ny)

    return PositionProbabilityMap.from_weights(Point2(bounds.xmin, bounds.ymin), cell_size, w)


def sample(ppm: PositionProbabilityMap, rng: np.random.Generator) -> Point2:
    """Draw a point: inverse-CDF cell choice, then uniform within the cell."""
    u = rng.random()
    k = int(np.searchsorted(ppm.cumulative, u, side="right"))
    k = min(k, ppm.nx * ppm.ny - 1)
    ix, iy = divmod(k, ppm.ny)
    x0 = ppm.origin.x + ix * ppm.cell_size
    y0 = ppm.origin.y + iy * ppm.cell_size
    return Point2(x0 + rng.random() * ppm.cell_size, y0 + rng.random() * ppm.cell_size)


def dump_weights_csv(ppm: PositionProbabilityMap, path: str | Path) -> None:
    """Debug dump of the weight grid: ny rows of nx comma-separated values."""
    with open(path, "w", encoding="utf-8") as fh:
        for iy in range(ppm.ny):
            fh.write(",".join(f"{ppm.weights[ix, iy]:.12g}" for ix in range(ppm.nx)))
            fh.write("\n")
