#!/usr/bin/env python3
"""Regenerate the bundled scenario files.

The layouts are hand-tuned reconstructions of the situations the planner is
meant to handle: a blocked left turn, a pothole on a straight road, a
multi-obstacle intersection, and the open comparison scene the benchmark
runs on.
"""

from __future__ import annotations

import math
from pathlib import Path

from prrtc.geom import Point2, Rect
from prrtc.vehicle import VehicleState
from prrtc.world import Obstacle, Scenario, save_scenario

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "prrtc" / "scenarios"


def rect_outline(cx: float, cy: float, w: float, h: float) -> tuple[Point2, ...]:
    return (
        Point2(cx - w / 2, cy - h / 2),
        Point2(cx + w / 2, cy - h / 2),
        Point2(cx + w / 2, cy + h / 2),
        Point2(cx - w / 2, cy + h / 2),
    )


def polygon_outline(cx: float, cy: float, radius: float, sides: int = 8) -> tuple[Point2, ...]:
    pts = []
    for k in range(sides):
        a = 2 * math.pi * k / sides
        pts.append(Point2(cx + radius * math.cos(a), cy + radius * math.sin(a)))
    return tuple(pts)


def road_lanes(axis: str, center: float, lo: float, hi: float, half_width: float = 3.5):
    """Edge and center polylines of a straight road, for rendering only."""
    lines = []
    for off in (-half_width, 0.0, half_width):
        c = center + off
        if axis == "v":
            lines.append((Point2(c, lo), Point2(c, hi)))
        else:
            lines.append((Point2(lo, c), Point2(hi, c)))
    return lines


def left_turn() -> Scenario:
    """Left turn at a one-lane intersection, blocked by a stalled vehicle.

    The goal keeps more than a minimum turning radius of room from the world
    edge; a goal pocketed against a boundary is kinematically unreachable
    once the approach overshoots.
    """
    return Scenario(
        name="left_turn",
        bounds=Rect(0, 0, 30, 30),
        start=VehicleState(16.4, 10.0, math.pi / 2, 0.0),
        goal=Point2(6.0, 15.5),
        obstacles=(
            Obstacle(1, rect_outline(13.6, 11.5, 1.9, 4.6), "vehicle"),
        ),
        lanes=tuple(road_lanes("v", 15.0, 0, 30) + road_lanes("h", 15.5, 0, 30)),
    )


def pothole_straight() -> Scenario:
    """Straight two-lane road with a pothole in the driving lane."""
    return Scenario(
        name="pothole_straight",
        bounds=Rect(0, 0, 30, 14),
        start=VehicleState(3.0, 5.6, 0.0, 0.0),
        goal=Point2(24.0, 5.6),
        obstacles=(
            Obstacle(1, polygon_outline(15.0, 5.6, 1.1), "pothole"),
        ),
        lanes=tuple(road_lanes("h", 7.0, 0, 30, half_width=2.8)),
    )


def multi_obstacle() -> Scenario:
    """Larger scene: a stalled vehicle plus a pothole sitting on the natural
    detour corridor, so the first repair uncovers the second obstacle."""
    return Scenario(
        name="multi_obstacle",
        bounds=Rect(0, 0, 40, 40),
        start=VehicleState(22.0, 4.0, math.pi / 2, 0.0),
        goal=Point2(6.0, 28.0),
        obstacles=(
            Obstacle(1, rect_outline(13.0, 16.0, 1.9, 4.8), "vehicle"),
            Obstacle(2, polygon_outline(13.1, 20.6, 1.1), "pothole"),
        ),
        lanes=tuple(
            road_lanes("v", 13.0, 0, 40) + road_lanes("v", 22.0, 0, 40) + road_lanes("h", 28.0, 0, 40)
        ),
    )


def comparison() -> Scenario:
    """The seeded three-way benchmark scene: one stalled vehicle just left of
    the straight start-goal line."""
    return Scenario(
        name="comparison",
        bounds=Rect(0, 0, 40, 40),
        start=VehicleState(22.0, 4.0, math.pi / 2, 0.0),
        goal=Point2(6.0, 28.0),
        obstacles=(
            Obstacle(1, rect_outline(13.0, 16.0, 1.9, 4.8), "vehicle"),
        ),
        lanes=tuple(
            road_lanes("v", 13.0, 0, 40) + road_lanes("v", 22.0, 0, 40) + road_lanes("h", 28.0, 0, 40)
        ),
    )


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for build in (left_turn, pothole_straight, multi_obstacle, comparison):
        scn = build()
        path = OUT_DIR / f"{scn.name}.json"
        save_scenario(scn, path)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
