"""Deterministic SVG rendering of scenarios, trees, and tracked paths.

Output is plain hand-assembled SVG with fixed-precision coordinates so the
same inputs always produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

from .planner_connect import PlanResult
from .tracking import Trajectory
from .world import Scenario, discretize_outline, select_interest_points

SCALE = 20.0  # px per meter
PAD = 20.0

_KIND_FILL = {"vehicle": "#c0392b", "pothole": "#4a4a4a", "other": "#7f8c8d"}


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, scenario: Scenario):
        self.b = scenario.bounds
        self.w = self.b.width * SCALE + 2 * PAD
        self.h = self.b.height * SCALE + 2 * PAD
        self.parts: list[str] = []

    def xy(self, x: float, y: float) -> tuple[float, float]:
        return (x - self.b.xmin) * SCALE + PAD, (self.b.ymax - y) * SCALE + PAD

    def pts(self, points) -> str:
        return " ".join(",".join(map(_fmt, self.xy(p.x, p.y))) for p in points)

    def add(self, fragment: str) -> None:
        self.parts.append(fragment)

    def document(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(self.w)}" '
            f'height="{_fmt(self.h)}" viewBox="0 0 {_fmt(self.w)} {_fmt(self.h)}">\n'
        )
        return head + "\n".join(self.parts) + "\n</svg>\n"


def render_svg(
    scenario: Scenario,
    result: PlanResult,
    trajectory: Trajectory | None = None,
    out_path: str | Path | None = None,
    outline_spacing: float = 0.3,
) -> str:
    """Draw bounds, lanes, obstacles, interest geometry of hindering
    obstacles, all partial trees, intermediate goals, the smoothed path, and
    optionally the tracked trajectory. Returns the SVG text."""
    c = _Canvas(scenario)

    x0, y0 = c.xy(scenario.bounds.xmin, scenario.bounds.ymax)
    c.add(
        f'<g id="bounds"><rect x="{_fmt(x0)}" y="{_fmt(y0)}" '
        f'width="{_fmt(scenario.bounds.width * SCALE)}" height="{_fmt(scenario.bounds.height * SCALE)}" '
        f'fill="#fcfcf8" stroke="#222" stroke-width="1.5"/></g>'
    )

    if scenario.lanes:
        lanes = "".join(
            f'<polyline points="{c.pts(lane)}" fill="none" stroke="#c8c8c8" '
            f'stroke-width="1" stroke-dasharray="8,6"/>'
            for lane in scenario.lanes
        )
        c.add(f'<g id="lanes">{lanes}</g>')

    obs = "".join(
        f'<polygon points="{c.pts(ob.outline)}" fill="{_KIND_FILL.get(ob.kind, "#7f8c8d")}" '
        f'fill-opacity="0.55" stroke="#222" stroke-width="1"/>'
        for ob in scenario.obstacles
    )
    c.add(f'<g id="obstacles">{obs}</g>')

    hindering = [scenario.obstacle_by_id(i) for i in result.hindering_ids]
    half_w = scenario.ego.width / 2.0
    outline_dots: list[str] = []
    interest_dots: list[str] = []
    circles: list[str] = []
    for ob in hindering:
        outline = discretize_outline(ob, outline_spacing)
        interest = select_interest_points(outline, half_w)
        for p in outline:
            px, py = c.xy(p.x, p.y)
            outline_dots.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="1.5" fill="#e74c3c"/>')
        for p in interest:
            px, py = c.xy(p.x, p.y)
            interest_dots.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2.5" fill="#111"/>')
            circles.append(
                f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(scenario.ego.width * SCALE)}" '
                f'fill="none" stroke="#888" stroke-width="0.8" stroke-dasharray="4,4"/>'
            )
    c.add(f'<g id="outline-points">{"".join(outline_dots)}</g>')
    c.add(f'<g id="interest-points">{"".join(interest_dots)}</g>')
    c.add(f'<g id="safety-circles">{"".join(circles)}</g>')

    tree_groups = []
    for t_idx, tree in enumerate(result.trees):
        moves = []
        for node in tree.nodes:
            if node.parent is None:
                continue
            parent = tree.nodes[node.parent]
            ax, ay = c.xy(parent.state.px, parent.state.py)
            bx, by = c.xy(node.state.px, node.state.py)
            moves.append(f"M{_fmt(ax)} {_fmt(ay)} L{_fmt(bx)} {_fmt(by)}")
        d = " ".join(moves) if moves else ""
        tree_groups.append(
            f'<g class="tree" id="tree-{t_idx}">'
            f'<path d="{d}" fill="none" stroke="#5dade2" stroke-width="0.8"/></g>'
        )
    c.add(f'<g id="trees">{"".join(tree_groups)}</g>')

    goal_marks = []
    for g in result.goals_used:
        gx, gy = c.xy(g.x, g.y)
        goal_marks.append(
            f'<path d="M{_fmt(gx - 5)} {_fmt(gy - 5)} L{_fmt(gx + 5)} {_fmt(gy + 5)} '
            f'M{_fmt(gx - 5)} {_fmt(gy + 5)} L{_fmt(gx + 5)} {_fmt(gy - 5)}" '
            f'stroke="#8e44ad" stroke-width="2" fill="none"/>'
        )
    c.add(f'<g id="goals">{"".join(goal_marks)}</g>')

    c.add(
        f'<g id="path"><polyline points="{c.pts(result.path)}" fill="none" '
        f'stroke="#1e8449" stroke-width="2.5"/></g>'
    )

    if trajectory is not None and len(trajectory):
        states = [rec.state.position for rec in trajectory]
        c.add(
            f'<g id="trajectory"><polyline points="{c.pts(states)}" fill="none" '
            f'stroke="#e67e22" stroke-width="1.5" stroke-dasharray="6,4"/></g>'
        )

    sx, sy = c.xy(scenario.start.px, scenario.start.py)
    gx, gy = c.xy(scenario.goal.x, scenario.goal.y)
    c.add(
        f'<g id="endpoints"><circle cx="{_fmt(sx)}" cy="{_fmt(sy)}" r="5" fill="#2471a3"/>'
        f'<circle cx="{_fmt(gx)}" cy="{_fmt(gy)}" r="5" fill="#1e8449"/></g>'
    )

    text = c.document()
    if out_path is not None:
        Path(out_path).write_text(text, encoding="utf-8")
    return text
