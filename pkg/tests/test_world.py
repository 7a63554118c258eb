import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import LineString, Point as ShapelyPoint, Polygon as ShapelyPolygon

from prrtc.geom import Point2, Rect
from prrtc.vehicle import VehicleState
from prrtc.world import (
    Obstacle,
    Scenario,
    clearance,
    discretize_outline,
    load_scenario,
    path_collides,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
    select_interest_points,
)

from conftest import square_at, unit_square


def shapely_of(ob: Obstacle) -> ShapelyPolygon:
    return ShapelyPolygon([(p.x, p.y) for p in ob.outline])


class TestObstacle:
    def test_two_point_outline_rejected(self):
        with pytest.raises(ValueError):
            Obstacle(1, (Point2(0, 0), Point2(1, 0)))

    def test_self_intersecting_rejected(self):
        bowtie = (Point2(0, 0), Point2(1, 1), Point2(1, 0), Point2(0, 1))
        with pytest.raises(ValueError):
            Obstacle(1, bowtie)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            Obstacle(1, unit_square().outline, kind="boulder")


class TestDiscretizeOutline:
    def test_large_spacing_keeps_vertices_only(self):
        pts = discretize_outline(unit_square(), spacing=10.0)
        assert [(p.x, p.y) for p in pts] == [(0, 0), (1, 0), (1, 1), (0, 1)]

    def test_half_spacing_inserts_midpoints(self):
        pts = discretize_outline(unit_square(), spacing=0.5)
        assert len(pts) == 8
        got = {(round(p.x, 9), round(p.y, 9)) for p in pts}
        expected = {
            (0, 0), (0.5, 0), (1, 0), (1, 0.5),
            (1, 1), (0.5, 1), (0, 1), (0, 0.5),
        }
        assert got == expected

    def test_gaps_and_vertices_oracle(self):
        # oracle: walk the closed perimeter, check every gap and every vertex
        ob = Obstacle(1, (Point2(0, 0), Point2(3, 0), Point2(3, 2), Point2(1, 3)))
        spacing = 0.7
        pts = discretize_outline(ob, spacing)
        ring = pts + [pts[0]]
        for a, b in zip(ring[:-1], ring[1:]):
            assert a.dist(b) <= spacing + 1e-9
        outline = {(p.x, p.y) for p in ob.outline}
        assert outline <= {(p.x, p.y) for p in pts}

    def test_zero_perimeter_errors(self):
        degenerate = Obstacle(1, (Point2(2, 2), Point2(2, 2), Point2(2, 2)))
        with pytest.raises(ValueError):
            discretize_outline(degenerate, spacing=0.5)

    def test_non_positive_spacing_errors(self):
        with pytest.raises(ValueError):
            discretize_outline(unit_square(), spacing=0.0)


class TestSelectInterestPoints:
    def test_single_point_kept(self):
        p = Point2(3, 4)
        assert select_interest_points([p], 1.0) == [p]

    def test_collinear_greedy_scan(self):
        pts = [Point2(x, 0) for x in (0, 0.5, 1.0, 1.5, 2.0)]
        kept = select_interest_points(pts, 1.0)
        assert [(p.x, p.y) for p in kept] == [(0, 0), (1.5, 0)]

    def test_tiny_half_width_keeps_all_distinct(self):
        pts = [Point2(x, 0) for x in (0, 0.3, 0.6, 1.1)]
        kept = select_interest_points(pts, 1e-12)
        assert kept == pts

    def test_empty_input(self):
        assert select_interest_points([], 1.0) == []

    @given(
        xs=st.lists(
            st.tuples(
                st.floats(-50, 50, allow_nan=False), st.floats(-50, 50, allow_nan=False)
            ),
            min_size=1,
            max_size=40,
        ),
        half_width=st.floats(0.05, 5.0),
    )
    @settings(max_examples=80, deadline=None)
    def test_greedy_invariants(self, xs, half_width):
        pts = [Point2(x, y) for x, y in xs]
        kept = select_interest_points(pts, half_width)
        # consecutive kept points are separated by more than half_width
        for a, b in zip(kept[:-1], kept[1:]):
            assert a.dist(b) > half_width
        # every dropped point is within half_width of the previously kept one
        ki = 0
        last_kept = None
        for p in pts:
            if ki < len(kept) and p is kept[ki]:
                last_kept = p
                ki += 1
            else:
                assert last_kept is not None and p.dist(last_kept) <= half_width


class TestPathCollides:
    def test_far_path_is_clear(self):
        path = [Point2(0, 10), Point2(10, 10)]
        assert path_collides(path, [unit_square()], 0.9) is None

    def test_path_through_interior_collides(self):
        path = [Point2(-1, 0.5), Point2(2, 0.5)]
        assert path_collides(path, [unit_square()], 0.9) == 1

    def test_collision_at_fraction_of_margin(self):
        # segment passing at exactly 0.9 * half_width above the top edge
        half_width = 1.0
        y = 1.0 + 0.9 * half_width
        path = [Point2(-2, y), Point2(3, y)]
        ob = unit_square()
        assert path_collides(path, [ob], half_width) == 1
        # shapely oracle agrees about the distance
        assert shapely_of(ob).distance(LineString([(-2, y), (3, y)])) == pytest.approx(0.9)

    def test_first_obstacle_in_scenario_order_wins(self):
        a = square_at(5, 0.5, 1.0, ob_id=7)
        b = square_at(2, 0.5, 1.0, ob_id=3)
        path = [Point2(0, 0.5), Point2(10, 0.5)]
        assert path_collides(path, [a, b], 0.2) == 7
        assert path_collides(path, [b, a], 0.2) == 3

    def test_matches_shapely_on_random_segments(self, rng):
        ob = Obstacle(1, (Point2(2, 1), Point2(6, 2), Point2(5, 5), Point2(1, 4)))
        poly = shapely_of(ob)
        for _ in range(300):
            p = Point2(rng.uniform(-2, 9), rng.uniform(-2, 9))
            q = Point2(rng.uniform(-2, 9), rng.uniform(-2, 9))
            margin = rng.uniform(0.05, 2.0)
            mine = path_collides([p, q], [ob], margin) is not None
            oracle = poly.distance(LineString([(p.x, p.y), (q.x, q.y)])) < margin
            assert mine == oracle

    def test_monotone_in_margin(self, rng):
        ob = Obstacle(1, (Point2(2, 1), Point2(6, 2), Point2(5, 5), Point2(1, 4)))
        for _ in range(100):
            p = Point2(rng.uniform(-2, 9), rng.uniform(-2, 9))
            q = Point2(rng.uniform(-2, 9), rng.uniform(-2, 9))
            m = rng.uniform(0.05, 2.0)
            if path_collides([p, q], [ob], m) is not None:
                assert path_collides([p, q], [ob], m * 1.5) is not None

    def test_empty_path_errors(self):
        with pytest.raises(ValueError):
            path_collides([], [unit_square()], 0.5)


class TestClearance:
    def test_known_distance(self):
        # 3 m above the top edge of the unit square
        d = clearance(Point2(0.5, 4.0), [unit_square()])
        assert d == pytest.approx(3.0, abs=1e-12)

    def test_dense_boundary_oracle(self, rng):
        ob = Obstacle(1, (Point2(2, 1), Point2(6, 2), Point2(5, 5), Point2(1, 4)))
        poly = shapely_of(ob)
        boundary = poly.exterior
        samples = [boundary.interpolate(t, normalized=True) for t in np.linspace(0, 1, 4000)]
        for _ in range(50):
            p = Point2(rng.uniform(-2, 9), rng.uniform(-2, 9))
            mine = clearance(p, [ob])
            if poly.contains(ShapelyPoint(p.x, p.y)):
                assert mine == 0.0
            else:
                brute = min(math.hypot(p.x - s.x, p.y - s.y) for s in samples)
                assert mine == pytest.approx(brute, abs=1e-3)

    def test_inside_is_zero(self):
        assert clearance(Point2(0.5, 0.5), [unit_square()]) == 0.0

    def test_no_obstacles_is_infinite(self):
        assert clearance(Point2(0, 0), []) == math.inf

    @given(
        x1=st.floats(-8, 8), y1=st.floats(-8, 8),
        x2=st.floats(-8, 8), y2=st.floats(-8, 8),
    )
    @settings(max_examples=100, deadline=None)
    def test_lipschitz(self, x1, y1, x2, y2):
        ob = unit_square()
        c1 = clearance(Point2(x1, y1), [ob])
        c2 = clearance(Point2(x2, y2), [ob])
        assert abs(c1 - c2) <= math.hypot(x1 - x2, y1 - y2) + 1e-9


class TestScenarioIO:
    def test_round_trip(self, tmp_path):
        scn = Scenario(
            bounds=Rect(0, 0, 20, 10),
            obstacles=(square_at(10, 5, 2.0, ob_id=4, kind="pothole"),),
            start=VehicleState(2, 2, 0.3, 0.0),
            goal=Point2(18, 8),
            lanes=((Point2(0, 5), Point2(20, 5)),),
            name="roundtrip",
        )
        path = tmp_path / "scn.json"
        save_scenario(scn, path)
        back = load_scenario(path)
        assert back == scn

    def test_dict_round_trip(self):
        scn = Scenario(
            bounds=Rect(0, 0, 20, 10),
            obstacles=(square_at(10, 5, 2.0, ob_id=4),),
            start=VehicleState(2, 2, 0.0, 0.0),
            goal=Point2(18, 8),
        )
        assert scenario_from_dict(scenario_to_dict(scn)) == scn

    def test_start_inside_obstacle_rejected(self):
        with pytest.raises(ValueError):
            Scenario(
                bounds=Rect(0, 0, 20, 10),
                obstacles=(square_at(10, 5, 4.0),),
                start=VehicleState(10, 5, 0.0, 0.0),
                goal=Point2(18, 8),
            )

    def test_goal_outside_bounds_rejected(self):
        with pytest.raises(ValueError):
            Scenario(
                bounds=Rect(0, 0, 20, 10),
                obstacles=(),
                start=VehicleState(2, 2, 0.0, 0.0),
                goal=Point2(25, 8),
            )

    def test_duplicate_obstacle_ids_rejected(self):
        with pytest.raises(ValueError):
            Scenario(
                bounds=Rect(0, 0, 20, 10),
                obstacles=(square_at(5, 5, 1.0, ob_id=2), square_at(15, 5, 1.0, ob_id=2)),
                start=VehicleState(2, 2, 0.0, 0.0),
                goal=Point2(18, 8),
            )
