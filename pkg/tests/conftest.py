import math

import numpy as np
import pytest

from prrtc.geom import Point2, Rect
from prrtc.vehicle import EgoParams, VehicleState
from prrtc.world import Obstacle, Scenario


def unit_square(ob_id: int = 1, kind: str = "other") -> Obstacle:
    return Obstacle(
        ob_id,
        (Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 1)),
        kind,
    )


def square_at(cx: float, cy: float, side: float, ob_id: int = 1, kind: str = "other") -> Obstacle:
    h = side / 2
    return Obstacle(
        ob_id,
        (
            Point2(cx - h, cy - h),
            Point2(cx + h, cy - h),
            Point2(cx + h, cy + h),
            Point2(cx - h, cy + h),
        ),
        kind,
    )


@pytest.fixture
def ego() -> EgoParams:
    return EgoParams()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def empty_scenario() -> Scenario:
    return Scenario(
        bounds=Rect(0, 0, 30, 30),
        obstacles=(),
        start=VehicleState(6.0, 6.0, math.pi / 4, 0.0),
        goal=Point2(22.0, 22.0),
    )
