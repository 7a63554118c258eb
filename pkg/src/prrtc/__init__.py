"""2D motion planning with goal-biased trees, intermediate-goal repair,
Bezier smoothing, and MPC + Stanley tracking."""

from .geom import Point2, Rect, wrap_angle
from .planner_connect import (
    IntermediateGoalPair,
    PlanningError,
    PlanResult,
    SafetyCircle,
    connect,
    intermediate_goals,
    plan,
    tangent_points,
)
from .planner_rrt import PlannerParams, RrtResult, Tree, TreeNode, nearest_node, prrt
from .sampling import PositionProbabilityMap, dump_weights_csv, generate_ppm, sample
from .smoothing import (
    ControlPolygon,
    SmoothPath,
    bernstein,
    bezier_path,
    connect_and_smooth,
)
from .tracking import MpcParams, TrackResult, Trajectory, mpc_speed, stanley_steer, track
from .vehicle import ControlInput, EgoParams, VehicleState, control_grid, steer_toward, step
from .world import (
    Obstacle,
    Scenario,
    clearance,
    discretize_outline,
    load_scenario,
    path_collides,
    save_scenario,
    select_interest_points,
)

__version__ = "0.1.0"
