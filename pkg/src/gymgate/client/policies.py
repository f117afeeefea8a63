"""Scripted policies: a uniform-random baseline, a depth/color servo
heuristic for eyeballing solvability without a learning stack, and a
pose-privileged oracle for in-process worlds (test harnesses only; remote
sessions never see the pose)."""

from __future__ import annotations

import math
import random

import numpy as np

from gymgate.worldsim import (
    ContinuousAction,
    DiscreteAction,
    Observation,
    World,
    normalize_angle,
)

# one discrete turn advances heading by angular_speed * step_duration
TURN_STEP_RAD = 0.8


class RandomPolicy:
    def __init__(self, control_mode: str = "discrete", seed: int = 0,
                 linear_bound: float = 0.5, angular_bound: float = 1.0):
        self.control_mode = control_mode
        self._rng = random.Random(seed)
        self._linear_bound = linear_bound
        self._angular_bound = angular_bound

    def __call__(self, observation: Observation):
        if self.control_mode == "discrete":
            return DiscreteAction(self._rng.randrange(4))
        return ContinuousAction(
            linear=self._rng.uniform(-self._linear_bound, self._linear_bound),
            angular=self._rng.uniform(-self._angular_bound, self._angular_bound),
        )


class DepthServoPolicy:
    """Steer toward the nearest dark tall object, then drive forward.

    With an rgb plane the target is the darkest pixel blob (the beacon is
    much darker than walls or ground). Depth-only frames fall back to the
    nearest object around the horizon row, which cannot tell the beacon
    from a wall; it is a sanity-check heuristic, not an optimal agent.
    """

    def __init__(self, control_mode: str = "discrete",
                 dark_threshold: int = 60,
                 horizon_band: int = 24,
                 center_tolerance_rad: float = 0.35,
                 horizontal_fov: float = math.pi / 3,
                 linear_bound: float = 0.5,
                 angular_bound: float = 1.0):
        self.control_mode = control_mode
        self.dark_threshold = dark_threshold
        self.horizon_band = horizon_band
        self.center_tolerance_rad = center_tolerance_rad
        self.horizontal_fov = horizontal_fov
        self._linear_bound = linear_bound
        self._angular_bound = angular_bound

    def _column_bearing(self, col: float, width: int) -> float:
        offset = 1.0 - 2.0 * (col + 0.5) / width  # +1 left edge, -1 right edge
        return math.atan(offset * math.tan(self.horizontal_fov / 2.0))

    def _target_bearing(self, observation: Observation) -> float | None:
        if observation.rgb is not None:
            dark = (observation.rgb < self.dark_threshold).all(axis=2)
            counts = dark.sum(axis=0)
            if counts.max() == 0:
                return None
            cols = np.arange(counts.size)
            col = float((cols * counts).sum() / counts.sum())
            return self._column_bearing(col, counts.size)
        depth = observation.depth
        if depth is None:
            return None
        mid = depth.shape[0] // 2
        band = depth[mid - self.horizon_band: mid + self.horizon_band].astype(np.float64)
        band[band == 0xFFFF] = np.inf
        col_depth = band.min(axis=0)
        col = int(np.argmin(col_depth))
        if not np.isfinite(col_depth[col]):
            return None
        return self._column_bearing(col, depth.shape[1])

    def __call__(self, observation: Observation):
        bearing = self._target_bearing(observation)
        if self.control_mode == "discrete":
            if bearing is None:
                return DiscreteAction.LEFT  # scan until something shows up
            if bearing > self.center_tolerance_rad:
                return DiscreteAction.LEFT
            if bearing < -self.center_tolerance_rad:
                return DiscreteAction.RIGHT
            return DiscreteAction.FORWARD
        if bearing is None:
            return ContinuousAction(linear=0.0, angular=self._angular_bound)
        angular = max(-self._angular_bound, min(self._angular_bound, 2.0 * bearing))
        linear = self._linear_bound if abs(bearing) <= self.center_tolerance_rad else 0.1
        return ContinuousAction(linear=linear, angular=angular)


class OraclePolicy:
    """Drives straight at the beacon by reading the world's true pose.

    Only constructible around an in-process world, which is exactly the
    privileged access a remote client does not have.
    """

    def __init__(self, world: World, center_tolerance_rad: float = TURN_STEP_RAD / 2):
        self.world = world
        self.center_tolerance_rad = center_tolerance_rad

    def __call__(self, observation: Observation):
        pose = self.world.pose
        cx, cy = self.world.config.monolith.center
        bearing = normalize_angle(math.atan2(cy - pose.y, cx - pose.x) - pose.theta)
        if self.world.config.control_mode == "continuous":
            params = self.world.config.action_params
            angular = max(-params.continuous_angular_bound,
                          min(params.continuous_angular_bound, 2.0 * bearing))
            linear = params.continuous_linear_bound if abs(bearing) <= self.center_tolerance_rad else 0.0
            return ContinuousAction(linear=linear, angular=angular)
        if bearing > self.center_tolerance_rad:
            return DiscreteAction.LEFT
        if bearing < -self.center_tolerance_rad:
            return DiscreteAction.RIGHT
        return DiscreteAction.FORWARD
