"""Planar robot pose, actions and differential-drive integration."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

from gymgate.worldsim.config import ActionParams


def normalize_angle(theta: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    return (theta + math.pi) % (2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class Pose2D:
    """Robot pose in the enclosure frame; theta is wrapped to [-pi, pi)."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_angle(self.theta))


class DiscreteAction(enum.Enum):
    LEFT = 0
    RIGHT = 1
    FORWARD = 2
    BACKWARD = 3


@dataclass(frozen=True)
class ContinuousAction:
    linear: float
    angular: float


Action = Union[DiscreteAction, ContinuousAction]


def action_velocities(action: Action, params: ActionParams) -> tuple[float, float]:
    """Map an action to (linear, angular) velocity, clamping continuous input."""
    if isinstance(action, DiscreteAction):
        if action is DiscreteAction.FORWARD:
            return params.linear_speed, 0.0
        if action is DiscreteAction.BACKWARD:
            return -params.linear_speed, 0.0
        if action is DiscreteAction.LEFT:
            return 0.0, params.angular_speed
        return 0.0, -params.angular_speed
    lv = max(-params.continuous_linear_bound, min(params.continuous_linear_bound, action.linear))
    av = max(-params.continuous_angular_bound, min(params.continuous_angular_bound, action.angular))
    return lv, av


def integrate_unicycle(pose: Pose2D, v: float, omega: float, dt: float) -> Pose2D:
    """Closed-form unicycle rollout: an arc for omega != 0, a segment otherwise."""
    if dt == 0.0 or (v == 0.0 and omega == 0.0):
        return pose
    if omega == 0.0:
        return Pose2D(
            pose.x + v * dt * math.cos(pose.theta),
            pose.y + v * dt * math.sin(pose.theta),
            pose.theta,
        )
    theta1 = pose.theta + omega * dt
    r = v / omega
    return Pose2D(
        pose.x + r * (math.sin(theta1) - math.sin(pose.theta)),
        pose.y - r * (math.cos(theta1) - math.cos(pose.theta)),
        theta1,
    )


def apply_action(pose: Pose2D, action: Action, params: ActionParams) -> Pose2D:
    """Advance a pose by one action over the configured step duration."""
    v, omega = action_velocities(action, params)
    return integrate_unicycle(pose, v, omega, params.step_duration)
