"""Episode state machine: reset sampling, stepping, reward and termination.

A World owns its RNG (seeded at construction, no global state) so identical
(config, seed, action sequence) triples replay bit-identically, including
across process restarts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from gymgate.worldsim import collision
from gymgate.worldsim.config import WorldConfig
from gymgate.worldsim.errors import (
    InvalidConfigError,
    NoEpisodeError,
    SpawnExhaustedError,
    WrongActionKindError,
)
from gymgate.worldsim.kinematics import (
    Action,
    ContinuousAction,
    DiscreteAction,
    Pose2D,
    action_velocities,
    integrate_unicycle,
    normalize_angle,
)
from gymgate.worldsim.render import Raycaster

SPAWN_ATTEMPT_CAP = 10_000
_RESOLVE_TOL = 0.001  # meters of motion between the last free and first blocked pose


class ChannelType(enum.Enum):
    DEPTH_ONLY = "depth"
    RGB_ONLY = "rgb"
    RGBD = "rgbd"

    @property
    def has_depth(self) -> bool:
        return self in (ChannelType.DEPTH_ONLY, ChannelType.RGBD)

    @property
    def has_rgb(self) -> bool:
        return self in (ChannelType.RGB_ONLY, ChannelType.RGBD)

    @property
    def channels(self) -> int:
        return {ChannelType.DEPTH_ONLY: 1, ChannelType.RGB_ONLY: 3, ChannelType.RGBD: 4}[self]


class Termination(enum.Enum):
    NONE = "none"
    SUCCESS = "success"
    STEP_LIMIT = "step_limit"
    BOUNDARY = "boundary"


@dataclass
class Observation:
    """Camera planes only; carries no pose, odometry or distance fields."""

    channel_config: ChannelType
    depth: np.ndarray | None = None  # (H, W) uint16 millimeters
    rgb: np.ndarray | None = None    # (H, W, 3) uint8

    def __eq__(self, other):
        if not isinstance(other, Observation):
            return NotImplemented
        if self.channel_config is not other.channel_config:
            return False
        for a, b in ((self.depth, other.depth), (self.rgb, other.rgb)):
            if (a is None) != (b is None):
                return False
            if a is not None and not np.array_equal(a, b):
                return False
        return True


@dataclass(frozen=True)
class StepInfo:
    step_index: int
    termination: Termination


@dataclass
class StepResult:
    observation: Observation
    reward: float
    done: bool
    info: StepInfo


def compute_reward(pose: Pose2D, config: WorldConfig) -> tuple[float, bool]:
    """Sparse reward: 1.0 iff the robot center is within reward_radius of the monolith center."""
    dist = math.hypot(pose.x - config.monolith.center[0], pose.y - config.monolith.center[1])
    success = dist <= config.reward_radius
    return (1.0 if success else 0.0), success


class World:
    """One environment instance; single-threaded by contract."""

    def __init__(self, config: WorldConfig, seed: int, channel_config: ChannelType = ChannelType.DEPTH_ONLY):
        config.validate()
        self.config = config
        self.seed = int(seed)
        self.channel_config = channel_config
        self._rng = np.random.Generator(np.random.PCG64(self.seed))
        self._caster = Raycaster(config, texture_seed=self.seed)
        self.pose: Pose2D | None = None
        self.step_index = 0
        self.episode_active = False

    # -- queries ---------------------------------------------------------

    def collides(self, pose: Pose2D) -> bool:
        return collision.collides(self.config, pose)

    def check_termination(self) -> Termination:
        """Rule order: Success dominates, then step limit, then boundary."""
        if self.pose is None:
            raise NoEpisodeError("no active episode")
        _, success = compute_reward(self.pose, self.config)
        if success:
            return Termination.SUCCESS
        if self.step_index >= self.config.max_steps:
            return Termination.STEP_LIMIT
        if collision.wall_clearance(self.config, self.pose) < self.config.boundary_margin:
            return Termination.BOUNDARY
        return Termination.NONE

    def observe(self) -> Observation:
        if self.pose is None:
            raise NoEpisodeError("no active episode")
        return self.render_observation(self.pose)

    def render_observation(self, pose: Pose2D) -> Observation:
        ch = self.channel_config
        depth, rgb = self._caster.render(pose, ch.has_depth, ch.has_rgb)
        return Observation(channel_config=ch, depth=depth, rgb=rgb)

    def render_depth(self, pose: Pose2D) -> np.ndarray:
        return self._caster.depth_frame(pose)

    def render_rgb(self, pose: Pose2D) -> np.ndarray:
        return self._caster.rgb_frame(pose)

    # -- episode lifecycle -------------------------------------------------

    def reset(self) -> Observation:
        """Teleport to a rejection-sampled valid pose and start a new episode."""
        cfg = self.config
        hx, hy = cfg.enclosure_size[0] / 2.0, cfg.enclosure_size[1] / 2.0
        min_clear = cfg.boundary_margin + cfg.spawn_boundary_buffer
        for _ in range(SPAWN_ATTEMPT_CAP):
            u = self._rng.uniform(size=3)
            pose = Pose2D(
                x=float((u[0] * 2.0 - 1.0) * hx),
                y=float((u[1] * 2.0 - 1.0) * hy),
                theta=float((u[2] * 2.0 - 1.0) * math.pi),
            )
            dist = math.hypot(pose.x - cfg.monolith.center[0], pose.y - cfg.monolith.center[1])
            if dist < cfg.spawn_min_monolith_distance:
                continue
            if collision.wall_clearance(cfg, pose) < min_clear:
                continue
            if self.collides(pose):
                continue
            self.pose = pose
            self.step_index = 0
            self.episode_active = True
            return self.observe()
        raise SpawnExhaustedError(
            f"no valid spawn pose found in {SPAWN_ATTEMPT_CAP} attempts; obstacle layout too crowded"
        )

    def abandon_episode(self) -> None:
        """Drop any in-progress episode without recording a result."""
        self.episode_active = False

    def force_pose(self, pose: Pose2D) -> Observation:
        """Start an episode at an exact pose instead of sampling one.

        Debug hook: the pose must still be collision-free and clear of the
        boundary margin, otherwise the episode would terminate immediately.
        """
        if self.collides(pose):
            raise InvalidConfigError(f"forced pose {pose} collides")
        if collision.wall_clearance(self.config, pose) < self.config.boundary_margin:
            raise InvalidConfigError(f"forced pose {pose} is inside the boundary margin")
        self.pose = pose
        self.step_index = 0
        self.episode_active = True
        return self.observe()

    def step(self, action: Action) -> StepResult:
        if not self.episode_active or self.pose is None:
            raise NoEpisodeError("step() requires an active episode; call reset() first")
        self._check_action_kind(action)

        v, omega = action_velocities(action, self.config.action_params)
        dt = self.config.action_params.step_duration
        if self.config.terrain_jitter.enabled:
            j = self._rng.normal(size=3)
            jitter = (
                float(j[0]) * self.config.terrain_jitter.sigma_pos,
                float(j[1]) * self.config.terrain_jitter.sigma_pos,
                float(j[2]) * self.config.terrain_jitter.sigma_theta,
            )
        else:
            jitter = (0.0, 0.0, 0.0)

        self.pose = self._resolve_motion(self.pose, v, omega, dt, jitter)
        self.step_index += 1

        termination = self.check_termination()
        reward = 1.0 if termination is Termination.SUCCESS else 0.0
        done = termination is not Termination.NONE
        if done:
            self.episode_active = False
        return StepResult(
            observation=self.render_observation(self.pose),
            reward=reward,
            done=done,
            info=StepInfo(step_index=self.step_index, termination=termination),
        )

    def _check_action_kind(self, action: Action) -> None:
        if self.config.control_mode == "discrete" and not isinstance(action, DiscreteAction):
            raise WrongActionKindError("this world accepts discrete actions only")
        if self.config.control_mode == "continuous" and not isinstance(action, ContinuousAction):
            raise WrongActionKindError("this world accepts continuous actions only")

    def _motion_pose(self, start: Pose2D, v: float, omega: float, dt: float,
                     jitter: tuple[float, float, float], s: float) -> Pose2D:
        """Pose a fraction s in [0, 1] along the motion arc, jitter scaled in."""
        p = integrate_unicycle(start, v, omega, dt * s)
        return Pose2D(p.x + s * jitter[0], p.y + s * jitter[1], normalize_angle(p.theta + s * jitter[2]))

    def _resolve_motion(self, start: Pose2D, v: float, omega: float, dt: float,
                        jitter: tuple[float, float, float]) -> Pose2D:
        """Advance as far along the motion as stays collision-free.

        The motion parameter is binary-searched down to ~1 mm of travel, so
        a blocked robot ends flush against the obstruction instead of the
        whole action being rejected.
        """
        target = self._motion_pose(start, v, omega, dt, jitter, 1.0)
        if not self.collides(target):
            return target
        # Travel scale bounds how much pose change a parameter step causes.
        fp = self.config.robot_footprint
        radius = math.hypot(fp.half_width, fp.half_length)
        scale = abs(v) * dt + math.hypot(jitter[0], jitter[1]) + radius * (abs(omega) * dt + abs(jitter[2]))
        lo, hi = 0.0, 1.0
        for _ in range(60):
            if scale * (hi - lo) <= _RESOLVE_TOL:
                break
            mid = (lo + hi) / 2.0
            if self.collides(self._motion_pose(start, v, omega, dt, jitter, mid)):
                hi = mid
            else:
                lo = mid
        return self._motion_pose(start, v, omega, dt, jitter, lo)
