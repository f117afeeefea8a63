"""Deterministic simulator of the monolith arenas.

Planar differential-drive robot in a walled 3x4 m enclosure with a central
monolith and optional obstacle boxes.  Observations are raycast RGBD frames;
reward is sparse (+1.0 within the reward radius of the monolith).
"""

from gymgate.worldsim.config import (
    ActionParams,
    Box,
    CameraConfig,
    Palette,
    RobotFootprint,
    TerrainJitter,
    WorldConfig,
    default_config,
    load_config_file,
    variant_names,
)
from gymgate.worldsim.errors import (
    InvalidConfigError,
    NoEpisodeError,
    SpawnExhaustedError,
    WorldError,
    WrongActionKindError,
)
from gymgate.worldsim.kinematics import (
    ContinuousAction,
    DiscreteAction,
    Pose2D,
    apply_action,
    normalize_angle,
)
from gymgate.worldsim.world import (
    ChannelType,
    Observation,
    StepResult,
    Termination,
    World,
    compute_reward,
)

__all__ = [
    "ActionParams",
    "Box",
    "CameraConfig",
    "ChannelType",
    "ContinuousAction",
    "DiscreteAction",
    "InvalidConfigError",
    "NoEpisodeError",
    "Observation",
    "Palette",
    "Pose2D",
    "RobotFootprint",
    "SpawnExhaustedError",
    "StepResult",
    "TerrainJitter",
    "Termination",
    "World",
    "WorldConfig",
    "WorldError",
    "WrongActionKindError",
    "apply_action",
    "compute_reward",
    "default_config",
    "load_config_file",
    "normalize_angle",
    "variant_names",
]
