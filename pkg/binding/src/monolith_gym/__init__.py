"""Standard RL environment interface over the gymgate remote environments."""

from monolith_gym.channels import Channels
from monolith_gym.envs import REGISTRY, BindingSpec, MonolithEnv, make
from monolith_gym.errors import (
    AccessError,
    ClientError,
    EnvBusyError,
    RemoteError,
    TransportError,
    UsageError,
)
from monolith_gym.registration import register_with_gym
from monolith_gym.spaces import Box, Discrete, Space

__version__ = "0.1.0"

__all__ = [
    "AccessError",
    "BindingSpec",
    "Box",
    "Channels",
    "ClientError",
    "Discrete",
    "EnvBusyError",
    "MonolithEnv",
    "REGISTRY",
    "RemoteError",
    "Space",
    "TransportError",
    "UsageError",
    "make",
    "register_with_gym",
]

# best-effort: lets plain gym.make() find these names in installs that have gym
register_with_gym()
