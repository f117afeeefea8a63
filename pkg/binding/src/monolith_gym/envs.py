"""Environment objects over the remote gateway.

`make()` opens one connection per environment object; `close()` releases the
lease and the connection. Observations are float32 arrays of shape
(240, 320, C): depth in meters (no-hit pixels read 65.535), RGB kept on the
0..255 scale. RGBD stacks the planes in name order: R, G, B, D.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from gymgate.client import connect
from gymgate.client.session import ClientSession, EnvClient
from gymgate.worldsim import ContinuousAction, DiscreteAction, Observation, default_config

from monolith_gym.channels import Channels
from monolith_gym.errors import UsageError
from monolith_gym.spaces import Box, Discrete, Space

FRAME_HEIGHT = 240
FRAME_WIDTH = 320
DEPTH_MAX_METERS = 65.535  # uint16 millimeter ceiling, sentinel included

DEFAULT_ADDR = "127.0.0.1:7007"


@dataclass(frozen=True)
class BindingSpec:
    """One registered environment name and how it maps onto the gateway."""

    id: str
    gateway_name: str
    variant: str
    control_mode: str
    paced: bool


def _specs() -> dict[str, BindingSpec]:
    specs = {}
    for base, variant in (
        ("OffWorldMonolithDiscrete", "monolith_discrete"),
        ("OffWorldMonolithContinuous", "monolith_continuous"),
        ("OffWorldMonolithObstaclesDiscrete", "monolith_obstacles_discrete"),
        ("OffWorldMonolithObstaclesContinuous", "monolith_obstacles_continuous"),
    ):
        mode = "continuous" if "Continuous" in base else "discrete"
        for suffix, paced in (("Sim", False), ("Real", True)):
            name = f"{base}{suffix}-v0"
            gateway_name = name[len("OffWorld"):]
            specs[name] = BindingSpec(id=name, gateway_name=gateway_name,
                                      variant=variant, control_mode=mode, paced=paced)
    return specs


REGISTRY: dict[str, BindingSpec] = _specs()


def observation_space(channel_type: Channels) -> Box:
    count = channel_type.count
    high = np.empty((FRAME_HEIGHT, FRAME_WIDTH, count), dtype=np.float32)
    if channel_type is Channels.DEPTH_ONLY:
        high[:] = DEPTH_MAX_METERS
    elif channel_type is Channels.RGB_ONLY:
        high[:] = 255.0
    else:
        high[..., :3] = 255.0
        high[..., 3] = DEPTH_MAX_METERS
    return Box(low=np.zeros_like(high), high=high, dtype=np.float32)


def action_space_for(spec: BindingSpec) -> Space:
    if spec.control_mode == "discrete":
        return Discrete(len(DiscreteAction))
    params = default_config(spec.variant).action_params
    low = np.array([-params.continuous_linear_bound, -params.continuous_angular_bound],
                   dtype=np.float32)
    return Box(low=low, high=-low, dtype=np.float32)


def convert_observation(obs: Observation, channel_type: Channels) -> np.ndarray:
    planes = np.empty((FRAME_HEIGHT, FRAME_WIDTH, channel_type.count), dtype=np.float32)
    if channel_type is Channels.DEPTH_ONLY:
        planes[..., 0] = obs.depth.astype(np.float32) / 1000.0
    elif channel_type is Channels.RGB_ONLY:
        planes[:] = obs.rgb.astype(np.float32)
    else:
        planes[..., :3] = obs.rgb.astype(np.float32)
        planes[..., 3] = obs.depth.astype(np.float32) / 1000.0
    return planes


class MonolithEnv:
    """One leased remote environment behind the reset/step/close contract."""

    def __init__(self, spec: BindingSpec, session: ClientSession, env: EnvClient,
                 channel_type: Channels):
        self.spec = spec
        self.channel_type = channel_type
        self.observation_space = observation_space(channel_type)
        self.action_space = action_space_for(spec)
        self._session = session
        self._env = env
        self._closed = False

    def reset(self) -> np.ndarray:
        return convert_observation(self._env.reset(), self.channel_type)

    def step(self, action) -> tuple[np.ndarray, float, bool, dict]:
        # validate locally so an out-of-range action never reaches the wire
        if not self.action_space.contains(action):
            raise UsageError(f"action {action!r} is not in {self.action_space!r}")
        if isinstance(self.action_space, Discrete):
            wire_action = DiscreteAction(int(action))
        else:
            linear, angular = np.asarray(action, dtype=np.float64)
            wire_action = ContinuousAction(float(linear), float(angular))
        result = self._env.step(wire_action)
        observation = convert_observation(result.observation, self.channel_type)
        info = {"termination": result.termination, "step_index": result.step_index}
        return observation, result.reward, result.done, info

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        try:
            self._env.close()
        finally:
            self._session.close()

    def __enter__(self) -> "MonolithEnv":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def make(name: str, experiment_name: str = "default-experiment",
         resume_experiment: bool = False,
         channel_type: Channels = Channels.DEPTH_ONLY,
         server: str | None = None, token: str | None = None) -> MonolithEnv:
    """Connect, lease the named environment, and wrap it.

    Server address comes from `server` or `GYMGATE_ADDR`; the access token
    from `token` or `GYMGATE_TOKEN`.
    """
    spec = REGISTRY.get(name)
    if spec is None:
        known = ", ".join(sorted(REGISTRY))
        raise UsageError(f"unknown environment {name!r}; valid names: {known}")
    if not isinstance(channel_type, Channels):
        raise UsageError(f"channel_type must be a Channels value, got {channel_type!r}")
    address = server or os.environ.get("GYMGATE_ADDR", DEFAULT_ADDR)
    secret = token or os.environ.get("GYMGATE_TOKEN")
    if not secret:
        raise UsageError("no token: pass token= or set GYMGATE_TOKEN")
    session = connect(address, secret)
    try:
        env = session.make_env(spec.gateway_name, experiment_name,
                               resume=resume_experiment,
                               channels=channel_type.to_channel_type())
    except Exception:
        session.close()
        raise
    return MonolithEnv(spec, session, env, channel_type)
