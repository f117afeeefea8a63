"""Catalog of servable environments.

Sim/Real name pairs resolve to the same simulator-backed world; the Real
alias additionally forces paced stepping so client code keeps its timing
behavior when pointed at either name.
"""

from __future__ import annotations

from dataclasses import dataclass

from gymgate.gateway.errors import UnknownEnvError
from gymgate.worldsim import ChannelType


@dataclass(frozen=True)
class EnvSpec:
    name: str
    variant: str
    paced: bool


def _pair(base: str, variant: str) -> list[EnvSpec]:
    return [
        EnvSpec(name=f"{base}Sim-v0", variant=variant, paced=False),
        EnvSpec(name=f"{base}Real-v0", variant=variant, paced=True),
    ]


CATALOG: dict[str, EnvSpec] = {
    spec.name: spec
    for spec in (
        _pair("MonolithDiscrete", "monolith_discrete")
        + _pair("MonolithContinuous", "monolith_continuous")
        + _pair("MonolithObstaclesDiscrete", "monolith_obstacles_discrete")
        + _pair("MonolithObstaclesContinuous", "monolith_obstacles_continuous")
    )
}


def resolve_env(name: str) -> EnvSpec:
    spec = CATALOG.get(name)
    if spec is None:
        known = ", ".join(sorted(CATALOG))
        raise UnknownEnvError(f"unknown environment {name!r}; valid names: {known}")
    return spec


def obs_shape(channel: ChannelType) -> tuple[int, int, int]:
    return (240, 320, channel.channels)
