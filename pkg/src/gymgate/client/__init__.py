"""Client library and CLI: protocol client session, environment handle,
scripted policies, and an episode runner that writes CSV summaries."""

from gymgate.client.errors import (
    AccessError,
    ClientError,
    EnvBusyError,
    RemoteError,
    TransportError,
    UsageError,
)
from gymgate.client.policies import DepthServoPolicy, OraclePolicy, RandomPolicy
from gymgate.client.runner import EpisodeSummary, LocalEnv, run_agent
from gymgate.client.session import ClientSession, EnvClient, RemoteStepResult, connect

__all__ = [
    "AccessError",
    "ClientError",
    "ClientSession",
    "DepthServoPolicy",
    "EnvBusyError",
    "EnvClient",
    "EpisodeSummary",
    "LocalEnv",
    "OraclePolicy",
    "RandomPolicy",
    "RemoteError",
    "RemoteStepResult",
    "TransportError",
    "UsageError",
    "connect",
    "run_agent",
]
