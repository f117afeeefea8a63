"""Failure types, re-exported one-to-one from the client library so agent
code can catch the same names regardless of which layer raised them."""

from gymgate.client import (
    AccessError,
    ClientError,
    EnvBusyError,
    RemoteError,
    TransportError,
    UsageError,
)

__all__ = [
    "AccessError",
    "ClientError",
    "EnvBusyError",
    "RemoteError",
    "TransportError",
    "UsageError",
]
