"""Gateway server: authentication, time bookings, exclusive leases, action
routing to world instances, pacing, experiment records, and the leaderboard."""

from gymgate.gateway.auth import User, UserStore
from gymgate.gateway.bookings import Booking, BookingStore
from gymgate.gateway.errors import (
    ActionKindError,
    AuthFailedError,
    BadRequestError,
    BusyError,
    EpisodeStateError,
    GatewayError,
    LeaseLostError,
    NameTakenError,
    NoBookingError,
    NotFoundError,
    StorageError,
    UnknownEnvError,
)
from gymgate.gateway.experiments import (
    EpisodeRecord,
    Experiment,
    ExperimentStore,
    LeaderboardStore,
    best_window_avg,
)
from gymgate.gateway.leases import Lease, LeaseManager
from gymgate.gateway.registry import CATALOG, EnvSpec, resolve_env
from gymgate.gateway.server import GatewayServer
from gymgate.gateway.service import GatewayConfig, GatewayService

__all__ = [
    "ActionKindError",
    "AuthFailedError",
    "EpisodeStateError",
    "BadRequestError",
    "Booking",
    "BookingStore",
    "BusyError",
    "CATALOG",
    "EnvSpec",
    "EpisodeRecord",
    "Experiment",
    "ExperimentStore",
    "GatewayConfig",
    "GatewayError",
    "GatewayServer",
    "GatewayService",
    "LeaderboardStore",
    "Lease",
    "LeaseLostError",
    "LeaseManager",
    "NameTakenError",
    "NoBookingError",
    "NotFoundError",
    "StorageError",
    "UnknownEnvError",
    "User",
    "UserStore",
    "best_window_avg",
    "resolve_env",
]
