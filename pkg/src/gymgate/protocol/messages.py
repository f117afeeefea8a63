"""Message vocabulary.

Every message carries a request/response correlation id. Responses echo the
id of the request they answer; a Heartbeat is answered by a Heartbeat with
the same id. Observation pixels never appear in the JSON header: StepOk and
ResetOk place them in the frame blob, depth plane first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gymgate.worldsim import ChannelType, ContinuousAction, DiscreteAction, Observation

PROTOCOL_VERSION = 1

Action = DiscreteAction | ContinuousAction


class ErrorCode:
    """Stable wire strings for Error.code."""

    AUTH_FAILED = "auth-failed"
    NO_BOOKING = "no-booking"
    VERSION_MISMATCH = "version-mismatch"
    PIPELINING_UNSUPPORTED = "pipelining-unsupported"
    BUSY = "busy"
    NAME_TAKEN = "name-taken"
    NOT_FOUND = "not-found"
    UNKNOWN_ENV = "unknown-env"
    LEASE_LOST = "lease-lost"
    WRONG_ACTION_KIND = "wrong-action-kind"
    NO_EPISODE = "no-episode"
    BAD_REQUEST = "bad-request"
    INTERNAL = "internal"


@dataclass(frozen=True)
class Hello:
    id: int
    token: str
    client_version: str


@dataclass(frozen=True)
class HelloOk:
    id: int
    session_id: str
    server_version: str


@dataclass(frozen=True)
class Make:
    id: int
    env_name: str
    experiment_name: str
    resume_experiment: bool
    channel_type: ChannelType


@dataclass(frozen=True)
class MakeOk:
    id: int
    env_handle: str
    obs_shape: tuple[int, ...]


@dataclass(frozen=True)
class Reset:
    id: int
    env_handle: str


@dataclass
class ResetOk:
    id: int
    observation: Observation


@dataclass(frozen=True)
class Step:
    id: int
    env_handle: str
    action: Action


@dataclass
class StepOk:
    id: int
    reward: float
    done: bool
    termination: str
    step_index: int
    observation: Observation


@dataclass(frozen=True)
class Close:
    id: int
    env_handle: str


@dataclass(frozen=True)
class CloseOk:
    id: int


@dataclass(frozen=True)
class ErrorMsg:
    id: int
    code: str
    detail: str


@dataclass(frozen=True)
class Heartbeat:
    id: int


@dataclass(frozen=True)
class LeaderboardQuery:
    id: int
    top_n: int


@dataclass(frozen=True)
class LeaderboardOk:
    id: int
    entries: tuple[dict, ...] = field(default_factory=tuple)


Message = (
    Hello
    | HelloOk
    | Make
    | MakeOk
    | Reset
    | ResetOk
    | Step
    | StepOk
    | Close
    | CloseOk
    | ErrorMsg
    | Heartbeat
    | LeaderboardQuery
    | LeaderboardOk
)
