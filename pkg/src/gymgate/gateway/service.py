"""Transport-free request handling: every protocol request maps to one
method, so the whole gateway can be exercised without sockets.

Concurrency: user/booking/experiment/leaderboard stores and the lease
manager each serialize internally; every world instance has its own lock so
one environment processes one command at a time while a paced wait on one
connection never blocks another environment.
"""

from __future__ import annotations

import random
import sys
import threading
import time
import uuid
import zlib
from dataclasses import dataclass, field
from pathlib import Path

from gymgate import __version__
from gymgate.gateway import registry
from gymgate.gateway.auth import User, UserStore
from gymgate.gateway.bookings import BookingStore
from gymgate.gateway.errors import (
    ActionKindError,
    BadRequestError,
    EpisodeStateError,
    GatewayError,
    NoBookingError,
)
from gymgate.gateway.experiments import (
    LEADERBOARD_WINDOW,
    ExperimentStore,
    LeaderboardStore,
    best_window_avg,
)
from gymgate.gateway.leases import DEFAULT_SWEEP_INTERVAL, DEFAULT_TTL, LeaseManager
from gymgate.gateway.storage import JsonlStore
from gymgate.protocol import (
    Close,
    CloseOk,
    Heartbeat,
    Hello,
    HelloOk,
    LeaderboardOk,
    LeaderboardQuery,
    Make,
    MakeOk,
    Reset,
    ResetOk,
    Step,
    StepOk,
)
from gymgate.worldsim import World, default_config
from gymgate.worldsim.errors import NoEpisodeError, WrongActionKindError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_PORT = 7007

# paced mode: the response is withheld until the 2.0 s action duration plus a
# random extra delay has elapsed; the 1.8 s jitter ceiling keeps every step
# inside the 2-4 s band with margin for scheduling overhead
PACED_EXTRA_MIN = 0.0
PACED_EXTRA_MAX = 1.8


@dataclass
class GatewayConfig:
    port: int = DEFAULT_PORT
    lease_ttl: float = DEFAULT_TTL
    sweep_interval: float = DEFAULT_SWEEP_INTERVAL
    paced: bool = False
    paced_extra_min: float = PACED_EXTRA_MIN
    paced_extra_max: float = PACED_EXTRA_MAX
    env_seeds: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_toml(cls, path) -> "GatewayConfig":
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
        pacing = raw.pop("pacing", {})
        env_seeds = {}
        for name, table in raw.pop("envs", {}).items():
            registry.resolve_env(name)
            env_seeds[name] = int(table["seed"])
        known = {"port", "lease_ttl", "sweep_interval", "paced"}
        unknown = set(raw) - known
        if unknown:
            raise BadRequestError(f"unknown config keys {sorted(unknown)!r}")
        return cls(
            port=int(raw.get("port", DEFAULT_PORT)),
            lease_ttl=float(raw.get("lease_ttl", DEFAULT_TTL)),
            sweep_interval=float(raw.get("sweep_interval", DEFAULT_SWEEP_INTERVAL)),
            paced=bool(raw.get("paced", False)),
            paced_extra_min=float(pacing.get("extra_min", PACED_EXTRA_MIN)),
            paced_extra_max=float(pacing.get("extra_max", PACED_EXTRA_MAX)),
            env_seeds=env_seeds,
        )


def default_env_seed(env_name: str) -> int:
    """Stable per-name seed so restarts rebuild identical worlds."""
    return zlib.crc32(env_name.encode("utf-8"))


@dataclass
class _EnvRuntime:
    spec: registry.EnvSpec
    world: World
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass
class _HandleState:
    env_name: str
    lease_id: str
    experiment_name: str


@dataclass
class Session:
    session_id: str
    user: User
    handles: dict[str, _HandleState] = field(default_factory=dict)


class GatewayService:
    def __init__(self, data_dir, config: GatewayConfig | None = None, clock=time.time,
                 pacing_rng: random.Random | None = None):
        self.config = config or GatewayConfig()
        self.clock = clock
        self.data_dir = Path(data_dir)
        self.users = UserStore(JsonlStore(self.data_dir / "users.jsonl"), clock=clock)
        self.bookings = BookingStore(JsonlStore(self.data_dir / "bookings.jsonl"))
        self.experiments = ExperimentStore(JsonlStore(self.data_dir / "experiments.jsonl"), clock=clock)
        self.leaderboard = LeaderboardStore(JsonlStore(self.data_dir / "leaderboard.jsonl"))
        self.leases = LeaseManager(
            self.bookings, ttl=self.config.lease_ttl, clock=clock, on_reclaim=self._abandon_env
        )
        self._pacing_rng = pacing_rng or random.Random()
        self._envs: dict[str, _EnvRuntime] = {}
        self._envs_lock = threading.Lock()

    # -- environment plumbing ------------------------------------------------

    def _runtime(self, env_name: str) -> _EnvRuntime:
        spec = registry.resolve_env(env_name)
        with self._envs_lock:
            runtime = self._envs.get(env_name)
            if runtime is None:
                seed = self.config.env_seeds.get(env_name, default_env_seed(env_name))
                runtime = _EnvRuntime(spec=spec, world=World(default_config(spec.variant), seed=seed))
                self._envs[env_name] = runtime
            return runtime

    def _abandon_env(self, env_name: str) -> None:
        with self._envs_lock:
            runtime = self._envs.get(env_name)
        if runtime is not None:
            with runtime.lock:
                runtime.world.abandon_episode()

    def _paced(self, runtime: _EnvRuntime) -> bool:
        return runtime.spec.paced or self.config.paced

    def _handle_state(self, session: Session, env_handle: str) -> _HandleState:
        state = session.handles.get(env_handle)
        if state is None:
            raise BadRequestError(f"unknown env handle {env_handle!r}")
        return state

    # -- request handlers ----------------------------------------------------

    def hello(self, msg: Hello) -> tuple[Session, HelloOk]:
        user = self.users.by_token(msg.token)
        if self.bookings.any_covering(user.user_id, self.clock()) is None:
            raise NoBookingError("no booking covers the current time; reserve a slot first")
        session = Session(session_id=f"s-{uuid.uuid4().hex[:12]}", user=user)
        return session, HelloOk(id=msg.id, session_id=session.session_id,
                                server_version=__version__)

    def make(self, session: Session, msg: Make) -> MakeOk:
        runtime = self._runtime(msg.env_name)
        lease = self.leases.acquire(session.user.user_id, msg.env_name)
        try:
            self.experiments.register(
                owner=session.user.user_id,
                name=msg.experiment_name,
                resume=msg.resume_experiment,
                env_name=msg.env_name,
            )
        except GatewayError:
            self.leases.release(lease.lease_id)
            raise
        with runtime.lock:
            runtime.world.channel_config = msg.channel_type
            runtime.world.abandon_episode()
        handle = f"h-{uuid.uuid4().hex[:12]}"
        session.handles[handle] = _HandleState(
            env_name=msg.env_name, lease_id=lease.lease_id, experiment_name=msg.experiment_name
        )
        return MakeOk(id=msg.id, env_handle=handle, obs_shape=registry.obs_shape(msg.channel_type))

    def reset(self, session: Session, msg: Reset) -> ResetOk:
        state = self._handle_state(session, msg.env_handle)
        self.leases.touch(state.lease_id)
        runtime = self._runtime(state.env_name)
        with runtime.lock:
            observation = runtime.world.reset()
        return ResetOk(id=msg.id, observation=observation)

    def step(self, session: Session, msg: Step) -> tuple[StepOk, float | None]:
        """Returns the response plus the paced-mode minimum latency target
        (seconds since the request arrived), None when unpaced."""
        state = self._handle_state(session, msg.env_handle)
        self.leases.touch(state.lease_id)
        runtime = self._runtime(state.env_name)
        with runtime.lock:
            try:
                result = runtime.world.step(msg.action)
            except WrongActionKindError as exc:
                raise ActionKindError(str(exc)) from exc
            except NoEpisodeError as exc:
                raise EpisodeStateError(str(exc)) from exc
        if result.done:
            self._record_done(session, state, result)
        response = StepOk(
            id=msg.id,
            reward=result.reward,
            done=result.done,
            termination=result.info.termination.value,
            step_index=result.info.step_index,
            observation=result.observation,
        )
        if self._paced(runtime):
            extra = self._pacing_rng.uniform(self.config.paced_extra_min, self.config.paced_extra_max)
            return response, runtime.world.config.action_params.step_duration + extra
        return response, None

    def _record_done(self, session: Session, state: _HandleState, result) -> None:
        owner = session.user.user_id
        self.experiments.record_episode(
            owner=owner,
            name=state.experiment_name,
            total_reward=result.reward,
            steps=result.info.step_index,
        )
        exp = self.experiments.get(owner, state.experiment_name)
        best = best_window_avg([e.total_reward for e in exp.episodes])
        if best is not None:
            self.leaderboard.update(
                owner_id=owner,
                owner=session.user.name,
                experiment_name=exp.name,
                env_name=exp.env_name,
                episodes_count=len(exp.episodes),
                best=best,
                last_updated=self.clock(),
            )

    def close(self, session: Session, msg: Close) -> CloseOk:
        state = self._handle_state(session, msg.env_handle)
        self.leases.release(state.lease_id)
        self._abandon_env(state.env_name)
        del session.handles[msg.env_handle]
        return CloseOk(id=msg.id)

    def heartbeat(self, session: Session, msg: Heartbeat) -> Heartbeat:
        for state in session.handles.values():
            self.leases.touch(state.lease_id)
        return Heartbeat(id=msg.id)

    def leaderboard_query(self, msg: LeaderboardQuery) -> LeaderboardOk:
        entries = [
            {k: v for k, v in e.items() if k != "owner_id"}
            for e in self.leaderboard.top(msg.top_n)
        ]
        return LeaderboardOk(id=msg.id, entries=tuple(entries))

    # -- lifecycle -------------------------------------------------------------

    def release_session(self, session: Session) -> None:
        for state in session.handles.values():
            self.leases.release(state.lease_id)
            self._abandon_env(state.env_name)
        session.handles.clear()

    def expire_leases(self) -> list[str]:
        return self.leases.expire()
