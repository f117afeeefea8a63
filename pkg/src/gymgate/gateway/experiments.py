"""Experiment records, episode logs, and the leaderboard aggregate.

An experiment is a named, append-only episode log owned by one user. The
leaderboard ranks experiments by their best mean total reward over any
contiguous 100-episode window; an experiment is unranked until it has
logged at least 100 episodes.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

from gymgate.gateway.errors import BadRequestError, NameTakenError, NotFoundError
from gymgate.gateway.storage import JsonlStore

LEADERBOARD_WINDOW = 100


@dataclass(frozen=True)
class EpisodeRecord:
    episode_index: int
    total_reward: float
    steps: int
    ended_at: float


@dataclass
class Experiment:
    name: str
    owner: str
    env_name: str
    created_at: float
    episodes: list[EpisodeRecord] = field(default_factory=list)

    @property
    def next_index(self) -> int:
        return self.episodes[-1].episode_index + 1 if self.episodes else 0


def best_window_avg(rewards: list[float], window: int = LEADERBOARD_WINDOW) -> float | None:
    """Highest mean over any contiguous `window` rewards; None if too few."""
    if len(rewards) < window:
        return None
    total = sum(rewards[:window])
    best = total
    for i in range(window, len(rewards)):
        total += rewards[i] - rewards[i - window]
        if total > best:
            best = total
    return best / window


class ExperimentStore:
    def __init__(self, store: JsonlStore, clock=time.time):
        self._store = store
        self._clock = clock
        self._lock = threading.Lock()
        self._experiments: dict[tuple[str, str], Experiment] = {}
        for rec in store.replay():
            if rec["kind"] == "experiment":
                exp = Experiment(rec["name"], rec["owner"], rec["env_name"], rec["created_at"])
                self._experiments[(exp.owner, exp.name)] = exp
            elif rec["kind"] == "episode":
                exp = self._experiments[(rec["owner"], rec["name"])]
                exp.episodes.append(
                    EpisodeRecord(rec["episode_index"], rec["total_reward"],
                                  rec["steps"], rec["ended_at"])
                )

    def register(self, owner: str, name: str, resume: bool, env_name: str) -> Experiment:
        if not name:
            raise BadRequestError("experiment name must be non-empty")
        with self._lock:
            existing = self._experiments.get((owner, name))
            if resume:
                if existing is None:
                    raise NotFoundError(f"no experiment {name!r} to resume")
                if existing.env_name != env_name:
                    raise BadRequestError(
                        f"experiment {name!r} belongs to {existing.env_name}, not {env_name}"
                    )
                return existing
            if existing is not None:
                raise NameTakenError(f"experiment name {name!r} already used; pass resume to continue")
            exp = Experiment(name=name, owner=owner, env_name=env_name, created_at=self._clock())
            self._store.append(
                {"kind": "experiment", "name": exp.name, "owner": exp.owner,
                 "env_name": exp.env_name, "created_at": exp.created_at}
            )
            self._experiments[(owner, name)] = exp
            return exp

    def get(self, owner: str, name: str) -> Experiment:
        with self._lock:
            exp = self._experiments.get((owner, name))
        if exp is None:
            raise NotFoundError(f"no experiment {name!r}")
        return exp

    def record_episode(self, owner: str, name: str, total_reward: float, steps: int,
                       ended_at: float | None = None) -> EpisodeRecord:
        """Append one finished episode; persisted before this returns."""
        if total_reward not in (0.0, 1.0):
            raise BadRequestError(f"total_reward must be 0.0 or 1.0, got {total_reward}")
        with self._lock:
            exp = self._experiments.get((owner, name))
            if exp is None:
                raise NotFoundError(f"no experiment {name!r}")
            record = EpisodeRecord(
                episode_index=exp.next_index,
                total_reward=float(total_reward),
                steps=int(steps),
                ended_at=self._clock() if ended_at is None else float(ended_at),
            )
            self._store.append(
                {"kind": "episode", "name": name, "owner": owner,
                 "episode_index": record.episode_index, "total_reward": record.total_reward,
                 "steps": record.steps, "ended_at": record.ended_at}
            )
            exp.episodes.append(record)
            return record

    def all_experiments(self) -> list[Experiment]:
        with self._lock:
            return list(self._experiments.values())


class LeaderboardStore:
    """Current best-window snapshot per experiment, replayed last-wins."""

    def __init__(self, store: JsonlStore):
        self._store = store
        self._lock = threading.Lock()
        self._entries: dict[tuple[str, str], dict] = {}
        for rec in store.replay():
            entry = {k: v for k, v in rec.items() if k != "v"}
            self._entries[(entry["owner_id"], entry["experiment_name"])] = entry

    def update(self, owner_id: str, owner: str, experiment_name: str, env_name: str,
               episodes_count: int, best: float, last_updated: float) -> dict:
        entry = {
            "experiment_name": experiment_name,
            "owner": owner,
            "owner_id": owner_id,
            "env_name": env_name,
            "episodes_count": int(episodes_count),
            "best_window_avg": float(best),
            "last_updated": float(last_updated),
        }
        with self._lock:
            self._store.append(entry)
            self._entries[(owner_id, experiment_name)] = entry
        return entry

    def top(self, n: int) -> list[dict]:
        """Ranked by best_window_avg desc; ties broken by fewer episodes,
        then earlier last_updated."""
        with self._lock:
            entries = list(self._entries.values())
        entries.sort(key=lambda e: (-e["best_window_avg"], e["episodes_count"], e["last_updated"]))
        return entries[: max(0, int(n))]

    def all_entries(self) -> list[dict]:
        with self._lock:
            return list(self._entries.values())
