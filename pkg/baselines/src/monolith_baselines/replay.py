"""Circular transition storage."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Batch:
    observations: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_observations: np.ndarray
    dones: np.ndarray


class ReplayBuffer:
    """Fixed-capacity ring buffer; at capacity the oldest entry is overwritten."""

    def __init__(self, capacity: int, seed: int = 0):
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.capacity = int(capacity)
        self._storage: list[tuple] = []
        self._cursor = 0
        self._rng = np.random.default_rng(seed)

    def __len__(self) -> int:
        return len(self._storage)

    def push(self, observation, action, reward, next_observation, done) -> None:
        item = (observation, action, float(reward), next_observation, bool(done))
        if len(self._storage) < self.capacity:
            self._storage.append(item)
        else:
            self._storage[self._cursor] = item
        self._cursor = (self._cursor + 1) % self.capacity

    def sample(self, batch_size: int) -> Batch:
        if batch_size > len(self._storage):
            raise ValueError(f"cannot sample {batch_size} of {len(self._storage)} transitions")
        indices = self._rng.integers(len(self._storage), size=batch_size)
        obs, actions, rewards, next_obs, dones = zip(*(self._storage[i] for i in indices))
        return Batch(
            observations=np.stack(obs),
            actions=np.asarray(actions),
            rewards=np.asarray(rewards, dtype=np.float32),
            next_observations=np.stack(next_obs),
            dones=np.asarray(dones, dtype=np.float32),
        )

    def items(self) -> list[tuple]:
        """Stored transitions, oldest first."""
        if len(self._storage) < self.capacity:
            return list(self._storage)
        return self._storage[self._cursor:] + self._storage[:self._cursor]
