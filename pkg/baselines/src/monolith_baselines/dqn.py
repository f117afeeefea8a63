"""Double DQN on the raw depth plane."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import torch
import torch.nn.functional as F

from monolith_baselines.networks import DQNNetwork, parameter_count, polyak_update
from monolith_baselines.replay import ReplayBuffer
from monolith_baselines.schedules import LinearSchedule


@dataclass(frozen=True)
class DQNConfig:
    n_actions: int = 4
    learning_rate: float = 0.001
    batch_size: int = 32
    tau: float = 0.01
    replay_capacity: int = 25_000
    epsilon: LinearSchedule = field(default_factory=LinearSchedule)
    discount: float = 0.95


class DoubleDQNAgent:
    """Online/target pair; action selection on the online net, evaluation on
    the target net."""

    def __init__(self, config: DQNConfig = DQNConfig(), seed: int = 0):
        self.config = config
        torch.manual_seed(seed)
        self.online = DQNNetwork(config.n_actions)
        self.target = DQNNetwork(config.n_actions)
        self.target.load_state_dict(self.online.state_dict())
        self.target.requires_grad_(False)
        self.optimizer = torch.optim.Adam(self.online.parameters(), lr=config.learning_rate)
        self.replay = ReplayBuffer(config.replay_capacity, seed=seed)
        self._rng = np.random.default_rng(seed)
        self.losses: list[float] = []

    @property
    def parameter_counts(self) -> dict[str, int]:
        return {"dqn_online": parameter_count(self.online)}

    @staticmethod
    def _to_batch_tensor(observations: np.ndarray) -> torch.Tensor:
        # (B, 240, 320, 1) float32 -> (B, 1, 240, 320)
        return torch.from_numpy(observations).permute(0, 3, 1, 2)

    def act(self, observation: np.ndarray, step: int) -> int:
        """Epsilon-greedy on the annealed schedule."""
        if self._rng.random() < self.config.epsilon.value(step):
            return int(self._rng.integers(self.config.n_actions))
        with torch.no_grad():
            q = self.online(self._to_batch_tensor(observation[None]))
        return int(q.argmax(dim=-1).item())

    def observe(self, observation, action, reward, next_observation, done) -> None:
        self.replay.push(observation, action, reward, next_observation, done)

    def update(self) -> float | None:
        """One gradient step; no-op until the replay covers a batch."""
        if len(self.replay) < self.config.batch_size:
            return None
        batch = self.replay.sample(self.config.batch_size)
        obs = self._to_batch_tensor(batch.observations)
        next_obs = self._to_batch_tensor(batch.next_observations)
        actions = torch.from_numpy(batch.actions).long()
        rewards = torch.from_numpy(batch.rewards)
        dones = torch.from_numpy(batch.dones)

        with torch.no_grad():
            best_next = self.online(next_obs).argmax(dim=-1, keepdim=True)
            next_q = self.target(next_obs).gather(1, best_next).squeeze(1)
            target = rewards + self.config.discount * (1.0 - dones) * next_q
        q = self.online(obs).gather(1, actions.unsqueeze(1)).squeeze(1)
        loss = F.smooth_l1_loss(q, target)

        self.optimizer.zero_grad()
        loss.backward()
        self.optimizer.step()
        polyak_update(self.online, self.target, self.config.tau)

        value = float(loss.item())
        if not math.isfinite(value):
            raise RuntimeError(f"DQN loss diverged to {value}")
        self.losses.append(value)
        return value

    def save(self, path) -> None:
        torch.save({"online": self.online.state_dict(),
                    "target": self.target.state_dict()}, path)
