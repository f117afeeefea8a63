"""Soft Actor-Critic, discrete (categorical policy) and continuous
(squashed Gaussian) variants, with twin critics and learned temperature."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import torch
import torch.nn.functional as F

from monolith_baselines.networks import (
    ContinuousSACActor,
    ContinuousSACCritic,
    DiscreteSACActor,
    DiscreteSACCritic,
    downsample_to_sac_input,
    parameter_count,
    polyak_update,
)
from monolith_baselines.replay import ReplayBuffer


def discrete_entropy_target(n_actions: int) -> float:
    return 0.2 * (-math.log(1.0 / n_actions))


def continuous_entropy_target(action_dim: int) -> float:
    return -0.2 * action_dim


@dataclass(frozen=True)
class SACConfig:
    learning_rate: float = 0.0003
    batch_size: int = 1024
    tau: float = 0.005
    replay_capacity: int = 500_000
    discount: float = 0.99


class _SACBase:
    def __init__(self, config: SACConfig, entropy_target: float, seed: int):
        self.config = config
        self.entropy_target = entropy_target
        torch.manual_seed(seed)
        self.replay = ReplayBuffer(config.replay_capacity, seed=seed)
        self._rng = np.random.default_rng(seed)
        self.log_alpha = torch.zeros(1, requires_grad=True)
        self.losses: list[float] = []

    @property
    def alpha(self) -> float:
        return float(self.log_alpha.exp().item())

    @staticmethod
    def _encode(observations: np.ndarray) -> torch.Tensor:
        full = torch.from_numpy(observations).permute(0, 3, 1, 2)
        return downsample_to_sac_input(full)

    def observe(self, observation, action, reward, next_observation, done) -> None:
        self.replay.push(observation, action, reward, next_observation, done)

    def _record(self, value: float) -> float:
        if not math.isfinite(value):
            raise RuntimeError(f"SAC loss diverged to {value}")
        self.losses.append(value)
        return value


class DiscreteSACAgent(_SACBase):
    def __init__(self, config: SACConfig = SACConfig(), n_actions: int = 4, seed: int = 0):
        super().__init__(config, discrete_entropy_target(n_actions), seed)
        self.n_actions = n_actions
        self.actor = DiscreteSACActor(n_actions)
        self.critic_1 = DiscreteSACCritic(n_actions)
        self.critic_2 = DiscreteSACCritic(n_actions)
        self.target_1 = DiscreteSACCritic(n_actions)
        self.target_2 = DiscreteSACCritic(n_actions)
        self.target_1.load_state_dict(self.critic_1.state_dict())
        self.target_2.load_state_dict(self.critic_2.state_dict())
        lr = config.learning_rate
        self.actor_opt = torch.optim.Adam(self.actor.parameters(), lr=lr)
        self.critic_opt = torch.optim.Adam(
            list(self.critic_1.parameters()) + list(self.critic_2.parameters()), lr=lr)
        self.alpha_opt = torch.optim.Adam([self.log_alpha], lr=lr)

    @property
    def parameter_counts(self) -> dict[str, int]:
        return {
            "sac_actor": parameter_count(self.actor),
            "sac_critics": parameter_count(self.critic_1) + parameter_count(self.critic_2),
            "sac_temperature": 1,
        }

    def act(self, observation: np.ndarray, step: int = 0) -> int:
        with torch.no_grad():
            logits = self.actor(self._encode(observation[None]))
        probs = torch.softmax(logits, dim=-1).numpy()[0]
        return int(self._rng.choice(self.n_actions, p=probs))

    def update(self) -> float | None:
        if len(self.replay) < self.config.batch_size:
            return None
        batch = self.replay.sample(self.config.batch_size)
        obs = self._encode(batch.observations)
        next_obs = self._encode(batch.next_observations)
        actions = torch.from_numpy(batch.actions).long()
        rewards = torch.from_numpy(batch.rewards)
        dones = torch.from_numpy(batch.dones)
        alpha = self.log_alpha.exp().detach()

        with torch.no_grad():
            next_probs = torch.softmax(self.actor(next_obs), dim=-1)
            next_log_probs = torch.log(next_probs + 1e-8)
            next_q = torch.min(self.target_1(next_obs), self.target_2(next_obs))
            next_v = (next_probs * (next_q - alpha * next_log_probs)).sum(dim=-1)
            target = rewards + self.config.discount * (1.0 - dones) * next_v

        index = actions.unsqueeze(1)
        q1 = self.critic_1(obs).gather(1, index).squeeze(1)
        q2 = self.critic_2(obs).gather(1, index).squeeze(1)
        critic_loss = F.mse_loss(q1, target) + F.mse_loss(q2, target)
        self.critic_opt.zero_grad()
        critic_loss.backward()
        self.critic_opt.step()

        probs = torch.softmax(self.actor(obs), dim=-1)
        log_probs = torch.log(probs + 1e-8)
        with torch.no_grad():
            q = torch.min(self.critic_1(obs), self.critic_2(obs))
        actor_loss = (probs * (alpha * log_probs - q)).sum(dim=-1).mean()
        self.actor_opt.zero_grad()
        actor_loss.backward()
        self.actor_opt.step()

        entropy = -(probs * log_probs).sum(dim=-1).detach()
        alpha_loss = (self.log_alpha.exp() * (entropy - self.entropy_target)).mean()
        self.alpha_opt.zero_grad()
        alpha_loss.backward()
        self.alpha_opt.step()

        polyak_update(self.critic_1, self.target_1, self.config.tau)
        polyak_update(self.critic_2, self.target_2, self.config.tau)
        return self._record(float(critic_loss.item()))

    def save(self, path) -> None:
        torch.save({"actor": self.actor.state_dict(),
                    "critic_1": self.critic_1.state_dict(),
                    "critic_2": self.critic_2.state_dict(),
                    "log_alpha": self.log_alpha.detach()}, path)


class ContinuousSACAgent(_SACBase):
    def __init__(self, action_scale, config: SACConfig = SACConfig(), seed: int = 0):
        action_dim = len(action_scale)
        super().__init__(config, continuous_entropy_target(action_dim), seed)
        self.actor = ContinuousSACActor(action_dim, action_scale)
        self.critic_1 = ContinuousSACCritic(action_dim)
        self.critic_2 = ContinuousSACCritic(action_dim)
        self.target_1 = ContinuousSACCritic(action_dim)
        self.target_2 = ContinuousSACCritic(action_dim)
        self.target_1.load_state_dict(self.critic_1.state_dict())
        self.target_2.load_state_dict(self.critic_2.state_dict())
        lr = config.learning_rate
        self.actor_opt = torch.optim.Adam(self.actor.parameters(), lr=lr)
        self.critic_opt = torch.optim.Adam(
            list(self.critic_1.parameters()) + list(self.critic_2.parameters()), lr=lr)
        self.alpha_opt = torch.optim.Adam([self.log_alpha], lr=lr)

    @property
    def parameter_counts(self) -> dict[str, int]:
        return {
            "sac_actor": parameter_count(self.actor),
            "sac_critics": parameter_count(self.critic_1) + parameter_count(self.critic_2),
            "sac_temperature": 1,
        }

    def act(self, observation: np.ndarray, step: int = 0) -> np.ndarray:
        with torch.no_grad():
            action, _ = self.actor.sample(self._encode(observation[None]))
        return action.numpy()[0]

    def update(self) -> float | None:
        if len(self.replay) < self.config.batch_size:
            return None
        batch = self.replay.sample(self.config.batch_size)
        obs = self._encode(batch.observations)
        next_obs = self._encode(batch.next_observations)
        actions = torch.from_numpy(batch.actions.astype(np.float32))
        rewards = torch.from_numpy(batch.rewards)
        dones = torch.from_numpy(batch.dones)
        alpha = self.log_alpha.exp().detach()

        with torch.no_grad():
            next_action, next_log_prob = self.actor.sample(next_obs)
            next_q = torch.min(self.target_1(next_obs, next_action),
                               self.target_2(next_obs, next_action))
            target = rewards + self.config.discount * (1.0 - dones) * (
                next_q - alpha * next_log_prob)

        critic_loss = (F.mse_loss(self.critic_1(obs, actions), target)
                       + F.mse_loss(self.critic_2(obs, actions), target))
        self.critic_opt.zero_grad()
        critic_loss.backward()
        self.critic_opt.step()

        new_action, log_prob = self.actor.sample(obs)
        q = torch.min(self.critic_1(obs, new_action), self.critic_2(obs, new_action))
        actor_loss = (alpha * log_prob - q).mean()
        self.actor_opt.zero_grad()
        actor_loss.backward()
        self.actor_opt.step()

        alpha_loss = -(self.log_alpha.exp() * (log_prob.detach() + self.entropy_target)).mean()
        self.alpha_opt.zero_grad()
        alpha_loss.backward()
        self.alpha_opt.step()

        polyak_update(self.critic_1, self.target_1, self.config.tau)
        polyak_update(self.critic_2, self.target_2, self.config.tau)
        return self._record(float(critic_loss.item()))

    def save(self, path) -> None:
        torch.save({"actor": self.actor.state_dict(),
                    "critic_1": self.critic_1.state_dict(),
                    "critic_2": self.critic_2.state_dict(),
                    "log_alpha": self.log_alpha.detach()}, path)
