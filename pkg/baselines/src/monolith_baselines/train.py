"""Off-policy training loop against a gateway environment.

The data pipeline (action sampling, replay order, environment stream) is
deterministic for a fixed seed; gradient results can still vary across
platforms with torch's nondeterministic kernels, so learning curves are
reproducible in shape, not bit-for-bit.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

import monolith_gym
from monolith_gym import Channels, UsageError

from monolith_baselines.dqn import DoubleDQNAgent, DQNConfig
from monolith_baselines.sac import ContinuousSACAgent, DiscreteSACAgent, SACConfig

EPISODE_FIELDS = ("episode_index", "reward", "steps")


@dataclass
class TrainResult:
    episodes: list[tuple[int, float, int]] = field(default_factory=list)
    losses: list[float] = field(default_factory=list)
    parameter_counts: dict[str, int] = field(default_factory=dict)
    replay_size: int = 0
    csv_path: Path | None = None
    checkpoint_path: Path | None = None


def build_agent(agent_kind: str, env, seed: int,
                dqn_config: DQNConfig | None = None,
                sac_config: SACConfig | None = None):
    discrete = isinstance(env.action_space, monolith_gym.Discrete)
    if agent_kind == "dqn":
        if not discrete:
            raise UsageError("dqn requires a discrete-action environment")
        return DoubleDQNAgent(dqn_config or DQNConfig(), seed=seed)
    if agent_kind == "sac":
        if discrete:
            return DiscreteSACAgent(sac_config or SACConfig(),
                                    n_actions=env.action_space.n, seed=seed)
        return ContinuousSACAgent(action_scale=env.action_space.high,
                                  config=sac_config or SACConfig(), seed=seed)
    raise UsageError(f"unknown agent {agent_kind!r}; expected dqn or sac")


def train(agent_kind: str, env_name: str, max_steps: int, seed: int, out_dir,
          server: str | None = None, token: str | None = None,
          experiment_name: str | None = None,
          dqn_config: DQNConfig | None = None,
          sac_config: SACConfig | None = None) -> TrainResult:
    """Run the standard act/observe/update loop for `max_steps` env steps."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)

    env = monolith_gym.make(env_name, experiment_name=experiment_name or
                            f"{agent_kind}-seed{seed}",
                            channel_type=Channels.DEPTH_ONLY,
                            server=server, token=token)
    result = TrainResult(csv_path=out / "episodes.csv",
                         checkpoint_path=out / "checkpoint.pt")
    try:
        agent = build_agent(agent_kind, env, seed, dqn_config, sac_config)
        result.parameter_counts = dict(agent.parameter_counts)
        with open(result.csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(EPISODE_FIELDS)
            observation = env.reset()
            episode_reward = 0.0
            episode_index = 0
            for step in range(max_steps):
                action = agent.act(observation, step)
                next_observation, reward, done, info = env.step(action)
                agent.observe(observation, action, reward, next_observation, done)
                agent.update()
                episode_reward += reward
                if done:
                    row = (episode_index, episode_reward, info["step_index"])
                    result.episodes.append(row)
                    writer.writerow(row)
                    fh.flush()
                    episode_index += 1
                    episode_reward = 0.0
                    observation = env.reset()
                else:
                    observation = next_observation
        agent.save(result.checkpoint_path)
        result.losses = list(agent.losses)
        result.replay_size = len(agent.replay)
        counts = "\n".join(f"{name}: {count}" for name, count in
                           sorted(result.parameter_counts.items()))
        (out / "params.txt").write_text(counts + "\n")
    finally:
        env.close()
    return result
