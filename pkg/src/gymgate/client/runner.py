"""Reset/step episode loops with CSV summaries.

Works against anything exposing the EnvClient surface (reset() returning an
observation, step(action) returning reward/done/termination/step_index);
`LocalEnv` adapts an in-process world to that surface so the same runner
drives remote and local experiments.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from gymgate.client.session import RemoteStepResult
from gymgate.worldsim import Observation, World

CSV_FIELDS = ("episode_index", "reward", "steps", "termination")


@dataclass
class EpisodeRow:
    episode_index: int
    reward: float
    steps: int
    termination: str


@dataclass
class EpisodeSummary:
    episodes: list[EpisodeRow] = field(default_factory=list)

    @property
    def success_rate(self) -> float:
        if not self.episodes:
            return 0.0
        return sum(1 for e in self.episodes if e.reward > 0) / len(self.episodes)

    @property
    def mean_steps(self) -> float:
        if not self.episodes:
            return 0.0
        return sum(e.steps for e in self.episodes) / len(self.episodes)


class LocalEnv:
    """In-process world behind the remote-env interface."""

    def __init__(self, world: World):
        self.world = world

    def reset(self) -> Observation:
        return self.world.reset()

    def step(self, action) -> RemoteStepResult:
        result = self.world.step(action)
        return RemoteStepResult(
            observation=result.observation,
            reward=result.reward,
            done=result.done,
            termination=result.info.termination.value,
            step_index=result.info.step_index,
        )

    def close(self) -> None:
        self.world.abandon_episode()


def run_agent(env, policy, episodes: int, csv_path: str | Path | None = None,
              max_steps_guard: int = 1000) -> EpisodeSummary:
    """Run `episodes` reset-to-termination loops.

    The CSV is written incrementally and flushed per episode, so an aborted
    run leaves a valid partial summary on disk. `episodes=0` writes just the
    header.
    """
    summary = EpisodeSummary()
    writer = fh = None
    if csv_path is not None:
        fh = open(csv_path, "w", newline="")
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        fh.flush()
    try:
        for index in range(episodes):
            observation = env.reset()
            result = None
            for _ in range(max_steps_guard):
                result = env.step(policy(observation))
                observation = result.observation
                if result.done:
                    break
            if result is None or not result.done:
                raise RuntimeError("episode did not terminate within the step guard")
            row = EpisodeRow(
                episode_index=index,
                reward=result.reward,
                steps=result.step_index,
                termination=result.termination,
            )
            summary.episodes.append(row)
            if writer is not None:
                writer.writerow([row.episode_index, row.reward, row.steps, row.termination])
                fh.flush()
    finally:
        if fh is not None:
            fh.close()
    return summary
