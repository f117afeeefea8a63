"""End-to-end training smoke against a live gateway."""

import csv
import time
from types import SimpleNamespace

import numpy as np
import pytest
import torch
from click.testing import CliRunner

import monolith_gym
from monolith_gym import UsageError

from monolith_baselines import DoubleDQNAgent, DQNConfig, build_agent, train
from monolith_baselines.cli import main as cli_main

ENV = "OffWorldMonolithDiscreteSim-v0"


def test_build_agent_validates_kind_and_action_space() -> None:
    discrete_env = SimpleNamespace(action_space=monolith_gym.Discrete(4))
    continuous_env = SimpleNamespace(
        action_space=monolith_gym.Box(-1.0, 1.0, shape=(2,), dtype=np.float32))
    assert isinstance(build_agent("dqn", discrete_env, seed=0), DoubleDQNAgent)
    with pytest.raises(UsageError):
        build_agent("dqn", continuous_env, seed=0)
    with pytest.raises(UsageError):
        build_agent("ppo", discrete_env, seed=0)


def test_dqn_500_step_smoke(gateway, tmp_path) -> None:
    started = time.monotonic()
    result = train("dqn", ENV, max_steps=500, seed=7, out_dir=tmp_path / "run")
    elapsed = time.monotonic() - started

    # losses start once the replay covers a batch, and stay finite
    assert len(result.losses) == 500 - DQNConfig().batch_size + 1
    assert all(np.isfinite(value) for value in result.losses)
    assert result.replay_size == 500
    # step limit is 100, so 500 steps complete at least four episodes
    assert len(result.episodes) >= 4
    assert [row[0] for row in result.episodes] == list(range(len(result.episodes)))

    with open(result.csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [(int(r["episode_index"]), float(r["reward"]), int(r["steps"]))
            for r in rows] == result.episodes

    checkpoint = torch.load(result.checkpoint_path, map_location="cpu",
                            weights_only=True)
    assert set(checkpoint) == {"online", "target"}
    params = (tmp_path / "run" / "params.txt").read_text()
    assert "dqn_online: 1780" in params
    assert elapsed < 480.0


def test_cli_train_smoke(gateway, tmp_path) -> None:
    out_dir = tmp_path / "cli-run"
    result = CliRunner().invoke(
        cli_main, ["train", "--agent", "dqn", "--env", ENV,
                   "--steps", "40", "--seed", "3", "--out", str(out_dir)])
    assert result.exit_code == 0, result.output
    assert "episodes:" in result.output
    assert (out_dir / "episodes.csv").exists()
    assert (out_dir / "checkpoint.pt").exists()


def test_cli_train_without_server_exits_5(tmp_path, monkeypatch) -> None:
    monkeypatch.setenv("GYMGATE_ADDR", "127.0.0.1:9")
    monkeypatch.setenv("GYMGATE_TOKEN", "feedface")
    result = CliRunner().invoke(
        cli_main, ["train", "--agent", "dqn", "--env", ENV,
                   "--steps", "10", "--out", str(tmp_path / "x")])
    assert result.exit_code == 5
