"""Learning-curve rendering from episode logs."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be set first


def moving_average(values, window: int = 100) -> np.ndarray:
    """Trailing mean over full windows; degenerates to one overall mean."""
    data = np.asarray(values, dtype=np.float64)
    if data.size == 0:
        raise ValueError("no values to average")
    if window < 1:
        raise ValueError("window must be >= 1")
    if window > data.size:
        return np.array([data.mean()])
    kernel = np.full(window, 1.0 / window)
    return np.convolve(data, kernel, mode="valid")


def read_episode_rewards(csv_path) -> np.ndarray:
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{csv_path} has no episode rows")
    return np.array([float(row["reward"]) for row in rows])


def plot_learning_curve(csv_path, out_path, window: int = 100) -> Path:
    rewards = read_episode_rewards(csv_path)
    curve = moving_average(rewards, window)
    offset = min(window, len(rewards)) - 1
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(np.arange(offset, offset + len(curve)), curve)
    ax.set_xlabel("episode")
    ax.set_ylabel(f"mean reward over {min(window, len(rewards))} episodes")
    ax.set_title(Path(csv_path).stem)
    ax.grid(True, alpha=0.3)
    out = Path(out_path)
    fig.savefig(out, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return out
