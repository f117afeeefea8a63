"""Command line front end for training and plotting."""

from __future__ import annotations

import sys

import click

from monolith_gym import ClientError

from monolith_baselines.train import train
from monolith_baselines.plotting import plot_learning_curve


@click.group()
def main() -> None:
    """Reference agents for the monolith navigation environments."""


@main.command("train")
@click.option("--agent", "agent_kind", type=click.Choice(["dqn", "sac"]),
              required=True)
@click.option("--env", "env_name", required=True,
              help="Registry name, e.g. OffWorldMonolithDiscreteSim-v0.")
@click.option("--steps", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--server", default=None, help="Overrides GYMGATE_ADDR.")
@click.option("--token", default=None, help="Overrides GYMGATE_TOKEN.")
@click.option("--experiment", "experiment_name", default=None)
def train_command(agent_kind: str, env_name: str, steps: int, seed: int,
                  out_dir: str, server: str | None, token: str | None,
                  experiment_name: str | None) -> None:
    """Train an agent and write episodes.csv, checkpoint.pt, params.txt."""
    try:
        result = train(agent_kind, env_name, steps, seed, out_dir,
                       server=server, token=token,
                       experiment_name=experiment_name)
    except ClientError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    except RuntimeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"episodes: {len(result.episodes)}")
    click.echo(f"updates: {len(result.losses)}")
    click.echo(f"wrote {result.csv_path} and {result.checkpoint_path}")


@main.command("plot")
@click.option("--in", "csv_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--window", type=int, default=100, show_default=True)
def plot_command(csv_path: str, out_path: str, window: int) -> None:
    """Render a moving-average learning curve from an episodes.csv."""
    try:
        out = plot_learning_curve(csv_path, out_path, window)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
