"""User CLI.

Exit codes: 0 success, 2 usage error, 3 auth/booking rejection,
4 environment busy, 5 protocol or transport failure.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from gymgate.client.errors import ClientError, UsageError
from gymgate.client.policies import DepthServoPolicy, RandomPolicy
from gymgate.client.runner import run_agent
from gymgate.client.session import connect
from gymgate.worldsim import ChannelType
from gymgate.worldsim.pnm import write_pgm16, write_ppm

_CHANNELS = {"depth": ChannelType.DEPTH_ONLY, "rgb": ChannelType.RGB_ONLY, "rgbd": ChannelType.RGBD}


def _server(flag: str | None) -> str:
    return flag or os.environ.get("GYMGATE_SERVER", "127.0.0.1:7007")


def _token(flag: str | None) -> str:
    token = flag or os.environ.get("GYMGATE_TOKEN")
    if not token:
        raise UsageError("no token: pass --token or set GYMGATE_TOKEN")
    return token


def _run(body) -> None:
    try:
        body()
    except ClientError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)


@click.group()
def main() -> None:
    """Client tools for the environment gateway."""


@main.command("connect-test")
@click.option("--server", default=None, help="host:port (or GYMGATE_SERVER).")
@click.option("--token", default=None, help="Access token (or GYMGATE_TOKEN).")
def connect_test(server, token) -> None:
    """Handshake, one heartbeat, disconnect."""

    def body():
        with connect(_server(server), _token(token)) as session:
            session.heartbeat()
            click.echo(f"ok: session {session.session_id}, server {session.server_version}")

    _run(body)


@main.command("run")
@click.option("--server", default=None)
@click.option("--token", default=None)
@click.option("--env", "env_name", required=True)
@click.option("--experiment", "experiment_name", required=True)
@click.option("--resume", is_flag=True, help="Continue an existing experiment log.")
@click.option("--channels", type=click.Choice(sorted(_CHANNELS)), default="depth",
              show_default=True)
@click.option("--policy", "policy_name", type=click.Choice(["random", "servo"]),
              default="random", show_default=True)
@click.option("--episodes", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Policy seed.")
@click.option("--out", "out_path", default=None, help="Per-episode CSV summary path.")
def run(server, token, env_name, experiment_name, resume, channels, policy_name,
        episodes, seed, out_path) -> None:
    """Run a scripted policy for N episodes and summarize."""

    def body():
        if episodes < 0:
            raise UsageError("--episodes must be >= 0")
        control_mode = "continuous" if "Continuous" in env_name else "discrete"
        if policy_name == "random":
            policy = RandomPolicy(control_mode=control_mode, seed=seed)
        else:
            policy = DepthServoPolicy(control_mode=control_mode)
        with connect(_server(server), _token(token)) as session:
            env = session.make_env(env_name, experiment_name, resume=resume,
                                   channels=_CHANNELS[channels])
            try:
                summary = run_agent(env, policy, episodes, csv_path=out_path)
            finally:
                env.close()
        click.echo(
            f"{len(summary.episodes)} episodes: success rate {summary.success_rate:.2f}, "
            f"mean steps {summary.mean_steps:.1f}"
        )

    _run(body)


@main.command("dump")
@click.option("--server", default=None)
@click.option("--token", default=None)
@click.option("--env", "env_name", required=True)
@click.option("--experiment", "experiment_name", default="observation-dump", show_default=True)
@click.option("--channels", type=click.Choice(sorted(_CHANNELS)), default="rgbd",
              show_default=True)
@click.option("--out", "out_dir", required=True, help="Directory for depth.pgm / rgb.ppm.")
def dump(server, token, env_name, experiment_name, channels, out_dir) -> None:
    """Reset the environment once and write its observation planes."""

    def body():
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        with connect(_server(server), _token(token)) as session:
            try:
                env = session.make_env(env_name, experiment_name, resume=False,
                                       channels=_CHANNELS[channels])
            except UsageError:
                env = session.make_env(env_name, experiment_name, resume=True,
                                       channels=_CHANNELS[channels])
            try:
                observation = env.reset()
            finally:
                env.close()
        written = []
        if observation.depth is not None:
            path = directory / "depth.pgm"
            write_pgm16(path, observation.depth)
            written.append(path)
        if observation.rgb is not None:
            path = directory / "rgb.ppm"
            write_ppm(path, observation.rgb)
            written.append(path)
        for path in written:
            click.echo(f"wrote {path}")

    _run(body)


@main.command("leaderboard")
@click.option("--server", default=None)
@click.option("--token", default=None)
@click.option("--top", "top_n", type=int, default=10, show_default=True)
def leaderboard(server, token, top_n) -> None:
    """Show the ranked leaderboard."""

    def body():
        with connect(_server(server), _token(token)) as session:
            entries = session.leaderboard(top_n)
        if not entries:
            click.echo("leaderboard is empty (entries appear after 100 episodes)")
            return
        for rank, e in enumerate(entries, start=1):
            click.echo(
                f"{rank:>3}  {e['best_window_avg']:.4f}  {e['episodes_count']:>6} eps  "
                f"{e['experiment_name']} / {e['owner']} / {e['env_name']}"
            )

    _run(body)


if __name__ == "__main__":
    main()
