"""Operator CLI: serve the gateway, manage users/bookings, show the
leaderboard. Store-mutating commands (user add, booking add) write the data
directory directly and are meant to run while the server is stopped; the
server replays the stores on startup.
"""

from __future__ import annotations

import os
import sys
import time
from datetime import datetime
from pathlib import Path

import click

from gymgate.gateway.errors import GatewayError
from gymgate.gateway.server import GatewayServer
from gymgate.gateway.service import DEFAULT_PORT, GatewayConfig, GatewayService


def _data_dir(flag: str | None) -> Path:
    if flag:
        return Path(flag)
    env = os.environ.get("GYMGATE_DATA_DIR")
    return Path(env) if env else Path("gymgate-data")


def _port(flag: int | None, config: GatewayConfig) -> int:
    if flag is not None:
        return flag
    if config.port != DEFAULT_PORT:
        return config.port
    env = os.environ.get("GYMGATE_PORT")
    return int(env) if env else DEFAULT_PORT


def parse_when(text: str, now: float | None = None) -> float:
    """Accepts unix seconds, ISO 8601, 'now', or 'now+SECONDS'."""
    now = time.time() if now is None else now
    text = text.strip()
    if text == "now":
        return now
    if text.startswith("now+"):
        return now + float(text[4:])
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return datetime.fromisoformat(text).timestamp()
    except ValueError:
        raise click.BadParameter(
            f"{text!r}: expected unix seconds, ISO 8601, 'now', or 'now+SECONDS'"
        )


@click.group()
def main() -> None:
    """Gateway server and operator tools."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="TOML config file.")
@click.option("--data-dir", default=None, help="Store directory (or GYMGATE_DATA_DIR).")
@click.option("--port", type=int, default=None, help="TCP port (or GYMGATE_PORT).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--paced", is_flag=True, help="Force paced stepping for every environment.")
def serve(config_path, data_dir, port, host, paced) -> None:
    """Run the gateway until interrupted."""
    config = GatewayConfig.from_toml(config_path) if config_path else GatewayConfig()
    if paced:
        config.paced = True
    config.port = _port(port, config)
    directory = _data_dir(data_dir)
    service = GatewayService(directory, config)
    server = GatewayServer(service, host=host)
    click.echo(f"listening on {server.host}:{server.port}, data in {directory}")
    server.serve_forever()


@main.group()
def user() -> None:
    """User management."""


@user.command("add")
@click.option("--name", required=True)
@click.option("--data-dir", default=None)
def user_add(name, data_dir) -> None:
    """Create a user and print the access token."""
    service = GatewayService(_data_dir(data_dir))
    try:
        created = service.users.add_user(name)
    except GatewayError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"user {created.name} ({created.user_id})")
    click.echo(f"token: {created.token}")


@main.group()
def booking() -> None:
    """Time booking management."""


@booking.command("add")
@click.option("--user", "user_name", required=True)
@click.option("--env", "env_name", required=True)
@click.option("--start", required=True, help="Unix seconds, ISO 8601, 'now', or 'now+SECONDS'.")
@click.option("--end", required=True, help="Same formats as --start.")
@click.option("--data-dir", default=None)
def booking_add(user_name, env_name, start, end, data_dir) -> None:
    """Reserve an environment time slot for a user."""
    from gymgate.gateway.registry import resolve_env

    service = GatewayService(_data_dir(data_dir))
    now = time.time()
    try:
        resolve_env(env_name)
        owner = service.users.by_name(user_name)
        made = service.bookings.add(owner.user_id, env_name, parse_when(start, now), parse_when(end, now))
    except GatewayError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"booking {made.booking_id}: {env_name} for {user_name}, "
               f"{made.start:.0f} .. {made.end:.0f}")


@main.group()
def leaderboard() -> None:
    """Leaderboard queries."""


@leaderboard.command("show")
@click.option("--top", "top_n", type=int, default=10, show_default=True)
@click.option("--data-dir", default=None)
def leaderboard_show(top_n, data_dir) -> None:
    """Print the ranked leaderboard."""
    service = GatewayService(_data_dir(data_dir))
    entries = service.leaderboard.top(top_n)
    if not entries:
        click.echo("leaderboard is empty (entries appear after 100 episodes)")
        return
    click.echo(f"{'#':>3}  {'best':>6}  {'episodes':>8}  experiment / owner / env")
    for rank, e in enumerate(entries, start=1):
        click.echo(
            f"{rank:>3}  {e['best_window_avg']:.4f}  {e['episodes_count']:>8}  "
            f"{e['experiment_name']} / {e['owner']} / {e['env_name']}"
        )


if __name__ == "__main__":
    sys.exit(main())
