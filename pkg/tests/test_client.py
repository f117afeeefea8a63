"""Client library and gymctl CLI: typed failures, CSV output, exit codes,
observation dumps."""

import csv
import socket

import numpy as np
import pytest
from click.testing import CliRunner

from gymgate.client import AccessError, LocalEnv, RandomPolicy, TransportError, connect, run_agent
from gymgate.client.cli import main as gymctl
from gymgate.gateway import GatewayService
from gymgate.gateway.server import GatewayServer
from gymgate.gateway.service import default_env_seed
from gymgate.worldsim import ChannelType, World, default_config
from gymgate.worldsim.pnm import read_pgm16, read_ppm

ENV = "MonolithDiscreteSim-v0"
TERMINALS = {"success", "step_limit", "boundary"}


@pytest.fixture
def server(tmp_path):
    service = GatewayService(tmp_path / "data")
    user = service.users.add_user("alice")
    for env in (ENV, "MonolithContinuousSim-v0"):
        service.bookings.add(user.user_id, env, 0.0, 1e12)
    srv = GatewayServer(service, port=0)
    srv.start()
    yield srv, user.token
    srv.stop()


def cli(args, env_vars):
    return CliRunner().invoke(gymctl, args, env=env_vars, catch_exceptions=False)


def env_vars(srv, token):
    return {"GYMGATE_SERVER": f"{srv.host}:{srv.port}", "GYMGATE_TOKEN": token}


# -- library ------------------------------------------------------------------


def test_connect_refused_is_transport_error():
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()  # nothing listens here now
    with pytest.raises(TransportError):
        connect(("127.0.0.1", port), "token")


def test_connect_bad_token_is_access_error(server):
    srv, _ = server
    with pytest.raises(AccessError):
        connect((srv.host, srv.port), "wrong")


def test_address_string_form(server):
    srv, token = server
    with connect(f"{srv.host}:{srv.port}", token) as session:
        session.heartbeat()


def test_run_agent_csv_rows_match_summary(tmp_path):
    world = World(default_config("monolith_discrete"), seed=11)
    out = tmp_path / "rows.csv"
    summary = run_agent(LocalEnv(world), RandomPolicy("discrete", seed=3),
                        episodes=4, csv_path=out)
    assert len(summary.episodes) == 4
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    for index, (row, episode) in enumerate(zip(rows, summary.episodes)):
        assert int(row["episode_index"]) == index == episode.episode_index
        assert float(row["reward"]) == episode.reward
        assert float(row["reward"]) in (0.0, 1.0)
        assert int(row["steps"]) == episode.steps >= 1
        assert row["termination"] == episode.termination
        assert row["termination"] in TERMINALS


def test_run_agent_zero_episodes_writes_header_only(tmp_path):
    world = World(default_config("monolith_discrete"), seed=11)
    out = tmp_path / "empty.csv"
    summary = run_agent(LocalEnv(world), RandomPolicy("discrete", seed=3),
                        episodes=0, csv_path=out)
    assert summary.episodes == []
    assert out.read_bytes() == b"episode_index,reward,steps,termination\r\n"


# -- CLI ----------------------------------------------------------------------


def test_cli_connect_test_success(server):
    srv, token = server
    result = cli(["connect-test"], env_vars(srv, token))
    assert result.exit_code == 0
    assert "ok: session s-" in result.output


def test_cli_missing_token_exits_2(server):
    srv, _ = server
    result = cli(["connect-test"], {"GYMGATE_SERVER": f"{srv.host}:{srv.port}",
                                    "GYMGATE_TOKEN": ""})
    assert result.exit_code == 2


def test_cli_bad_token_exits_3(server):
    srv, _ = server
    result = cli(["connect-test"], env_vars(srv, "wrong"))
    assert result.exit_code == 3


def test_cli_unreachable_server_exits_5():
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()
    result = cli(["connect-test"], {"GYMGATE_SERVER": f"127.0.0.1:{port}",
                                    "GYMGATE_TOKEN": "t"})
    assert result.exit_code == 5


def test_cli_busy_env_exits_4(server):
    srv, token = server
    with connect((srv.host, srv.port), token) as holder:
        holder.make_env(ENV, "holder")
        result = cli(["run", "--env", ENV, "--experiment", "contender",
                      "--episodes", "1"], env_vars(srv, token))
        assert result.exit_code == 4


def test_cli_run_and_name_reuse(server, tmp_path):
    srv, token = server
    out = tmp_path / "run.csv"
    args = ["run", "--env", ENV, "--experiment", "cli-exp",
            "--episodes", "2", "--out", str(out)]
    result = cli(args, env_vars(srv, token))
    assert result.exit_code == 0, result.output
    assert "2 episodes: success rate" in result.output
    with open(out, newline="") as fh:
        assert len(list(csv.DictReader(fh))) == 2
    # same experiment name without --resume is a usage error
    rerun = cli(args, env_vars(srv, token))
    assert rerun.exit_code == 2
    resumed = cli(args + ["--resume"], env_vars(srv, token))
    assert resumed.exit_code == 0, resumed.output


def test_cli_dump_matches_server_world(server, tmp_path):
    # the dump is the first reset of a fresh env, so a seed-matched local
    # world must render the identical planes
    srv, token = server
    out = tmp_path / "planes"
    result = cli(["dump", "--env", "MonolithContinuousSim-v0", "--out", str(out)],
                 env_vars(srv, token))
    assert result.exit_code == 0, result.output
    mirror = World(default_config("monolith_continuous"),
                   seed=default_env_seed("MonolithContinuousSim-v0"))
    mirror.channel_config = ChannelType.RGBD
    expected = mirror.reset()
    depth = read_pgm16(out / "depth.pgm")
    rgb = read_ppm(out / "rgb.ppm")
    assert depth.dtype == np.uint16 and np.array_equal(depth, expected.depth)
    assert rgb.dtype == np.uint8 and np.array_equal(rgb, expected.rgb)


def test_cli_leaderboard_empty(server):
    srv, token = server
    result = cli(["leaderboard"], env_vars(srv, token))
    assert result.exit_code == 0
    assert "leaderboard is empty" in result.output
