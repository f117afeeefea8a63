import pytest

from gymgate.gateway import GatewayService
from gymgate.gateway.server import GatewayServer

SIM_GATEWAY_NAMES = (
    "MonolithDiscreteSim-v0",
    "MonolithContinuousSim-v0",
    "MonolithObstaclesDiscreteSim-v0",
    "MonolithObstaclesContinuousSim-v0",
)


@pytest.fixture
def gateway(tmp_path, monkeypatch):
    """Live gateway on an ephemeral port, one booked user, env vars set."""
    service = GatewayService(tmp_path / "data")
    user = service.users.add_user("binding-tests")
    for env in SIM_GATEWAY_NAMES:
        service.bookings.add(user.user_id, env, 0.0, 1e12)
    server = GatewayServer(service, port=0)
    server.start()
    monkeypatch.setenv("GYMGATE_ADDR", f"{server.host}:{server.port}")
    monkeypatch.setenv("GYMGATE_TOKEN", user.token)
    yield server
    server.stop()
