"""Protocol client session.

One session per connection, one in-flight request at a time: a lock
serializes every request/response exchange, and the background heartbeat
only fires when the connection has been quiet for the cadence (any traffic
renews the lease server-side, so heartbeats during activity are redundant).
The session object may be handed between threads but not used from two
threads at once.
"""

from __future__ import annotations

import socket
import threading
import time
from dataclasses import dataclass

from gymgate import __version__
from gymgate.client.errors import TransportError, error_for_code
from gymgate.protocol import (
    Close,
    CloseOk,
    ErrorMsg,
    Heartbeat,
    Hello,
    HelloOk,
    LeaderboardOk,
    LeaderboardQuery,
    Make,
    MakeOk,
    Message,
    ProtocolError,
    Reset,
    ResetOk,
    Step,
    StepOk,
    recv_frame,
    send_frame,
)
from gymgate.worldsim import ChannelType, Observation

CONNECT_TIMEOUT = 5.0
REQUEST_TIMEOUT = 30.0
HEARTBEAT_CADENCE = 10.0


@dataclass
class RemoteStepResult:
    observation: Observation
    reward: float
    done: bool
    termination: str
    step_index: int


class ClientSession:
    def __init__(self, sock: socket.socket, session_id: str, server_version: str,
                 heartbeat_cadence: float = HEARTBEAT_CADENCE):
        self._sock = sock
        self.session_id = session_id
        self.server_version = server_version
        self._lock = threading.Lock()
        self._next_id = 1
        self._last_traffic = time.monotonic()
        self._closed = False
        self._stop = threading.Event()
        self._heartbeat_cadence = heartbeat_cadence
        self._heartbeat_thread = threading.Thread(
            target=self._heartbeat_loop, name="gymgate-heartbeat", daemon=True
        )
        self._heartbeat_thread.start()

    # -- request plumbing ---------------------------------------------------

    def _request(self, build, expect: type) -> Message:
        with self._lock:
            return self._request_locked(build, expect)

    def _request_locked(self, build, expect: type) -> Message:
        if self._closed:
            raise TransportError("session is closed")
        mid = self._next_id
        self._next_id += 1
        msg = build(mid)
        try:
            send_frame(self._sock, msg)
            response = recv_frame(self._sock)
        except (OSError, ProtocolError) as exc:
            self._closed = True
            raise TransportError(f"request failed: {exc}") from exc
        self._last_traffic = time.monotonic()
        if response is None:
            self._closed = True
            raise TransportError("server closed the connection")
        if response.id != mid:
            self._closed = True
            raise TransportError(f"response id {response.id} does not match request id {mid}")
        if isinstance(response, ErrorMsg):
            raise error_for_code(response.code, response.detail)
        if not isinstance(response, expect):
            self._closed = True
            raise TransportError(f"expected {expect.__name__}, got {type(response).__name__}")
        return response

    def _heartbeat_loop(self) -> None:
        poll = min(0.5, self._heartbeat_cadence / 2)
        while not self._stop.wait(poll):
            if time.monotonic() - self._last_traffic < self._heartbeat_cadence:
                continue
            # skip, don't block, if a request is in flight
            if not self._lock.acquire(blocking=False):
                continue
            try:
                if self._closed:
                    return
                self._request_locked(lambda mid: Heartbeat(id=mid), Heartbeat)
            except Exception:
                return
            finally:
                self._lock.release()

    # -- public API -----------------------------------------------------------

    def make_env(self, env_name: str, experiment_name: str, resume: bool = False,
                 channels: ChannelType = ChannelType.DEPTH_ONLY) -> "EnvClient":
        response = self._request(
            lambda mid: Make(id=mid, env_name=env_name, experiment_name=experiment_name,
                             resume_experiment=resume, channel_type=channels),
            MakeOk,
        )
        return EnvClient(self, response.env_handle, response.obs_shape, channels)

    def heartbeat(self) -> None:
        self._request(lambda mid: Heartbeat(id=mid), Heartbeat)

    def leaderboard(self, top_n: int = 10) -> list[dict]:
        response = self._request(lambda mid: LeaderboardQuery(id=mid, top_n=top_n), LeaderboardOk)
        return list(response.entries)

    def close(self) -> None:
        self._stop.set()
        with self._lock:
            self._closed = True
            try:
                self._sock.close()
            except OSError:
                pass

    def __enter__(self) -> "ClientSession":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class EnvClient:
    """Handle to one leased remote environment."""

    def __init__(self, session: ClientSession, env_handle: str, obs_shape: tuple[int, ...],
                 channels: ChannelType):
        self.session = session
        self.env_handle = env_handle
        self.obs_shape = obs_shape
        self.channels = channels

    def reset(self) -> Observation:
        response = self.session._request(
            lambda mid: Reset(id=mid, env_handle=self.env_handle), ResetOk
        )
        return response.observation

    def step(self, action) -> RemoteStepResult:
        response = self.session._request(
            lambda mid: Step(id=mid, env_handle=self.env_handle, action=action), StepOk
        )
        return RemoteStepResult(
            observation=response.observation,
            reward=response.reward,
            done=response.done,
            termination=response.termination,
            step_index=response.step_index,
        )

    def close(self) -> None:
        self.session._request(lambda mid: Close(id=mid, env_handle=self.env_handle), CloseOk)


def connect(address: str | tuple[str, int], token: str,
            timeout: float = CONNECT_TIMEOUT,
            heartbeat_cadence: float = HEARTBEAT_CADENCE) -> ClientSession:
    """TCP connect + handshake; returns a session with its heartbeat running."""
    if isinstance(address, str):
        host, _, port_text = address.rpartition(":")
        if not host:
            raise TransportError(f"address {address!r} must be host:port")
        address = (host, int(port_text))
    try:
        sock = socket.create_connection(address, timeout=timeout)
    except OSError as exc:
        raise TransportError(f"connection to {address[0]}:{address[1]} refused: {exc}") from exc
    sock.settimeout(REQUEST_TIMEOUT)
    try:
        send_frame(sock, Hello(id=0, token=token, client_version=__version__))
        response = recv_frame(sock)
    except (OSError, ProtocolError) as exc:
        sock.close()
        raise TransportError(f"handshake failed: {exc}") from exc
    if response is None:
        sock.close()
        raise TransportError("server closed the connection during handshake")
    if isinstance(response, ErrorMsg):
        sock.close()
        raise error_for_code(response.code, response.detail)
    if not isinstance(response, HelloOk):
        sock.close()
        raise TransportError(f"expected HelloOk, got {type(response).__name__}")
    return ClientSession(sock, response.session_id, response.server_version,
                         heartbeat_cadence=heartbeat_cadence)
