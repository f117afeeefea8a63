"""Threaded TCP front end.

One thread per connection; each connection is a strictly serial
request/response stream. If client bytes are already waiting when a response
is about to go out (including during a paced wait), the client pipelined:
it gets Error{pipelining-unsupported} and the connection closes. A sweeper
thread reclaims stale leases every sweep interval.
"""

from __future__ import annotations

import select
import socketserver
import threading
import time

from gymgate.gateway.errors import GatewayError
from gymgate.gateway.service import GatewayService, Session
from gymgate.protocol import (
    Close,
    ErrorCode,
    ErrorMsg,
    Heartbeat,
    Hello,
    LeaderboardQuery,
    Make,
    Message,
    ProtocolError,
    Reset,
    Step,
    VersionMismatchError,
    recv_frame,
    send_frame,
)


class _PipelinedRequest(Exception):
    pass


class _Handler(socketserver.BaseRequestHandler):
    def handle(self) -> None:
        service: GatewayService = self.server.service
        sock = self.request
        session: Session | None = None
        try:
            while True:
                try:
                    msg = recv_frame(sock)
                except VersionMismatchError as exc:
                    self._best_effort_error(0, ErrorCode.VERSION_MISMATCH, str(exc))
                    return
                except ProtocolError as exc:
                    self._best_effort_error(0, ErrorCode.BAD_REQUEST, str(exc))
                    return
                if msg is None:
                    return
                received_at = time.monotonic()
                try:
                    if session is None:
                        if not isinstance(msg, Hello):
                            self._best_effort_error(
                                msg.id, ErrorCode.BAD_REQUEST, "first request must be hello"
                            )
                            return
                        session, response = service.hello(msg)
                        target = None
                    else:
                        response, target = self._dispatch(service, session, msg)
                except GatewayError as exc:
                    response, target = ErrorMsg(id=msg.id, code=exc.code, detail=str(exc)), None
                try:
                    self._respond(sock, response, received_at, target)
                except _PipelinedRequest:
                    return
        finally:
            if session is not None:
                service.release_session(session)

    def _dispatch(self, service: GatewayService, session: Session,
                  msg: Message) -> tuple[Message, float | None]:
        if isinstance(msg, Make):
            return service.make(session, msg), None
        if isinstance(msg, Reset):
            return service.reset(session, msg), None
        if isinstance(msg, Step):
            return service.step(session, msg)
        if isinstance(msg, Close):
            return service.close(session, msg), None
        if isinstance(msg, Heartbeat):
            return service.heartbeat(session, msg), None
        if isinstance(msg, LeaderboardQuery):
            return service.leaderboard_query(msg), None
        if isinstance(msg, Hello):
            return ErrorMsg(id=msg.id, code=ErrorCode.BAD_REQUEST,
                            detail="session already established"), None
        return ErrorMsg(id=msg.id, code=ErrorCode.BAD_REQUEST,
                        detail=f"{type(msg).__name__} is not a request"), None

    def _respond(self, sock, response: Message, received_at: float,
                 latency_target: float | None) -> None:
        """Send the response, honoring the paced-mode latency floor and
        killing the connection if the client pipelined a second request."""
        if latency_target is not None:
            deadline = received_at + latency_target
            while True:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    break
                readable, _, _ = select.select([sock], [], [], remaining)
                if readable:
                    self._reject_pipelined(sock)
        readable, _, _ = select.select([sock], [], [], 0)
        if readable:
            self._reject_pipelined(sock)
        send_frame(sock, response)

    def _reject_pipelined(self, sock) -> None:
        offender_id = 0
        try:
            early = recv_frame(sock)
            if early is not None:
                offender_id = early.id
        except ProtocolError:
            pass
        self._best_effort_error(
            offender_id, ErrorCode.PIPELINING_UNSUPPORTED,
            "a second request arrived before the previous response was sent",
        )
        raise _PipelinedRequest

    def _best_effort_error(self, mid: int, code: str, detail: str) -> None:
        try:
            send_frame(self.request, ErrorMsg(id=mid, code=code, detail=detail))
        except OSError:
            pass


class _ThreadingServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


class GatewayServer:
    """Owns the TCP listener and the lease sweeper."""

    def __init__(self, service: GatewayService, host: str = "127.0.0.1", port: int | None = None):
        self.service = service
        bind_port = service.config.port if port is None else port
        self._tcp = _ThreadingServer((host, bind_port), _Handler)
        self._tcp.service = service
        self.host, self.port = self._tcp.server_address[:2]
        self._threads: list[threading.Thread] = []
        self._stop = threading.Event()

    def start(self) -> None:
        serve = threading.Thread(target=self._tcp.serve_forever, name="gymgate-accept", daemon=True)
        sweep = threading.Thread(target=self._sweep_loop, name="gymgate-sweeper", daemon=True)
        self._threads = [serve, sweep]
        for t in self._threads:
            t.start()

    def _sweep_loop(self) -> None:
        while not self._stop.wait(self.service.config.sweep_interval):
            self.service.expire_leases()

    def stop(self) -> None:
        self._stop.set()
        self._tcp.shutdown()
        self._tcp.server_close()
        for t in self._threads:
            t.join(timeout=5)

    def serve_forever(self) -> None:
        self.start()
        try:
            self._threads[0].join()
        except KeyboardInterrupt:
            pass
        finally:
            self.stop()
