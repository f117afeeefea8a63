"""Exclusive environment leases, renewed by activity and reclaimed on
heartbeat timeout.

Leases are deliberately not persisted: after a gateway restart no client
connection survives, so every lease is stale by definition and the clean
state is "all free". One lock serializes every mutation, which makes the
exclusivity invariant (at most one live lease per env) locally checkable.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, replace

from gymgate.gateway.bookings import BookingStore
from gymgate.gateway.errors import BusyError, LeaseLostError, NoBookingError

DEFAULT_TTL = 60.0
DEFAULT_SWEEP_INTERVAL = 5.0


@dataclass(frozen=True)
class Lease:
    lease_id: str
    user_id: str
    env_id: str
    acquired_at: float
    heartbeat_deadline: float
    booking_id: str


class LeaseManager:
    def __init__(self, bookings: BookingStore, ttl: float = DEFAULT_TTL, clock=time.time,
                 on_reclaim=None):
        self._bookings = bookings
        self.ttl = float(ttl)
        self._clock = clock
        self._on_reclaim = on_reclaim  # called with env_id after a lease is dropped
        self._lock = threading.Lock()
        self._by_env: dict[str, Lease] = {}
        self._by_id: dict[str, Lease] = {}

    def _drop(self, lease: Lease) -> None:
        self._by_env.pop(lease.env_id, None)
        self._by_id.pop(lease.lease_id, None)

    def acquire(self, user_id: str, env_id: str, now: float | None = None) -> Lease:
        reclaimed = None
        with self._lock:
            # sample the clock under the lock: acquired_at must not predate
            # the release/expiry of the previous holder
            now = self._clock() if now is None else now
            booking = self._bookings.covering(user_id, env_id, now)
            if booking is None:
                raise NoBookingError(f"no booking covering now for {env_id}")
            live = self._by_env.get(env_id)
            if live is not None and live.heartbeat_deadline <= now:
                self._drop(live)
                reclaimed = live
                live = None
            if live is not None:
                raise BusyError(f"{env_id} is leased until heartbeat timeout")
            lease = Lease(
                lease_id=f"l-{uuid.uuid4().hex[:12]}",
                user_id=user_id,
                env_id=env_id,
                acquired_at=now,
                heartbeat_deadline=now + self.ttl,
                booking_id=booking.booking_id,
            )
            self._by_env[env_id] = lease
            self._by_id[lease.lease_id] = lease
        if reclaimed is not None and self._on_reclaim is not None:
            self._on_reclaim(reclaimed.env_id)
        return lease

    def touch(self, lease_id: str, now: float | None = None) -> Lease:
        """Renew on any activity; expired or released leases are gone."""
        with self._lock:
            now = self._clock() if now is None else now
            lease = self._by_id.get(lease_id)
            if lease is None or lease.heartbeat_deadline <= now:
                if lease is not None:
                    self._drop(lease)
                raise LeaseLostError("lease expired or released")
            renewed = replace(lease, heartbeat_deadline=now + self.ttl)
            self._by_env[lease.env_id] = renewed
            self._by_id[lease_id] = renewed
            return renewed

    def release(self, lease_id: str) -> None:
        with self._lock:
            lease = self._by_id.get(lease_id)
            if lease is not None:
                self._drop(lease)

    def expire(self, now: float | None = None) -> list[str]:
        """Reclaim every lease past its deadline; returns their env ids."""
        now = self._clock() if now is None else now
        with self._lock:
            stale = [l for l in self._by_id.values() if l.heartbeat_deadline <= now]
            for lease in stale:
                self._drop(lease)
        env_ids = [l.env_id for l in stale]
        if self._on_reclaim is not None:
            for env_id in env_ids:
                self._on_reclaim(env_id)
        return env_ids

    def holder(self, env_id: str, now: float | None = None) -> Lease | None:
        now = self._clock() if now is None else now
        with self._lock:
            lease = self._by_env.get(env_id)
            if lease is None or lease.heartbeat_deadline <= now:
                return None
            return lease

    def live_leases(self, now: float | None = None) -> list[Lease]:
        now = self._clock() if now is None else now
        with self._lock:
            return [l for l in self._by_env.values() if l.heartbeat_deadline > now]
