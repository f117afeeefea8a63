"""Time bookings: pre-reserved wall-clock intervals during which a user may
lease an environment. Intervals are half-open [start, end) and pairwise
disjoint per environment."""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass

from gymgate.gateway.errors import BadRequestError
from gymgate.gateway.storage import JsonlStore


@dataclass(frozen=True)
class Booking:
    booking_id: str
    user_id: str
    env_id: str
    start: float
    end: float

    def covers(self, now: float) -> bool:
        return self.start <= now < self.end


class BookingStore:
    def __init__(self, store: JsonlStore):
        self._store = store
        self._lock = threading.Lock()
        self._bookings: list[Booking] = [
            Booking(rec["booking_id"], rec["user_id"], rec["env_id"], rec["start"], rec["end"])
            for rec in store.replay()
        ]

    def add(self, user_id: str, env_id: str, start: float, end: float) -> Booking:
        if not end > start:
            raise BadRequestError("booking end must be after start")
        with self._lock:
            for b in self._bookings:
                if b.env_id == env_id and start < b.end and b.start < end:
                    raise BadRequestError(
                        f"overlaps booking {b.booking_id} ({b.start}..{b.end}) on {env_id}"
                    )
            booking = Booking(f"b-{uuid.uuid4().hex[:12]}", user_id, env_id, float(start), float(end))
            self._store.append(
                {"booking_id": booking.booking_id, "user_id": booking.user_id,
                 "env_id": booking.env_id, "start": booking.start, "end": booking.end}
            )
            self._bookings.append(booking)
            return booking

    def covering(self, user_id: str, env_id: str, now: float) -> Booking | None:
        with self._lock:
            for b in self._bookings:
                if b.user_id == user_id and b.env_id == env_id and b.covers(now):
                    return b
        return None

    def any_covering(self, user_id: str, now: float) -> Booking | None:
        with self._lock:
            for b in self._bookings:
                if b.user_id == user_id and b.covers(now):
                    return b
        return None

    def all_bookings(self) -> list[Booking]:
        with self._lock:
            return list(self._bookings)
