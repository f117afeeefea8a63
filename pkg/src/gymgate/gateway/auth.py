"""User records and token authentication."""

from __future__ import annotations

import secrets
import threading
import time
import uuid
from dataclasses import dataclass

from gymgate.gateway.errors import AuthFailedError, NameTakenError
from gymgate.gateway.storage import JsonlStore


@dataclass(frozen=True)
class User:
    user_id: str
    name: str
    token: str
    created_at: float


class UserStore:
    def __init__(self, store: JsonlStore, clock=time.time):
        self._store = store
        self._clock = clock
        self._lock = threading.Lock()
        self._by_token: dict[str, User] = {}
        self._by_name: dict[str, User] = {}
        self._by_id: dict[str, User] = {}
        for rec in store.replay():
            self._index(User(rec["user_id"], rec["name"], rec["token"], rec["created_at"]))

    def _index(self, user: User) -> None:
        self._by_token[user.token] = user
        self._by_name[user.name] = user
        self._by_id[user.user_id] = user

    def add_user(self, name: str) -> User:
        with self._lock:
            if name in self._by_name:
                raise NameTakenError(f"user name {name!r} already exists")
            user = User(
                user_id=f"u-{uuid.uuid4().hex[:12]}",
                name=name,
                token=secrets.token_hex(16),
                created_at=self._clock(),
            )
            self._store.append(
                {"user_id": user.user_id, "name": user.name, "token": user.token,
                 "created_at": user.created_at}
            )
            self._index(user)
            return user

    def by_token(self, token: str) -> User:
        user = self._by_token.get(token)
        if user is None:
            raise AuthFailedError("unknown token")
        return user

    def by_name(self, name: str) -> User:
        user = self._by_name.get(name)
        if user is None:
            raise AuthFailedError(f"unknown user {name!r}")
        return user

    def by_id(self, user_id: str) -> User:
        user = self._by_id.get(user_id)
        if user is None:
            raise AuthFailedError(f"unknown user id {user_id!r}")
        return user
