"""Minimal observation/action space classes.

Structurally compatible with the common RL space API (`sample`,
`contains`, `shape`, and `n`/`low`/`high` where applicable) so agent code
written against the de-facto interface runs unchanged.
"""

from __future__ import annotations

import numpy as np


class Space:
    def __init__(self, shape: tuple[int, ...], dtype: np.dtype):
        self.shape = tuple(shape)
        self.dtype = np.dtype(dtype)
        self._rng = np.random.default_rng()

    def seed(self, seed: int | None = None) -> None:
        self._rng = np.random.default_rng(seed)

    def sample(self):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError


class Discrete(Space):
    def __init__(self, n: int):
        super().__init__(shape=(), dtype=np.int64)
        self.n = int(n)

    def sample(self) -> int:
        return int(self._rng.integers(self.n))

    def contains(self, x) -> bool:
        if isinstance(x, (bool, np.bool_)):
            return False
        if isinstance(x, (int, np.integer)):
            return 0 <= int(x) < self.n
        return False

    def __repr__(self) -> str:
        return f"Discrete({self.n})"


class Box(Space):
    def __init__(self, low, high, shape: tuple[int, ...] | None = None, dtype=np.float32):
        low = np.asarray(low, dtype=dtype)
        high = np.asarray(high, dtype=dtype)
        if shape is not None:
            low = np.broadcast_to(low, shape).astype(dtype)
            high = np.broadcast_to(high, shape).astype(dtype)
        if low.shape != high.shape:
            raise ValueError(f"low {low.shape} and high {high.shape} differ")
        if not np.all(low <= high):
            raise ValueError("low must be elementwise <= high")
        super().__init__(shape=low.shape, dtype=dtype)
        self.low = low
        self.high = high

    def sample(self) -> np.ndarray:
        u = self._rng.random(self.shape, dtype=np.float64)
        return (self.low + u * (self.high - self.low)).astype(self.dtype)

    def contains(self, x) -> bool:
        arr = np.asarray(x)
        if arr.shape != self.shape:
            return False
        if not np.issubdtype(arr.dtype, np.number):
            return False
        return bool(np.all(np.isfinite(arr)) and np.all(arr >= self.low) and np.all(arr <= self.high))

    def __repr__(self) -> str:
        return f"Box(shape={self.shape}, low={self.low.min()}, high={self.high.max()})"
