"""Netpbm writers/readers for observation dumps.

Depth goes out as 16-bit P5 (maxval 65535, big-endian sample order per the
format); RGB as 8-bit P6. Readers exist so dumps can be verified round-trip.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def write_pgm16(path: str | Path, depth: np.ndarray) -> None:
    if depth.dtype != np.uint16 or depth.ndim != 2:
        raise ValueError("expected a (H, W) uint16 array")
    h, w = depth.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n65535\n".encode("ascii"))
        fh.write(depth.astype(">u2").tobytes())


def write_ppm(path: str | Path, rgb: np.ndarray) -> None:
    if rgb.dtype != np.uint8 or rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError("expected a (H, W, 3) uint8 array")
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(rgb.tobytes())


def _read_header(data: bytes, magic: bytes) -> tuple[int, int, int, int]:
    """Parse 'magic w h maxval' allowing comment lines; returns (w, h, maxval, offset)."""
    if not data.startswith(magic):
        raise ValueError(f"not a {magic.decode()} file")
    pos = len(magic)
    fields: list[int] = []
    while len(fields) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(int(data[start:pos]))
    pos += 1  # single whitespace after maxval
    return fields[0], fields[1], fields[2], pos


def read_pgm16(path: str | Path) -> np.ndarray:
    data = Path(path).read_bytes()
    w, h, maxval, pos = _read_header(data, b"P5")
    if maxval != 65535:
        raise ValueError(f"expected maxval 65535, got {maxval}")
    return np.frombuffer(data, dtype=">u2", count=w * h, offset=pos).astype(np.uint16).reshape(h, w)


def read_ppm(path: str | Path) -> np.ndarray:
    data = Path(path).read_bytes()
    w, h, maxval, pos = _read_header(data, b"P6")
    if maxval != 255:
        raise ValueError(f"expected maxval 255, got {maxval}")
    return np.frombuffer(data, dtype=np.uint8, count=w * h * 3, offset=pos).reshape(h, w, 3)
