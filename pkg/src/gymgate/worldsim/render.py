"""Vectorized raycast rendering of depth and flat-shaded RGB frames.

Scene model: ground plane at z=0, four inward-facing wall planes (treated as
infinitely tall, so no ray escapes sideways), the monolith box and obstacle
boxes. Depth is the Euclidean distance to the nearest hit along each ray,
quantized to millimeters; hits beyond max_range become the no-hit sentinel.
"""

from __future__ import annotations

import math

import numpy as np

from gymgate.worldsim.config import WorldConfig
from gymgate.worldsim.kinematics import Pose2D

DEPTH_SENTINEL = np.uint16(0xFFFF)

MAT_GROUND = 0
MAT_WALL = 1
MAT_MONOLITH = 2
MAT_OBSTACLE = 3
MAT_SKY = 255

_CELL = 0.02  # ground texture cell size in meters
_EPS = 1e-7   # minimum hit distance, rejects self-grazing intersections

_F32_INF = np.float32(np.inf)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    z = x + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def ground_texture(x: np.ndarray, y: np.ndarray, seed: int, mean: int, amplitude: int) -> np.ndarray:
    """Seeded value noise anchored to world coordinates, uint8 intensities."""
    ix = np.floor(np.asarray(x, dtype=np.float64) / _CELL).astype(np.int64).astype(np.uint64)
    iy = np.floor(np.asarray(y, dtype=np.float64) / _CELL).astype(np.int64).astype(np.uint64)
    mixed = _splitmix64(ix * np.uint64(0x9E3779B97F4A7C15) ^ _splitmix64(iy ^ np.uint64(seed)))
    u = (mixed >> np.uint64(11)).astype(np.float64) / float(1 << 53)
    vals = np.floor(mean - amplitude + u * (2 * amplitude + 1))
    return np.clip(vals, 0, 255).astype(np.uint8)


class Raycaster:
    """Per-config renderer; ray directions in the camera frame are cached."""

    def __init__(self, config: WorldConfig, texture_seed: int = 0):
        self.config = config
        self.texture_seed = int(texture_seed) & 0xFFFFFFFFFFFFFFFF
        cam = config.camera
        w, h = cam.width, cam.height_px
        tan_h = math.tan(cam.horizontal_fov / 2.0)
        tan_v = math.tan(cam.vertical_fov / 2.0)
        # Pixel centers; +u to the right of the heading, +v down the image.
        u = (np.arange(w) + 0.5) / w
        v = (np.arange(h) + 0.5) / h
        yy = tan_h * (1.0 - 2.0 * u)          # camera y: left positive
        zz = tan_v * (1.0 - 2.0 * v)          # camera z: up positive
        cy, cz = np.meshgrid(yy, zz)
        cx = np.ones_like(cy)
        norm = np.sqrt(cx * cx + cy * cy + cz * cz)
        self._cx = (cx / norm).astype(np.float32).ravel()
        self._cy = (cy / norm).astype(np.float32).ravel()
        self._cz = (cz / norm).astype(np.float32).ravel()
        self._npix = w * h

        self._boxes: list[tuple[int, tuple[float, float, float], tuple[float, float, float]]] = []
        for mat, box in [(MAT_MONOLITH, config.monolith)] + [(MAT_OBSTACLE, b) for b in config.obstacles]:
            lo = (box.center[0] - box.half_extents[0], box.center[1] - box.half_extents[1], 0.0)
            hi = (box.center[0] + box.half_extents[0], box.center[1] + box.half_extents[1], box.height)
            self._boxes.append((mat, lo, hi))

    def trace(self, pose: Pose2D) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Cast all rays; returns flat (t, material, dir_x, dir_y)."""
        cfg = self.config
        c = np.float32(math.cos(pose.theta))
        s = np.float32(math.sin(pose.theta))
        dx = c * self._cx - s * self._cy
        dy = s * self._cx + c * self._cy
        dz = self._cz
        ox, oy, oz = float(pose.x), float(pose.y), float(cfg.camera.height)
        hx, hy = cfg.enclosure_size[0] / 2.0, cfg.enclosure_size[1] / 2.0

        with np.errstate(divide="ignore", invalid="ignore"):
            invx = np.float32(1.0) / dx
            invy = np.float32(1.0) / dy
            invz = np.float32(1.0) / dz

            t = np.where(dz < 0.0, np.float32(-oz) * invz, _F32_INF)  # ground
            material = np.zeros(self._npix, dtype=np.uint8)           # MAT_GROUND

            tw = np.minimum(
                np.where(dx > 0.0, np.float32(hx - ox) * invx,
                         np.where(dx < 0.0, np.float32(-hx - ox) * invx, _F32_INF)),
                np.where(dy > 0.0, np.float32(hy - oy) * invy,
                         np.where(dy < 0.0, np.float32(-hy - oy) * invy, _F32_INF)),
            )
            closer = tw < t
            t = np.where(closer, tw, t)
            material[closer] = MAT_WALL

            for mat, lo, hi in self._boxes:
                t1 = np.float32(lo[0] - ox) * invx
                t2 = np.float32(hi[0] - ox) * invx
                tmin = np.minimum(t1, t2)
                tmax = np.maximum(t1, t2)
                t1 = np.float32(lo[1] - oy) * invy
                t2 = np.float32(hi[1] - oy) * invy
                tmin = np.maximum(tmin, np.minimum(t1, t2))
                tmax = np.minimum(tmax, np.maximum(t1, t2))
                t1 = np.float32(lo[2] - oz) * invz
                t2 = np.float32(hi[2] - oz) * invz
                tmin = np.maximum(tmin, np.minimum(t1, t2))
                tmax = np.minimum(tmax, np.maximum(t1, t2))
                hit = (tmin <= tmax) & (tmin > _EPS) & (tmin < t)
                t = np.where(hit, tmin, t)
                material[hit] = mat

        material[~np.isfinite(t)] = MAT_SKY
        return t, material, dx, dy

    def depth_frame(self, pose: Pose2D) -> np.ndarray:
        """Depth plane (H, W) uint16 millimeters with no-hit sentinel."""
        t, _, _, _ = self.trace(pose)
        return self.depth_from_t(t)

    def depth_from_t(self, t: np.ndarray) -> np.ndarray:
        cfg = self.config
        max_mm = round(cfg.camera.max_range * 1000.0)
        mm = np.where(np.isfinite(t), np.rint(t * np.float32(1000.0)), np.float32(0xFFFF))
        mm = np.where(mm > max_mm, np.float32(DEPTH_SENTINEL), mm)
        return mm.astype(np.uint16).reshape(cfg.camera.height_px, cfg.camera.width)

    def rgb_frame(self, pose: Pose2D) -> np.ndarray:
        t, material, dx, dy = self.trace(pose)
        return self.rgb_from_trace(pose, t, material, dx, dy)

    def rgb_from_trace(self, pose: Pose2D, t: np.ndarray, material: np.ndarray,
                       dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
        cfg = self.config
        pal = cfg.palette
        gray = np.empty(self._npix, dtype=np.uint8)
        gray[material == MAT_WALL] = pal.wall
        gray[material == MAT_MONOLITH] = pal.monolith
        gray[material == MAT_OBSTACLE] = pal.obstacle
        gray[material == MAT_SKY] = pal.sky
        ground = material == MAT_GROUND
        if ground.any():
            tg = t[ground]
            gx = pose.x + tg * dx[ground]
            gy = pose.y + tg * dy[ground]
            gray[ground] = ground_texture(gx, gy, self.texture_seed, pal.ground_mean, pal.ground_amplitude)
        frame = gray.reshape(cfg.camera.height_px, cfg.camera.width)
        return np.repeat(frame[:, :, None], 3, axis=2)

    def render(self, pose: Pose2D, want_depth: bool, want_rgb: bool) -> tuple[np.ndarray | None, np.ndarray | None]:
        """Render the requested planes with a single trace."""
        if not want_rgb:
            return (self.depth_frame(pose) if want_depth else None), None
        t, material, dx, dy = self.trace(pose)
        depth = self.depth_from_t(t) if want_depth else None
        return depth, self.rgb_from_trace(pose, t, material, dx, dy)
