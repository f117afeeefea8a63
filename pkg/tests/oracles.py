"""Independent brute-force oracles the test suite checks the fast paths against.

Nothing here shares code with the package: the raycaster below intersects
individual face rectangles per pixel (vs. the package's vectorized slab
method), and the collision oracle point-samples the footprint.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from gymgate.worldsim.config import WorldConfig
from gymgate.worldsim.kinematics import Pose2D


@numba.njit(cache=True)
def _frame_loop(ox, oy, oz, theta, width, height, tan_h, tan_v, hx, hy, boxes):
    out = np.empty(height * width, dtype=np.float64)
    ct = math.cos(theta)
    st = math.sin(theta)
    eps = 1e-9
    for row in range(height):
        cz = tan_v * (1.0 - 2.0 * (row + 0.5) / height)
        for col in range(width):
            cy = tan_h * (1.0 - 2.0 * (col + 0.5) / width)
            norm = math.sqrt(1.0 + cy * cy + cz * cz)
            # camera frame: x forward, y left, z up
            dx = (ct * 1.0 - st * cy) / norm
            dy = (st * 1.0 + ct * cy) / norm
            dz = cz / norm

            best = np.inf
            # ground plane z = 0
            if dz < 0.0:
                t = -oz / dz
                if eps < t < best:
                    best = t
            # four wall planes; from an interior origin the first positive
            # crossing is the enclosure exit, no lateral bounds needed
            if dx != 0.0:
                for wx in (-hx, hx):
                    t = (wx - ox) / dx
                    if eps < t < best:
                        best = t
            if dy != 0.0:
                for wy in (-hy, hy):
                    t = (wy - oy) / dy
                    if eps < t < best:
                        best = t
            # box faces as bounded rectangles
            for b in range(boxes.shape[0]):
                lox, loy, loz = boxes[b, 0], boxes[b, 1], boxes[b, 2]
                hix, hiy, hiz = boxes[b, 3], boxes[b, 4], boxes[b, 5]
                if dx != 0.0:
                    for face in (lox, hix):
                        t = (face - ox) / dx
                        if eps < t < best:
                            py = oy + t * dy
                            pz = oz + t * dz
                            if loy <= py <= hiy and loz <= pz <= hiz:
                                best = t
                if dy != 0.0:
                    for face in (loy, hiy):
                        t = (face - oy) / dy
                        if eps < t < best:
                            px = ox + t * dx
                            pz = oz + t * dz
                            if lox <= px <= hix and loz <= pz <= hiz:
                                best = t
                if dz != 0.0:
                    for face in (loz, hiz):
                        t = (face - oz) / dz
                        if eps < t < best:
                            px = ox + t * dx
                            py = oy + t * dy
                            if lox <= px <= hix and loy <= py <= hiy:
                                best = t
            out[row * width + col] = best
    return out


def raycast_depth_oracle(config: WorldConfig, pose: Pose2D) -> np.ndarray:
    """Full-frame depth in uint16 millimeters, sentinel 0xFFFF past max range."""
    cam = config.camera
    boxes = [config.monolith] + list(config.obstacles)
    arr = np.empty((len(boxes), 6), dtype=np.float64)
    for i, b in enumerate(boxes):
        arr[i] = (
            b.center[0] - b.half_extents[0], b.center[1] - b.half_extents[1], 0.0,
            b.center[0] + b.half_extents[0], b.center[1] + b.half_extents[1], b.height,
        )
    t = _frame_loop(
        pose.x, pose.y, cam.height, pose.theta,
        cam.width, cam.height_px,
        math.tan(cam.horizontal_fov / 2.0), math.tan(cam.vertical_fov / 2.0),
        config.enclosure_size[0] / 2.0, config.enclosure_size[1] / 2.0,
        arr,
    )
    max_mm = round(cam.max_range * 1000.0)
    mm = np.where(np.isfinite(t), np.rint(t * 1000.0), float(0xFFFF))
    mm = np.where(mm > max_mm, float(0xFFFF), mm)
    return mm.astype(np.uint16).reshape(cam.height_px, cam.width)


def collision_oracle(config: WorldConfig, pose: Pose2D, samples_per_side: int = 22) -> bool:
    """Point-sample the footprint rectangle; True if any sample lands in a
    box or outside the enclosure. Under-detects sub-resolution overlaps."""
    fp = config.robot_footprint
    c, s = math.cos(pose.theta), math.sin(pose.theta)
    us = np.linspace(-1.0, 1.0, samples_per_side)
    al, aw = np.meshgrid(us * fp.half_length, us * fp.half_width)
    px = pose.x + al * c - aw * s
    py = pose.y + al * s + aw * c
    hx, hy = config.enclosure_size[0] / 2.0, config.enclosure_size[1] / 2.0
    if np.any((np.abs(px) > hx) | (np.abs(py) > hy)):
        return True
    for box in [config.monolith] + list(config.obstacles):
        inside = (
            (np.abs(px - box.center[0]) <= box.half_extents[0])
            & (np.abs(py - box.center[1]) <= box.half_extents[1])
        )
        if np.any(inside):
            return True
    return False
