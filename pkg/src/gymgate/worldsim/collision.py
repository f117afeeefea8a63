"""Footprint collision queries against walls, monolith and obstacles.

The robot footprint is an oriented rectangle; scene boxes are axis-aligned.
Wall containment reduces to corner checks (both shapes convex); box overlap
uses the separating-axis test on the four candidate axes.
"""

from __future__ import annotations

import math

from gymgate.worldsim.config import Box, WorldConfig
from gymgate.worldsim.kinematics import Pose2D


def footprint_corners(pose: Pose2D, half_width: float, half_length: float) -> list[tuple[float, float]]:
    """Corners of the robot rectangle; half_length runs along the heading."""
    c, s = math.cos(pose.theta), math.sin(pose.theta)
    corners = []
    for dl, dw in ((half_length, half_width), (half_length, -half_width),
                   (-half_length, -half_width), (-half_length, half_width)):
        corners.append((pose.x + dl * c - dw * s, pose.y + dl * s + dw * c))
    return corners


def outside_enclosure(corners: list[tuple[float, float]], enclosure_size: tuple[float, float]) -> bool:
    hx, hy = enclosure_size[0] / 2.0, enclosure_size[1] / 2.0
    return any(abs(x) > hx or abs(y) > hy for x, y in corners)


def rect_box_overlap(pose: Pose2D, half_width: float, half_length: float, box: Box) -> bool:
    """Separating-axis test between the oriented footprint and an AABB."""
    c, s = math.cos(pose.theta), math.sin(pose.theta)
    dx = pose.x - box.center[0]
    dy = pose.y - box.center[1]
    bx, by = box.half_extents
    # World axes: project the footprint onto x and y.
    ext_x = half_length * abs(c) + half_width * abs(s)
    ext_y = half_length * abs(s) + half_width * abs(c)
    if abs(dx) > bx + ext_x or abs(dy) > by + ext_y:
        return False
    # Footprint axes: project the AABB onto heading and lateral directions.
    along = dx * c + dy * s
    box_along = bx * abs(c) + by * abs(s)
    if abs(along) > half_length + box_along:
        return False
    lateral = -dx * s + dy * c
    box_lateral = bx * abs(s) + by * abs(c)
    if abs(lateral) > half_width + box_lateral:
        return False
    return True


def collides(config: WorldConfig, pose: Pose2D) -> bool:
    """True iff the footprint at `pose` leaves the enclosure or hits a box."""
    fp = config.robot_footprint
    corners = footprint_corners(pose, fp.half_width, fp.half_length)
    if outside_enclosure(corners, config.enclosure_size):
        return True
    if rect_box_overlap(pose, fp.half_width, fp.half_length, config.monolith):
        return True
    return any(rect_box_overlap(pose, fp.half_width, fp.half_length, b) for b in config.obstacles)


def wall_clearance(config: WorldConfig, pose: Pose2D) -> float:
    """Smallest footprint-to-wall distance (negative when protruding)."""
    fp = config.robot_footprint
    corners = footprint_corners(pose, fp.half_width, fp.half_length)
    hx, hy = config.enclosure_size[0] / 2.0, config.enclosure_size[1] / 2.0
    xs = [x for x, _ in corners]
    ys = [y for _, y in corners]
    return min(hx - max(xs), hx + min(xs), hy - max(ys), hy + min(ys))
