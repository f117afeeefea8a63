"""World configuration: geometry, physics and rendering parameters.

A config fully determines a world variant; the four shipped variants are
TOML files under ``configs/`` whose keys mirror the dataclass fields.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from gymgate.worldsim.errors import InvalidConfigError


@dataclass(frozen=True)
class Box:
    """Axis-aligned box resting on the ground plane."""

    center: tuple[float, float]
    half_extents: tuple[float, float]
    height: float


@dataclass(frozen=True)
class RobotFootprint:
    half_width: float = 0.100    # lateral, from the 20.0 cm body width
    half_length: float = 0.1175  # along heading, from the 23.5 cm body length


@dataclass(frozen=True)
class CameraConfig:
    height: float = 0.22                    # lens at the top of the 22 cm body
    horizontal_fov: float = math.pi / 3.0
    vertical_fov: float = math.pi / 4.0
    width: int = 320
    height_px: int = 240
    max_range: float = 5.0


@dataclass(frozen=True)
class ActionParams:
    linear_speed: float = 0.2
    angular_speed: float = 0.4
    step_duration: float = 2.0
    continuous_linear_bound: float = 0.5
    continuous_angular_bound: float = 1.0


@dataclass(frozen=True)
class TerrainJitter:
    """Per-step Gaussian pose noise standing in for uneven ground."""

    sigma_pos: float = 0.01
    sigma_theta: float = 0.02
    enabled: bool = True


@dataclass(frozen=True)
class Palette:
    """Flat-shading intensities for the RGB render."""

    monolith: int = 30
    wall: int = 120
    obstacle: int = 80
    ground_mean: int = 160
    ground_amplitude: int = 40
    sky: int = 200


@dataclass(frozen=True)
class WorldConfig:
    enclosure_size: tuple[float, float] = (3.0, 4.0)  # (width x, length y)
    monolith: Box = Box(center=(0.0, 0.0), half_extents=(0.15, 0.15), height=1.2)
    obstacles: tuple[Box, ...] = ()
    robot_footprint: RobotFootprint = RobotFootprint()
    camera: CameraConfig = CameraConfig()
    action_params: ActionParams = ActionParams()
    reward_radius: float = 0.40
    max_steps: int = 100
    boundary_margin: float = 0.10
    terrain_jitter: TerrainJitter = TerrainJitter()
    spawn_min_monolith_distance: float = 0.60
    # Extra clearance (beyond boundary_margin) required of spawn poses so an
    # episode cannot begin inside, or rotate itself into, the termination band.
    spawn_boundary_buffer: float = 0.10
    control_mode: str = "discrete"  # "discrete" | "continuous"
    palette: Palette = Palette()

    def validate(self) -> None:
        """Raise InvalidConfigError naming the first violated invariant."""
        w, l = self.enclosure_size
        if w <= 0 or l <= 0:
            raise InvalidConfigError(f"enclosure dimensions must be positive, got {w} x {l}")
        if self.control_mode not in ("discrete", "continuous"):
            raise InvalidConfigError(f"control_mode must be 'discrete' or 'continuous', got {self.control_mode!r}")
        if self.reward_radius <= 0:
            raise InvalidConfigError("reward_radius must be > 0")
        if self.max_steps < 1:
            raise InvalidConfigError("max_steps must be >= 1")
        if self.action_params.step_duration <= 0:
            raise InvalidConfigError("step_duration must be > 0")
        if self.spawn_min_monolith_distance <= self.reward_radius:
            raise InvalidConfigError(
                "spawn_min_monolith_distance must exceed reward_radius "
                f"({self.spawn_min_monolith_distance} <= {self.reward_radius})"
            )
        cx, cy = self.monolith.center
        if not (abs(cx) < w / 2 and abs(cy) < l / 2):
            raise InvalidConfigError(f"monolith center ({cx}, {cy}) outside the {w} x {l} enclosure")
        for name, box in [("monolith", self.monolith)] + [
            (f"obstacle[{i}]", b) for i, b in enumerate(self.obstacles)
        ]:
            bx, by = box.center
            hx, hy = box.half_extents
            if hx <= 0 or hy <= 0 or box.height <= 0:
                raise InvalidConfigError(f"{name} extents must be positive")
            if abs(bx) + hx > w / 2 or abs(by) + hy > l / 2:
                raise InvalidConfigError(f"{name} does not lie fully inside the enclosure")
        if self.robot_footprint.half_width <= 0 or self.robot_footprint.half_length <= 0:
            raise InvalidConfigError("robot footprint extents must be positive")
        cam = self.camera
        if cam.width <= 0 or cam.height_px <= 0:
            raise InvalidConfigError("camera resolution must be positive")
        if not (0 < cam.horizontal_fov < math.pi and 0 < cam.vertical_fov < math.pi):
            raise InvalidConfigError("camera FOV angles must lie in (0, pi)")
        if cam.max_range <= 0:
            raise InvalidConfigError("camera max_range must be > 0")
        if self.boundary_margin < 0 or self.spawn_boundary_buffer < 0:
            raise InvalidConfigError("boundary margins must be non-negative")


# 4-box layout leaving feasible corridors around the central monolith.
_OBSTACLE_LAYOUT = tuple(
    Box(center=(sx * 0.8, sy * 1.0), half_extents=(0.2, 0.2), height=0.5)
    for sx, sy in [(-1, -1), (-1, 1), (1, -1), (1, 1)]
)

_VARIANTS = {
    "monolith_discrete": dict(control_mode="discrete", obstacles=()),
    "monolith_continuous": dict(control_mode="continuous", obstacles=()),
    "monolith_obstacles_discrete": dict(control_mode="discrete", obstacles=_OBSTACLE_LAYOUT),
    "monolith_obstacles_continuous": dict(control_mode="continuous", obstacles=_OBSTACLE_LAYOUT),
}


def variant_names() -> list[str]:
    return sorted(_VARIANTS)


def default_config(variant: str = "monolith_discrete") -> WorldConfig:
    """Built-in config for one of the four shipped variants."""
    try:
        overrides = _VARIANTS[variant]
    except KeyError:
        raise InvalidConfigError(f"unknown variant {variant!r}; expected one of {variant_names()}") from None
    cfg = replace(WorldConfig(), **overrides)
    cfg.validate()
    return cfg


def _box_from_dict(d: dict) -> Box:
    return Box(
        center=(float(d["center"][0]), float(d["center"][1])),
        half_extents=(float(d["half_extents"][0]), float(d["half_extents"][1])),
        height=float(d["height"]),
    )


def config_from_dict(data: dict) -> WorldConfig:
    """Build a WorldConfig from a parsed TOML table (field names mirror 1:1)."""
    kwargs = {}
    simple = (
        "reward_radius",
        "max_steps",
        "boundary_margin",
        "spawn_min_monolith_distance",
        "spawn_boundary_buffer",
        "control_mode",
    )
    for key in simple:
        if key in data:
            kwargs[key] = data[key]
    if "enclosure_size" in data:
        kwargs["enclosure_size"] = tuple(float(v) for v in data["enclosure_size"])
    if "monolith" in data:
        kwargs["monolith"] = _box_from_dict(data["monolith"])
    if "obstacles" in data:
        kwargs["obstacles"] = tuple(_box_from_dict(b) for b in data["obstacles"])
    for key, cls in (
        ("robot_footprint", RobotFootprint),
        ("camera", CameraConfig),
        ("action_params", ActionParams),
        ("terrain_jitter", TerrainJitter),
        ("palette", Palette),
    ):
        if key in data:
            kwargs[key] = cls(**data[key])
    unknown = set(data) - set(simple) - {
        "enclosure_size", "monolith", "obstacles", "robot_footprint",
        "camera", "action_params", "terrain_jitter", "palette",
    }
    if unknown:
        raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = WorldConfig(**kwargs)
    cfg.validate()
    return cfg


def load_config_file(path: str | Path) -> WorldConfig:
    """Load a world config from a TOML file."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    return config_from_dict(data)


def packaged_config_path(variant: str) -> Path:
    """Path of the shipped TOML file for a variant (for docs and the CLI)."""
    if variant not in _VARIANTS:
        raise InvalidConfigError(f"unknown variant {variant!r}; expected one of {variant_names()}")
    return Path(str(resources.files("gymgate.worldsim") / "configs" / f"{variant}.toml"))
