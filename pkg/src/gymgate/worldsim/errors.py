"""Simulator error types."""


class WorldError(Exception):
    """Base class for simulator errors."""


class InvalidConfigError(WorldError):
    """A world configuration violates one of its invariants."""


class SpawnExhaustedError(WorldError):
    """Rejection sampling could not find a valid spawn pose.

    Signals an over-crowded obstacle layout rather than bad luck: the
    sampler gives up only after the configured attempt cap.
    """


class NoEpisodeError(WorldError):
    """step() was called with no active episode (reset required)."""


class WrongActionKindError(WorldError):
    """Discrete action sent to a continuous world or vice versa."""
