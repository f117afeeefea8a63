"""Observation channel selection, mirrored onto the gateway's channel types."""

import enum

from gymgate.worldsim import ChannelType


class Channels(enum.Enum):
    DEPTH_ONLY = 1
    RGB_ONLY = 3
    RGBD = 4

    @property
    def count(self) -> int:
        """Number of observation planes."""
        return self.value

    def to_channel_type(self) -> ChannelType:
        return _TO_CHANNEL_TYPE[self]


_TO_CHANNEL_TYPE = {
    Channels.DEPTH_ONLY: ChannelType.DEPTH_ONLY,
    Channels.RGB_ONLY: ChannelType.RGB_ONLY,
    Channels.RGBD: ChannelType.RGBD,
}
