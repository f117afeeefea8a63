"""Wire protocol shared by the gateway and its clients.

A frame is a u32 big-endian length (bytes following), a u32 big-endian
header length, a compact JSON header with lexicographically sorted keys,
and an optional raw blob. Observation pixels ride in the blob; everything
else rides in the header. See PROTOCOL.md for the normative byte layout.
"""

from gymgate.protocol.codec import (
    FRAME_HEIGHT,
    FRAME_WIDTH,
    MAX_FRAME_LEN,
    decode_frame,
    encode_frame,
    recv_frame,
    send_frame,
)
from gymgate.protocol.errors import (
    BadHeaderError,
    BlobLengthMismatchError,
    OversizeFrameError,
    ProtocolError,
    TruncatedFrameError,
    UnknownTypeError,
    VersionMismatchError,
)
from gymgate.protocol.messages import (
    PROTOCOL_VERSION,
    Close,
    CloseOk,
    ErrorCode,
    ErrorMsg,
    Heartbeat,
    Hello,
    HelloOk,
    LeaderboardOk,
    LeaderboardQuery,
    Make,
    MakeOk,
    Message,
    Reset,
    ResetOk,
    Step,
    StepOk,
)

__all__ = [
    "BadHeaderError",
    "BlobLengthMismatchError",
    "Close",
    "CloseOk",
    "ErrorCode",
    "ErrorMsg",
    "FRAME_HEIGHT",
    "FRAME_WIDTH",
    "Heartbeat",
    "Hello",
    "HelloOk",
    "LeaderboardOk",
    "LeaderboardQuery",
    "MAX_FRAME_LEN",
    "Make",
    "MakeOk",
    "Message",
    "OversizeFrameError",
    "PROTOCOL_VERSION",
    "ProtocolError",
    "Reset",
    "ResetOk",
    "Step",
    "StepOk",
    "TruncatedFrameError",
    "UnknownTypeError",
    "VersionMismatchError",
    "decode_frame",
    "encode_frame",
    "recv_frame",
    "send_frame",
]
