"""Frame codec: `encode_frame` and `decode_frame` are pure inverses on valid
messages, and `decode_frame` turns arbitrary bytes into a typed error instead
of an exception escape. Socket helpers `send_frame`/`recv_frame` move whole
frames; any decode failure is terminal for the connection.
"""

from __future__ import annotations

import json
import math
import struct
from typing import Any

import numpy as np

from gymgate.protocol.errors import (
    BadHeaderError,
    BlobLengthMismatchError,
    OversizeFrameError,
    TruncatedFrameError,
    UnknownTypeError,
    VersionMismatchError,
)
from gymgate.protocol.messages import (
    PROTOCOL_VERSION,
    Action,
    Close,
    CloseOk,
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
from gymgate.worldsim import ChannelType, ContinuousAction, DiscreteAction, Observation
from gymgate.worldsim.world import Termination

# frame geometry is fixed for protocol v1; the blob layout depends on it
FRAME_WIDTH = 320
FRAME_HEIGHT = 240
DEPTH_PLANE_BYTES = FRAME_WIDTH * FRAME_HEIGHT * 2
RGB_PLANE_BYTES = FRAME_WIDTH * FRAME_HEIGHT * 3

# value of the leading u32 (bytes that follow it), caps one RGBD frame with
# a generous margin while rejecting runaway or hostile lengths
MAX_FRAME_LEN = 8 * 1024 * 1024

_TERMINATIONS = {t.value for t in Termination}
_CHANNELS = {c.value: c for c in ChannelType}


# -- field validators ------------------------------------------------------

def _u(fields: dict, key: str) -> int:
    v = fields.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise BadHeaderError(f"field {key!r} must be an unsigned integer")
    return v


def _s(fields: dict, key: str) -> str:
    v = fields.get(key)
    if not isinstance(v, str):
        raise BadHeaderError(f"field {key!r} must be a string")
    return v


def _b(fields: dict, key: str) -> bool:
    v = fields.get(key)
    if not isinstance(v, bool):
        raise BadHeaderError(f"field {key!r} must be a boolean")
    return v


def _f(fields: dict, key: str) -> float:
    v = fields.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise BadHeaderError(f"field {key!r} must be a number")
    return float(v)


def _channel(fields: dict, key: str = "channel_type") -> ChannelType:
    v = _s(fields, key)
    if v not in _CHANNELS:
        raise BadHeaderError(f"unknown channel_type {v!r}")
    return _CHANNELS[v]


def _action_to_json(action: Action) -> dict:
    if isinstance(action, DiscreteAction):
        return {"kind": "discrete", "value": int(action.value)}
    if isinstance(action, ContinuousAction):
        if not (math.isfinite(action.linear) and math.isfinite(action.angular)):
            raise BadHeaderError("continuous action components must be finite")
        return {"kind": "continuous", "linear": float(action.linear), "angular": float(action.angular)}
    raise BadHeaderError(f"unsupported action {action!r}")


def _action_from_json(fields: dict) -> Action:
    raw = fields.get("action")
    if not isinstance(raw, dict):
        raise BadHeaderError("field 'action' must be an object")
    kind = raw.get("kind")
    if kind == "discrete":
        v = raw.get("value")
        if not isinstance(v, int) or isinstance(v, bool):
            raise BadHeaderError("discrete action value must be an integer")
        try:
            return DiscreteAction(v)
        except ValueError as exc:
            raise BadHeaderError(f"discrete action value {v} out of range") from exc
    if kind == "continuous":
        return ContinuousAction(linear=_f(raw, "linear"), angular=_f(raw, "angular"))
    raise BadHeaderError(f"unknown action kind {kind!r}")


# -- observation blob ------------------------------------------------------

def pack_observation(obs: Observation) -> bytes:
    parts = []
    if obs.channel_config.has_depth:
        if obs.depth is None or obs.depth.shape != (FRAME_HEIGHT, FRAME_WIDTH):
            raise BlobLengthMismatchError("observation depth plane missing or misshaped")
        parts.append(np.ascontiguousarray(obs.depth, dtype="<u2").tobytes())
    if obs.channel_config.has_rgb:
        if obs.rgb is None or obs.rgb.shape != (FRAME_HEIGHT, FRAME_WIDTH, 3):
            raise BlobLengthMismatchError("observation rgb plane missing or misshaped")
        parts.append(np.ascontiguousarray(obs.rgb, dtype=np.uint8).tobytes())
    return b"".join(parts)


def unpack_observation(channel: ChannelType, blob: bytes) -> Observation:
    expected = (DEPTH_PLANE_BYTES if channel.has_depth else 0) + (
        RGB_PLANE_BYTES if channel.has_rgb else 0
    )
    if len(blob) != expected:
        raise BlobLengthMismatchError(
            f"blob is {len(blob)} bytes, channel_type {channel.value!r} requires {expected}"
        )
    depth = rgb = None
    offset = 0
    if channel.has_depth:
        plane = np.frombuffer(blob, dtype="<u2", count=FRAME_HEIGHT * FRAME_WIDTH, offset=offset)
        depth = plane.reshape(FRAME_HEIGHT, FRAME_WIDTH).astype(np.uint16)
        offset += DEPTH_PLANE_BYTES
    if channel.has_rgb:
        plane = np.frombuffer(blob, dtype=np.uint8, count=FRAME_HEIGHT * FRAME_WIDTH * 3, offset=offset)
        rgb = plane.reshape(FRAME_HEIGHT, FRAME_WIDTH, 3).copy()
    return Observation(channel_config=channel, depth=depth, rgb=rgb)


# -- per-type header construction -------------------------------------------

def _header_and_blob(msg: Message) -> tuple[dict, bytes]:
    if isinstance(msg, Hello):
        return {"type": "hello", "token": msg.token, "client_version": msg.client_version}, b""
    if isinstance(msg, HelloOk):
        return {"type": "hello_ok", "session_id": msg.session_id, "server_version": msg.server_version}, b""
    if isinstance(msg, Make):
        return {
            "type": "make",
            "env_name": msg.env_name,
            "experiment_name": msg.experiment_name,
            "resume_experiment": msg.resume_experiment,
            "channel_type": msg.channel_type.value,
        }, b""
    if isinstance(msg, MakeOk):
        return {"type": "make_ok", "env_handle": msg.env_handle, "obs_shape": list(msg.obs_shape)}, b""
    if isinstance(msg, Reset):
        return {"type": "reset", "env_handle": msg.env_handle}, b""
    if isinstance(msg, ResetOk):
        return {
            "type": "reset_ok",
            "channel_type": msg.observation.channel_config.value,
        }, pack_observation(msg.observation)
    if isinstance(msg, Step):
        return {"type": "step", "env_handle": msg.env_handle, "action": _action_to_json(msg.action)}, b""
    if isinstance(msg, StepOk):
        if msg.termination not in _TERMINATIONS:
            raise BadHeaderError(f"unknown termination {msg.termination!r}")
        return {
            "type": "step_ok",
            "reward": float(msg.reward),
            "done": bool(msg.done),
            "termination": msg.termination,
            "step_index": msg.step_index,
            "channel_type": msg.observation.channel_config.value,
        }, pack_observation(msg.observation)
    if isinstance(msg, Close):
        return {"type": "close", "env_handle": msg.env_handle}, b""
    if isinstance(msg, CloseOk):
        return {"type": "close_ok"}, b""
    if isinstance(msg, ErrorMsg):
        return {"type": "error", "code": msg.code, "detail": msg.detail}, b""
    if isinstance(msg, Heartbeat):
        return {"type": "heartbeat"}, b""
    if isinstance(msg, LeaderboardQuery):
        return {"type": "leaderboard_query", "top_n": msg.top_n}, b""
    if isinstance(msg, LeaderboardOk):
        for e in msg.entries:
            if not isinstance(e, dict):
                raise BadHeaderError("leaderboard entries must be objects")
        return {"type": "leaderboard_ok", "entries": list(msg.entries)}, b""
    raise BadHeaderError(f"cannot encode {type(msg).__name__}")


def _expect_keys(fields: dict, *keys: str) -> None:
    extra = set(fields) - {"type", "id", "v", *keys}
    if extra:
        raise BadHeaderError(f"unexpected header fields {sorted(extra)!r}")
    missing = set(keys) - set(fields)
    if missing:
        raise BadHeaderError(f"missing header fields {sorted(missing)!r}")


def _no_blob(blob: bytes) -> None:
    if blob:
        raise BlobLengthMismatchError(f"message type carries no blob, got {len(blob)} bytes")


def _decode_hello(mid: int, fields: dict, blob: bytes) -> Hello:
    _expect_keys(fields, "token", "client_version")
    _no_blob(blob)
    return Hello(id=mid, token=_s(fields, "token"), client_version=_s(fields, "client_version"))


def _decode_hello_ok(mid: int, fields: dict, blob: bytes) -> HelloOk:
    _expect_keys(fields, "session_id", "server_version")
    _no_blob(blob)
    return HelloOk(id=mid, session_id=_s(fields, "session_id"),
                   server_version=_s(fields, "server_version"))


def _decode_make(mid: int, fields: dict, blob: bytes) -> Make:
    _expect_keys(fields, "env_name", "experiment_name", "resume_experiment", "channel_type")
    _no_blob(blob)
    return Make(
        id=mid,
        env_name=_s(fields, "env_name"),
        experiment_name=_s(fields, "experiment_name"),
        resume_experiment=_b(fields, "resume_experiment"),
        channel_type=_channel(fields),
    )


def _decode_make_ok(mid: int, fields: dict, blob: bytes) -> MakeOk:
    _expect_keys(fields, "env_handle", "obs_shape")
    _no_blob(blob)
    shape = fields.get("obs_shape")
    if not isinstance(shape, list) or not all(
        isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in shape
    ):
        raise BadHeaderError("field 'obs_shape' must be a list of positive integers")
    return MakeOk(id=mid, env_handle=_s(fields, "env_handle"), obs_shape=tuple(shape))


def _decode_reset(mid: int, fields: dict, blob: bytes) -> Reset:
    _expect_keys(fields, "env_handle")
    _no_blob(blob)
    return Reset(id=mid, env_handle=_s(fields, "env_handle"))


def _decode_reset_ok(mid: int, fields: dict, blob: bytes) -> ResetOk:
    _expect_keys(fields, "channel_type")
    return ResetOk(id=mid, observation=unpack_observation(_channel(fields), blob))


def _decode_step(mid: int, fields: dict, blob: bytes) -> Step:
    _expect_keys(fields, "env_handle", "action")
    _no_blob(blob)
    return Step(id=mid, env_handle=_s(fields, "env_handle"), action=_action_from_json(fields))


def _decode_step_ok(mid: int, fields: dict, blob: bytes) -> StepOk:
    _expect_keys(fields, "reward", "done", "termination", "step_index", "channel_type")
    termination = _s(fields, "termination")
    if termination not in _TERMINATIONS:
        raise BadHeaderError(f"unknown termination {termination!r}")
    return StepOk(
        id=mid,
        reward=_f(fields, "reward"),
        done=_b(fields, "done"),
        termination=termination,
        step_index=_u(fields, "step_index"),
        observation=unpack_observation(_channel(fields), blob),
    )


def _decode_close(mid: int, fields: dict, blob: bytes) -> Close:
    _expect_keys(fields, "env_handle")
    _no_blob(blob)
    return Close(id=mid, env_handle=_s(fields, "env_handle"))


def _decode_close_ok(mid: int, fields: dict, blob: bytes) -> CloseOk:
    _expect_keys(fields)
    _no_blob(blob)
    return CloseOk(id=mid)


def _decode_error(mid: int, fields: dict, blob: bytes) -> ErrorMsg:
    _expect_keys(fields, "code", "detail")
    _no_blob(blob)
    return ErrorMsg(id=mid, code=_s(fields, "code"), detail=_s(fields, "detail"))


def _decode_heartbeat(mid: int, fields: dict, blob: bytes) -> Heartbeat:
    _expect_keys(fields)
    _no_blob(blob)
    return Heartbeat(id=mid)


def _decode_leaderboard_query(mid: int, fields: dict, blob: bytes) -> LeaderboardQuery:
    _expect_keys(fields, "top_n")
    _no_blob(blob)
    return LeaderboardQuery(id=mid, top_n=_u(fields, "top_n"))


def _decode_leaderboard_ok(mid: int, fields: dict, blob: bytes) -> LeaderboardOk:
    _expect_keys(fields, "entries")
    _no_blob(blob)
    entries = fields.get("entries")
    if not isinstance(entries, list) or not all(isinstance(e, dict) for e in entries):
        raise BadHeaderError("field 'entries' must be a list of objects")
    return LeaderboardOk(id=mid, entries=tuple(entries))


_DECODERS = {
    "hello": _decode_hello,
    "hello_ok": _decode_hello_ok,
    "make": _decode_make,
    "make_ok": _decode_make_ok,
    "reset": _decode_reset,
    "reset_ok": _decode_reset_ok,
    "step": _decode_step,
    "step_ok": _decode_step_ok,
    "close": _decode_close,
    "close_ok": _decode_close_ok,
    "error": _decode_error,
    "heartbeat": _decode_heartbeat,
    "leaderboard_query": _decode_leaderboard_query,
    "leaderboard_ok": _decode_leaderboard_ok,
}


# -- frame layer -------------------------------------------------------------

def encode_frame(msg: Message) -> bytes:
    """Serialize one message to a complete wire frame (byte-reproducible)."""
    header, blob = _header_and_blob(msg)
    mid = msg.id
    if not isinstance(mid, int) or isinstance(mid, bool) or mid < 0:
        raise BadHeaderError("message id must be an unsigned integer")
    header["id"] = mid
    header["v"] = PROTOCOL_VERSION
    try:
        header_bytes = json.dumps(
            header, separators=(",", ":"), sort_keys=True, allow_nan=False, ensure_ascii=False
        ).encode("utf-8")
    except ValueError as exc:
        raise BadHeaderError(f"header not JSON-serializable: {exc}") from exc
    length = 4 + len(header_bytes) + len(blob)
    if length > MAX_FRAME_LEN:
        raise OversizeFrameError(f"frame length {length} exceeds {MAX_FRAME_LEN}")
    return struct.pack(">II", length, len(header_bytes)) + header_bytes + blob


def decode_frame(data: bytes) -> Message:
    """Parse one complete frame. Arbitrary input yields a ProtocolError subclass."""
    if len(data) < 4:
        raise TruncatedFrameError(f"frame shorter than length prefix ({len(data)} bytes)")
    (length,) = struct.unpack(">I", data[:4])
    if length > MAX_FRAME_LEN:
        raise OversizeFrameError(f"declared length {length} exceeds {MAX_FRAME_LEN}")
    if len(data) != 4 + length:
        raise TruncatedFrameError(f"frame declares {length} bytes after prefix, got {len(data) - 4}")
    if length < 4:
        raise TruncatedFrameError("frame too short for a header length")
    (header_len,) = struct.unpack(">I", data[4:8])
    if 4 + header_len > length:
        raise BadHeaderError(f"header length {header_len} exceeds frame payload")
    header_bytes = data[8:8 + header_len]
    blob = data[8 + header_len:]
    try:
        fields = json.loads(header_bytes.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise BadHeaderError(f"header is not valid JSON: {exc}") from exc
    if not isinstance(fields, dict):
        raise BadHeaderError("header must be a JSON object")
    for required in ("type", "id", "v"):
        if required not in fields:
            raise BadHeaderError(f"header missing required field {required!r}")
    version = fields["v"]
    if not isinstance(version, int) or isinstance(version, bool):
        raise BadHeaderError("field 'v' must be an integer")
    if version != PROTOCOL_VERSION:
        raise VersionMismatchError(f"protocol version {version}, expected {PROTOCOL_VERSION}")
    mtype = fields["type"]
    if not isinstance(mtype, str):
        raise BadHeaderError("field 'type' must be a string")
    decoder = _DECODERS.get(mtype)
    if decoder is None:
        raise UnknownTypeError(f"unknown message type {mtype!r}")
    mid = _u(fields, "id")
    return decoder(mid, fields, blob)


# -- socket helpers ----------------------------------------------------------

def _recv_exact(sock, n: int) -> bytes:
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            raise TruncatedFrameError(f"connection closed mid-frame ({len(buf)}/{n} bytes)")
        buf.extend(chunk)
    return bytes(buf)


def recv_frame(sock) -> Message | None:
    """Read one frame from a socket; None on clean EOF at a frame boundary."""
    prefix = bytearray()
    while len(prefix) < 4:
        chunk = sock.recv(4 - len(prefix))
        if not chunk:
            if not prefix:
                return None
            raise TruncatedFrameError(f"connection closed mid-prefix ({len(prefix)}/4 bytes)")
        prefix.extend(chunk)
    prefix = bytes(prefix)
    (length,) = struct.unpack(">I", prefix)
    if length > MAX_FRAME_LEN:
        raise OversizeFrameError(f"declared length {length} exceeds {MAX_FRAME_LEN}")
    return decode_frame(prefix + _recv_exact(sock, length))


def send_frame(sock, msg: Message) -> None:
    sock.sendall(encode_frame(msg))
