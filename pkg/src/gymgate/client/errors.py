"""Client failures, each carrying the CLI exit code it maps to."""

from gymgate.protocol import ErrorCode


class ClientError(Exception):
    exit_code = 5


class UsageError(ClientError):
    """Caller mistake: bad name, reused experiment, malformed arguments."""

    exit_code = 2


class AccessError(ClientError):
    """Authentication or booking rejection."""

    exit_code = 3


class EnvBusyError(ClientError):
    """Environment leased by someone else."""

    exit_code = 4


class RemoteError(ClientError):
    """Any other server-reported error."""

    exit_code = 5


class TransportError(ClientError):
    """Socket failure, timeout, or a protocol violation on the wire."""

    exit_code = 5


_CODE_MAP = {
    ErrorCode.AUTH_FAILED: AccessError,
    ErrorCode.NO_BOOKING: AccessError,
    ErrorCode.BUSY: EnvBusyError,
    ErrorCode.UNKNOWN_ENV: UsageError,
    ErrorCode.NAME_TAKEN: UsageError,
    ErrorCode.NOT_FOUND: UsageError,
}


def error_for_code(code: str, detail: str) -> ClientError:
    cls = _CODE_MAP.get(code, RemoteError)
    return cls(f"{code}: {detail}")
