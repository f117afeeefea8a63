"""Gateway failures, each pinned to a wire error code."""

from gymgate.protocol import ErrorCode


class GatewayError(Exception):
    code = ErrorCode.INTERNAL


class AuthFailedError(GatewayError):
    code = ErrorCode.AUTH_FAILED


class NoBookingError(GatewayError):
    code = ErrorCode.NO_BOOKING


class BusyError(GatewayError):
    code = ErrorCode.BUSY


class NameTakenError(GatewayError):
    code = ErrorCode.NAME_TAKEN


class NotFoundError(GatewayError):
    code = ErrorCode.NOT_FOUND


class UnknownEnvError(GatewayError):
    code = ErrorCode.UNKNOWN_ENV


class LeaseLostError(GatewayError):
    code = ErrorCode.LEASE_LOST


class ActionKindError(GatewayError):
    code = ErrorCode.WRONG_ACTION_KIND


class EpisodeStateError(GatewayError):
    code = ErrorCode.NO_EPISODE


class BadRequestError(GatewayError):
    code = ErrorCode.BAD_REQUEST


class StorageError(GatewayError):
    code = ErrorCode.INTERNAL
