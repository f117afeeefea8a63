"""Typed decode failures. Any of these on a live connection is fatal to the
connection: the stream does not resynchronize."""


class ProtocolError(Exception):
    """Base class for every frame-level failure."""


class OversizeFrameError(ProtocolError):
    pass


class TruncatedFrameError(ProtocolError):
    pass


class BadHeaderError(ProtocolError):
    pass


class UnknownTypeError(ProtocolError):
    pass


class VersionMismatchError(ProtocolError):
    pass


class BlobLengthMismatchError(ProtocolError):
    pass
