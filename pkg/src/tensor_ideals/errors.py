"""Exception hierarchy shared by every module of the engine."""


class EngineError(Exception):
    """Base class for all errors raised by the engine."""


class SchemaError(EngineError):
    """Malformed input: unknown labels, bad dimensions, unparsable files."""


class PreconditionError(EngineError):
    """An operation was called on input outside its domain."""


class ResourceError(EngineError):
    """A configured size cap was exceeded."""


class ConsistencyError(EngineError):
    """Two independently computed routes disagree."""
