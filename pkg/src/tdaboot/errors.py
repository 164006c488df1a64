"""Exception hierarchy shared across the package."""


class TdaBootError(Exception):
    """Base class for all library errors."""


class InvalidArgument(TdaBootError, ValueError):
    pass


class ParseError(TdaBootError, ValueError):
    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class EmptyInput(TdaBootError, ValueError):
    pass


class OutOfRange(TdaBootError, ValueError):
    pass


class MalformedComplex(TdaBootError):
    pass


class NotNested(TdaBootError):
    pass


class InvalidSpec(TdaBootError, ValueError):
    pass


class InsufficientData(TdaBootError, ValueError):
    pass


class DegenerateData(TdaBootError, ValueError):
    pass


class DegeneratePilot(TdaBootError, ValueError):
    pass


class ReplicateError(TdaBootError):
    def __init__(self, message, replicate=None):
        super().__init__(message if replicate is None else f"replicate {replicate}: {message}")
        self.replicate = replicate


class InsufficientReplicates(TdaBootError, ValueError):
    pass
