"""Exception hierarchy shared by all modules."""


class SqTransferError(Exception):
    """Base class for all package errors."""


class InvalidTruncationError(SqTransferError, ValueError):
    pass


class DimensionError(SqTransferError, ValueError):
    pass


class AboveThresholdError(SqTransferError, ValueError):
    """OPO parameters at or above the oscillation threshold."""


class DomainError(SqTransferError, ValueError):
    pass


class InvalidParameterError(SqTransferError, ValueError):
    pass


class UnsupportedConfigurationError(SqTransferError, ValueError):
    pass


class DegenerateSteadyStateError(SqTransferError, RuntimeError):
    """The generator has more than one stationary state."""


class ConvergenceError(SqTransferError, RuntimeError):
    pass


class ConfigError(SqTransferError, ValueError):
    """Invalid scenario configuration; ``key`` names the offending entry."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
