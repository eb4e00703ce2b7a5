"""Exception hierarchy shared by the library and the command line."""


class KSumFreeError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(KSumFreeError, ValueError):
    """Invalid arguments: bad dimensions, k < 2, a non-free inner set, ..."""


class CapacityError(KSumFreeError):
    """The requested box or search space exceeds a hard size limit."""
