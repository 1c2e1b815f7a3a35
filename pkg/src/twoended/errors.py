"""Exception hierarchy shared by every module."""


class TwoEndedError(Exception):
    """Base class; the CLI maps subclasses onto exit codes."""


class InvalidSpecError(TwoEndedError, ValueError):
    pass


class InsufficientTruncationError(TwoEndedError):
    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class PreconditionError(TwoEndedError, ValueError):
    pass


class NotConnectedError(PreconditionError):
    pass


class KCLViolationError(TwoEndedError):
    def __init__(self, message, cycle=None, residual=None):
        super().__init__(message)
        self.cycle = cycle
        self.residual = residual


class ConvergenceError(TwoEndedError):
    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class ColouringError(TwoEndedError):
    pass


class VerificationError(TwoEndedError):
    """A computed object failed a check it is required to pass."""
