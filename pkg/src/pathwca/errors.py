"""Exception hierarchy shared by every engine in the package."""


class WcaError(Exception):
    """Base class for all package errors."""


class ProgramError(WcaError):
    """Malformed program text or a structurally invalid program."""


class NotFound(WcaError, KeyError):
    def __str__(self):
        # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""



class ExecutionError(WcaError):
    """Runtime fault inside an analyzed program (bad index, division by zero, ...)."""


class BudgetExceeded(WcaError):
    pass


class SolverBudgetExceeded(BudgetExceeded):
    pass


class StackUnderflow(WcaError):
    pass


class IllegalState(WcaError):
    pass


class PathTooShort(WcaError):
    """The path string ran out of bits before the program terminated."""


class UnsupportedFeature(WcaError):
    pass


class Unsupported(WcaError):
    """Requested benchmark scale is outside the supported range."""


class ConfigError(WcaError):
    pass


class InputError(WcaError, ValueError):
    """A concrete input that does not conform to its InputSpec."""
