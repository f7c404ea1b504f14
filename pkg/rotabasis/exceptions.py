class RotaBasisError(Exception):
    """Base class; `exit_code` is what the CLI returns for it."""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class UsageError(RotaBasisError):
    exit_code = 2


class InputValidationError(RotaBasisError, ValueError):
    exit_code = 3


class PreconditionError(RotaBasisError, ValueError):
    """The input is well formed but an operation's precondition fails."""

    exit_code = 3


class ResourceGuardError(RotaBasisError):
    exit_code = 4
