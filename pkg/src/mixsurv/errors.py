"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so new error conditions should
subclass one of the four categories below rather than raising bare built-ins.
"""


class MixsurvError(Exception):
    """Base class for all package errors."""


class UsageError(MixsurvError):
    """Bad command-line arguments or configuration keys (exit code 2)."""


class InfeasibleDesignError(MixsurvError):
    """The requested design cannot be sized, e.g. no positive effect (exit code 3)."""


class InfeasibleInputError(InfeasibleDesignError):
    """Summary inputs imply an impossible survival law for a named subgroup."""

    def __init__(self, subgroup: str, message: str):
        self.subgroup = subgroup
        super().__init__(f"{subgroup}: {message}")


class NumericError(MixsurvError):
    """A numeric routine failed to converge to tolerance (exit code 4)."""


class DataError(MixsurvError):
    """A dataset is malformed or degenerate (exit code 5)."""


class TruncationWarning(UserWarning):
    """A Kaplan-Meier curve ended, censored, before the horizon and was extended flat."""
