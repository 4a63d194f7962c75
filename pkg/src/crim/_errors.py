"""Exception hierarchy for the estimation pipeline."""


class CrimError(Exception):
    """Base class for all errors raised by the package.

    Attributes:
        stage: Name of the pipeline stage the error escaped from, if known.
    """

    def __init__(self, message: str, *, stage: str | None = None) -> None:
        """Initialize the error.

        Args:
            message: Human-readable description of the failure.
            stage: Optional pipeline stage name.
        """
        super().__init__(message)
        self.message = message
        self.stage = stage

    def __str__(self) -> str:
        """Return the bare message, without the stage prefix."""
        return self.message


class InputError(CrimError):
    """Raised when user-supplied input (files, repositories, records) is invalid."""


class ToolEnvironmentError(CrimError):
    """Raised when an external tool the package needs is unavailable."""


class GitCommandFailed(CrimError):
    """Raised when a git subprocess exits with a nonzero status."""


class ContractViolation(CrimError):
    """Raised when an operation is called outside its documented preconditions."""


class ComplexityUnavailable(CrimError):
    """Raised when a language profile cannot measure cyclomatic complexity."""


class InsufficientData(CrimError):
    """Raised when too few observed samples remain to fit a contribution rate."""


class DomainError(CrimError, ValueError):
    """Raised when a numeric argument lies outside the operation's domain."""


class ParameterError(CrimError, ValueError):
    """Raised when configuration or generator parameters are invalid."""
