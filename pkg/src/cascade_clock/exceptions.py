"""Exception types shared across the package."""


class GraphFileError(ValueError):
    """Raised when a graph file cannot be parsed.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class InitialSetMismatchError(ValueError):
    """Raised when no observed prefix accumulates exactly the given |S_0|."""


class ConfigError(ValueError):
    """Raised for infeasible or unknown experiment configuration."""
