"""Exception types shared across the package."""


class RodentsimError(Exception):
    """Base class for all package-specific errors."""


class InfeasibleConstraintError(RodentsimError, ValueError):
    """A stimulus sequence cannot satisfy the run-length constraint."""


class InsufficientDataError(RodentsimError, ValueError):
    """A session or series is too short for the requested window length."""


class TrialLogError(RodentsimError, ValueError):
    """Base class for trial-log import problems."""


class TrialLogParseError(TrialLogError):
    """A row of a trial log could not be parsed.

    Carries the 1-based line number of the offending row when known.
    """

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class TrialLogIntegrityError(TrialLogError):
    """Parsed rows violate uniqueness or ordering requirements."""
