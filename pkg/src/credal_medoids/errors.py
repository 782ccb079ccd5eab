"""Exception types raised by credal_medoids."""


class CredalMedoidsError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(CredalMedoidsError, ValueError):
    pass


class InvalidFrameError(InvalidArgumentError):
    """Frame of discernment with fewer than two clusters."""


class TotalConflictError(CredalMedoidsError, ValueError):
    """A bba with all of its mass on the empty set has no pignistic transform."""


class ValidationError(CredalMedoidsError, ValueError):
    """Input matrix fails a structural check."""


class AsymmetricInputError(ValidationError):
    pass


class NegativeDissimilarityError(ValidationError):
    pass


class DiagonalError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class RangeError(ValidationError):
    pass


class FormatError(ValidationError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FixtureNotFoundError(CredalMedoidsError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown fixture"
