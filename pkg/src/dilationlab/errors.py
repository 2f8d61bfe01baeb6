"""Exception and warning types shared across the package."""


class DilationLabError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(DilationLabError, ValueError):
    """A precondition on user-supplied data failed."""


class NotWellDefinedError(DilationLabError):
    """A raw-coordinate map does not respect a null-space quotient."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotPositiveDefiniteError(DilationLabError):
    """A kernel window Gram is not positive semidefinite within tolerance.

    Signals that no regular isometric dilation exists for the given data.
    """

    def __init__(self, message, margin=None):
        super().__init__(message)
        self.margin = margin


class InstanceFormatError(DilationLabError):
    """An instance file is malformed or fails schema validation."""


class IncoherentFlipsError(InvalidArgumentError):
    """The flip family fails the braid compatibility check."""


class InvalidFlipError(InvalidArgumentError):
    """A flip matrix is not an isomorphism of correspondences."""


class DegenerateRankWarning(UserWarning):
    """An eigenvalue fell inside the ambiguous band around the rank cutoff."""
