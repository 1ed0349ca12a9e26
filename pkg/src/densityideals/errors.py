"""Exception hierarchy shared by every module."""


class DensityIdealError(Exception):
    """Base class for all library errors."""


class ValidationError(DensityIdealError, ValueError):
    """Input violates a documented precondition or invariant."""


class PreconditionError(ValidationError):
    """An operation was called on an object lacking a required property."""


class DegenerateInputError(DensityIdealError, ValueError):
    """Input is well-formed but too small for the operation."""


class ScanBoundError(DensityIdealError, RuntimeError):
    """A search ran past its configured position cap."""


class SynthesisError(DensityIdealError, RuntimeError):
    """Weight synthesis could not choose boundary sets for a block."""

    def __init__(self, message, block=None):
        super().__init__(message if block is None else f"block {block}: {message}")
        self.block = block


class ClassificationError(DensityIdealError, RuntimeError):
    """No adversary case reached its threshold."""


class CertificationError(DensityIdealError, RuntimeError):
    """A constructed witness failed one of its own certified inequalities."""


class ConsistencyError(DensityIdealError, AssertionError):
    """Two independent computations of the same quantity disagreed."""


class MissingCertificateWarning(UserWarning):
    """A weight was used where membership in H matters but no certificate exists."""
