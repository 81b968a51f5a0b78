"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


class SizeCapError(RuntimeError):
    """Raised when a requested computation exceeds a configured size cap."""


class DegenerateSampleError(ValidationError):
    """Raised when post-selection leaves no usable Monte Carlo trials."""
