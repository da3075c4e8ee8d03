"""Exception types shared across the package."""


class PoldynError(Exception):
    """Base class for all package errors."""


class ConfigError(PoldynError):
    """Invalid configuration or input validation failure.

    The message always names the offending key or argument and the
    violated constraint.
    """


class InvariantViolation(PoldynError):
    """A numerical invariant was violated during propagation.

    Carries the first offending time so failures are reproducible.
    """

    def __init__(self, t, message):
        self.t = t
        super().__init__(f"invariant violated at t={t:.6g}: {message}")


class ResourceLimit(PoldynError):
    """Requested computation exceeds the configured resource bounds."""
