"""Exception types shared across the package."""


class RisGraphError(Exception):
    """Base class for all package errors."""


class DomainError(RisGraphError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class InfeasibleSegment(RisGraphError):
    """A segment cannot satisfy the SNR threshold (or a beam-extension
    distance is shorter than the fixed hops it must cover)."""


class ConfigError(RisGraphError, ValueError):
    """Invalid or unknown experiment configuration."""


class FixtureError(RisGraphError, ValueError):
    """Malformed conflict fixture file; message carries the line number."""
