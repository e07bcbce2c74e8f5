"""Exception types shared across the package."""


class QcaError(Exception):
    """Base class for every error raised by this package."""


class NotUnitary(QcaError):
    """Matrix failed its unitarity tolerance."""


class DegenerateProbe(QcaError):
    """Spectral probe set failed to separate the solution classes."""


class DegenerateBand(QcaError):
    """Eigenphase bands coincide at the requested wave vector."""


class DimensionMismatch(QcaError):
    """Field components and transition matrices have different dimensions."""


class InsufficientData(QcaError):
    """Not enough samples for the requested estimate."""


class LogBranch(QcaError):
    """Eigenphase reached the principal-branch cut of the matrix logarithm."""


class InvalidParameter(QcaError):
    """Parameter outside its admissible range."""


class ConfigError(QcaError):
    """Malformed or inconsistent run configuration."""
