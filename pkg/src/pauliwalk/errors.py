"""Exception types shared across the package."""


class PauliwalkError(Exception):
    """Base class for all package-specific errors."""


class NonHermitianError(PauliwalkError, ValueError):
    """Input matrix is not Hermitian within tolerance."""


class JacobiConvergenceError(PauliwalkError, RuntimeError):
    """Cyclic Jacobi sweeps exhausted before the off-diagonal mass vanished."""


class NormalizationError(PauliwalkError, ValueError):
    """Kraus operators violate the normalization of their declared convention."""


class ContractionError(PauliwalkError, ValueError):
    """Affine map sends the Bloch ball outside the closed unit ball."""


class NonUniqueFixedPointError(PauliwalkError, ValueError):
    """The channel has no unique stationary state and none was resolvable."""


class DegenerateDirectionError(PauliwalkError, ValueError):
    """Direction with |<nu, v>| = ||nu||: the tail law collapses to a point."""


class DegreeOverflowError(PauliwalkError, ValueError):
    """Word degree exceeds the supported cap."""


class WindowError(PauliwalkError, ValueError):
    """Empty or off-grid time window."""


class SaturationError(PauliwalkError, ValueError):
    """Query at or beyond the support boundary ||nu|| of the scaled sum."""


class ChannelFormatError(PauliwalkError, ValueError):
    """Malformed channel specification record."""
