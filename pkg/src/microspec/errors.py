"""Exception types shared across the package."""


class MicrospecError(Exception):
    """Base class for all package errors."""


class BadRange(MicrospecError):
    """Scale-ladder parameters outside their admissible range."""


class RadiusTooSmall(MicrospecError):
    """Window support resolved by fewer than 5 grid points per axis."""


class SupportViolation(MicrospecError):
    """Profile support is not contained in the declared region."""


class UnresolvedOscillation(MicrospecError):
    """Test function bandwidth exceeds the Nyquist limit of its grid."""


class ExtrapolationDiverged(MicrospecError):
    """Regularization ladder failed to converge under extrapolation."""


class NyquistUnsatisfiable(MicrospecError):
    """Sampling the integrand would exceed the grid-point budget."""


class UnknownGroundTruth(MicrospecError):
    """No reference wavefront descriptor registered for this entry."""


class MissingMirrorSample(MicrospecError):
    """Sample lattice lacks the reflected point needed for a symmetry check."""


class NotSalient(MicrospecError):
    """Cone predicate admits an antipodal pair of sampled directions."""


class ConfigError(MicrospecError):
    """Scenario configuration is missing, malformed, or has unknown keys."""
