"""Exception and warning types raised by the spectral solver."""


class SpectrumError(Exception):
    """Base class for every error raised by this package."""


# -- domain errors (bad inputs / excluded points) -----------------------------

class DomainError(SpectrumError, ValueError):
    pass


class PoleError(DomainError):
    """Evaluation point lies within the exclusion radius of a pole."""


class EdgeError(DomainError):
    """Frequency lies within the exclusion radius of 0 or a gap edge."""


class OutOfGapError(DomainError):
    """A gap-only quantity was requested outside (omega_perp, omega_par)."""


class OutOfBandError(DomainError):
    """A propagating-band quantity was requested outside C- or C+."""


class RangeError(DomainError):
    """Target value is outside the image of the requested map."""


class ResonanceError(DomainError):
    """Argument sits on the arctan resonance of a dispersion relation."""


class BandEscapeError(DomainError):
    """Gap-soliton frequencies no longer fit below the upper gap edge."""


class ZeroVelocityError(DomainError):
    """Group velocity outside the atoms vanishes (zero momentum)."""


class MappingError(DomainError):
    """A string rapidity has no image in the requested frequency band."""


# -- numerical failures --------------------------------------------------------

class NumericalError(SpectrumError, ArithmeticError):
    pass


class NoConvergence(NumericalError):
    pass


class NoSignChange(NumericalError):
    pass


class SingularJacobian(NumericalError):
    pass


class DerivativeOverflow(NumericalError):
    """Derivative diverges at a square-root edge singularity."""


class ConsistencyError(NumericalError):
    """Analytic result disagrees with its finite-difference cross-check."""


# -- physics violations --------------------------------------------------------

class NCViolation(SpectrumError):
    """An assembled image violates sgn(Im h) = sgn(Im k)."""


# -- warnings ------------------------------------------------------------------

class SuperluminalWarning(UserWarning):
    """Velocity bracket is non-positive; the formula left its validity range."""


class EffectiveMassWarning(UserWarning):
    """Kinetic term exceeds the band width; quadratic dispersion is unreliable."""
