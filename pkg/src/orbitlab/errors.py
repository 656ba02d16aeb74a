"""Exception taxonomy shared by all modules."""


class OrbitLabError(Exception):
    """Base class for all errors raised by this package."""


class NotInG0(OrbitLabError):
    """A leading principal minor vanishes; no Gaussian decomposition."""


class NonReducedWord(OrbitLabError):
    """A Weyl-group word is longer than the length of its permutation."""


class LevelOutOfRange(OrbitLabError):
    """Exterior-power level outside 1..n-1."""


class NegativeCoefficient(OrbitLabError):
    """Dominant weight given with a negative fundamental coefficient."""


class RangeExceeded(OrbitLabError):
    """A computation would overflow double precision; inputs too extreme."""


class CholeskyFailure(OrbitLabError):
    """Numerical loss of positive-definiteness in a Gram matrix."""


class ZeroScale(OrbitLabError):
    """The scale parameter s must be nonzero (negative for chart maps)."""


class DegenerateSpectrum(OrbitLabError):
    """Eigenvalue gaps collapsed; only regular spectra are supported."""


class OffCell(OrbitLabError):
    """A required minor vanishes; the point is outside the open cell."""


class NewtonDiverged(OrbitLabError):
    """The damped Newton iteration failed to converge."""


class BoxCheckFailed(OrbitLabError):
    """Sign change across the test box could not be confirmed (s too shallow)."""


class StepUnderflow(OrbitLabError):
    """Finite-difference step lost significance; derivative unreliable."""


class UnsupportedRank(OrbitLabError):
    """Operation implemented only for ranks 1 and 2 (n = 2, 3)."""


class EmptyRegion(OrbitLabError):
    """The requested cone window over the leaf is empty."""


class PoleSingular(OrbitLabError):
    """Sphere point at |z| = 1; outside the cylindrical chart."""


class NonPositiveValue(OrbitLabError):
    """Log-linear fit requires strictly positive series values."""


class TooFewPoints(OrbitLabError):
    """Log-linear fit requires at least four points."""


class SampleRejected(OrbitLabError):
    """An explicitly supplied sample violates the big-cell margin."""


class ConfigError(OrbitLabError):
    """Invalid experiment configuration."""
