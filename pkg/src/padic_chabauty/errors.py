"""Exception hierarchy shared by all modules.

Precondition violations (bad input, bad parameters) and precision problems
map to CLI exit code 1; certification failures -- results that would
contradict a proved property of the computation -- map to exit code 2.
"""


class PadicChabautyError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------- scalars


class NonPrime(PadicChabautyError):
    pass


class ZeroDenominator(PadicChabautyError):
    pass


class PrimeMismatch(PadicChabautyError):
    pass


class DivisionByZeroToPrecision(PadicChabautyError):
    pass


class OddValuation(PadicChabautyError):
    pass


class NotASquare(PadicChabautyError):
    pass


class InsufficientPrecision(PadicChabautyError):
    pass


# ----------------------------------------------------------------- series


class AllZeroToPrecision(PadicChabautyError):
    pass


class UncertifiableHull(PadicChabautyError):
    pass


class MinimumNotAttained(PadicChabautyError):
    pass


class NUndefined(PadicChabautyError):
    pass


class PrecisionExhausted(PadicChabautyError):
    pass


# -------------------------------------------------------- reduction images


class CommonRoot(PadicChabautyError):
    pass


class MaxDepthExceeded(PadicChabautyError):
    """Disk subdivision hit the depth guard.

    Carries the partial certificate gathered so far in ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


# ----------------------------------------------------------------- models


class InvalidCurve(PadicChabautyError):
    pass


class DepthGuardExceeded(PadicChabautyError):
    pass


class BadReduction(PadicChabautyError):
    pass


class InsufficientTruncation(PadicChabautyError):
    pass


class HypothesisFailed(PadicChabautyError):
    def __init__(self, check, message=""):
        super().__init__(f"{check}: {message}" if message else check)
        self.check = check


# ------------------------------------------------- certification failures


class CertificationError(PadicChabautyError):
    """A computed result contradicts a certified property."""


class LandsOnNonSmooth(CertificationError):
    """A curve point reduced onto a non-smooth point of a decent model."""
