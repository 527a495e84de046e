"""Exception and warning types raised by the numerical kernels."""


class SiegelLambertError(Exception):
    """Base class for all library errors."""


class PoleError(SiegelLambertError, ValueError):
    """Evaluation requested at a pole of the function."""


class InvalidIndexError(SiegelLambertError, ValueError):
    pass


class WhittakerUnderflow(SiegelLambertError, FloatingPointError):
    """W underflows binary64; use ``log_whittaker_w`` instead."""


class TruncationError(SiegelLambertError):
    """A series or integral truncation cannot meet its tail bound."""


class TailTooLargeError(TruncationError):
    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class NonConvergenceError(SiegelLambertError):
    pass


class MissedZeroError(SiegelLambertError):
    """Sign-change census disagrees with the argument-principle count."""


class SimplicityError(SiegelLambertError):
    """|zeta'(rho)| fell below the simplicity threshold."""


class UnsupportedWeightError(SiegelLambertError, ValueError):
    pass


class InsufficientCoefficientsError(SiegelLambertError, ValueError):
    pass


class TruncationWarning(RuntimeWarning):
    pass


class ConjugateAsymmetryWarning(RuntimeWarning):
    pass


class OracleMismatchError(SiegelLambertError):
    """Two independent evaluations of the same quantity disagree."""


class StepTooCoarseError(NonConvergenceError):
    """Trapezoid and midpoint rules disagree; the quadrature step must shrink."""
