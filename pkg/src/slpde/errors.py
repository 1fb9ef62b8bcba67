"""Exception hierarchy.

Input problems derive from ``InputError`` (a ``ValueError``); numerical
breakdowns derive from ``NumericalError`` (an ``ArithmeticError``). The CLI
maps the two families to exit codes 2 and 3.
"""


class SLPDEError(Exception):
    pass


class InputError(SLPDEError, ValueError):
    pass


class NumericalError(SLPDEError, ArithmeticError):
    pass


class OutOfRange(InputError):
    """Phase outside (-n*pi/2, n*pi/2)."""


class PhaseOutOfRange(InputError):
    """Inhomogeneous term leaves the phase interval a method requires."""


class OddDimension(InputError):
    pass


class HypothesisViolated(InputError):
    pass


class NonFinite(NumericalError):
    pass


class DegenerateBracket(NumericalError):
    pass


class Degenerate(NumericalError):
    """sigma_n(A) is zero within tolerance."""


class PoleProximity(NumericalError):
    pass


class RootFindFailure(NumericalError):
    pass


class NoBracket(NumericalError):
    pass


class Inconclusive(NumericalError):
    pass


class DegenerateGradient(NumericalError):
    pass


class NotConverged(NumericalError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
