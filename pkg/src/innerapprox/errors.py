"""Exception hierarchy shared by every module."""


class InnerApproxError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(InnerApproxError, ValueError):
    pass


class NotSquare(DimensionMismatch):
    pass


class NotContractive(InnerApproxError, ValueError):
    pass


class NotContractiveInput(NotContractive):
    """Raised when the sampled Schur kernel of an input is not positive."""


class NotUnitary(InnerApproxError, ValueError):
    pass


class NotInner(InnerApproxError, ValueError):
    pass


class InvalidRadius(InnerApproxError, ValueError):
    pass


class DepthTooSmall(InnerApproxError, ValueError):
    pass


class IndexOutOfRange(InnerApproxError, IndexError):
    pass


class NumericalFailure(InnerApproxError, ArithmeticError):
    """Generic numerical breakdown (ill-conditioned solve, failed factorization)."""


class SingularResolvent(NumericalFailure):
    pass


class SingularBlock(NumericalFailure):
    pass


class DegenerateDenominator(NumericalFailure):
    pass


class PoleHit(NumericalFailure):
    pass


class CornerDegenerate(NumericalFailure):
    pass


class BudgetExhausted(InnerApproxError):
    """Frank-Wolfe stopped before reaching the requested residual.

    The best combination found so far is attached as ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class RankDeficiencyWarning(UserWarning):
    pass


class ParseError(InnerApproxError, ValueError):
    """An input file or flag does not match the expected format."""


class InvariantViolation(InnerApproxError):
    """A computed artifact failed one of its checked invariants."""
