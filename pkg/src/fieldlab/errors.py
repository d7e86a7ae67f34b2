"""Exception types shared across fieldlab modules.

The CLI maps these onto exit codes: CheckFailed (a mathematical property
that should hold was observed to fail) exits 2, everything else that is
an expected operational failure (bad input, exhausted budget) exits 1.
"""


class FieldLabError(Exception):
    """Base class for all fieldlab errors."""


class NotPrime(FieldLabError):
    pass


class ReducibleModulus(FieldLabError):
    pass


class DivisionByZero(FieldLabError):
    pass


class FieldMismatch(FieldLabError):
    pass


class BudgetExceeded(FieldLabError):
    pass


class SingularCurve(FieldLabError):
    pass


class CurveMismatch(FieldLabError):
    pass


class SearchExhausted(FieldLabError):
    pass


class CharTwo(FieldLabError):
    pass


class TwistDegenerate(FieldLabError):
    pass


class PoleOfZ(FieldLabError):
    pass


class NotOrdinary(FieldLabError):
    pass


class FactorBudgetExceeded(FieldLabError):
    def __init__(self, n, partial, cofactor):
        super().__init__(f"factor budget exhausted on cofactor {cofactor} of {n}")
        self.n = n
        self.partial = partial
        self.cofactor = cofactor


class IncompleteFactorization(FieldLabError):
    pass


class EmptyAfterPoles(FieldLabError):
    pass


class ZeroCoefficient(FieldLabError):
    pass


class LengthMismatch(FieldLabError):
    pass


class DegreeMismatch(FieldLabError):
    pass


class UnsupportedDegree(FieldLabError):
    pass


class PrecisionExhausted(FieldLabError):
    pass


class TrialsExhausted(FieldLabError):
    pass


class UnboundPlaceholder(FieldLabError):
    pass


class UnassignedVariable(FieldLabError):
    pass


class ParseError(FieldLabError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class CheckFailed(FieldLabError):
    """A verified mathematical property failed; this should never happen."""
