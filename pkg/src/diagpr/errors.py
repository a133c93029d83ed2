"""Exception hierarchy shared by every module.

Input problems derive from :class:`InvalidInput` (CLI exit code 2), resource
caps from :class:`BudgetExceeded` (exit code 3) and broken internal
invariants from :class:`InvariantViolation` (exit code 4).
"""


class DiagprError(Exception):
    pass


class InvalidInput(DiagprError, ValueError):
    pass


class BudgetExceeded(DiagprError):
    pass


class InvariantViolation(DiagprError, AssertionError):
    pass


class IndexOutOfRange(InvalidInput, IndexError):
    pass


class NormalizationUnavailable(InvalidInput):
    pass


class NotFullRowRank(InvalidInput):
    pass


class ShapeMismatch(InvalidInput):
    pass


class ColumnsConditionFails(InvalidInput):
    pass


class HypothesisFails(InvalidInput):
    def __init__(self, d, q_d, message=None):
        self.d = d
        self.q_d = q_d
        super().__init__(message or f"q({d}) = {q_d} violates the hypothesis q(d) > d*q")


class NotInteger(InvalidInput):
    pass


class RankDeficient(InvalidInput):
    pass


class DegenerateSeries(InvalidInput):
    pass


class InvalidXi(InvalidInput):
    pass


class NonSmoothZeta(InvalidInput):
    pass


class PreprocessingMissing(InvalidInput):
    pass


class SizeLimitExceeded(BudgetExceeded):
    pass


class SearchBudgetExceeded(BudgetExceeded):
    pass


class CapExceeded(BudgetExceeded):
    pass


class SearchExhausted(BudgetExceeded):
    pass
