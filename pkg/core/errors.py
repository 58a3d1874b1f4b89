# 2026-10-19 | v0.3.0 | Error hierarchy shared by every stage
"""
errors.py

One hierarchy for the whole pipeline. The `exit_code` class attribute is
what `main.py` returns to the shell:

- 1  pipeline failure
- 2  usage (bad input, bad query, bad flags)
- 3  a configured budget was exceeded
- 4  internal assertion
"""


class NaeLabError(Exception):
    exit_code = 1

    def to_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "message": str(self),
            "exit_code": self.exit_code,
        }


# =====================================================
# USAGE
# =====================================================

class UsageError(NaeLabError):
    exit_code = 2


class IngestError(UsageError):
    def __init__(self, table: str, row: int, message: str):
        super().__init__(f"{table}: row {row}: {message}")
        self.table = table
        self.row = row


class QuerySyntaxError(UsageError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnsafeHead(UsageError):
    def __init__(self, variable: str):
        super().__init__(f"head variable {variable} does not occur in the body")
        self.variable = variable


class RangeRestrictionError(UsageError):
    def __init__(self, variable: str):
        super().__init__(
            f"variable {variable} is not bound by a positive atom or a dom declaration"
        )
        self.variable = variable


class ArityMismatch(UsageError):
    pass


class UnknownRelation(UsageError):
    pass


class UnknownVariable(UsageError):
    pass


class InvalidDistribution(UsageError):
    pass


class CodeParameterError(UsageError):
    pass


# =====================================================
# BUDGETS
# =====================================================

class BudgetExceeded(NaeLabError):
    exit_code = 3


class PlanningBudgetExceeded(BudgetExceeded):
    pass


class QuotientBudgetExceeded(BudgetExceeded):
    pass


class ChromaticBudgetExceeded(BudgetExceeded):
    pass


class VerificationBudgetExceeded(BudgetExceeded):
    pass


class ExplicitBudgetExceeded(BudgetExceeded):
    pass


class NaiveBudgetExceeded(BudgetExceeded):
    pass


class DisjunctBudgetExceeded(BudgetExceeded):
    pass


class FamilyBudgetExceeded(BudgetExceeded):
    pass


# =====================================================
# INTERNAL
# =====================================================

class InternalError(NaeLabError):
    exit_code = 4


class ConstructionBug(InternalError):
    pass


class PlanError(InternalError):
    pass


# =====================================================
# PIPELINE
# =====================================================

class EmptyProjection(NaeLabError):
    pass


class InfeasibleCover(NaeLabError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} lies in no hyperedge")
        self.vertex = vertex


class FamilyConstructionFailed(NaeLabError):
    pass


class CoverageGap(NaeLabError):
    def __init__(self, uncovered):
        super().__init__(f"candidate pool leaves coloring {tuple(uncovered)} uncovered")
        self.uncovered = tuple(uncovered)
