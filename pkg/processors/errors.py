"""
Error types for guess-leakage analysis
All errors derive from ValueError so callers that only catch ValueError keep working.
"""

from typing import Optional, Tuple


class GuessLeakError(ValueError):
    """Base class for every error raised by the processors package"""


class NegativeMass(GuessLeakError):
    """A probability table entry is below the clamp tolerance"""

    def __init__(self, value: float, locus: Tuple[int, int]):
        self.value = value
        self.locus = locus
        super().__init__(f"Negative probability {value!r} at row {locus[0]}, column {locus[1]}")


class NotNormalized(GuessLeakError):
    """Total mass is not within tolerance of 1"""

    def __init__(self, total: float):
        self.total = total
        super().__init__(f"Probabilities sum to {total!r}, expected 1 (tolerance 1e-9)")


class EmptyAlphabet(GuessLeakError):
    """A joint table with zero rows or zero columns"""


class DimensionMismatch(GuessLeakError):
    """Encoder, estimator and table sizes do not fit together"""


class BudgetExceeded(GuessLeakError):
    """Exact enumeration would evaluate more candidates than allowed"""

    def __init__(self, candidates: int, budget: int):
        self.candidates = candidates
        self.budget = budget
        super().__init__(
            f"Exact search needs {candidates} candidates, budget is {budget}; "
            f"use local search (--heuristic) or raise --budget"
        )


class DegenerateDistribution(GuessLeakError):
    """p_max = 1, so the open nu interval is empty"""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class NuOutOfRange(GuessLeakError):
    """nu outside the open interval a bound is stated for"""

    def __init__(self, nu: float, upper: float):
        self.nu = nu
        self.upper = upper
        super().__init__(f"nu={nu!r} must lie in the open interval (0, {upper!r})")


class VerificationViolation(GuessLeakError):
    """A checked inequality did not hold"""


class InstanceParseError(GuessLeakError):
    """Instance file is not readable structured text"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class InstanceValidationError(GuessLeakError):
    """Instance file parsed but its content is invalid"""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        self.row = row
        self.column = column
        if row is not None or column is not None:
            locus = ", ".join(
                part for part in (
                    f"row {row}" if row is not None else "",
                    f"column {column}" if column is not None else "",
                ) if part
            )
            message = f"{message} at {locus}"
        super().__init__(message)
