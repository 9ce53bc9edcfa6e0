from __future__ import annotations


class FlagForgeError(Exception):
    """Base class for every error the library raises on purpose."""

    exit_code = 1


class ParseError(FlagForgeError, ValueError):
    """Malformed graph/complex/partition input."""

    exit_code = 2


class DomainError(FlagForgeError, ValueError):
    """A precondition of the operation does not hold for this input."""

    exit_code = 3


class BudgetExceeded(FlagForgeError, RuntimeError):
    """An exhaustive search would exceed its configured budget."""

    exit_code = 4

    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what}: {size} exceeds budget {budget}")
        self.what = what
        self.size = size
        self.budget = budget
