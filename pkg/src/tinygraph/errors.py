"""Exception types shared across the package."""

from __future__ import annotations


class Graph6Error(ValueError):
    """Malformed graph6 input. ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured work budget.

    ``k`` names the subgraph order at which the budget ran out.
    """

    def __init__(self, k: int, budget: int, detail: str = ""):
        msg = f"budget of {budget} steps exceeded at k={k}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.k = k
        self.budget = budget


class CapacityError(ValueError):
    """Graph is larger than the configured limit for a dense operation."""


class DomainError(ValueError):
    """Parameter outside the domain of a formula."""


class NotEmbeddableError(ValueError):
    """Graph is not an induced subgraph of the proposed universal graph."""
