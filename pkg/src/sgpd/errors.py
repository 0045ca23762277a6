"""Exception taxonomy shared across the package."""

from __future__ import annotations


class SgpdError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(SgpdError, ValueError):
    """Parameters are structurally invalid (bad modulus, non-divisible shapes, ...)."""


class WrongCaseError(ConfigurationError):
    """An augmentation routine was called on the wrong partition-shape regime."""


class FieldMismatchError(SgpdError, ValueError):
    """Operands belong to prime fields with different moduli."""


class NotEnoughResults(SgpdError):
    """Decoding was attempted with fewer results than the recovery threshold."""

    def __init__(self, have: int, need: int):
        self.have = have
        self.need = need
        super().__init__(f"decoding needs {need} worker results, got {have}")


class BudgetExceeded(SgpdError):
    """An exhaustive audit would exceed its enumeration budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"exhaustive enumeration needs {required} evaluations, budget is {budget}"
        )
