"""Evaluation budgets for the higher-type machinery.

The functionals computed in :mod:`metastab.bound` grow enormously; every
evaluation is therefore charged against a fuel budget so that runs terminate
gracefully instead of spinning for geological time.  One unit is charged per
functional application / chain event; rational operations on very large
numerators and denominators are charged extra, proportionally to their size.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_FUEL = 10**9

# rationals below this many bits are considered "small" and cost nothing extra
SIZE_THRESHOLD_BITS = 4096


class FuelExceeded(Exception):
    """Raised when an evaluation runs out of fuel.

    Carries the deepest stage reached so reports can say where the budget went.
    """

    def __init__(self, stage, spent, budget):
        super().__init__(f"fuel exhausted at stage {stage!r} ({spent}/{budget})")
        self.stage = stage
        self.spent = spent
        self.budget = budget


class Fuel:
    """Mutable fuel tank threaded through one bound/realizer invocation."""

    def __init__(self, budget=DEFAULT_FUEL):
        self.budget = int(budget)
        self.spent = 0
        self.stage = "init"

    def enter(self, stage):
        self.stage = stage

    def tick(self, units=1):
        self.spent += units
        if self.spent > self.budget:
            raise FuelExceeded(self.stage, self.spent, self.budget)

    def charge_rational(self, q):
        """Charge for handling a (possibly huge) rational or integer."""
        if isinstance(q, Fraction):
            bits = q.numerator.bit_length() + q.denominator.bit_length()
        else:
            bits = int(q).bit_length()
        extra = bits // SIZE_THRESHOLD_BITS
        self.tick(1 + extra)

    @property
    def remaining(self):
        return self.budget - self.spent
