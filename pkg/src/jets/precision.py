"""
Working precision for jet and series arithmetic.
"""

from dataclasses import dataclass
from typing import Optional

import mpmath

from src import config

MIN_DIGITS = 30
GUARD_DIGITS = 10


@dataclass(frozen=True)
class Precision:
    """Target number of significant decimal digits (>= 30)."""

    decimal_digits: int = MIN_DIGITS

    def __post_init__(self):
        if self.decimal_digits < MIN_DIGITS:
            raise ValueError(
                f"Precision must be at least {MIN_DIGITS} digits, got {self.decimal_digits}"
            )

    @property
    def working_dps(self) -> int:
        return self.decimal_digits + GUARD_DIGITS

    @property
    def epsilon(self):
        return mpmath.mpf(10) ** (-self.decimal_digits)

    def context(self):
        """Context manager that sets mpmath's working precision."""
        return mpmath.workdps(self.working_dps)

    @classmethod
    def default(cls) -> "Precision":
        return cls(max(MIN_DIGITS, config.PRECISION_DIGITS))


def resolve(prec: Optional[Precision]) -> Precision:
    return prec if prec is not None else Precision.default()
