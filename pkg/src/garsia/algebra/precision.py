"""Working-precision policy for numeric evaluation and certification."""

from __future__ import annotations

from dataclasses import dataclass

# ~3.33 bits per decimal digit, rounded up.
BITS_PER_DIGIT = 3.4


@dataclass(frozen=True)
class PrecisionContext:
    """How hard numeric refinement is allowed to try before giving up.

    ``decimal_digits`` is the target precision for evaluation and reporting;
    ``max_escalations`` bounds how many times a failing certification may
    double its working precision before returning indeterminate.
    """

    decimal_digits: int = 50
    max_escalations: int = 4

    def __post_init__(self) -> None:
        if self.decimal_digits < 15:
            raise ValueError("decimal_digits must be >= 15")
        if self.max_escalations < 0:
            raise ValueError("max_escalations must be >= 0")

    @property
    def bits(self) -> int:
        return int(self.decimal_digits * BITS_PER_DIGIT) + 8

    def escalation_bits(self) -> list[int]:
        """Working precisions to try, in order: p, 2p, 4p, ..."""
        return [self.bits << k for k in range(self.max_escalations + 1)]

    @property
    def max_bisections(self) -> int:
        """Hard cap on interval halvings in exact sign refinement loops."""
        return max(2048, self.bits << self.max_escalations)


DEFAULT_PRECISION = PrecisionContext()
