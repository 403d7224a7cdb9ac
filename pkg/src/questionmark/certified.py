"""Numeric results paired with a rigorous absolute error bound."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Number = Union[float, complex]


class ToleranceNotReached(RuntimeError):
    """Raised only on request; most routines flag ``converged=False`` instead."""


@dataclass(frozen=True)
class CertifiedValue:
    """``value`` together with ``bound`` >= |value - true value|.

    ``exact`` carries the exact rational when one is known (then ``value`` is
    its nearest float and ``bound`` covers the rounding).
    """

    value: Number
    bound: float
    converged: bool = True
    exact: Optional[Fraction] = None

    def __post_init__(self):
        if not self.bound >= 0.0:
            raise ValueError(f"bound must be non-negative, got {self.bound!r}")

    @property
    def real(self) -> "CertifiedValue":
        return CertifiedValue(complex(self.value).real, self.bound, self.converged)

    @property
    def imag(self) -> "CertifiedValue":
        return CertifiedValue(complex(self.value).imag, self.bound, self.converged)

    def contains(self, x: Number, slack: float = 0.0) -> bool:
        return abs(self.value - x) <= self.bound + slack

    def agrees_with(self, other: "CertifiedValue", slack: float = 0.0) -> bool:
        return abs(self.value - other.value) <= self.bound + other.bound + slack

    def digits(self) -> str:
        """Decimal rendering that does not claim more digits than ``bound`` warrants."""
        import math

        if self.bound == 0.0:
            return repr(self.value)
        sig = max(1, int(-math.floor(math.log10(self.bound))))
        if isinstance(self.value, complex):
            return f"({self.value.real:.{sig}f}{self.value.imag:+.{sig}f}j)"
        return f"{self.value:.{sig}f}"
