"""Result containers and error types shared by the SOP engines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

METHODS = (
    "closed_form",
    "closed_form_with_fallback",
    "quadrature",
    "monte_carlo",
    "baseline_no_interference",
)


@dataclass(frozen=True)
class SopResult:
    """A secrecy outage probability and how it was obtained.

    ``uncertainty`` is the Monte Carlo CI half-width or the quadrature
    tolerance; closed-form values leave it as ``None``.
    """

    value: float
    method: str
    fallback_pairs: tuple = field(default_factory=tuple)
    uncertainty: Optional[float] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"SOP value {self.value!r} outside [0, 1]")

    def __float__(self):
        return float(self.value)


class NumericalBreakdownError(ArithmeticError):
    """A closed-form term came out non-finite or the total left [0, 1]."""

    def __init__(self, msg, pair=None, details=None):
        self.pair = pair
        self.details = details or {}
        extra = f" at pair {pair}" if pair is not None else ""
        super().__init__(f"{msg}{extra} {self.details}" if self.details else f"{msg}{extra}")


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach its tolerance."""

    def __init__(self, msg, estimate=None, error_bound=None):
        self.estimate = estimate
        self.error_bound = error_bound
        super().__init__(f"{msg} (estimate={estimate!r}, error bound={error_bound!r})")


class NoInterferenceError(ValueError):
    """Raised for ``M = 0``; the caller should use the interference-free baseline."""
