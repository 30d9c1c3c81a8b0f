"""Exponential integrals and hypoexponential partial-fraction weights.

All exponential integrals here are evaluated for real positive arguments
(or, for ``Ei``, real negative ones).  The scaled variants ``e^x E_n(x)``
stay O(1/x) for large ``x`` and are what the closed-form engine uses so
that ``e^{LK} Ei(-(L+1)K)`` products never overflow.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061

_MAX_ITER = 2000
_EPS = 1e-17
_FPMIN = 1e-300

# Relative separation below which two means are treated as one pole.
SEPARATION_EPS = 1e-9


class DegenerateCoefficientsError(ValueError):
    """Two exponential means are too close for the partial-fraction form."""

    def __init__(self, pairs):
        self.pairs = list(pairs)
        super().__init__(f"degenerate coefficients: near-equal means at index pairs {self.pairs}")


def _en_series(n: int, x: float) -> float:
    # Unscaled E_n(x), 0 < x <= 1.
    nm1 = n - 1
    ans = (1.0 / nm1) if nm1 != 0 else (-math.log(x) - EULER_GAMMA)
    fact = 1.0
    for i in range(1, _MAX_ITER):
        fact *= -x / i
        if i != nm1:
            delta = -fact / (i - nm1)
        else:
            psi = -EULER_GAMMA + math.fsum(1.0 / k for k in range(1, nm1 + 1))
            delta = fact * (-math.log(x) + psi)
        ans += delta
        if abs(delta) < abs(ans) * _EPS:
            return ans
    raise ArithmeticError(f"E_{n} series did not converge at x={x!r}")


def _en_scaled_cf(n: int, x: float) -> float:
    # e^x E_n(x) by modified Lentz on the continued fraction, x > 1.
    nm1 = n - 1
    b = x + n
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (nm1 + i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"E_{n} continued fraction did not converge at x={x!r}")


def _en_scaled_asymptotic(n: int, x: float) -> float:
    # e^x E_n(x) ~ (1/x) sum_k (-1)^k (n)_k / x^k; only used for x >= 1e6.
    total = 0.0
    term = 1.0 / x
    for k in range(60):
        total += term
        term *= -(n + k) / x
        if abs(term) <= _EPS * abs(total):
            return total
    raise ArithmeticError(f"E_{n} asymptotic series did not converge at x={x!r}")


def expint_en_scaled(n: int, x: float) -> float:
    """Return ``e^x * E_n(x)`` for integer ``n >= 1`` and ``x > 0``."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if not x > 0.0:
        raise ValueError(f"expint_en_scaled requires x > 0, got {x!r}")
    if math.isinf(x):
        return 0.0
    if x >= 1e6 and n < 1000:
        return _en_scaled_asymptotic(n, x)
    if x > 1.0:
        return _en_scaled_cf(n, x)
    return math.exp(x) * _en_series(n, x)


def expint_e1_scaled(x: float) -> float:
    """``e^x E_1(x)`` for ``x > 0``; behaves like ``1/x`` as x grows."""
    if not x > 0.0:
        raise ValueError(f"expint_e1_scaled requires x > 0, got {x!r}")
    return expint_en_scaled(1, x)


def expint_e1(x: float) -> float:
    if not x > 0.0:
        raise ValueError(f"expint_e1 requires x > 0, got {x!r}")
    if x > 1.0:
        return math.exp(-x) * _en_scaled_cf(1, x)
    return _en_series(1, x)


def expint_ei(x: float) -> float:
    """Exponential integral ``Ei(x)`` on the negative half-line.

    Uses ``Ei(x) = -E_1(-x)``.  Nonnegative arguments raise: every call site
    in this package feeds ``-(L+1)K`` with ``L+1 > 0`` and ``K > 0``, so a
    nonnegative value means an invariant broke upstream.
    """
    if not x < 0.0:
        raise ValueError(f"expint_ei is only defined here for x < 0, got {x!r}")
    return -expint_e1(-x)


@dataclass(frozen=True)
class XiCoefficients:
    """Partial-fraction weights of a hypoexponential density.

    ``xi[i]`` pairs with ``means[i]`` so that the density of the sum is
    ``sum_i xi[i] / means[i] * exp(-x / means[i])``.
    """

    xi: tuple
    means: tuple

    def __post_init__(self):
        if len(self.xi) < 1 or len(self.xi) != len(self.means):
            raise ValueError("xi and means must be nonempty and of equal length")

    def __len__(self):
        return len(self.xi)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.xi, dtype=float)

    def pdf(self, x):
        """Density of the weighted exponential sum (support starting at 0)."""
        x = np.asarray(x, dtype=float)
        b = np.asarray(self.means, dtype=float)
        xi = self.as_array()
        out = np.sum(xi / b * np.exp(-x[..., None] / b), axis=-1)
        return np.where(x < 0.0, 0.0, out)


def degenerate_pairs(b: Sequence[float], eps: float = SEPARATION_EPS):
    pairs = []
    for i in range(len(b)):
        for j in range(i + 1, len(b)):
            if abs(b[i] - b[j]) <= eps * max(b[i], b[j]):
                pairs.append((i, j))
    return pairs


def hypoexp_coefficients(b: Sequence[float], eps: float = SEPARATION_EPS) -> XiCoefficients:
    """Weights ``Xi_i = prod_{j != i} b_i / (b_i - b_j)`` for distinct means ``b``.

    The sum of independent exponentials with means ``b_i`` has density
    ``sum_i Xi_i / b_i * exp(-x / b_i)``; the weights are scale-free and
    sum to one.
    """
    b = [float(v) for v in b]
    if not b:
        raise ValueError("at least one mean is required")
    if any(not (v > 0.0 and math.isfinite(v)) for v in b):
        raise ValueError(f"means must be positive and finite, got {b}")
    bad = degenerate_pairs(b, eps)
    if bad:
        raise DegenerateCoefficientsError(bad)
    xi = []
    for i, bi in enumerate(b):
        prod = 1.0
        for j, bj in enumerate(b):
            if j != i:
                prod *= bi / (bi - bj)
        xi.append(prod)
    return XiCoefficients(xi=tuple(xi), means=tuple(b))


def jittered_means(b: Sequence[float], rel: float = 1e-6):
    """Separate (near-)equal means by a deterministic relative jitter.

    The ``k``-th repeat of a value (in list order) is scaled by ``1 + k*rel``.
    Values within ``rel`` of an earlier one count as repeats.  Returns the
    adjusted list and whether anything changed.
    """
    out = [float(v) for v in b]
    changed = False
    for i in range(1, len(out)):
        reps = sum(1 for j in range(i) if abs(b[i] - b[j]) <= rel * max(b[i], b[j]))
        if reps:
            out[i] = out[i] * (1.0 + reps * rel)
            changed = True
    if changed:
        log.warning("near-equal interference means %s; applied relative jitter %g", list(b), rel)
    return out, changed
