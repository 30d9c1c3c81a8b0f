"""Closed-form secrecy outage probability with co-channel interference.

For ``M >= 1`` interferers the SOP is

    P_o = 1 - E_s N0 / (2^r (1 + d_B^a)) * e^{1/g_B + 1/g_E}
              * sum_ij Xi_B(i) Xi_E(j) / (b_Bi b_Ej) * (g_E I1(i, j) + I2(i, j))

where ``g_X`` is the interference-free average SNR, ``b_Xi`` the mean
interference energy of interferer ``i`` at ``X`` and

    I1 = int_1^inf e^{-Ky} / ((L_Bi + y)(L_Ej + y)^2) dy
    I2 = int_1^inf e^{-Ky} / ((L_Bi + y)(L_Ej + y)) dy

with ``K = 2^r/g_B + 1/g_E``.  Both integrals reduce to exponential
integrals through partial fractions.  Every term of I1 and I2 carries a
common ``e^{-K}``; it is folded into the prefactor so that the only
exponential left is ``e^{(1 - 2^r)/g_B} <= 1``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from . import quadrature
from .results import NoInterferenceError, NumericalBreakdownError, SopResult
from .scenario import Scenario, SecrecyTarget
from .special import XiCoefficients, expint_en_scaled, hypoexp_coefficients, jittered_means

log = logging.getLogger(__name__)

# |L_Bi - L_Ej| below FALLBACK_REL * max(1, |L_Bi|) sends the pair to quadrature.
FALLBACK_REL = 1e-7
# Below this |L_Bi - L_Ej| / (1 + L_Ej) the partial-fraction difference cancels
# badly and the integrals are summed as a power series in the gap instead.
SERIES_RATIO = 0.25
_SERIES_MAX_TERMS = 80
RANGE_BAND = 1e-9
# sum|Xi_B| * sum|Xi_E| above this means the weighted sum cancels too much
# (near-equal interferer means); the whole SOP is then integrated numerically.
XI_COND_MAX = 1e6


@dataclass(frozen=True)
class ClosedFormTerms:
    gamma_tilde_b: float
    gamma_tilde_e: float
    k_const: float
    b_b: tuple
    b_e: tuple
    l_b: tuple
    l_e: tuple
    xi_b: XiCoefficients
    xi_e: XiCoefficients
    r_s: float

    def __post_init__(self):
        m = len(self.b_b)
        if not all(len(v) == m for v in (self.b_e, self.l_b, self.l_e, self.xi_b.xi, self.xi_e.xi)):
            raise ValueError("term lists must all have length M")
        if not self.k_const > 0:
            raise NumericalBreakdownError("K must be positive", details={"K": self.k_const})
        for name, ls in (("L_B", self.l_b), ("L_E", self.l_e)):
            for i, v in enumerate(ls):
                if not v + 1.0 > 0.0:
                    raise NumericalBreakdownError(f"{name} + 1 must be positive", details={"i": i, name: v})

    @property
    def m(self) -> int:
        return len(self.b_b)


def build_terms(s: Scenario, t: SecrecyTarget) -> ClosedFormTerms:
    if s.m == 0:
        raise NoInterferenceError("no interferers; use sop_no_interference")
    thr = 2.0**t.r_s
    g_b, g_e = s.gamma_tilde_b, s.gamma_tilde_e
    pl_b, pl_e = s.path_loss_b, s.path_loss_e
    b_b, _ = jittered_means(s.interference_means("bob"))
    b_e, _ = jittered_means(s.interference_means("eve"))
    l_b = tuple((s.es_lin - pl_b * b) / (pl_b * thr * b) for b in b_b)
    l_e = tuple((s.es_lin - pl_e * b) / (pl_e * b) for b in b_e)
    return ClosedFormTerms(
        gamma_tilde_b=g_b,
        gamma_tilde_e=g_e,
        k_const=thr / g_b + 1.0 / g_e,
        b_b=tuple(b_b),
        b_e=tuple(b_e),
        l_b=l_b,
        l_e=l_e,
        xi_b=hypoexp_coefficients(b_b),
        xi_e=hypoexp_coefficients(b_e),
        r_s=t.r_s,
    )


def _moment(m: int, L: float, K: float) -> float:
    # int_1^inf e^{-K(y-1)} (y + L)^{-m} dy = (1+L)^{1-m} e^x E_m(x), x = (1+L)K
    x = (1.0 + L) * K
    return (1.0 + L) ** (1 - m) * expint_en_scaled(m, x)


def reduced_integrals(L_b: float, L_e: float, K: float):
    """``(e^K I1, e^K I2)`` in closed form.

    Partial fractions in ``D = L_e - L_b`` give

        e^K I2 = (j_B - j_E) / D
        e^K I1 = (e^K I2 - h_E) / D

    with ``j_X = e^{(1+L_X)K} E1((1+L_X)K)`` and ``h_E = e^{x} E2(x) / (1+L_e)``,
    ``x = (1+L_e)K``.  When ``|D|`` is small against ``1 + L_e`` both are
    summed as ``sum_k D^k * moment(k+p)`` instead.
    """
    if not (K > 0.0 and L_b + 1.0 > 0.0 and L_e + 1.0 > 0.0):
        raise NumericalBreakdownError("Ei argument would be nonnegative",
                                      details={"L_b": L_b, "L_e": L_e, "K": K})
    d = L_e - L_b
    if abs(d) < SERIES_RATIO * (1.0 + L_e):
        # D^k (1+L_e)^{1-m} e^x E_m(x) written via rho = D / (1+L_e).
        x = (1.0 + L_e) * K
        rho = d / (1.0 + L_e)
        i1 = i2 = 0.0
        for k in range(_SERIES_MAX_TERMS):
            rk = rho**k
            t2 = rk * expint_en_scaled(k + 2, x) / (1.0 + L_e)
            t1 = rk * expint_en_scaled(k + 3, x) / (1.0 + L_e) ** 2
            i2 += t2
            i1 += t1
            if abs(t1) <= 1e-17 * abs(i1) and abs(t2) <= 1e-17 * abs(i2):
                break
        return i1, i2
    j_b = expint_en_scaled(1, (1.0 + L_b) * K)
    j_e = expint_en_scaled(1, (1.0 + L_e) * K)
    h_e = _moment(2, L_e, K)
    i2 = (j_b - j_e) / d
    i1 = (i2 - h_e) / d
    return i1, i2


def closed_form_i1(L_b: float, L_e: float, K: float) -> float:
    """``int_1^inf e^{-Ky} / ((L_b + y)(L_e + y)^2) dy`` via exponential integrals."""
    return math.exp(-K) * reduced_integrals(L_b, L_e, K)[0]


def closed_form_i2(L_b: float, L_e: float, K: float) -> float:
    """``int_1^inf e^{-Ky} / ((L_b + y)(L_e + y)) dy`` via exponential integrals."""
    return math.exp(-K) * reduced_integrals(L_b, L_e, K)[1]


def _needs_fallback(L_b, L_e, tol):
    return abs(L_b - L_e) < tol * max(1.0, abs(L_b))


def sop_closed_form(s: Scenario, t: SecrecyTarget, fallback_rel: float = FALLBACK_REL) -> SopResult:
    """Evaluate the closed-form SOP.

    Pairs ``(i, j)`` with ``L_Bi`` and ``L_Ej`` closer than ``fallback_rel``
    are integrated numerically and reported in ``fallback_pairs``.  If the
    partial-fraction weights are ill-conditioned every pair is reported and
    the SOP comes from quadrature.  With no interferers the
    interference-free baseline is returned.
    """
    if s.m == 0:
        return sop_no_interference(s.gamma_tilde_b, s.gamma_tilde_e, t)
    terms = build_terms(s, t)
    all_pairs = tuple((i, j) for i in range(terms.m) for j in range(terms.m))
    cond = sum(map(abs, terms.xi_b.xi)) * sum(map(abs, terms.xi_e.xi))
    if cond > XI_COND_MAX:
        log.warning("partial-fraction weights ill-conditioned (%.3g); using quadrature", cond)
        q = quadrature.sop_quadrature(s, t)
        return SopResult(q.value, "closed_form_with_fallback", fallback_pairs=all_pairs, uncertainty=q.uncertainty)
    thr = 2.0**t.r_s
    K = terms.k_const
    g_e = terms.gamma_tilde_e
    # e^{1/g_B + 1/g_E} * e^{-K}
    fused = math.exp((1.0 - thr) / terms.gamma_tilde_b)
    prefactor = s.es_lin * s.n0 / (thr * s.path_loss_b)

    parts = []
    fallback = []
    for i, (xb, bb, lb) in enumerate(zip(terms.xi_b.xi, terms.b_b, terms.l_b)):
        for j, (xe, be, le) in enumerate(zip(terms.xi_e.xi, terms.b_e, terms.l_e)):
            if _needs_fallback(lb, le, fallback_rel):
                i1 = quadrature.integral_i1(lb, le, K, reduced=True)
                i2 = quadrature.integral_i2(lb, le, K, reduced=True)
                fallback.append((i, j))
            else:
                i1, i2 = reduced_integrals(lb, le, K)
            term = xb * xe / (bb * be) * (g_e * i1 + i2)
            if not math.isfinite(term):
                raise NumericalBreakdownError("non-finite term", pair=(i, j),
                                              details={"L_B": lb, "L_E": le, "K": K, "I1": i1, "I2": i2})
            parts.append(term)

    raw = 1.0 - prefactor * fused * math.fsum(parts)
    if not (math.isfinite(raw) and -RANGE_BAND <= raw <= 1.0 + RANGE_BAND):
        raise NumericalBreakdownError("closed-form SOP outside [0, 1]",
                                      details={"raw": raw, "K": K, "exponent": (1.0 - thr) / terms.gamma_tilde_b})
    method = "closed_form_with_fallback" if fallback else "closed_form"
    return SopResult(min(max(raw, 0.0), 1.0), method, fallback_pairs=tuple(fallback))


def sop_no_interference(gamma_tilde_b: float, gamma_tilde_e: float, t: SecrecyTarget) -> SopResult:
    """Classical Rayleigh wiretap SOP without interference.

    ``1 - g_B / (g_B + 2^r g_E) * exp(-(2^r - 1) / g_B)``.
    """
    if not (gamma_tilde_b > 0 and gamma_tilde_e >= 0):
        raise ValueError("average SNRs must be positive")
    thr = 2.0**t.r_s
    val = 1.0 - gamma_tilde_b / (gamma_tilde_b + thr * gamma_tilde_e) * math.exp(-(thr - 1.0) / gamma_tilde_b)
    return SopResult(min(max(val, 0.0), 1.0), "baseline_no_interference")

