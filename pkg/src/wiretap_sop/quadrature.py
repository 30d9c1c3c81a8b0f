"""Numerical oracle: SINR distribution functions and the SOP integral.

Everything here is computed by adaptive Gauss-Kronrod quadrature
(QUADPACK through :func:`scipy.integrate.quad`) on a compactified domain.
The SINR laws use the product (MGF) form of the interference average, so
neither the exponential-integral closed forms nor the partial-fraction
weights are touched and the results can be used to check them.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .results import QuadratureError, SopResult
from .scenario import Scenario, SecrecyTarget

SOP_EPSABS = 1e-10
SOP_EPSREL = 1e-10
I_EPSABS = 1e-13
I_EPSREL = 1e-12
LIMIT = 1000


def _side_params(s: Scenario, side: str):
    side = side.lower()
    if side not in ("bob", "eve"):
        raise ValueError(f"side must be 'bob' or 'eve', got {side!r}")
    pl = s.path_loss_b if side == "bob" else s.path_loss_e
    return pl, np.asarray(s.interference_means(side), dtype=float)


# Conditioning on the interferer fades, Pr(gamma_X > x) is the exponential
# signal tail averaged over the interference, i.e. a product of exponential
# MGFs.  The product form stays exact when interferer means coincide.

def _survival(s, pl, means, x):
    # Pr(gamma_X > x); x >= 0, array-valued.
    x = np.asarray(x, dtype=float)
    decay = np.exp(-pl * s.n0 * x / s.es_lin)
    if means.size == 0:
        return decay
    return decay * np.prod(s.es_lin / (s.es_lin + pl * means * x[..., None]), axis=-1)


def cdf_sinr(s: Scenario, side: str, x):
    """CDF of the instantaneous SINR at ``side`` ('bob' or 'eve')."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("SINR CDF is evaluated at x >= 0 only")
    pl, means = _side_params(s, side)
    return 1.0 - _survival(s, pl, means, x)


def _pdf_y(s, pl, means, x):
    # -d/dx of the survival function, written as survival * hazard.
    t = np.asarray(x, dtype=float) - 1.0
    hazard = pl * s.n0 / s.es_lin
    if means.size:
        hazard = hazard + np.sum(pl * means / (s.es_lin + pl * means * t[..., None]), axis=-1)
    return _survival(s, pl, means, t) * hazard


def pdf_y(s: Scenario, x):
    """Density of ``Y = gamma_E + 1`` on ``[1, inf)``, from its explicit form."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 1):
        raise ValueError("density of Y is evaluated at x >= 1 only")
    pl, means = _side_params(s, "eve")
    return _pdf_y(s, pl, means, x)


def _y_scale(s: Scenario) -> float:
    # Typical size of gamma_E: mean signal over mean noise-plus-interference.
    return s.es_lin / s.path_loss_e / (s.n0 + sum(s.interference_means("eve")))


def _quad_unit(f, epsabs, epsrel, what):
    out = integrate.quad(f, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=LIMIT, full_output=1)
    val, err = out[0], out[1]
    if len(out) > 3:
        # ier > 0: subdivision budget exhausted, roundoff, or divergence.
        raise QuadratureError(f"{what}: {out[3]}", estimate=val, error_bound=err)
    return val, err


def _outage_integrands(s: Scenario, t: SecrecyTarget):
    bob = _side_params(s, "bob")
    eve = _side_params(s, "eve")
    thr = 2.0**t.r_s
    scale = _y_scale(s)

    def pieces(u):
        if u >= 1.0:
            return None
        x = 1.0 + scale * u / (1.0 - u)
        jac = scale / (1.0 - u) ** 2
        fy = float(_pdf_y(s, *eve, x)) * jac
        surv_x = float(_survival(s, *bob, thr * x - 1.0))
        return surv_x, fy

    def outage(u):
        p = pieces(u)
        return 0.0 if p is None else (1.0 - p[0]) * p[1]

    def secure(u):
        p = pieces(u)
        return 0.0 if p is None else p[0] * p[1]

    return outage, secure


def sop_quadrature(s: Scenario, t: SecrecyTarget, epsabs: float = SOP_EPSABS) -> SopResult:
    """SOP as ``int_1^inf F_X(2^r x) f_Y(x) dx`` with ``X = gamma_B + 1``.

    The half-line is mapped onto ``[0, 1)`` by ``x = 1 + c*u/(1-u)``, where
    ``c`` is the typical size of ``gamma_E``.
    """
    outage, _ = _outage_integrands(s, t)
    val, err = _quad_unit(outage, epsabs, SOP_EPSREL, "SOP integral")
    if not -1e-9 <= val <= 1.0 + 1e-9:
        raise QuadratureError("SOP integral left [0, 1]", estimate=val, error_bound=err)
    return SopResult(min(max(val, 0.0), 1.0), "quadrature", uncertainty=max(err, epsabs))


def secrecy_probability_quadrature(s: Scenario, t: SecrecyTarget, epsabs: float = SOP_EPSABS) -> float:
    """``Pr(X > 2^r Y)`` integrated on its own; complements :func:`sop_quadrature`."""
    _, secure = _outage_integrands(s, t)
    val, _ = _quad_unit(secure, epsabs, SOP_EPSREL, "secrecy integral")
    return val


def _check_i_args(L_b, L_e, K):
    if not (K > 0 and L_b + 1 > 0 and L_e + 1 > 0):
        raise ValueError(f"need K > 0 and L + 1 > 0, got L_b={L_b}, L_e={L_e}, K={K}")


def _integral_i(L_b, L_e, K, power, reduced):
    _check_i_args(L_b, L_e, K)
    scale = max(1.0, 1.0 / K)
    shift = 1.0 if reduced else 0.0

    def f(u):
        if u >= 1.0:
            return 0.0
        z = scale * u / (1.0 - u)
        y = 1.0 + z
        return math.exp(-K * (y - shift)) / ((L_b + y) * (L_e + y) ** power) * scale / (1.0 - u) ** 2

    val, _ = _quad_unit(f, I_EPSABS, I_EPSREL, "I integral")
    return val


def integral_i1(L_b: float, L_e: float, K: float, reduced: bool = False) -> float:
    """``int_1^inf e^{-Ky} / ((L_b + y)(L_e + y)^2) dy`` by quadrature.

    With ``reduced=True`` the integrand carries ``e^{-K(y-1)}`` instead, i.e.
    the result is multiplied by ``e^K``.
    """
    return _integral_i(L_b, L_e, K, 2, reduced)


def integral_i2(L_b: float, L_e: float, K: float, reduced: bool = False) -> float:
    """``int_1^inf e^{-Ky} / ((L_b + y)(L_e + y)) dy`` by quadrature."""
    return _integral_i(L_b, L_e, K, 1, reduced)
