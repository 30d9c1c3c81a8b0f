"""Secrecy outage probability of a Rayleigh wiretap link with co-channel interferers.

Three independent routes to the same number:

* :func:`sop_closed_form` -- exponential-integral closed form,
* :func:`sop_quadrature` -- adaptive quadrature of the outage integral,
* :func:`estimate_sop` -- seeded Monte Carlo simulation of the SINRs.
"""

from .analytic import ClosedFormTerms, build_terms, sop_closed_form, sop_no_interference
from .montecarlo import McEstimate, SinrSample, estimate_sop, sample_sinr, sample_sinr_pair
from .quadrature import cdf_sinr, integral_i1, integral_i2, pdf_y, sop_quadrature
from .results import NoInterferenceError, NumericalBreakdownError, QuadratureError, SopResult
from .scenario import (
    Interferer,
    Scenario,
    SecrecyTarget,
    collinear_scenario,
    default_scenario,
    from_db,
    line_scenario,
)
from .special import XiCoefficients, expint_e1_scaled, expint_ei, hypoexp_coefficients
from .sweep import SweepSpec, emit_csv, figure_preset, run_sweep

__all__ = [
    "ClosedFormTerms", "Interferer", "McEstimate", "NoInterferenceError", "NumericalBreakdownError",
    "QuadratureError", "Scenario", "SecrecyTarget", "SinrSample", "SopResult", "SweepSpec",
    "XiCoefficients", "build_terms", "cdf_sinr", "collinear_scenario", "default_scenario", "emit_csv",
    "estimate_sop", "expint_e1_scaled", "expint_ei", "figure_preset", "from_db", "hypoexp_coefficients",
    "integral_i1", "integral_i2", "line_scenario", "pdf_y", "run_sweep", "sample_sinr",
    "sample_sinr_pair", "sop_closed_form", "sop_no_interference", "sop_quadrature",
]
