import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from oracles import e1_oracle, e1_scaled_oracle, exponential_convolution_pdf, partial_fraction_xi
from wiretap_sop.special import (
    DegenerateCoefficientsError,
    expint_e1_scaled,
    expint_ei,
    expint_en_scaled,
    hypoexp_coefficients,
    jittered_means,
)


@pytest.mark.parametrize("x, expected", [(-1.0, -0.21938393439552), (-0.5, -0.55977359477616)])
def test_ei_reference_values(x, expected):
    assert expint_ei(x) == pytest.approx(expected, abs=1e-12)
    assert expint_ei(x) == pytest.approx(-float(e1_oracle(-x)), rel=1e-13)


def test_ei_tail_is_tiny():
    assert abs(expint_ei(-50.0)) < 1e-23


@pytest.mark.parametrize("x", [1e-300, 1e-100, 1e-12, 0.3, 0.99, 1.0, 1.01, 5.0, 37.0, 200.0, 700.0])
def test_ei_relative_accuracy(x):
    ref = -float(e1_oracle(x))
    assert expint_ei(-x) == pytest.approx(ref, rel=1e-13)


def test_e1_scaled_reference_values():
    assert expint_e1_scaled(1.0) == pytest.approx(0.59634736232319, abs=1e-11)
    ref = float(e1_scaled_oracle(1000.0))
    assert expint_e1_scaled(1000.0) == pytest.approx(ref, rel=1e-12)
    # leading asymptotic terms 1/x (1 - 1/x + 2/x^2)
    assert expint_e1_scaled(1000.0) == pytest.approx(1e-3 * (1 - 1e-3 + 2e-6), rel=1e-8)


@pytest.mark.parametrize("x", [1e3, 1e6, 1e12, 1e100, 1e308])
def test_e1_scaled_asymptote(x):
    v = expint_e1_scaled(x)
    assert math.isfinite(v)
    assert x * v == pytest.approx(1.0, rel=2.0 / x + 1e-15)


@pytest.mark.parametrize("bad", [0.0, 1.0, 3.5])
def test_ei_rejects_nonnegative(bad):
    with pytest.raises(ValueError):
        expint_ei(bad)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_e1_scaled_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        expint_e1_scaled(bad)


@pytest.mark.parametrize("n", [2, 3, 5, 12, 40])
@pytest.mark.parametrize("x", [1e-8, 0.2, 1.0, 3.0, 90.0])
def test_en_scaled_matches_mpmath(n, x):
    with mp.workdps(40):
        ref = float(mp.exp(x) * mp.expint(n, x))
    assert expint_en_scaled(n, x) == pytest.approx(ref, rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.01, max_value=100.0))
def test_ei_scaled_identity(x):
    assert expint_ei(-x) == pytest.approx(-expint_e1_scaled(x) * math.exp(-x), rel=1e-12)


def test_xi_single():
    assert hypoexp_coefficients([5.0]).xi == (1.0,)


def test_xi_two_matches_convolution():
    xi = hypoexp_coefficients([2.0, 1.0])
    assert xi.xi == pytest.approx((2.0, -1.0), abs=1e-14)
    for x in [0.05, 0.5, 1.0, 2.0, 5.0, 12.0]:
        assert float(xi.pdf(x)) == pytest.approx(exponential_convolution_pdf(2.0, 1.0, x), abs=1e-10)


def test_xi_three_partial_fractions():
    xi = hypoexp_coefficients([1.0, 2.0, 4.0]).xi
    expected = [float(v) for v in partial_fraction_xi([1, 2, 4])]
    assert expected == pytest.approx([1 / 3, -2.0, 8 / 3])
    assert xi == pytest.approx(expected, rel=1e-14)


def test_xi_degenerate_pair_reports_indices():
    with pytest.raises(DegenerateCoefficientsError) as ei:
        hypoexp_coefficients([1.0, 3.0, 1.0 + 1e-12])
    assert ei.value.pairs == [(0, 2)]


def test_jitter_separates_repeats_deterministically():
    out, changed = jittered_means([2.0, 2.0, 5.0, 2.0])
    assert changed
    assert out == [2.0, 2.0 * (1 + 1e-6), 5.0, 2.0 * (1 + 2e-6)]
    assert jittered_means([2.0, 2.0, 5.0, 2.0])[0] == out
    hypoexp_coefficients(out)  # now admissible


separated_means = st.lists(st.floats(min_value=-3.0, max_value=3.0), min_size=1, max_size=8).map(
    lambda v: [10.0 ** (x + 0.07 * i) for i, x in enumerate(sorted(set(round(y, 1) for y in v)))]
)


@settings(max_examples=100, deadline=None)
@given(separated_means)
def test_xi_sum_to_one(b):
    assert math.fsum(hypoexp_coefficients(b).xi) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(separated_means, st.floats(min_value=1e-3, max_value=1e3))
def test_xi_scale_free(b, c):
    a = hypoexp_coefficients(b).xi
    s = hypoexp_coefficients([c * v for v in b]).xi
    assert s == pytest.approx(a, rel=1e-9, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(separated_means)
def test_hypoexp_pdf_normalised_and_nonnegative(b):
    xi = hypoexp_coefficients(b)
    hi = 60.0 * max(b)
    grid = np.concatenate([np.linspace(0, hi, 400), np.logspace(-6, math.log10(hi), 200) * 1.0])
    assert np.all(xi.pdf(grid) >= -1e-12 * max(1.0, max(1 / v for v in b)))
    pts = sorted({v * k for v in b for k in (1, 4, 16, 64) if v * k < hi})
    total = sum(integrate.quad(lambda x: float(xi.pdf(x)), lo, up, epsabs=1e-12, limit=200)[0]
                for lo, up in zip([0.0] + pts, pts + [hi]))
    total += integrate.quad(lambda x: float(xi.pdf(x)), hi, np.inf)[0]
    assert total == pytest.approx(1.0, abs=1e-8)
