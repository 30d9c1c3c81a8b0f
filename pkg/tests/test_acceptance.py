"""Acceptance gate.

Each test checks one criterion at its stated tolerance and prints a single
``PASS``/``FAIL`` line (also collected in the terminal summary).  Run as
``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import io
import itertools
import math
import time

import numpy as np
import pytest
from scipy import integrate

from conftest import ACCEPTANCE_LINES
from oracles import e1_oracle, e1_scaled_oracle
from wiretap_sop import cli
from wiretap_sop.analytic import closed_form_i1, closed_form_i2, sop_closed_form, sop_no_interference
from wiretap_sop.montecarlo import estimate_sop
from wiretap_sop.quadrature import integral_i1, integral_i2, sop_quadrature
from wiretap_sop.scenario import SecrecyTarget, default_scenario, from_db
from wiretap_sop.special import expint_e1_scaled, expint_ei, hypoexp_coefficients
from wiretap_sop.sweep import figure_preset, run_sweep

MC_SEED = 20240611
MC_TRIALS = 1_000_000
GRID = list(itertools.product((10.0, 30.0, 50.0), (0.0, 15.0, 35.0), (0.1, 1.0, 3.0), (2.0, 3.0, 4.0)))


def report(n, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {name} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_1_closed_form_vs_oracles():
    t0 = time.perf_counter()
    worst_q = 0.0
    worst_z = 0.0
    skipped = 0
    for es, esi, r, a in GRID:
        s = default_scenario(es, esi, a)
        t = SecrecyTarget(r)
        c = sop_closed_form(s, t)
        if c.fallback_pairs:
            skipped += 1
        else:
            worst_q = max(worst_q, abs(c.value - sop_quadrature(s, t).value))
        mc = estimate_sop(s, t, MC_TRIALS, MC_SEED, workers=4)
        p = c.value
        # sigma from the larger of the two variances, so p_hat in {0, 1} is not a zero-width interval
        sigma = math.sqrt(max(mc.sop_hat * (1 - mc.sop_hat), p * (1 - p)) / MC_TRIALS)
        z = abs(mc.sop_hat - p) / sigma if sigma > 0 else (0.0 if mc.sop_hat == p else math.inf)
        worst_z = max(worst_z, z)
    elapsed = time.perf_counter() - t0
    report(1, "closed form vs quadrature (1e-6) and Monte Carlo (3 sigma) on 81 points",
           worst_q <= 1e-6 and worst_z <= 3.0 and elapsed < 120.0,
           f"max |cf-quad|={worst_q:.2e}, max |z|={worst_z:.2f}, fallback points={skipped}, {elapsed:.1f}s")


def test_criterion_2_symmetry():
    s = from_db(20.0, 10.0, 4.0, 4.0, [(6.0, 6.0), (9.0, 9.0), (13.0, 13.0)], 3.0)
    t = SecrecyTarget(0.0)
    c = sop_closed_form(s, t).value
    q = sop_quadrature(s, t).value
    mc = estimate_sop(s, t, MC_TRIALS, MC_SEED, workers=4)
    ok = abs(c - 0.5) <= 1e-6 and abs(q - 0.5) <= 1e-8 and abs(mc.sop_hat - 0.5) <= mc.ci_half_width
    report(2, "symmetric scenario gives 0.5", ok,
           f"closed={c:.10f}, quad={q:.12f}, mc={mc.sop_hat:.5f}±{mc.ci_half_width:.5f}")


def test_criterion_3_special_functions():
    xs = np.geomspace(1e-6, 700.0, 1000)
    ei_err = max(abs(expint_ei(-x) / -float(e1_oracle(x)) - 1.0) for x in xs)
    e1_err = max(abs(expint_e1_scaled(x) / float(e1_scaled_oracle(x)) - 1.0) for x in xs)

    rng = np.random.default_rng(MC_SEED)
    sum_err = norm_err = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 9))
        while True:
            b = np.sort(10.0 ** rng.uniform(-2.0, 2.0, m))
            if m == 1 or np.min(np.diff(b) / b[1:]) > 0.05:
                break
        xi = hypoexp_coefficients(b)
        sum_err = max(sum_err, abs(math.fsum(xi.xi) - 1.0))
        pts = list(b[0] * np.geomspace(1.0, 1e3, 12))
        hi = 60.0 * b[-1]
        area = integrate.quad(lambda x: float(xi.pdf(x)), 0.0, hi, points=[p for p in pts if p < hi],
                              limit=500, epsabs=1e-13, epsrel=1e-12)[0]
        area += integrate.quad(lambda x: float(xi.pdf(x)), hi, np.inf, epsabs=1e-14)[0]
        norm_err = max(norm_err, abs(area - 1.0))
    ok = ei_err <= 1e-12 and e1_err <= 1e-12 and sum_err <= 1e-10 and norm_err <= 1e-8
    report(3, "Ei / scaled E1 vs oracle (1e-12 rel) and Xi sum / pdf normalization", ok,
           f"Ei rel={ei_err:.1e}, e^xE1 rel={e1_err:.1e}, |sum Xi-1|={sum_err:.1e}, |int pdf-1|={norm_err:.1e}")


def test_criterion_4_i_integrals():
    rng = np.random.default_rng(MC_SEED + 4)
    worst = 0.0
    n = 0
    while n < 100:
        L_b, L_e = rng.uniform(-0.9, 100.0, 2)
        K = 10.0 ** rng.uniform(-3.0, math.log10(50.0))
        if abs(L_b - L_e) <= 1e-4:
            continue
        worst = max(worst,
                    abs(closed_form_i1(L_b, L_e, K) - integral_i1(L_b, L_e, K)),
                    abs(closed_form_i2(L_b, L_e, K) - integral_i2(L_b, L_e, K)))
        n += 1
    report(4, "I1/I2 closed forms vs quadrature on 100 random triples", worst <= 1e-9, f"max abs err={worst:.1e}")


def _curves(fig):
    out = {}
    for r in run_sweep(figure_preset(fig)):
        out.setdefault(r.curve, []).append(r.sop)
    return {k: np.array(v) for k, v in out.items()}


@pytest.mark.parametrize("fig", ["fig1", "fig2", "fig3", "fig4", "fig5"])
def test_criterion_5_figure_trends(fig):
    t0 = time.perf_counter()
    c = _curves(fig)
    if fig == "fig1":
        ok, what = all(np.all(np.diff(v) <= 1e-12) for v in c.values()), "SOP decreases with E_s/N0"
    elif fig == "fig2":
        ok, what = all(np.all(np.diff(v) >= -1e-12) for v in c.values()), "SOP increases with r_s"
    elif fig == "fig4":
        ok, what = all(np.all(np.diff(v) <= 1e-12) for v in c.values()), "SOP decreases with d_E"
    elif fig == "fig3":
        dips = [k for k, v in c.items() if 0 < v.argmin() < len(v) - 1 and v[-1] > v.min() + 1e-9]
        ok, what = bool(dips), f"dip-then-rise in E_sI/N0 on {len(dips)} curve(s)"
    else:
        es = figure_preset("fig5").axis_values()
        lo, hi = es.index(10.0), es.index(50.0)
        flips = []
        for r in ("0.5", "1"):
            m = [c[f"m_count={k};r_s={r}"] for k in (1, 3, 5)]
            flips.append(m[0][lo] < m[1][lo] < m[2][lo] and m[0][hi] > m[1][hi] > m[2][hi])
        ok, what = all(flips), "more interferers raise SOP at 10 dB and lower it at 50 dB"
    elapsed = time.perf_counter() - t0
    report(5, f"{fig} trend", ok and elapsed < 30.0, f"{what}, {elapsed:.1f}s")


def test_criterion_6_interference_off_limit():
    worst = 0.0
    for es, _, r, a in GRID:
        s = default_scenario(es, -100.0, a)
        t = SecrecyTarget(r)
        base = sop_no_interference(s.gamma_tilde_b, s.gamma_tilde_e, t).value
        worst = max(worst, abs(sop_closed_form(s, t).value - base))
    report(6, "E_sI/N0 = -100 dB matches the no-interference baseline", worst <= 1e-5, f"max abs diff={worst:.1e}")


def _cli_bytes(*args):
    out = io.StringIO()
    code = cli.main(list(args), stdout=out)
    assert code == 0
    return out.getvalue().encode()


def test_criterion_7_determinism():
    a = _cli_bytes("figure", "fig1", "--seed", "42")
    b = _cli_bytes("figure", "fig1", "--seed", "42")
    c = _cli_bytes("figure", "fig1", "--seed", "42", "--threads", "8")
    mc = ("figure", "fig1", "--seed", "42", "--methods", "closed_form", "monte_carlo", "--trials", "20000")
    d = _cli_bytes(*mc)
    e = _cli_bytes(*mc, "--threads", "8")
    ok = a == b == c and d == e
    report(7, "figure fig1 --seed 42 byte-identical across runs and 1 vs 8 threads", ok,
           f"{len(a)} bytes closed form, {len(d)} bytes with Monte Carlo")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
