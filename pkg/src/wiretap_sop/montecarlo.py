"""Monte Carlo simulation of the SINR model and SOP estimation.

Fading powers ``|g|^2`` are unit-mean exponentials.  Bob and Eve, and each
interferer towards each of them, get independent draws.

Randomness comes from numpy's Philox counter-based generator.  Trials are
cut into fixed blocks of ``BLOCK`` and block ``k`` always uses key ``seed``
with the top counter word set to ``k``, so the estimate depends only on
``(seed, trials, scenario)`` and not on how blocks are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .results import SopResult
from .scenario import Scenario, SecrecyTarget

BLOCK = 1 << 16
Z95 = 1.96


@dataclass(frozen=True)
class SinrSample:
    gamma_b: float
    gamma_e: float

    def __post_init__(self):
        for v in (self.gamma_b, self.gamma_e):
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"SINR sample must be finite and >= 0, got {v!r}")


@dataclass(frozen=True)
class McEstimate:
    sop_hat: float
    trials: int
    ci_half_width: float
    seed: int

    def to_result(self) -> SopResult:
        return SopResult(self.sop_hat, "monte_carlo", uncertainty=self.ci_half_width)


def ci_half_width(p: float, trials: int) -> float:
    """95% normal-approximation half-width ``1.96 * sqrt(p (1 - p) / n)``."""
    return Z95 * math.sqrt(p * (1.0 - p) / trials)


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Independent Philox stream for trial block ``block``."""
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, block]))


def _gains(s: Scenario):
    sig_b = s.es_lin / s.path_loss_b
    sig_e = s.es_lin / s.path_loss_e
    return sig_b, sig_e, np.asarray(s.interference_means("bob")), np.asarray(s.interference_means("eve"))


def sample_sinr(s: Scenario, n: int, rng: np.random.Generator):
    """Draw ``n`` independent ``(gamma_B, gamma_E)`` pairs as two arrays."""
    m = s.m
    sig_b, sig_e, c_b, c_e = _gains(s)
    w = rng.standard_exponential((n, 2 + 2 * m))
    gb = sig_b * w[:, 0] / (s.n0 + w[:, 1:1 + m] @ c_b)
    ge = sig_e * w[:, 1 + m] / (s.n0 + w[:, 2 + m:] @ c_e)
    return gb, ge


def sample_sinr_pair(s: Scenario, rng: np.random.Generator) -> SinrSample:
    gb, ge = sample_sinr(s, 1, rng)
    return SinrSample(float(gb[0]), float(ge[0]))


def _count_block(s, thr, seed, k, n):
    gb, ge = sample_sinr(s, n, block_generator(seed, k))
    # log2((1+gB)/(1+gE)) <= r  <=>  1 + gB <= 2^r (1 + gE)
    return int(np.count_nonzero(1.0 + gb <= thr * (1.0 + ge)))


def estimate_sop(s: Scenario, t: SecrecyTarget, trials: int, seed: int, workers: int = 1) -> McEstimate:
    """Fraction of simulated trials in secrecy outage, with a 95% CI."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    thr = 2.0**t.r_s
    sizes = [min(BLOCK, trials - k * BLOCK) for k in range(-(-trials // BLOCK))]
    if workers <= 1:
        counts = [_count_block(s, thr, seed, k, n) for k, n in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda kn: _count_block(s, thr, seed, *kn), enumerate(sizes)))
    p = sum(counts) / trials
    return McEstimate(sop_hat=p, trials=trials, ci_half_width=ci_half_width(p, trials), seed=seed)


def empirical_cdf(s: Scenario, side: str, x: float, trials: int, seed: int):
    """Empirical ``Pr(gamma_X <= x)`` and its standard error."""
    gb, ge = sample_sinr(s, trials, block_generator(seed, 0))
    g = gb if side == "bob" else ge
    p = float(np.mean(g <= x))
    return p, math.sqrt(p * (1.0 - p) / trials)
