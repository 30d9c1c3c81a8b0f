"""System description: geometry, powers and the collinear placement helpers.

Powers are stored on a linear scale with the noise PSD normalised to one,
so an ``E/N0`` figure of ``x`` dB becomes ``10**(x/10)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

# Reference placement: (distance to Bob, distance to Eve) per interferer.
DEFAULT_INTERFERER_DISTANCES = ((10.0, 15.0), (20.0, 10.0), (25.0, 5.0))
DEFAULT_D_B = 2.5
DEFAULT_D_E = 25.0


def db_to_lin(x_db: float) -> float:
    if not math.isfinite(x_db):
        raise ValueError(f"dB value must be finite, got {x_db!r}")
    return 10.0 ** (x_db / 10.0)


def lin_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class Interferer:
    esi_lin: float
    d_bi: float
    d_ei: float

    def __post_init__(self):
        _positive("esi_lin", self.esi_lin)
        _positive("d_bi", self.d_bi)
        _positive("d_ei", self.d_ei)


@dataclass(frozen=True)
class SecrecyTarget:
    """Target secrecy rate in bit/s/Hz.  Negative targets are rejected."""

    r_s: float

    def __post_init__(self):
        if not (math.isfinite(self.r_s) and self.r_s >= 0.0):
            raise ValueError(f"r_s must be finite and >= 0, got {self.r_s!r}")


@dataclass(frozen=True)
class Scenario:
    """Alice -> Bob link, Alice -> Eve link and ``M`` co-channel interferers.

    Distances enter the model only through ``1 + d**alpha``.  The order of
    ``interferers`` is preserved everywhere.
    """

    es_lin: float
    alpha: float
    d_b: float
    d_e: float
    interferers: tuple = field(default_factory=tuple)
    n0: float = 1.0

    def __post_init__(self):
        _positive("es_lin", self.es_lin)
        _positive("n0", self.n0)
        _positive("d_b", self.d_b)
        _positive("d_e", self.d_e)
        if not (math.isfinite(self.alpha) and self.alpha >= 0.0):
            raise ValueError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        ints = tuple(self.interferers)
        for it in ints:
            if not isinstance(it, Interferer):
                raise TypeError(f"interferers must be Interferer instances, got {type(it).__name__}")
        object.__setattr__(self, "interferers", ints)

    @property
    def m(self) -> int:
        return len(self.interferers)

    @property
    def path_loss_b(self) -> float:
        return 1.0 + self.d_b**self.alpha

    @property
    def path_loss_e(self) -> float:
        return 1.0 + self.d_e**self.alpha

    @property
    def gamma_tilde_b(self) -> float:
        """Average SNR of the Alice-Bob link without interference."""
        return self.es_lin / (self.path_loss_b * self.n0)

    @property
    def gamma_tilde_e(self) -> float:
        return self.es_lin / (self.path_loss_e * self.n0)

    def interference_means(self, side: str):
        """Mean received energy ``E_si / (1 + d_Xi**alpha)`` of each interferer at ``side``."""
        if side == "bob":
            return [it.esi_lin / (1.0 + it.d_bi**self.alpha) for it in self.interferers]
        if side == "eve":
            return [it.esi_lin / (1.0 + it.d_ei**self.alpha) for it in self.interferers]
        raise ValueError(f"side must be 'bob' or 'eve', got {side!r}")

    @property
    def es_db(self) -> float:
        return lin_to_db(self.es_lin / self.n0)

    def with_powers(self, es_db=None, esi_db=None) -> "Scenario":
        """Copy with new ``E_s/N0`` and/or a common ``E_sI/N0`` (both in dB)."""
        s = self
        if es_db is not None:
            s = replace(s, es_lin=db_to_lin(es_db) * s.n0)
        if esi_db is not None:
            esi = db_to_lin(esi_db) * s.n0
            s = replace(s, interferers=tuple(replace(it, esi_lin=esi) for it in s.interferers))
        return s


def _esi_list(esi_db, m):
    if isinstance(esi_db, (int, float)):
        return [db_to_lin(float(esi_db))] * m
    vals = [db_to_lin(float(v)) for v in esi_db]
    if len(vals) != m:
        raise ValueError(f"got {len(vals)} interferer powers for {m} interferers")
    return vals


def from_db(es_db: float, esi_db, d_b: float, d_e: float,
            interferer_distances: Sequence[tuple], alpha: float) -> Scenario:
    """Build a normalised (``N0 = 1``) scenario from dB-over-``N0`` powers.

    ``esi_db`` is either one value shared by all interferers or one value per
    interferer; ``interferer_distances`` holds ``(d_bi, d_ei)`` pairs.
    """
    es = db_to_lin(es_db)
    dists = [tuple(map(float, p)) for p in interferer_distances]
    esi = _esi_list(esi_db, len(dists))
    ints = tuple(Interferer(e, db, de) for e, (db, de) in zip(esi, dists))
    return Scenario(es_lin=es, alpha=alpha, d_b=d_b, d_e=d_e, interferers=ints, n0=1.0)


def line_scenario(d_b: float, d_e: float, positions: Iterable[float], *,
                  es_db: float = 0.0, esi_db=0.0, alpha: float = 3.0) -> Scenario:
    """Alice at the origin; Bob, Eve and every interferer on the same ray.

    ``positions`` are the interferers' distances from Alice.
    """
    pos = [float(p) for p in positions]
    pairs = [(abs(a - d_b), abs(a - d_e)) for a in pos]
    for k, (db, de) in enumerate(pairs, start=1):
        if db <= 0.0 or de <= 0.0:
            raise ValueError(f"interferer {k} at {pos[k - 1]} m coincides with Bob or Eve")
    return from_db(es_db, esi_db, d_b, d_e, pairs, alpha)


def collinear_positions(m: int, first_interferer_dist: float, step: float):
    if m < 0:
        raise ValueError(f"interferer count must be >= 0, got {m}")
    pos = [first_interferer_dist - k * step for k in range(m)]
    if any(a <= 0.0 for a in pos):
        raise ValueError("interferer placement reaches Alice's position")
    return pos


def collinear_scenario(d_b: float, d_e: float, m: int, first_interferer_dist: float,
                       step: float, **kw) -> Scenario:
    """Interferer ``k`` (1-based) sits at ``first - (k-1)*step`` from Alice."""
    return line_scenario(d_b, d_e, collinear_positions(m, first_interferer_dist, step), **kw)


def default_scenario(es_db: float = 0.0, esi_db=0.0, alpha: float = 3.0) -> Scenario:
    """Reference placement: ``d_B = 2.5``, ``d_E = 25`` and three interferers."""
    return from_db(es_db, esi_db, DEFAULT_D_B, DEFAULT_D_E, DEFAULT_INTERFERER_DISTANCES, alpha)
