"""Scenario configuration files.

A configuration is a YAML (or JSON) mapping.  Recognised keys::

    es_db:      Alice's E_s/N0 in dB
    esi_db:     interferer E_sI/N0 in dB; a number shared by all
                interferers or a list with one value per interferer
    alpha:      path-loss exponent
    n0_mode:    only "normalized" (N0 = 1) is supported
    d_b, d_e:   Alice-Bob and Alice-Eve distances
    r_s:        target secrecy rate(s) in bit/s/Hz, a number or a list

and exactly one interferer geometry::

    interferers: [[d_b1, d_e1], [d_b2, d_e2], ...]   explicit distance pairs
    positions:   [a_1, a_2, ...]                      distances from Alice on
                                                      the Alice-Bob-Eve ray
    collinear:   {m: 3, first: 15, step: 1}           a_k = first - (k-1)*step

Omitting every geometry key selects the three-interferer reference
placement (d_b = 2.5, d_e = 25).  ``m_count`` overrides ``collinear.m``.
Sweep files add ``axis``, ``curves``, ``methods``, ``mc_trials`` and
``seed`` (see :mod:`wiretap_sop.sweep`).  Unknown keys are rejected.
"""

from __future__ import annotations

import math
from pathlib import Path

import yaml

from .scenario import (
    DEFAULT_D_B,
    DEFAULT_D_E,
    DEFAULT_INTERFERER_DISTANCES,
    Scenario,
    SecrecyTarget,
    collinear_positions,
    from_db,
    line_scenario,
)

SCENARIO_KEYS = frozenset({
    "es_db", "esi_db", "alpha", "n0_mode", "d_b", "d_e", "r_s",
    "interferers", "positions", "collinear", "m_count",
})
GEOMETRY_KEYS = ("interferers", "positions", "collinear")
COLLINEAR_KEYS = frozenset({"m", "first", "step"})

DEFAULTS = {"es_db": 30.0, "esi_db": 15.0, "alpha": 3.0, "r_s": 1.0}


class ConfigError(ValueError):
    pass


def _number(key, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{key!r} must be a finite number, got {v!r}")
    return float(v)


def check_keys(params: dict, allowed=SCENARIO_KEYS):
    unknown = sorted(set(params) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    geo = [k for k in GEOMETRY_KEYS if k in params]
    if len(geo) > 1:
        raise ConfigError(f"choose one interferer geometry, got {geo}")
    if params.get("n0_mode", "normalized") != "normalized":
        raise ConfigError(f"n0_mode must be 'normalized', got {params['n0_mode']!r}")
    if "collinear" in params:
        col = params["collinear"]
        if not isinstance(col, dict) or set(col) != COLLINEAR_KEYS:
            raise ConfigError(f"collinear needs exactly the keys {sorted(COLLINEAR_KEYS)}")
    if "m_count" in params and "collinear" not in params:
        raise ConfigError("m_count only applies to a collinear geometry")


def r_s_values(params: dict):
    r = params.get("r_s", DEFAULTS["r_s"])
    vals = r if isinstance(r, (list, tuple)) else [r]
    return [SecrecyTarget(_number("r_s", v)) for v in vals]


def build_scenario(params: dict) -> Scenario:
    """Scenario described by ``params`` (missing keys take ``DEFAULTS``)."""
    check_keys(params)
    es_db = _number("es_db", params.get("es_db", DEFAULTS["es_db"]))
    alpha = _number("alpha", params.get("alpha", DEFAULTS["alpha"]))
    esi = params.get("esi_db", DEFAULTS["esi_db"])
    esi = [_number("esi_db", v) for v in esi] if isinstance(esi, (list, tuple)) else _number("esi_db", esi)
    try:
        if "collinear" in params:
            col = params["collinear"]
            m = int(params.get("m_count", col["m"]))
            pos = collinear_positions(m, _number("first", col["first"]), _number("step", col["step"]))
            return line_scenario(_number("d_b", params["d_b"]), _number("d_e", params["d_e"]), pos,
                                 es_db=es_db, esi_db=esi, alpha=alpha)
        if "positions" in params:
            return line_scenario(_number("d_b", params["d_b"]), _number("d_e", params["d_e"]),
                                 [_number("positions", a) for a in params["positions"]],
                                 es_db=es_db, esi_db=esi, alpha=alpha)
        pairs = params.get("interferers", DEFAULT_INTERFERER_DISTANCES)
        d_b = _number("d_b", params.get("d_b", DEFAULT_D_B))
        d_e = _number("d_e", params.get("d_e", DEFAULT_D_E))
        return from_db(es_db, esi, d_b, d_e, pairs, alpha)
    except KeyError as e:
        raise ConfigError(f"missing key {e.args[0]!r} for this geometry") from None


def load_config(path) -> dict:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data
