"""Parameter sweeps, figure presets and CSV output."""

from __future__ import annotations

import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import analytic, montecarlo, quadrature
from .config import SCENARIO_KEYS, ConfigError, build_scenario, check_keys
from .scenario import SecrecyTarget

AXES = ("es_db", "r_s", "esi_db", "d_e", "m_count")
SWEEP_METHODS = ("closed_form", "quadrature", "monte_carlo")
CSV_HEADER = "axis,curve,method,sop,uncertainty,fallbacks"
REGRESSION_TOL = 1e-5

# The sixth collinear interferer (10 m from Alice) would sit on Eve.
FIG5_MAX_M = 5


class SweepError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """A base configuration, one varying axis and a list of curves.

    Each curve is a dict of configuration overrides applied on top of
    ``base``; the axis value is applied last.
    """

    base: dict
    axis: str
    start: float
    stop: float
    step: float
    curves: tuple = ({},)
    methods: tuple = ("closed_form",)
    mc_trials: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.step > 0:
            raise ConfigError(f"step must be positive, got {self.step}")
        if self.stop < self.start:
            raise ConfigError("empty axis range")
        if not self.methods or any(m not in SWEEP_METHODS for m in self.methods):
            raise ConfigError(f"methods must be a nonempty subset of {SWEEP_METHODS}")
        if not self.curves:
            raise ConfigError("at least one curve is required")
        for c in self.curves:
            merged = dict(self.base)
            merged.update({k: v for k, v in c.items() if k != "label"})
            merged.setdefault(self.axis, self.start)
            check_keys(merged, SCENARIO_KEYS)
        if self.mc_trials < 1:
            raise ConfigError("mc_trials must be >= 1")
        object.__setattr__(self, "curves", tuple(dict(c) for c in self.curves))
        object.__setattr__(self, "methods", tuple(self.methods))

    def axis_values(self):
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + k * self.step, 12) for k in range(n)]

    def curve_id(self, idx: int) -> str:
        c = self.curves[idx]
        if "label" in c:
            return str(c["label"]).replace(",", ";")
        if not c:
            return "base"
        return ";".join(f"{k}={v:g}" if isinstance(v, (int, float)) else f"{k}={v}" for k, v in c.items())

    def point_params(self, curve_idx: int, value: float) -> dict:
        p = dict(self.base)
        p.update({k: v for k, v in self.curves[curve_idx].items() if k != "label"})
        p[self.axis] = int(round(value)) if self.axis == "m_count" else value
        return p


@dataclass(frozen=True)
class Row:
    axis_value: float
    curve: str
    method: str
    sop: float
    uncertainty: Optional[float] = None
    fallback_count: int = 0


def point_seed(seed: int, point_idx: int, curve_idx: int) -> int:
    """64-bit Monte Carlo seed for one sweep point, fixed by its indices."""
    ss = np.random.SeedSequence([seed, point_idx, curve_idx])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def evaluate_point(params: dict, methods, *, mc_trials=100_000, seed=0,
                   fallback_rel=analytic.FALLBACK_REL, quad_tol=quadrature.SOP_EPSABS, mc_workers=1):
    """All requested SOP results at one configuration (single ``r_s``)."""
    s = build_scenario(params)
    t = SecrecyTarget(float(params.get("r_s", 1.0)))
    out = {}
    for m in methods:
        if m == "closed_form":
            out[m] = analytic.sop_closed_form(s, t, fallback_rel=fallback_rel)
        elif m == "quadrature":
            if s.m == 0:
                out[m] = analytic.sop_no_interference(s.gamma_tilde_b, s.gamma_tilde_e, t)
            else:
                out[m] = quadrature.sop_quadrature(s, t, epsabs=quad_tol)
        elif m == "monte_carlo":
            out[m] = montecarlo.estimate_sop(s, t, mc_trials, seed, workers=mc_workers).to_result()
        else:
            raise ConfigError(f"unknown method {m!r}")
    return out


def run_sweep(spec: SweepSpec, workers: int = 1, fallback_rel=analytic.FALLBACK_REL,
              quad_tol=quadrature.SOP_EPSABS):
    """Evaluate every (axis point, curve, method); rows come back in axis order."""
    values = spec.axis_values()
    jobs = list(itertools.product(range(len(values)), range(len(spec.curves))))

    def run(job):
        pi, ci = job
        params = spec.point_params(ci, values[pi])
        try:
            res = evaluate_point(params, spec.methods, mc_trials=spec.mc_trials,
                                 seed=point_seed(spec.seed, pi, ci),
                                 fallback_rel=fallback_rel, quad_tol=quad_tol)
        except Exception as e:
            raise SweepError(f"{spec.axis}={values[pi]:g}, curve {spec.curve_id(ci)!r}: {e}") from e
        return [Row(values[pi], spec.curve_id(ci), m, r.value, r.uncertainty, len(r.fallback_pairs))
                for m, r in res.items()]

    if workers <= 1:
        chunks = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run, jobs))
    return [row for chunk in chunks for row in chunk]


@dataclass(frozen=True)
class Discrepancy:
    axis_value: float
    curve: str
    max_pairwise: float
    closed_vs_quadrature: Optional[float]


def discrepancies(rows):
    """Largest pairwise method disagreement per (axis point, curve)."""
    groups = {}
    for r in rows:
        groups.setdefault((r.axis_value, r.curve), {})[r.method] = r.sop
    out = []
    for (x, c), by in groups.items():
        if len(by) < 2:
            continue
        vals = list(by.values())
        mx = max(abs(a - b) for a, b in itertools.combinations(vals, 2))
        cq = abs(by["closed_form"] - by["quadrature"]) if {"closed_form", "quadrature"} <= by.keys() else None
        out.append(Discrepancy(x, c, mx, cq))
    return out


def has_regression(rows, tol=REGRESSION_TOL) -> bool:
    return any(d.closed_vs_quadrature is not None and d.closed_vs_quadrature > tol
               for d in discrepancies(rows))


def _fmt(v) -> str:
    return "" if v is None else format(float(v), ".12g")


def format_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in rows:
        buf.write(f"{_fmt(r.axis_value)},{r.curve},{r.method},{_fmt(r.sop)},{_fmt(r.uncertainty)},{r.fallback_count}\n")
    return buf.getvalue()


def emit_csv(rows, destination) -> None:
    """Write rows as CSV to a path or an open text stream."""
    if not rows:
        raise ValueError("nothing to write: empty table")
    text = format_csv(rows)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(f"cannot write CSV to {path}: {e}") from e


def format_discrepancies(rows) -> str:
    lines = ["axis,curve,max_discrepancy,closed_vs_quadrature"]
    for d in discrepancies(rows):
        lines.append(f"{_fmt(d.axis_value)},{d.curve},{_fmt(d.max_pairwise)},{_fmt(d.closed_vs_quadrature)}")
    return "\n".join(lines) + "\n"


def format_gnuplot(rows) -> str:
    """One whitespace-separated block per (curve, method), blocks split by two blank lines."""
    blocks = {}
    for r in rows:
        blocks.setdefault((r.curve, r.method), []).append(r)
    parts = []
    for (curve, method), rs in blocks.items():
        lines = [f"# curve {curve} method {method}"]
        lines += [f"{_fmt(r.axis_value)} {_fmt(r.sop)} {_fmt(r.uncertainty) or 0}" for r in rs]
        parts.append("\n".join(lines))
    return "\n\n\n".join(parts) + "\n"


def _grid(**lists):
    keys = list(lists)
    return tuple(dict(zip(keys, combo)) for combo in itertools.product(*lists.values()))


FIG4_POSITIONS = (30.0, 35.0, 40.0)


def figure_preset(fig_id: str, curves=None, methods=("closed_form",), mc_trials=100_000, seed=0) -> SweepSpec:
    """Sweep reproducing one of the five published figures.

    Curve parameter lists that the figures do not pin down are defaults and
    can be replaced through ``curves``.
    """
    presets = {
        # SOP vs E_s/N0, curves over r_s and E_sI/N0.
        "fig1": (dict(alpha=3.0), "es_db", (0.0, 50.0, 2.0),
                 _grid(r_s=[0.5, 1.0, 2.0], esi_db=[15.0, 35.0])),
        # SOP vs r_s, curves over alpha and E_s/N0.
        "fig2": (dict(esi_db=15.0), "r_s", (0.0, 5.0, 0.25),
                 _grid(alpha=[2.0, 3.0, 4.0], es_db=[20.0, 30.0, 40.0])),
        # SOP vs E_sI/N0, curves over r_s and E_s/N0.
        "fig3": (dict(alpha=3.0), "esi_db", (-10.0, 60.0, 2.0),
                 _grid(r_s=[0.5, 1.0, 3.0], es_db=[30.0, 40.0])),
        # SOP vs d_E with Eve walking towards the interferers.
        "fig4": (dict(alpha=3.0, esi_db=35.0, d_b=2.5, d_e=1.0, positions=list(FIG4_POSITIONS)),
                 "d_e", (1.0, 20.0, 1.0), _grid(r_s=[0.5, 1.0, 2.0], es_db=[30.0, 40.0])),
        # SOP vs E_s/N0, curves over the number of collinear interferers.
        "fig5": (dict(alpha=3.0, esi_db=25.0, d_b=1.0, d_e=10.0,
                      collinear=dict(m=1, first=15.0, step=1.0)),
                 "es_db", (0.0, 50.0, 2.0), _grid(m_count=[1, 3, 5], r_s=[0.5, 1.0])),
    }
    if fig_id not in presets:
        raise ConfigError(f"unknown figure {fig_id!r}; choose from {sorted(presets)}")
    base, axis, (start, stop, step), default_curves = presets[fig_id]
    return SweepSpec(base=base, axis=axis, start=start, stop=stop, step=step,
                     curves=tuple(curves) if curves else default_curves,
                     methods=tuple(methods), mc_trials=mc_trials, seed=seed)


SPEC_KEYS = frozenset({"axis", "curves", "methods", "mc_trials", "seed", "preset"})


def spec_from_mapping(data: dict) -> SweepSpec:
    """Sweep spec from a parsed sweep file.

    ``axis`` is ``{name, start, stop, step}``; everything outside
    ``SPEC_KEYS`` is the base scenario configuration.  A ``preset`` key
    starts from a figure preset and lets the file override its curves and
    methods.
    """
    data = dict(data)
    extra = {k: data.pop(k) for k in list(data) if k in SPEC_KEYS}
    methods = tuple(extra.get("methods", ("closed_form",)))
    mc_trials = int(extra.get("mc_trials", 100_000))
    seed = int(extra.get("seed", 0))
    curves = extra.get("curves")
    if "preset" in extra:
        if data or "axis" in extra:
            raise ConfigError("a preset sweep file may only set curves, methods, mc_trials and seed")
        return figure_preset(extra["preset"], curves=curves, methods=methods, mc_trials=mc_trials, seed=seed)
    axis = extra.get("axis")
    if not isinstance(axis, dict) or set(axis) != {"name", "start", "stop", "step"}:
        raise ConfigError("axis must be a mapping with keys name, start, stop, step")
    return SweepSpec(base=data, axis=axis["name"], start=float(axis["start"]), stop=float(axis["stop"]),
                     step=float(axis["step"]), curves=tuple(curves) if curves else ({},),
                     methods=methods, mc_trials=mc_trials, seed=seed)
