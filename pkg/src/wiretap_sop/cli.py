"""Command-line entry point: ``wiretap-sop {eval,sweep,figure,validate}``.

Exit codes: 0 on success, 1 on error, 2 when closed form and quadrature
disagree by more than the regression tolerance.
"""

from __future__ import annotations

import argparse
import itertools
import logging
import sys
from pathlib import Path

from . import analytic, quadrature
from .config import ConfigError, load_config, r_s_values
from .sweep import (
    REGRESSION_TOL,
    SWEEP_METHODS,
    Row,
    SweepSpec,
    discrepancies,
    emit_csv,
    evaluate_point,
    figure_preset,
    format_discrepancies,
    format_gnuplot,
    has_regression,
    run_sweep,
    spec_from_mapping,
)

log = logging.getLogger("wiretap_sop")

EXIT_OK, EXIT_ERROR, EXIT_REGRESSION = 0, 1, 2

# Validation grid: E_s/N0, E_sI/N0 (dB), r_s, alpha over the reference placement.
VALIDATE_GRID = dict(es_db=(10.0, 30.0, 50.0), esi_db=(0.0, 15.0, 35.0),
                     r_s=(0.1, 1.0, 3.0), alpha=(2.0, 3.0, 4.0))


def _parse_curve(text):
    out = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"curve entries look like key=value, got {item!r}")
        key = key.strip()
        out[key] = val.strip() if key == "label" else float(val)
    if "m_count" in out:
        out["m_count"] = int(out["m_count"])
    return out


def _common(p):
    p.add_argument("-o", "--output", help="CSV destination (default: stdout)")
    p.add_argument("--methods", nargs="+", choices=SWEEP_METHODS, default=None,
                   help="SOP engines to run")
    p.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    p.add_argument("--trials", type=int, default=100_000, help="Monte Carlo trials per point")
    p.add_argument("--threads", type=int, default=1, help="worker threads; output does not depend on it")
    p.add_argument("--fallback-rel", type=float, default=analytic.FALLBACK_REL,
                   help="relative |L_B - L_E| gap below which a pair is integrated numerically")
    p.add_argument("--quad-tol", type=float, default=quadrature.SOP_EPSABS,
                   help="absolute tolerance of the SOP quadrature")
    p.add_argument("--tolerance", type=float, default=REGRESSION_TOL,
                   help="closed form vs quadrature regression threshold")


def build_parser():
    parser = argparse.ArgumentParser(prog="wiretap-sop",
                                     description="Secrecy outage probability under co-channel interference.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one scenario")
    p.add_argument("config", nargs="?", help="scenario configuration file (YAML/JSON)")
    p.add_argument("--es-db", type=float)
    p.add_argument("--esi-db", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--r-s", type=float, nargs="+")
    _common(p)

    p = sub.add_parser("sweep", help="run a sweep file or a figure preset")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("spec", nargs="?", help="sweep file (YAML/JSON)")
    g.add_argument("--preset", choices=[f"fig{k}" for k in range(1, 6)])
    p.add_argument("--gnuplot", help="also write a gnuplot data file")
    _common(p)

    p = sub.add_parser("figure", help="reproduce one published figure")
    p.add_argument("fig_id", choices=[f"fig{k}" for k in range(1, 6)])
    p.add_argument("--curve", action="append", type=_parse_curve,
                   help="override the curve list; repeat, e.g. --curve r_s=1,esi_db=20")
    p.add_argument("--gnuplot", help="also write a gnuplot data file")
    _common(p)

    p = sub.add_parser("validate", help="cross-check the engines over the validation grid")
    _common(p)
    return parser


def _write(rows, args, stdout):
    if args.output:
        emit_csv(rows, args.output)
    else:
        emit_csv(rows, stdout)
    if getattr(args, "gnuplot", None):
        Path(args.gnuplot).write_text(format_gnuplot(rows))
    if len({r.method for r in rows}) >= 2:
        if args.output:
            Path(str(args.output) + ".discrepancy.csv").write_text(format_discrepancies(rows))
        worst = max((d.max_pairwise for d in discrepancies(rows)), default=0.0)
        log.info("max pairwise discrepancy %.3g", worst)


def _finish(rows, args, stdout):
    _write(rows, args, stdout)
    if has_regression(rows, args.tolerance):
        bad = [d for d in discrepancies(rows)
               if d.closed_vs_quadrature is not None and d.closed_vs_quadrature > args.tolerance]
        for d in bad:
            print(f"regression: axis={d.axis_value:g} curve={d.curve} "
                  f"|closed-quadrature|={d.closed_vs_quadrature:.3g}", file=sys.stderr)
        return EXIT_REGRESSION
    return EXIT_OK


def _cmd_eval(args, stdout):
    params = load_config(args.config) if args.config else {}
    for key, val in (("es_db", args.es_db), ("esi_db", args.esi_db), ("alpha", args.alpha), ("r_s", args.r_s)):
        if val is not None:
            params[key] = val
    methods = args.methods or ["closed_form"]
    rows = []
    for t in r_s_values(params):
        p = dict(params, r_s=t.r_s)
        res = evaluate_point(p, methods, mc_trials=args.trials, seed=args.seed,
                             fallback_rel=args.fallback_rel, quad_tol=args.quad_tol,
                             mc_workers=args.threads)
        rows += [Row(t.r_s, "eval", m, r.value, r.uncertainty, len(r.fallback_pairs)) for m, r in res.items()]
    return _finish(rows, args, stdout)


def _run(spec: SweepSpec, args, stdout):
    rows = run_sweep(spec, workers=args.threads, fallback_rel=args.fallback_rel, quad_tol=args.quad_tol)
    return _finish(rows, args, stdout)


def _cmd_sweep(args, stdout):
    methods = args.methods or ["closed_form"]
    if args.preset:
        spec = figure_preset(args.preset, methods=methods, mc_trials=args.trials, seed=args.seed)
    else:
        data = load_config(args.spec)
        if args.methods:
            data["methods"] = args.methods
        data.setdefault("seed", args.seed)
        data.setdefault("mc_trials", args.trials)
        spec = spec_from_mapping(data)
    return _run(spec, args, stdout)


def _cmd_figure(args, stdout):
    methods = args.methods or ["closed_form"]
    spec = figure_preset(args.fig_id, curves=args.curve, methods=methods, mc_trials=args.trials, seed=args.seed)
    return _run(spec, args, stdout)


def _cmd_validate(args, stdout):
    methods = args.methods or ["closed_form", "quadrature"]
    curves = [dict(zip(("esi_db", "r_s", "alpha"), c))
              for c in itertools.product(VALIDATE_GRID["esi_db"], VALIDATE_GRID["r_s"], VALIDATE_GRID["alpha"])]
    es = VALIDATE_GRID["es_db"]
    spec = SweepSpec(base={}, axis="es_db", start=es[0], stop=es[-1], step=es[1] - es[0],
                     curves=tuple(curves), methods=tuple(methods), mc_trials=args.trials, seed=args.seed)
    return _run(spec, args, stdout)


COMMANDS = {"eval": _cmd_eval, "sweep": _cmd_sweep, "figure": _cmd_figure, "validate": _cmd_validate}


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, stdout)
    except (ConfigError, ValueError, ArithmeticError, OSError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
