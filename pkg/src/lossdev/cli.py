"""Command-line front end: model loading, subcommand dispatch, CSV on
stdout, and a JSON run manifest on stderr for reproducibility.

Exit codes: 0 success, 1 validation failure, 2 usage error.
Numbers are rendered with 17 significant digits; infinite rates render
as the literal ``inf``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .cgf import limit_cgf, empirical_cgf
from .counterexample import (
    build_counterexample,
    schedule_depth_end,
    subsequence_rates,
)
from .exact import exact_log_tail, exact_tail
from .legendre import legendre_transform, rate_upper_bound
from .mc import DEFAULT_SEED, sample_plain, sample_tilted
from .model import ModelError, load_model
from .moderate import MdQuery, md_log_prob_prediction, md_threshold


def _fmt(v) -> str:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(v)


def emit_curve(points, schema, out=None) -> str:
    """Render homogeneous point tuples as CSV under the given header."""
    lines = [",".join(schema)]
    for p in points:
        if len(p) != len(schema):
            raise ValueError("point arity does not match schema")
        lines.append(",".join(_fmt(v) for v in p))
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write(text)
    return text


def _model_hash(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _manifest(subcommand: str, args: argparse.Namespace, wall: float) -> None:
    params = {k: v for k, v in vars(args).items() if k != "func"}
    doc = {
        "subcommand": subcommand,
        "params": params,
        "model_hash": _model_hash(args.model) if getattr(args, "model", None) else None,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "wall_time_s": wall,
    }
    print(json.dumps(doc), file=sys.stderr)


def _cmd_validate(args) -> int:
    from .model import loads_model, validate_model

    with open(args.model, encoding="utf-8") as fh:
        text = fh.read()
    try:
        model, bounds = loads_model(text)
    except ModelError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    violations = validate_model(model, bounds)
    emit_curve([(v.class_name, v.clause, v.detail) for v in violations],
               ["class", "clause", "detail"], sys.stdout)
    return 0 if not violations else 1


def _cmd_cgf(args) -> int:
    model, _ = load_model(args.model)
    grid = np.linspace(args.lambda_min, args.lambda_max, args.points)
    rows = []
    for lam in grid:
        p = (limit_cgf(model, float(lam)) if model.is_weighted
             else empirical_cgf(model, args.n, float(lam)))
        rows.append((p.lam, p.value, p.d1, p.d2))
    emit_curve(rows, ["lambda", "value", "d1", "d2"], sys.stdout)
    return 0


def _x_grid(args) -> list[float]:
    if args.x is not None:
        return [args.x]
    return np.linspace(args.x_min, args.x_max, args.points).tolist()


def _cmd_rate(args) -> int:
    model, _ = load_model(args.model)
    rows = []
    for x in _x_grid(args):
        rp = legendre_transform(model, x)
        rows.append((rp.x, rp.lambda_star, rp.rate, rp.status))
    emit_curve(rows, ["x", "lambda_star", "rate", "status"], sys.stdout)
    return 0


def _cmd_bound(args) -> int:
    model, _ = load_model(args.model)
    lam_grid = np.linspace(0.0, args.lambda_max, args.lambda_points).tolist()
    checkpoints = [int(v) for v in args.checkpoints.split(",")]
    rows = [(x, rate_upper_bound(model, x, lam_grid, checkpoints))
            for x in _x_grid(args)]
    emit_curve(rows, ["x", "decay_rate_lower_bound"], sys.stdout)
    return 0


def _cmd_exact(args) -> int:
    model, _ = load_model(args.model)
    tail = exact_tail(model, args.n, args.x)
    lt = exact_log_tail(model, args.n, args.x)
    rate = lt / args.n if lt > -math.inf else -math.inf
    emit_curve([(args.n, args.x, tail, rate)],
               ["n", "x", "tail_probability", "log_rate"], sys.stdout)
    return 0


def _cmd_mc(args) -> int:
    model, _ = load_model(args.model)
    if args.tilted:
        est = sample_tilted(model, args.n, args.x, args.samples, args.seed)
    else:
        est = sample_plain(model, args.n, args.x, args.samples, args.seed)
    emit_curve([(est.estimate, est.std_error, est.method, est.lam)],
               ["estimate", "std_error", "method", "lambda_star"], sys.stdout)
    return 0


def _cmd_mdp(args) -> int:
    model, bounds = load_model(args.model)
    q = MdQuery(args.c, args.alpha, args.n)
    th = md_threshold(q, model, bounds)
    pred = md_log_prob_prediction(q)
    emit_curve([(q.n, q.alpha, q.c, th.exact, th.lower, th.upper,
                 pred.leading, pred.correction_scale)],
               ["n", "alpha", "c", "threshold_exact", "threshold_lower",
                "threshold_upper", "predicted_minus_log_prob",
                "correction_scale"], sys.stdout)
    return 0


def _cmd_counterexample(args) -> int:
    model, _ = build_counterexample(growth=args.growth, depth=args.depth, a0=args.a0)
    max_n = min(schedule_depth_end(model.rule, args.depth), args.max_n)
    rows = []
    gaps = {}
    for which in (1, 2):
        rep = subsequence_rates(model, args.x, which, max_n=max_n)
        gaps[which] = rep
        for p in rep.points:
            rows.append((f"class{which}_ends", p.n, p.density_unit, p.log_rate))
    emit_curve(rows, ["section", "n", "density_class1", "log_rate"], sys.stdout)
    r1, r2 = gaps[1], gaps[2]
    print(f"summary,target1={_fmt(r1.target)},gap1={_fmt(r1.gap)},"
          f"target2={_fmt(r2.target)},gap2={_fmt(r2.gap)},"
          f"rate_separation={_fmt(abs(r1.points[-1].log_rate - r2.points[-1].log_rate))}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lossdev",
                                 description="deviation estimates for bounded-loss portfolios")
    ap.add_argument("--threads", type=int, default=os.cpu_count(),
                    help="worker threads for grid/replicate evaluation")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=fn)
        return p

    p = add("validate", _cmd_validate, help="check a model file against the assumptions")
    p.add_argument("model")

    p = add("cgf", _cmd_cgf, help="CGF curve (lambda, value, d1, d2) as CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--lambda-min", type=float, default=-5.0)
    p.add_argument("--lambda-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--n", type=int, default=1000,
                   help="portfolio size for assigned models (empirical CGF)")

    for name, fn, hlp in [("rate", _cmd_rate, "Legendre-transform rate curve"),
                          ("bound", _cmd_bound, "tail decay lower bound for assigned models")]:
        p = add(name, fn, help=hlp)
        p.add_argument("--model", required=True)
        p.add_argument("--x", type=float, default=None)
        p.add_argument("--x-min", type=float, default=-0.9)
        p.add_argument("--x-max", type=float, default=0.9)
        p.add_argument("--points", type=int, default=51)
        if name == "bound":
            p.add_argument("--lambda-max", type=float, default=20.0)
            p.add_argument("--lambda-points", type=int, default=401)
            p.add_argument("--checkpoints", default="100,1000,10000",
                           help="comma-separated n values approximating the running sup")

    p = add("exact", _cmd_exact, help="exact tail probability by lattice convolution")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True)

    p = add("mc", _cmd_mc, help="Monte Carlo tail estimate")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tilted", action="store_true")

    p = add("mdp", _cmd_mdp, help="moderate-deviation thresholds and prediction")
    p.add_argument("--model", required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--n", type=int, required=True)

    p = add("counterexample", _cmd_counterexample,
            help="distinct subsequential decay rates for the two-class interlacement")
    p.add_argument("--growth", type=int, default=10)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--x", type=float, default=0.5)
    p.add_argument("--a0", type=int, default=1)
    p.add_argument("--max-n", type=int, default=5_000_000)

    return ap


def dispatch(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _manifest(args.subcommand, args, time.perf_counter() - t0)
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
