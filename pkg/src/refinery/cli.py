"""Command-line front end.

Subcommands: bound, decompose, rank, polyj, figures.  Record outputs go to
stdout or --output; the figures subcommand writes delimited tables plus
rendered PNGs into a directory.  Exit codes: 0 success, 1 usage error,
2 input error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import engine, features, figures, io
from .densities import (ClassConditionalModel, GaussianDensity,
                        histogram_from_samples)
from .errors import InputError, NumericalError, RefineryError
from .links import COMPOSITE_PAIRS, get_link, inverse_link_eval
from .polynomial import build_poly_reward, k2_given_k1
from .quadrature import QuadratureConfig
from .rewards import eval_reward

FIGURE_NAMES = ("fig1", "fig3", "fig5", "fig6")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def build_parser() -> _Parser:
    parser = _Parser(prog="refinery",
                     description="Refinement scores, calibration decompositions "
                                 "and Bayes-error bounds for binary forecasts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_io(p, fmt_default="structured-records"):
        p.add_argument("--output", default=None,
                       help="output file (default: stdout)")
        p.add_argument("--format", choices=("table-text", "structured-records"),
                       default=fmt_default)

    p = sub.add_parser("bound", help="Bayes error and its refinement bounds")
    p.add_argument("--input", required=True, help="model spec JSON")
    p.add_argument("--prior", type=float, default=None,
                   help="override the class-+1 prior from the spec")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-depth", type=int, default=20)
    add_io(p)

    p = sub.add_parser("decompose", help="calibration/refinement score split")
    p.add_argument("--input", required=True,
                   help="delimited file with eta_hat and outcome columns")
    p.add_argument("--reward", default="ls")
    p.add_argument("--bins", type=int, default=20)
    add_io(p)

    p = sub.add_parser("rank", help="greedy refinement feature ranking")
    p.add_argument("--input", required=True, help="delimited feature table")
    p.add_argument("--label-col", required=True)
    p.add_argument("--reward", default="log-natural")
    p.add_argument("--bins", type=int, default=16)
    p.add_argument("--top", type=int, default=None,
                   help="number of features to select (default: all)")
    add_io(p)

    p = sub.add_parser("score-output",
                       help="refinement of a calibrated classifier's outputs")
    p.add_argument("--input", required=True,
                   help="delimited file with a column of output values v")
    p.add_argument("--link", required=True,
                   help="link whose inverse recovers probabilities from v")
    p.add_argument("--reward", default="log")
    p.add_argument("--bins", type=int, default=64)
    add_io(p)

    p = sub.add_parser("polyj", help="polynomial reward constants and coefficients")
    p.add_argument("--n", type=int, required=True, help="even construction order")
    add_io(p)

    p = sub.add_parser("figures", help="emit figure tables and rendered plots")
    p.add_argument("which", choices=FIGURE_NAMES + ("all",))
    p.add_argument("--output", default="figures",
                   help="output directory (default: ./figures)")
    return parser


def _emit(args, record: dict, table):
    if args.format == "structured-records":
        io.write_text(args.output, io.dumps_record(record))
    else:
        header, rows = table
        io.write_text(args.output, io.table_text(header, rows))


def cmd_bound(args) -> int:
    model = io.load_model(args.input)
    if args.prior is not None:
        model = replace(model, prior=args.prior)
    cfg = QuadratureConfig(tol=args.tol, max_levels=args.max_depth)
    report = engine.bayes_error(model, cfg)
    violations = engine.bound_chain_violations(report)
    record = {
        "bayes_error": report.bayes_error,
        "miss_rate": report.miss_rate,
        "false_positive_rate": report.false_positive_rate,
        "bounds": dict(report.bounds),
        "chain": {
            "order": list(engine.CHAIN_ORDER),
            "holds": not violations,
            "violations": [
                {"tighter": a, "looser": b, "gap": gap}
                for a, b, gap in violations
            ],
        },
    }
    rows = [["bayes_error", report.bayes_error],
            ["miss_rate", report.miss_rate],
            ["false_positive_rate", report.false_positive_rate]]
    rows += [[f"bound[{name}]", value] for name, value in report.bounds.items()]
    rows.append(["chain_holds", str(not violations).lower()])
    _emit(args, record, (["quantity", "value"], rows))
    return 0


def cmd_decompose(args) -> int:
    records = io.read_forecasts(args.input)
    result = engine.decompose_forecasts(records, args.reward, args.bins)
    record = {
        "reward": args.reward,
        "bins": args.bins,
        "total": result.total,
        "calibration": result.calibration,
        "refinement": result.refinement,
        "per_bin": [
            {"eta_hat": b.eta_hat, "frequency": b.frequency,
             "eta_emp": b.eta_emp, "clamped": b.clamped}
            for b in result.per_bin
        ],
    }
    rows = [[b.eta_hat, b.frequency, b.eta_emp, str(b.clamped).lower()]
            for b in result.per_bin]
    rows.append(["total", result.total, "", ""])
    rows.append(["calibration", result.calibration, "", ""])
    rows.append(["refinement", result.refinement, "", ""])
    _emit(args, record, (["eta_hat", "frequency", "eta_emp", "clamped"], rows))
    return 0


def cmd_rank(args) -> int:
    names, X, y = io.read_dataset(args.input, args.label_col)
    ranking = features.greedy_rank(X, y, reward=args.reward, k=args.top,
                                   bins=args.bins, names=names)
    record = {
        "reward": args.reward,
        "ranking": [{"feature": name, "score": score} for name, score in ranking],
    }
    _emit(args, record, (["feature", "score"], list(ranking)))
    return 0


def cmd_score_output(args) -> int:
    header, rows = io.read_delimited(args.input)
    column = header.index("v") if "v" in header else 0
    try:
        values = np.array([float(r[column]) for r in rows])
    except ValueError as exc:
        raise InputError(f"{args.input}: non-numeric output value: {exc}") from exc
    if values.size == 0:
        raise InputError(f"{args.input}: no output values")
    link = get_link(args.link)
    lo = max(float(values.min()), link.v_lo)
    hi = min(float(values.max()), link.v_hi)
    if not hi > lo:
        lo, hi = lo - 0.5, hi + 0.5
        lo, hi = max(lo, link.v_lo), min(hi, link.v_hi)
    density = histogram_from_samples(values, args.bins, lo, hi)
    value = engine.refinement_classifier_output(density, args.link, args.reward)
    record = {"link": args.link, "reward": args.reward, "bins": args.bins,
              "v_lo": lo, "v_hi": hi, "refinement": value}
    rows_out = [[key, val] for key, val in record.items()]
    _emit(args, record, (["quantity", "value"], rows_out))
    return 0


def cmd_polyj(args) -> int:
    poly = build_poly_reward(args.n)
    record = {
        "n": poly.n,
        "k1": {"numerator": poly.k1.numerator,
               "denominator": poly.k1.denominator,
               "value": float(poly.k1)},
        "k2": {"numerator": poly.k2.numerator,
               "denominator": poly.k2.denominator,
               "value": float(poly.k2)},
        "r_coefficients": [
            {"power": p, "numerator": c.numerator, "denominator": c.denominator}
            for p, c in enumerate(poly.r_coefficients)
        ],
    }
    note = None
    if poly.n == 2:
        rounded_k1 = round(float(poly.k1), 4)
        alt = k2_given_k1(poly, rounded_k1)
        note = (f"rounding k1 to {rounded_k1:g} before the k2 normalization "
                f"gives k2 = {alt:.6g}; the exact normalization gives "
                f"{poly.k2.numerator}/{poly.k2.denominator} = {float(poly.k2):.6g}. "
                f"Tables quoting {alt:.6g} fold in that k1 rounding.")
        record["k2_from_rounded_k1"] = alt
        record["note"] = note
    rows = [["k1", poly.k1.numerator, poly.k1.denominator, float(poly.k1)],
            ["k2", poly.k2.numerator, poly.k2.denominator, float(poly.k2)]]
    rows += [[f"r[{p}]", c.numerator, c.denominator, float(c)]
             for p, c in enumerate(poly.r_coefficients)]
    if args.format == "structured-records":
        io.write_text(args.output, io.dumps_record(record))
    else:
        text = io.table_text(["constant", "numerator", "denominator", "value"],
                             rows)
        if note:
            text += f"# {note}\n"
        io.write_text(args.output, text)
    return 0


def _gaussian_pair(mu: float) -> ClassConditionalModel:
    return ClassConditionalModel(d_pos=GaussianDensity(mu, 1.0),
                                 d_neg=GaussianDensity(-mu, 1.0), prior=0.5)


def _figure_fig1(outdir: Path):
    rows = []
    curves = []
    for name, (_, link_name) in COMPOSITE_PAIRS.items():
        link = get_link(link_name)
        lo = link.v_lo if np.isfinite(link.v_lo) else -6.0
        hi = link.v_hi if np.isfinite(link.v_hi) else 6.0
        vs = np.linspace(lo, hi, 403)[1:-1]
        reward_name = COMPOSITE_PAIRS[name][0]
        ys = eval_reward(reward_name, inverse_link_eval(link_name, vs))
        rows += [[name, v, y] for v, y in zip(vs, ys)]
        curves.append((name, vs, ys))
    io.write_text(outdir / "fig1.tsv",
                  io.table_text(["composite", "v", "value"], rows))
    figures.render_curves(outdir / "fig1.png", "v", "J((f*)^-1(v))", curves,
                          title="Reward/link composites")


def _reward_grid_figure(outdir: Path, stem: str, names, title: str):
    eta = np.linspace(0.0, 1.0, 501)
    columns = {name: eval_reward(name, eta) for name in names}
    rows = [[e] + [columns[name][i] for name in names]
            for i, e in enumerate(eta)]
    io.write_text(outdir / f"{stem}.tsv",
                  io.table_text(["eta"] + list(names), rows))
    figures.render_curves(outdir / f"{stem}.png", "eta", "J(eta)",
                          [(name, eta, columns[name]) for name in names],
                          title=title)


def _figure_fig5(outdir: Path):
    rows = []
    blocks = []
    for mu in (0.1, 1.5, 4.0):
        model = _gaussian_pair(mu)
        xs = np.linspace(-8.0, 8.0, 401)
        table = engine.refinement_terms_table(model, "ls", xs)
        rows += [[mu] + list(r) for r in table]
        blocks.append((f"mu = +-{mu:g}", table[:, 0], table[:, 1],
                       table[:, 2], table[:, 3]))
    io.write_text(outdir / "fig5.tsv",
                  io.table_text(["mu", "x", "p_x", "j_posterior", "term"], rows))
    figures.render_refinement_terms(outdir / "fig5.png", blocks)


def cmd_figures(args) -> int:
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    wanted = FIGURE_NAMES if args.which == "all" else (args.which,)
    for which in wanted:
        if which == "fig1":
            _figure_fig1(outdir)
        elif which == "fig3":
            _reward_grid_figure(outdir, "fig3",
                                ("zero-one", "ls", "log", "exp",
                                 "log-cos", "cosh", "sec"),
                                "Bound-family rewards")
        elif which == "fig5":
            _figure_fig5(outdir)
        elif which == "fig6":
            _reward_grid_figure(outdir, "fig6",
                                ("zero-one", "poly-0", "poly-2", "poly-4"),
                                "Polynomial rewards")
    return 0


_COMMANDS = {
    "bound": cmd_bound,
    "decompose": cmd_decompose,
    "rank": cmd_rank,
    "score-output": cmd_score_output,
    "polyj": cmd_polyj,
    "figures": cmd_figures,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NumericalError as exc:
        sys.stderr.write(f"refinery: numerical error: {exc}\n")
        return 3
    except (RefineryError, OSError) as exc:
        sys.stderr.write(f"refinery: input error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
