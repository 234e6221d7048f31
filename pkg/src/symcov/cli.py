"""Command-line interface.

Subcommands: aggregate, stats, simulate, fit, pairs, population-cov.
Every randomized subcommand requires an explicit --seed, so repeated runs
with the same inputs and flags produce identical bytes. Exit codes:
0 success, 2 input/format error, 3 statistical infeasibility.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

from . import io as sio
from .errors import FormatError, InfeasibleError
from .intervals import aggregate_microdata
from .microdata import (
    WeightFamily,
    WeightModel,
    derive_rng,
    recover_weights,
    simulate_macrodata,
    simulate_microdata,
)
from .model_select import select_model
from .pairs_plot import PlotSpec, render_pairs_svg
from .stats import sample_cor_matrix, sample_cov_matrix, sample_mean
from .population import population_cov_matrix


@contextmanager
def _out(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yield f


def _open_text(path: str):
    return open(path, "r", encoding="utf-8", newline="")


def _parse_k_list(text: str) -> tuple[int, ...]:
    if text == "all":
        return tuple(range(1, 9))
    try:
        ks = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise FormatError(f"cannot parse definition list {text!r}")
    if not ks or any(not 1 <= k <= 8 for k in ks):
        raise FormatError(f"definitions must be in 1..8, got {text!r}")
    return ks


def _cmd_aggregate(args) -> int:
    with _open_text(args.micro) as f:
        micro = sio.read_micro_csv(f)
    sizes: dict[str, int] = {}
    for g in micro.group_ids:
        sizes[g] = sizes.get(g, 0) + 1
    singles = [g for g, c in sizes.items() if c == 1]
    if singles:
        print(
            f"warning: {len(singles)} group(s) with a single row "
            f"(first: {singles[0]!r}); their intervals are zero-width",
            file=sys.stderr,
        )
    macro = aggregate_microdata(micro)
    with _out(args.output) as f:
        sio.write_macro_csv(macro, f)
    return 0


def _cmd_stats(args) -> int:
    ks = _parse_k_list(args.k)
    with _open_text(args.macro) as f:
        macro = sio.read_macro_csv(f)
    mean = sample_mean(macro)
    covs = {k: sample_cov_matrix(macro, k) for k in ks}
    cors = {k: sample_cor_matrix(macro, k) for k in ks}
    names = macro.variable_names
    if args.format == "json":
        doc = {
            "mean": {"variables": list(names), "values": mean.tolist()},
            "covariance": [sio.matrix_json_dict(k, names, covs[k].entries) for k in ks],
            "correlation": [sio.matrix_json_dict(k, names, cors[k].entries) for k in ks],
        }
        with _out(args.output) as f:
            import json

            json.dump(doc, f, indent=2)
            f.write("\n")
        return 0
    with _out(args.output) as f:
        f.write("# mean\n")
        f.write("variable,mean\n")
        for name, v in zip(names, mean):
            f.write(f"{name},{v!r}\n")
        for k in ks:
            f.write(f"# covariance k={k}\n")
            sio.write_matrix_csv(names, covs[k].entries, f)
            f.write(f"# correlation k={k}\n")
            sio.write_matrix_csv(names, cors[k].entries, f)
    return 0


def _cmd_simulate(args) -> int:
    with _open_text(args.params) as f:
        params = sio.read_params_json(f)
    rng = derive_rng(args.seed, "macro")
    macro = simulate_macrodata(params, args.n, rng)
    if args.model is not None:
        if args.out_micro is None:
            raise FormatError("--model requires --out-micro")
        model = WeightModel(WeightFamily(args.model), scenario=args.scenario)
        micro = simulate_microdata(
            macro, model, args.points_per_object, derive_rng(args.seed, "micro")
        )
        with _out(args.out_micro) as f:
            sio.write_micro_csv(micro, f)
    with _out(args.out_macro) as f:
        sio.write_macro_csv(macro, f)
    return 0


def _cmd_fit(args) -> int:
    with _open_text(args.micro) as f:
        micro = sio.read_micro_csv(f)
    exclude = args.exclude_boundary
    if args.macro is not None:
        with _open_text(args.macro) as f:
            macro = sio.read_macro_csv(f)
    else:
        # Limits derived from the micro rows themselves pin the extremes at
        # u = +/-1, so boundary exclusion is forced on.
        macro = aggregate_microdata(micro)
        exclude = True
    u_table = recover_weights(micro, macro, exclude_boundary=exclude)
    candidates = [WeightFamily(tok) for tok in args.candidates.split(",")]
    report = select_model(
        u_table,
        candidates,
        rng=derive_rng(args.seed, "fit"),
        replicates=args.replicates,
    )
    scenario = 2 if report.scenario2_evidence else 1
    kind = report.recommended_kind
    print(
        f"recommended: {report.recommended.family} "
        f"(scenario {scenario}, k={kind if kind is not None else 'none'})",
        file=sys.stderr,
    )
    with _out(args.output) as f:
        sio.write_fit_report_json(report, f)
    return 0


def _cmd_pairs(args) -> int:
    ks = _parse_k_list(args.k)
    with _open_text(args.macro) as f:
        macro, labels = sio.read_macro_csv_with_labels(f)
    spec = PlotSpec(width=args.width, height=args.height, color_by=args.color_by, k_list=ks)
    svg = render_pairs_svg(macro, spec, labels)
    with _out(args.output) as f:
        f.write(svg)
    return 0


def _cmd_population_cov(args) -> int:
    with _open_text(args.params) as f:
        params = sio.read_params_json(f)
    matrix = population_cov_matrix(params, args.k)
    names = [f"x{j + 1}" for j in range(params.p)]
    with _out(args.output) as f:
        if args.format == "json":
            import json

            json.dump(sio.matrix_json_dict(args.k, names, matrix.entries), f, indent=2)
            f.write("\n")
        else:
            sio.write_matrix_csv(names, matrix.entries, f)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symcov",
        description="Symbolic covariance/correlation toolkit for interval data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("aggregate", help="micro CSV -> macro CSV of per-group intervals")
    p.add_argument("micro")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_aggregate)

    p = sub.add_parser("stats", help="sample mean and covariance/correlation matrices")
    p.add_argument("macro")
    p.add_argument("--k", default="all", help="'all' or comma list of definitions 1..8")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("simulate", help="draw macro-data (and optionally micro-data)")
    p.add_argument("params")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--model", choices=[str(f) for f in WeightFamily])
    p.add_argument("--scenario", type=int, choices=(1, 2), default=1)
    p.add_argument("--points-per-object", type=int, default=1)
    p.add_argument("--out-macro", help="macro CSV path (default: stdout)")
    p.add_argument("--out-micro", help="micro CSV path (required with --model)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("fit", help="recover weights and rank candidate weight models")
    p.add_argument("micro")
    p.add_argument("--macro", help="macro CSV; omitted: aggregate the micro data first")
    p.add_argument("--exclude-boundary", action="store_true")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument(
        "--candidates",
        default="continuous-uniform,triangular,truncated-normal",
        help="comma list of weight families",
    )
    p.add_argument("--replicates", type=int, default=10_000)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("pairs", help="SVG matrix of interval scatter plots")
    p.add_argument("macro")
    p.add_argument("--k", default="all", help="'all' or comma list of definitions 1..8")
    p.add_argument("--color-by", help="categorical column of the macro CSV")
    p.add_argument("--width", type=int, default=900)
    p.add_argument("--height", type=int, default=900)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_pairs)

    p = sub.add_parser("population-cov", help="population covariance matrix from params JSON")
    p.add_argument("params")
    p.add_argument("--k", type=int, required=True, choices=range(1, 9))
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_population_cov)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (FormatError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
