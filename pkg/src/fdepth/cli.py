"""Command-line interface for depth analysis, simulation, and bands.

One binary with subcommands for ingestion, depth tables, central regions,
functional boxplots, outlier detection, model simulation, regression
bands, and the two benchmark tables. Every stochastic subcommand requires
an explicit --seed; results are reproducible byte for byte from it, and
--threads never changes any output. Exit codes: 0 success, 1 data error,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path

import numpy as np

from . import export
from .bands import (
    ExperimentConfig,
    ed_band,
    fit_poly,
    k_band,
    level_power_experiment,
    residual_bootstrap,
    scheffe_band,
)
from .boxplot import DEPTH_METHODS, detect_outliers, functional_boxplot
from .depth import depth_profile, integrated_depth, modified_band_depth, rank_sample
from .regions import central_region, pointwise_region
from .sample import FunctionalSample, load_sample, save_sample
from .simulate import ModelSpec, generate_model, run_benchmark

__all__ = ["main", "emit_plotdata"]


# ---------------------------------------------------------------------------
# Argument types (domain violations are usage errors, exit 2)
# ---------------------------------------------------------------------------


def _alpha_region(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= v < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must be in [0, 1), got {text}")
    return v


def _open_unit(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"value must be in (0, 1), got {text}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if v <= 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _write(args, text: str, header: str | None = None) -> None:
    """Write result text to --output or stdout.

    Files receive the pure payload so reruns are byte-identical; when the
    payload goes to stdout, an optional report header is prepended as a
    comment line.
    """
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        if header:
            print(header)
        print(f"wrote {out}")
    else:
        if header:
            print(f"# {header}")
        sys.stdout.write(text)


def emit_plotdata(result, kind: str, stem: str) -> list[str]:
    """Write tidy CSV layers for external plotting.

    kind "region": result = (sample, envelope) -> curves + envelope files.
    kind "boxplot": result = (sample, fboxplot) -> curves, box, fences,
    outliers files. kind "bands": result = (ed, scheffe, k) -> one overlay
    file. Returns the written paths.
    """
    paths = []

    def put(layer: str, text: str) -> None:
        path = f"{stem}.{layer}.csv"
        Path(path).write_text(text, encoding="utf-8")
        paths.append(path)

    if kind == "region":
        sample, env = result
        put("curves", export.curves_csv(sample))
        put("envelope", export.envelope_csv(sample.grid, env))
    elif kind == "boxplot":
        sample, box = result
        labels = sample.function_labels()
        put("curves", export.curves_csv(sample))
        put("box", export.envelope_csv(sample.grid, box.box))
        fences = ["t,lower,upper"]
        for t, lo, up in zip(sample.grid, box.fence_lower, box.fence_upper):
            fences.append(f"{float(t)!r},{float(lo)!r},{float(up)!r}")
        put("fences", "\n".join(fences) + "\n")
        rows = ["t,label,value"]
        for i in sorted(box.outliers):
            for t, v in zip(sample.grid, sample.values[i]):
                rows.append(f"{float(t)!r},{labels[i]},{float(v)!r}")
        put("outliers", "\n".join(rows) + "\n")
    elif kind == "bands":
        ed, scheffe, k = result
        put("bands", export.bands_overlay_csv(ed, scheffe, k))
    else:
        raise ValueError(f"unknown plot-data kind {kind!r}")
    return paths


def _load(args) -> FunctionalSample:
    return load_sample(Path(args.input))


def _read_xy(path) -> tuple[np.ndarray, np.ndarray]:
    """Read regression data from a two-column x,y CSV."""
    text = Path(path).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty regression input")
    if [h.strip() for h in header] != ["x", "y"]:
        raise ValueError("regression input must have header 'x,y'")
    xs, ys = [], []
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ValueError(f"row {line} has {len(row)} cells, expected 2")
        try:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
        except ValueError:
            raise ValueError(f"row {line} could not be parsed as numbers")
    if not xs:
        raise ValueError("regression input has no data rows")
    return np.asarray(xs), np.asarray(ys)


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_depth(args) -> int:
    sample = _load(args)
    labels = sample.function_labels()
    _, ed = rank_sample(sample)
    id_ = [integrated_depth(sample, sample.values[i]) for i in range(sample.n_functions)]
    mbd = [modified_band_depth(sample, sample.values[i]) for i in range(sample.n_functions)]
    profiles = [depth_profile(sample, sample.values[i]) for i in range(sample.n_functions)]
    d_min = [p.d_min() for p in profiles]
    if args.format == "json":
        prof = [p.as_fractions() for p in profiles] if args.profiles else None
        text = export.depth_table_json(labels, ed, id_, mbd, profiles=prof)
    else:
        text = export.depth_table_csv(labels, ed, id_, mbd, d_min)
    _write(args, text)
    return 0


def _cmd_rank(args) -> int:
    sample = _load(args)
    labels = sample.function_labels()
    order, ed = rank_sample(sample)
    if args.format == "json":
        text = export.rank_table_json(labels, order, ed)
    else:
        text = export.rank_table_csv(labels, order, ed)
    _write(args, text)
    return 0


def _cmd_region(args) -> int:
    sample = _load(args)
    env = central_region(sample, args.alpha)
    if args.format == "json":
        text = export.envelope_json(sample.grid, env)
    else:
        text = export.envelope_csv(sample.grid, env)
    _write(args, text)
    if args.plot_data:
        for path in emit_plotdata((sample, env), "region", args.plot_data):
            print(f"wrote {path}")
    return 0


def _cmd_pointwise_region(args) -> int:
    sample = _load(args)
    env = pointwise_region(sample, args.gamma)
    if args.format == "json":
        text = export.envelope_json(sample.grid, env)
    else:
        text = export.envelope_csv(sample.grid, env)
    _write(args, text)
    return 0


def _cmd_boxplot(args) -> int:
    sample = _load(args)
    box = functional_boxplot(sample, method=args.method)
    _write(args, export.boxplot_json(sample, box))
    if args.plot_data:
        for path in emit_plotdata((sample, box), "boxplot", args.plot_data):
            print(f"wrote {path}")
    return 0


def _cmd_outliers(args) -> int:
    sample = _load(args)
    found = detect_outliers(sample, method=args.method)
    labels = sample.function_labels()
    if args.format == "json":
        text = export.outliers_json(labels, found, args.method)
    else:
        text = export.outliers_csv(labels, found)
    _write(args, text)
    return 0


def _cmd_simulate(args) -> int:
    spec = ModelSpec(
        id=args.model, n=args.n, m=args.m, p=args.p, K=args.K, seed=args.seed
    )
    labeled = generate_model(spec, replicate=args.replicate)
    header = f"master seed: {args.seed}"
    if args.output:
        save_sample(labeled.sample, args.output)
        print(header)
        print(f"wrote {args.output}")
    else:
        print(f"# {header}")
        buf = io.StringIO()
        save_sample(labeled.sample, buf)
        sys.stdout.write(buf.getvalue())
    if args.truth:
        labels = labeled.sample.function_labels()
        lines = ["index,label,is_outlier"]
        for i, lab in enumerate(labels):
            lines.append(f"{i},{lab},{int(labeled.is_outlier[i])}")
        Path(args.truth).write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {args.truth}")
    return 0


def _cmd_bands(args) -> int:
    x, y = _read_xy(args.input)
    fit = fit_poly(x, y, args.degree)
    grid = np.linspace(0.0, 1.0, args.grid_points)
    piv = residual_bootstrap(fit, args.bootstrap, grid, args.seed)
    bands = {
        "ED": ed_band(fit, piv, args.alpha),
        "Scheffe": scheffe_band(fit, args.alpha, grid),
        "K": k_band(fit, piv, args.alpha),
    }
    _write(args, export.band_csv(bands[args.method]), header=f"master seed: {args.seed}")
    if args.plot_data:
        result = (bands["ED"], bands["Scheffe"], bands["K"])
        for path in emit_plotdata(result, "bands", args.plot_data):
            print(f"wrote {path}")
    return 0


def _cmd_bench_table1(args) -> int:
    specs = [ModelSpec(id=k, n=args.n, m=args.m) for k in (1, 2, 3, 4, 5)]
    report = run_benchmark(
        specs, replicates=args.replicates, seed=args.seed, threads=args.threads
    )
    if args.format == "json":
        text = export.benchmark_json(report)
    else:
        text = export.benchmark_csv(report)
    _write(args, text, header=f"master seed: {args.seed}")
    return 0


def _cmd_bench_table2(args) -> int:
    config = ExperimentConfig(
        n=args.n,
        q=args.degree,
        sd=args.sd,
        B=args.bootstrap,
        replicates=args.replicates,
        alpha=args.alpha,
        eval_points=args.grid_points,
        seed=args.seed,
    )
    report = level_power_experiment(config, threads=args.threads)
    if args.format == "json":
        text = export.experiment_json(report)
    else:
        text = export.experiment_csv(report)
    _write(args, text, header=f"master seed: {args.seed}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_io(sub, fmt_default="csv") -> None:
    sub.add_argument("--input", required=True, help="input sample CSV")
    sub.add_argument("--format", choices=("csv", "json"), default=fmt_default)
    sub.add_argument("--output", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdepth",
        description="Functional data depth, central regions, boxplots, and bands.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("depth", help="per-function ED/ID/MBD depth table")
    _add_io(p)
    p.add_argument(
        "--profiles", action="store_true", help="include depth profiles in JSON"
    )
    p.set_defaults(func=_cmd_depth)

    p = subs.add_parser("rank", help="curves ordered from most extreme to deepest")
    _add_io(p)
    p.set_defaults(func=_cmd_rank)

    p = subs.add_parser("region", help="central region envelope")
    _add_io(p)
    p.add_argument("--alpha", type=_alpha_region, required=True)
    p.add_argument("--plot-data", metavar="STEM", help="also write <stem>.<layer>.csv files")
    p.set_defaults(func=_cmd_region)

    p = subs.add_parser("pointwise-region", help="pointwise quantile envelope")
    _add_io(p)
    p.add_argument("--gamma", type=_open_unit, required=True)
    p.set_defaults(func=_cmd_pointwise_region)

    p = subs.add_parser("boxplot", help="functional boxplot layers as JSON")
    p.add_argument("--input", required=True, help="input sample CSV")
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--method", choices=DEPTH_METHODS, default="ED")
    p.add_argument("--plot-data", metavar="STEM", help="also write <stem>.<layer>.csv files")
    p.set_defaults(func=_cmd_boxplot)

    p = subs.add_parser("outliers", help="indices flagged by the boxplot rule")
    _add_io(p)
    p.add_argument("--method", choices=DEPTH_METHODS, default="ED")
    p.set_defaults(func=_cmd_outliers)

    p = subs.add_parser("simulate", help="draw one labeled sample from a model")
    p.add_argument("--model", type=int, choices=(1, 2, 3, 4, 5), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=_positive_int, default=100)
    p.add_argument("--m", type=_positive_int, default=50)
    p.add_argument("--p", type=float, default=0.1, help="contamination probability")
    p.add_argument("--K", type=float, default=6.0, help="contamination magnitude")
    p.add_argument("--replicate", type=_nonneg_int, default=0)
    p.add_argument("--output", help="sample CSV path (default: stdout)")
    p.add_argument("--truth", help="also write truth tags CSV here")
    p.set_defaults(func=_cmd_simulate)

    p = subs.add_parser("bands", help="simultaneous confidence bands for x,y data")
    p.add_argument("--input", required=True, help="two-column x,y CSV")
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--degree", type=_nonneg_int, default=5)
    p.add_argument("--alpha", type=_open_unit, default=0.1)
    p.add_argument("--bootstrap", type=_positive_int, default=2000, metavar="B")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--method", choices=("ED", "Scheffe", "K"), default="ED")
    p.add_argument("--grid-points", type=_positive_int, default=201)
    p.add_argument("--plot-data", metavar="STEM", help="write <stem>.bands.csv overlay")
    p.set_defaults(func=_cmd_bands)

    p = subs.add_parser("bench-table1", help="outlier detection benchmark over models 1-5")
    p.add_argument("--replicates", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=_positive_int, default=100)
    p.add_argument("--m", type=_positive_int, default=50)
    p.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_bench_table1)

    p = subs.add_parser("bench-table2", help="band level/power experiment")
    p.add_argument("--replicates", type=_positive_int, default=100)
    p.add_argument("--bootstrap", type=_positive_int, default=2000, metavar="B")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sd", type=_positive_float, default=1.0, help="error standard deviation")
    p.add_argument("--n", type=_positive_int, default=100)
    p.add_argument("--degree", type=_nonneg_int, default=5)
    p.add_argument("--alpha", type=_open_unit, default=0.1)
    p.add_argument("--grid-points", type=_positive_int, default=201)
    p.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_bench_table2)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
