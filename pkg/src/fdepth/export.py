"""Serialization of analysis results to CSV and JSON strings.

Floats are written with repr (shortest round-trip form) so identical
results serialize to identical bytes. Exact rational depths appear in
JSON as {"num": ..., "den": ...} pairs.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .bands import Band, ExperimentReport
from .boxplot import FBoxplot
from .regions import Envelope, WidthDiagnostic
from .sample import FunctionalSample
from .simulate import BenchmarkReport

__all__ = [
    "fraction_obj",
    "depth_table_csv",
    "depth_table_json",
    "rank_table_csv",
    "rank_table_json",
    "envelope_csv",
    "envelope_json",
    "diagnostic_csv",
    "boxplot_json",
    "outliers_csv",
    "outliers_json",
    "benchmark_csv",
    "benchmark_json",
    "band_csv",
    "bands_overlay_csv",
    "experiment_csv",
    "experiment_json",
    "curves_csv",
]


def _f(x) -> str:
    return repr(float(x))


def fraction_obj(fr: Fraction) -> dict:
    return {"num": fr.numerator, "den": fr.denominator}


# ---------------------------------------------------------------------------
# Depth tables
# ---------------------------------------------------------------------------


def depth_table_csv(labels, ed, id_, mbd, d_min) -> str:
    lines = ["label,ed,id,mbd,d_min"]
    for lab, e, i, m, d in zip(labels, ed, id_, mbd, d_min):
        lines.append(f"{lab},{_f(e)},{_f(i)},{_f(m)},{_f(d)}")
    return "\n".join(lines) + "\n"


def depth_table_json(labels, ed, id_, mbd, profiles=None) -> str:
    rows = []
    for k, lab in enumerate(labels):
        row = {
            "label": lab,
            "ed": fraction_obj(ed[k]),
            "id": float(id_[k]),
            "mbd": float(mbd[k]),
        }
        if profiles is not None:
            row["profile"] = [fraction_obj(p) for p in profiles[k]]
        rows.append(row)
    return json.dumps(rows, indent=2) + "\n"


def rank_table_csv(labels, order, ed) -> str:
    """Ranking from most extreme (rank 1) to deepest (rank n)."""
    lines = ["rank,label,ed"]
    for pos, idx in enumerate(order, start=1):
        lines.append(f"{pos},{labels[idx]},{_f(ed[idx])}")
    return "\n".join(lines) + "\n"


def rank_table_json(labels, order, ed) -> str:
    rows = [
        {"rank": pos, "label": labels[idx], "ed": fraction_obj(ed[idx])}
        for pos, idx in enumerate(order, start=1)
    ]
    return json.dumps(rows, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Regions and diagnostics
# ---------------------------------------------------------------------------


def envelope_csv(grid, env: Envelope) -> str:
    lines = ["t,lower,upper"]
    for t, lo, up in zip(grid, env.lower, env.upper):
        lines.append(f"{_f(t)},{_f(lo)},{_f(up)}")
    return "\n".join(lines) + "\n"


def envelope_json(grid, env: Envelope) -> str:
    obj = {
        "alpha": env.alpha,
        "members": sorted(env.members),
        "t": [float(t) for t in grid],
        "lower": [float(v) for v in env.lower],
        "upper": [float(v) for v in env.upper],
    }
    return json.dumps(obj, indent=2) + "\n"


def diagnostic_csv(diag: WidthDiagnostic) -> str:
    lines = ["t,width,sd"]
    for t, w, s in zip(diag.t, diag.width, diag.sd):
        lines.append(f"{_f(t)},{_f(w)},{_f(s)}")
    return "\n".join(lines) + "\n"


def curves_csv(sample: FunctionalSample) -> str:
    """Tidy long-form dump of every sample curve."""
    labels = sample.function_labels()
    lines = ["t,label,value"]
    for i, lab in enumerate(labels):
        for t, v in zip(sample.grid, sample.values[i]):
            lines.append(f"{_f(t)},{lab},{_f(v)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Boxplot and outliers
# ---------------------------------------------------------------------------


def boxplot_json(sample: FunctionalSample, box: FBoxplot) -> str:
    labels = sample.function_labels()
    obj = {
        "method": box.depth_method,
        "median": labels[box.median_index],
        "box": {
            "t": [float(t) for t in sample.grid],
            "lower": [float(v) for v in box.box.lower],
            "upper": [float(v) for v in box.box.upper],
        },
        "fences": {
            "lower": [float(v) for v in box.fence_lower],
            "upper": [float(v) for v in box.fence_upper],
        },
        "outliers": [labels[i] for i in sorted(box.outliers)],
    }
    return json.dumps(obj, indent=2) + "\n"


def outliers_csv(labels, outliers) -> str:
    lines = ["index,label"]
    for idx in sorted(outliers):
        lines.append(f"{idx},{labels[idx]}")
    return "\n".join(lines) + "\n"


def outliers_json(labels, outliers, method: str) -> str:
    idx = sorted(outliers)
    obj = {
        "method": method,
        "outliers": idx,
        "labels": [labels[i] for i in idx],
    }
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Benchmark and experiment tables
# ---------------------------------------------------------------------------


def _opt(x) -> str:
    return "" if x is None else _f(x)


def benchmark_csv(report: BenchmarkReport) -> str:
    lines = ["model,method,metric,mean,se,replicates"]
    for r in report.rows:
        lines.append(
            f"{r.model},{r.method},{r.metric},{_opt(r.mean)},{_opt(r.se)},{r.replicates}"
        )
    return "\n".join(lines) + "\n"


def benchmark_json(report: BenchmarkReport) -> str:
    obj = {
        "master_seed": report.master_seed,
        "replicates": report.replicates,
        "rows": [
            {
                "model": r.model,
                "method": r.method,
                "metric": r.metric,
                "mean": r.mean,
                "se": r.se,
                "replicates": r.replicates,
            }
            for r in report.rows
        ],
    }
    return json.dumps(obj, indent=2) + "\n"


def experiment_csv(report: ExperimentReport) -> str:
    lines = ["truth_or_alt,method,rate,replicates"]
    for r in report.rows:
        lines.append(f"{r.truth_or_alt},{r.method},{_f(r.rate)},{r.replicates}")
    return "\n".join(lines) + "\n"


def experiment_json(report: ExperimentReport) -> str:
    obj = {
        "master_seed": report.master_seed,
        "replicates": report.replicates,
        "rows": [
            {
                "truth_or_alt": r.truth_or_alt,
                "method": r.method,
                "rate": r.rate,
                "replicates": r.replicates,
            }
            for r in report.rows
        ],
    }
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Bands
# ---------------------------------------------------------------------------


def band_csv(band: Band) -> str:
    lines = ["x,lower,upper,mu_hat"]
    for x, lo, up, mu in zip(band.eval_grid, band.lower, band.upper, band.mu_hat):
        lines.append(f"{_f(x)},{_f(lo)},{_f(up)},{_f(mu)}")
    return "\n".join(lines) + "\n"


def bands_overlay_csv(ed: Band, scheffe: Band, k: Band) -> str:
    """All three bands on one grid, for side-by-side plotting."""
    if not (
        np.array_equal(ed.eval_grid, scheffe.eval_grid)
        and np.array_equal(ed.eval_grid, k.eval_grid)
    ):
        raise ValueError("bands are on different evaluation grids")
    lines = ["x,mu_hat,ed_lo,ed_hi,scheffe_lo,scheffe_hi,k_lo,k_hi"]
    for j, x in enumerate(ed.eval_grid):
        lines.append(
            ",".join(
                [
                    _f(x),
                    _f(ed.mu_hat[j]),
                    _f(ed.lower[j]),
                    _f(ed.upper[j]),
                    _f(scheffe.lower[j]),
                    _f(scheffe.upper[j]),
                    _f(k.lower[j]),
                    _f(k.upper[j]),
                ]
            )
        )
    return "\n".join(lines) + "\n"
