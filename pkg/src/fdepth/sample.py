"""Functional sample container, validation, and CSV ingestion.

A functional sample holds n curves evaluated on one shared grid of m
points in [0, 1]. All depth, region, boxplot, and band machinery in this
package operates on this container. Curves observed on mismatched grids
are rejected rather than resampled; resampling policy is analysis
dependent and out of scope here.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

__all__ = [
    "FunctionalSample",
    "check_sample_arrays",
    "validate_sample",
    "load_sample",
    "save_sample",
    "as_query",
]

WEIGHT_COLUMN = "__weight"

# Tolerance on sum(weights) == 1.
_WEIGHT_SUM_TOL = 1e-12


def check_sample_arrays(grid, values, weights=None) -> list[str]:
    """Check functional-sample invariants and return every violation found.

    Violations are returned as human-readable strings; an empty list means
    the arrays form a valid sample. Nothing is raised: violations are data.

    Parameters
    ----------
    grid : array_like, shape (m,)
        Abscissae, expected strictly increasing and inside [0, 1].
    values : array_like, shape (n, m)
        One row per curve.
    weights : array_like, shape (m,), optional
        Grid-point weights, expected nonnegative and summing to 1.
    """
    problems: list[str] = []
    grid = np.asarray(grid, dtype=float)
    values = np.atleast_2d(np.asarray(values, dtype=float))

    if grid.ndim != 1 or grid.size == 0:
        problems.append("grid must be a non-empty 1-d sequence")
        return problems
    m = grid.size
    if values.shape[0] == 0:
        problems.append("sample must contain at least one function")
    if values.shape[1] != m:
        problems.append(
            f"values rows have length {values.shape[1]}, grid has {m} points"
        )
        return problems

    bad = np.argwhere(~np.isfinite(grid))
    for (j,) in bad:
        problems.append(f"grid[{j}] is not finite")
    if not bad.size:
        if np.any(np.diff(grid) <= 0):
            problems.append("grid not strictly increasing")
        if grid[0] < 0.0 or grid[-1] > 1.0:
            problems.append("grid points must lie in [0, 1]")

    for i, j in np.argwhere(~np.isfinite(values)):
        problems.append(f"values[{i}][{j}] is not finite")

    if weights is not None:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (m,):
            problems.append(
                f"weights have length {weights.size}, grid has {m} points"
            )
        else:
            if np.any(~np.isfinite(weights)) or np.any(weights < 0):
                problems.append("weights must be finite and nonnegative")
            elif abs(weights.sum() - 1.0) > _WEIGHT_SUM_TOL:
                problems.append(f"weights sum ≠ 1 (got {weights.sum()!r})")
    return problems


@dataclass
class FunctionalSample:
    """n functions evaluated on a shared grid of m points in [0, 1].

    Parameters
    ----------
    grid : ndarray, shape (m,)
        Strictly increasing abscissae in [0, 1].
    values : ndarray, shape (n, m)
        ``values[i, j]`` is the i-th function at ``grid[j]``.
    weights : ndarray, shape (m,), optional
        Grid-point weight measure, nonnegative, summing to 1. When absent
        the uniform weight 1/m is implied everywhere.
    labels : list of str, optional
        Identifiers per function; defaults to ``f1 .. fn``.

    Instances are immutable after construction (the arrays are marked
    read-only) and safe for unrestricted concurrent reads.
    """

    grid: np.ndarray
    values: np.ndarray
    weights: np.ndarray | None = None
    labels: list[str] | None = field(default=None)

    def __post_init__(self):
        self.grid = np.ascontiguousarray(self.grid, dtype=np.float64)
        if self.grid.ndim == 1:
            self.grid = _rescale_grid(self.grid)
        self.values = np.atleast_2d(
            np.ascontiguousarray(self.values, dtype=np.float64)
        )
        if self.weights is not None:
            self.weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        problems = check_sample_arrays(self.grid, self.values, self.weights)
        if problems:
            raise ValueError("invalid functional sample: " + "; ".join(problems))
        if self.labels is not None:
            if len(self.labels) != self.values.shape[0]:
                raise ValueError(
                    f"{len(self.labels)} labels for {self.values.shape[0]} functions"
                )
            self.labels = [str(s) for s in self.labels]
        for arr in (self.grid, self.values, self.weights):
            if arr is not None:
                arr.flags.writeable = False

    @property
    def n_functions(self) -> int:
        return self.values.shape[0]

    @property
    def n_points(self) -> int:
        return self.grid.size

    def point_weights(self) -> np.ndarray:
        """Weight vector, materializing the implied uniform 1/m default."""
        if self.weights is None:
            return np.full(self.n_points, 1.0 / self.n_points)
        return self.weights

    def weight_fractions(self) -> list[Fraction] | None:
        """Exact rational weights, or None under the uniform default.

        Floats convert to exact binary rationals, so downstream mass
        arithmetic stays exact whatever the weights are.
        """
        if self.weights is None:
            return None
        return [Fraction(w) for w in self.weights.tolist()]

    def function_labels(self) -> list[str]:
        if self.labels is not None:
            return list(self.labels)
        return [f"f{i + 1}" for i in range(self.n_functions)]


def validate_sample(sample: FunctionalSample) -> list[str]:
    """Re-check every invariant of an existing sample.

    Returns the list of violations (empty when valid). Construction already
    enforces the invariants, so this only reports problems for arrays that
    were mutated through non-public means.
    """
    problems = check_sample_arrays(sample.grid, sample.values, sample.weights)
    if sample.labels is not None and len(sample.labels) != sample.n_functions:
        problems.append("label count differs from function count")
    return problems


def as_query(sample: FunctionalSample, values) -> np.ndarray:
    """Validate a query function against a sample's grid.

    The query must be aligned to the sample grid (same length) and finite.
    Returns the query as a float array.
    """
    g = np.asarray(values, dtype=np.float64).reshape(-1)
    if g.size != sample.n_points:
        raise ValueError(
            f"query has {g.size} values, sample grid has {sample.n_points} points"
        )
    if np.any(~np.isfinite(g)):
        j = int(np.argwhere(~np.isfinite(g))[0][0])
        raise ValueError(f"query value at position {j} is not finite")
    return g


def _rescale_grid(grid: np.ndarray) -> np.ndarray:
    """Affinely map an out-of-range grid onto [0, 1], warning once.

    Depth is invariant to this rescaling because only the weight measure
    over grid points matters.
    """
    if grid.size and (grid[0] < 0.0 or grid[-1] > 1.0):
        warnings.warn(
            f"grid spans [{grid[0]!r}, {grid[-1]!r}]; rescaling to [0, 1]",
            stacklevel=3,
        )
        if grid.size == 1:
            return np.array([0.5])
        lo, hi = grid[0], grid[-1]
        return (grid - lo) / (hi - lo)
    return grid


def load_sample(source, format: str = "csv") -> FunctionalSample:
    """Load a functional sample from CSV.

    Expected layout: header ``t,<name1>,...,<nameN>``, one row per grid
    point, decimal numbers with ``.`` separator (scientific notation
    allowed), UTF-8, LF or CRLF line endings. A column named exactly
    ``__weight`` supplies grid-point weights. Column order is preserved as
    function index order. Grids outside [0, 1] are affinely rescaled with
    a warning.

    Parameters
    ----------
    source : path, bytes, or text/byte stream
        Where to read the CSV from.
    format : {"csv"}
        Only CSV is supported.

    Raises
    ------
    ValueError
        On ragged rows, non-numeric or blank cells (reported with row and
        column location), non-increasing grid, or an empty file.
    """
    if format != "csv":
        raise ValueError(f"unsupported format: {format!r}")
    text = _read_text(source)
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and not all(c.strip() == "" for c in r)]
    if not rows:
        raise ValueError("empty file: no CSV rows found")
    header, data = rows[0], rows[1:]
    if not data:
        raise ValueError("empty file: header present but no data rows")
    if len(header) < 2:
        raise ValueError("header must name a grid column and at least one function")
    if header[0].strip() != "t":
        raise ValueError(f"first header column must be 't', got {header[0]!r}")

    ncols = len(header)
    parsed = np.empty((len(data), ncols), dtype=np.float64)
    for r, row in enumerate(data):
        line = r + 2  # 1-based, counting the header line
        if len(row) != ncols:
            raise ValueError(f"row {line} has {len(row)} cells, expected {ncols}")
        for c, cell in enumerate(row):
            cell = cell.strip()
            if cell == "":
                raise ValueError(f"row {line}, column {c + 1}: empty cell")
            try:
                parsed[r, c] = float(cell)
            except ValueError:
                raise ValueError(
                    f"row {line}, column {c + 1}: could not parse {cell!r}"
                ) from None

    grid = parsed[:, 0]
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid not strictly increasing")

    names = [h.strip() for h in header[1:]]
    weights = None
    func_cols, labels = [], []
    for k, name in enumerate(names):
        if name == WEIGHT_COLUMN:
            if weights is not None:
                raise ValueError(f"duplicate {WEIGHT_COLUMN} column")
            weights = parsed[:, k + 1]
        else:
            func_cols.append(k + 1)
            labels.append(name)
    if not func_cols:
        raise ValueError("no function columns found")
    values = parsed[:, func_cols].T.copy()
    return FunctionalSample(grid=grid, values=values, weights=weights, labels=labels)


def save_sample(sample: FunctionalSample, dest) -> None:
    """Write a sample as CSV, inverse of :func:`load_sample`.

    Floats are written with ``repr`` (shortest round-trip form), so a
    save/load cycle reproduces grid and values bit-exactly.
    """
    labels = sample.function_labels()
    header = ["t"] + labels
    if sample.weights is not None:
        header.append(WEIGHT_COLUMN)
    lines = [",".join(header)]
    for j in range(sample.n_points):
        cells = [repr(float(sample.grid[j]))]
        cells += [repr(float(v)) for v in sample.values[:, j]]
        if sample.weights is not None:
            cells.append(repr(float(sample.weights[j])))
        lines.append(",".join(cells))
    payload = "\n".join(lines) + "\n"
    if hasattr(dest, "write"):
        dest.write(payload)
    else:
        Path(dest).write_text(payload, encoding="utf-8")


def _read_text(source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    if isinstance(source, bytes):
        return source.decode("utf-8")
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data
