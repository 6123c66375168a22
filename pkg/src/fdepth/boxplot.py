"""Functional boxplots and fence-based outlier detection.

The box is the hull of the deepest half of the sample under a chosen
functional depth. Fences sit 1.5 times the box's pointwise range beyond
it, and any curve that escapes the fences at even one grid point is
flagged. Depth choices: the extremal ordering (ED) or the averaging
baselines ID and MBD.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .depth import integrated_depth, modified_band_depth, rank_sample
from .regions import Envelope
from .sample import FunctionalSample

__all__ = ["FBoxplot", "DEPTH_METHODS", "functional_boxplot", "detect_outliers"]

DEPTH_METHODS = ("ED", "ID", "MBD")

FENCE_FACTOR = 1.5


@dataclass(frozen=True)
class FBoxplot:
    """Boxplot layers for one sample under one depth method."""

    median_index: int
    box: Envelope
    fence_lower: np.ndarray
    fence_upper: np.ndarray
    outliers: frozenset[int]
    depth_method: str


def _depth_scores(sample: FunctionalSample, method: str):
    """Per-curve depth, larger = deeper; exact rationals for ED."""
    n = sample.n_functions
    if method == "ED":
        _, ed = rank_sample(sample)
        return ed
    if method == "ID":
        return [integrated_depth(sample, sample.values[i]) for i in range(n)]
    if method == "MBD":
        return [modified_band_depth(sample, sample.values[i]) for i in range(n)]
    raise ValueError(f"unknown depth method {method!r}; choose from {DEPTH_METHODS}")


def functional_boxplot(sample: FunctionalSample, method: str = "ED") -> FBoxplot:
    """Build the boxplot: box, fences, flagged curves, and the median curve.

    The box holds the deepest ceil(n/2) curves (ties broken by original
    index); the median is the single deepest curve under the same
    tie-break.
    """
    n = sample.n_functions
    if n < 4:
        raise ValueError(f"functional boxplot needs at least 4 curves, got {n}")
    scores = _depth_scores(sample, method)
    deepest_first = sorted(range(n), key=lambda i: (-scores[i], i))
    half = deepest_first[: math.ceil(n / 2)]
    rows = sample.values[sorted(half), :]
    box = Envelope(
        lower=rows.min(axis=0),
        upper=rows.max(axis=0),
        members=frozenset(half),
        alpha=0.5,
    )
    span = box.upper - box.lower
    fence_lower = box.lower - FENCE_FACTOR * span
    fence_upper = box.upper + FENCE_FACTOR * span
    escapes = np.any(
        (sample.values < fence_lower[None, :])
        | (sample.values > fence_upper[None, :]),
        axis=1,
    )
    return FBoxplot(
        median_index=deepest_first[0],
        box=box,
        fence_lower=fence_lower,
        fence_upper=fence_upper,
        outliers=frozenset(int(i) for i in np.flatnonzero(escapes)),
        depth_method=method,
    )


def detect_outliers(sample: FunctionalSample, method: str = "ED") -> frozenset[int]:
    """Indices of curves escaping the boxplot fences somewhere."""
    return functional_boxplot(sample, method).outliers
