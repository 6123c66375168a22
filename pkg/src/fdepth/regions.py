"""Central regions, pointwise quantile regions, coverage, and width diagnostics.

A central region at level 1 - alpha is the hull of all sample curves whose
extremal depth exceeds alpha; because depth values are exact rationals the
membership rule is reproducible down to the last tie. Its empirical
coverage is never below 1 - alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .depth import rank_sample
from .sample import FunctionalSample

__all__ = [
    "Envelope",
    "WidthDiagnostic",
    "exact_level",
    "central_region",
    "pointwise_region",
    "coverage",
    "width_diagnostic",
]


def exact_level(level) -> Fraction:
    """A level parameter as the exact decimal number the caller wrote.

    Floats are read through their shortest decimal representation, so a
    threshold of 0.3 really is 3/10 and a curve with depth exactly 3/10
    is not strictly above it. Pass a Fraction to control the value fully.
    """
    if isinstance(level, Fraction):
        return level
    if isinstance(level, int):
        return Fraction(level)
    return Fraction(str(float(level)))


@dataclass(frozen=True)
class Envelope:
    """Lower/upper boundary functions of a region, with the defining members.

    ``lower`` and ``upper`` are the pointwise min and max over the member
    curves (no interpolation, no inflation). ``alpha`` records the level
    parameter the region was built with.
    """

    lower: np.ndarray
    upper: np.ndarray
    members: frozenset[int]
    alpha: float

    def __post_init__(self):
        lower = np.ascontiguousarray(self.lower, dtype=np.float64)
        upper = np.ascontiguousarray(self.upper, dtype=np.float64)
        if lower.shape != upper.shape:
            raise ValueError("lower and upper differ in length")
        if np.any(lower > upper):
            raise ValueError("envelope has lower > upper")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "members", frozenset(int(i) for i in self.members))

    @property
    def n_points(self) -> int:
        return self.lower.size

    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, values: np.ndarray) -> np.ndarray:
        """Row mask: curve lies inside the envelope at every point."""
        values = np.atleast_2d(np.asarray(values, dtype=np.float64))
        if values.shape[1] != self.n_points:
            raise ValueError(
                f"curves have {values.shape[1]} points, envelope has {self.n_points}"
            )
        return np.all(
            (values >= self.lower[None, :]) & (values <= self.upper[None, :]),
            axis=1,
        )


@dataclass(frozen=True)
class WidthDiagnostic:
    """Per-grid-point region width next to the pointwise sample SD."""

    t: np.ndarray
    width: np.ndarray
    sd: np.ndarray


def _hull(values: np.ndarray, members, alpha: float) -> Envelope:
    rows = values[sorted(members), :]
    return Envelope(
        lower=rows.min(axis=0),
        upper=rows.max(axis=0),
        members=frozenset(members),
        alpha=float(alpha),
    )


def central_region(sample: FunctionalSample, alpha: float) -> Envelope:
    """Hull of all sample curves with extremal depth strictly above alpha.

    With depth values k/n and no equivalence ties, the member count is
    n - floor(alpha * n), which makes the empirical coverage at least
    1 - alpha (and exactly ceil((1 - alpha) * n) / n when no other curve
    happens to fall inside the hull).
    """
    level = exact_level(alpha)
    if not 0 <= level < 1:
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    _, ed = rank_sample(sample)
    members = [i for i, v in enumerate(ed) if v > level]
    if not members:
        raise ValueError(
            f"no sample function has extremal depth above {alpha} "
            f"(max is {max(ed)})"
        )
    return _hull(sample.values, members, float(level))


def _quantile_rank(eta: Fraction, n: int) -> int:
    """0-based order-statistic index: smallest value with empirical CDF >= eta.

    Computed in exact arithmetic so eta * n never rounds past an integer
    boundary.
    """
    rank = math.ceil(eta * n)
    return min(max(rank, 1), n) - 1


def pointwise_region(sample: FunctionalSample, gamma: float) -> Envelope:
    """Band between the gamma/2 and 1 - gamma/2 pointwise sample quantiles.

    Unlike a central region, membership here is a consequence: members are
    the curves that happen to lie inside the band everywhere.
    """
    level = exact_level(gamma)
    if not 0 < level < 1:
        raise ValueError(f"gamma must be in (0, 1), got {gamma}")
    n = sample.n_functions
    if n < 2:
        raise ValueError("pointwise region needs at least 2 sample functions")
    sorted_cols = np.sort(sample.values, axis=0)
    lower = sorted_cols[_quantile_rank(level / 2, n), :]
    upper = sorted_cols[_quantile_rank(1 - level / 2, n), :]
    env = Envelope(
        lower=lower, upper=upper, members=frozenset(), alpha=float(gamma)
    )
    inside = env.contains(sample.values)
    return Envelope(
        lower=lower,
        upper=upper,
        members=frozenset(int(i) for i in np.flatnonzero(inside)),
        alpha=float(gamma),
    )


def coverage(sample: FunctionalSample, env: Envelope) -> float:
    """Fraction of sample curves lying inside the envelope at every point."""
    if env.n_points != sample.n_points:
        raise ValueError(
            f"envelope has {env.n_points} points, sample has {sample.n_points}"
        )
    inside = env.contains(sample.values)
    return float(np.count_nonzero(inside)) / sample.n_functions


def width_diagnostic(sample: FunctionalSample, env: Envelope) -> WidthDiagnostic:
    """Region width against pointwise sample SD (divisor n - 1), per grid point."""
    if sample.n_functions < 2:
        raise ValueError("width diagnostic needs at least 2 sample functions")
    if env.n_points != sample.n_points:
        raise ValueError(
            f"envelope has {env.n_points} points, sample has {sample.n_points}"
        )
    sd = sample.values.std(axis=0, ddof=1)
    return WidthDiagnostic(t=sample.grid.copy(), width=env.width(), sd=sd)
