"""Depth computations for functional data.

Pointwise depth of a curve g at a grid point is one minus the normalized
absolute difference between the counts of sample curves strictly below and
strictly above g there; ties raise depth. Collecting the pointwise depths
of g over the grid (with the grid-point weight measure) gives its depth
CDF. Curves are then ordered by left-tail comparison of depth CDFs: scan
depth levels upward and, at the first level where the cumulative masses
differ, the curve with more mass is the more extreme one. Extremal depth
is the fraction of sample curves a given curve weakly dominates under this
ordering. Integrated depth and modified band depth are provided as
averaging-style baselines.

All orderings use integer (or exact rational, under non-uniform weights)
arithmetic, so results are independent of the floating-point environment
and of evaluation order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .sample import FunctionalSample, as_query

__all__ = [
    "Ordering",
    "DepthProfile",
    "LevelCounts",
    "pointwise_depth",
    "depth_profile",
    "level_counts",
    "ed_compare",
    "extremal_depth",
    "rank_sample",
    "rank_level_counts",
    "ed_median",
    "integrated_depth",
    "modified_band_depth",
]


class Ordering(enum.Enum):
    """Outcome of comparing two depth CDFs.

    MORE_EXTREME means the first argument is more extreme (more depth-CDF
    mass at the first differing level); EQUIVALENT means the depth CDFs are
    identical.
    """

    MORE_EXTREME = "more_extreme"
    LESS_EXTREME = "less_extreme"
    EQUIVALENT = "equivalent"


@dataclass(frozen=True)
class DepthProfile:
    """Pointwise depths of one curve, held exactly as numerators over n.

    ``numerators[j] / n`` is the depth at grid point j. For a sample member
    with no value ties at a point, the numerator there is odd.
    """

    numerators: np.ndarray  # shape (m,), ints in 0..n
    n: int

    def levels(self) -> np.ndarray:
        """Depths as floats (lossy; prefer numerators for exact work)."""
        return self.numerators / self.n

    def as_fractions(self) -> list[Fraction]:
        return [Fraction(int(k), self.n) for k in self.numerators]

    def d_min(self) -> Fraction:
        """Minimum pointwise depth, the quantity an extremal median maximizes."""
        return Fraction(int(self.numerators.min()), self.n)


@dataclass(frozen=True)
class LevelCounts:
    """Depth-CDF of one curve as exact mass per depth level.

    ``counts[k]`` is the weight of grid points whose depth is exactly k/n:
    an integer count of points under uniform weights, an exact rational
    mass otherwise. Cumulative sums over k realize the depth CDF. All n+1
    levels are always allocated so that member and non-member depth CDFs
    live on a common level set.
    """

    n: int
    counts: tuple  # length n+1; ints or Fractions

    def __post_init__(self):
        if len(self.counts) != self.n + 1:
            raise ValueError(
                f"need {self.n + 1} level counts, got {len(self.counts)}"
            )

    def total(self):
        """Total mass (the number of grid points under uniform weights)."""
        return sum(self.counts)

    def cumulative(self) -> tuple:
        """Cumulative masses at levels 0/n, 1/n, ..., n/n."""
        out = []
        acc = 0
        for c in self.counts:
            acc = acc + c
            out.append(acc)
        return tuple(out)


# ---------------------------------------------------------------------------
# Pointwise counting kernels
# ---------------------------------------------------------------------------


def _column_sorted(values: np.ndarray) -> np.ndarray:
    """Each grid column sorted ascending; shared by all depth queries."""
    return np.sort(values, axis=0)


def _profile_numerators(sorted_cols: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Depth numerators of one query against pre-sorted columns."""
    n, m = sorted_cols.shape
    out = np.empty(m, dtype=np.int64)
    for j in range(m):
        lt = np.searchsorted(sorted_cols[:, j], g[j], side="left")
        le = np.searchsorted(sorted_cols[:, j], g[j], side="right")
        out[j] = n - abs(int(lt) - (n - int(le)))
    return out


def _member_numerators(values: np.ndarray) -> np.ndarray:
    """Depth numerators of every sample member, (n, m) ints."""
    n, m = values.shape
    out = np.empty((n, m), dtype=np.int64)
    for j in range(m):
        col = values[:, j]
        s = np.sort(col)
        lt = np.searchsorted(s, col, side="left")
        le = np.searchsorted(s, col, side="right")
        out[:, j] = n - np.abs(lt - (n - le))
    return out


def _counts_matrix(numerators: np.ndarray, n: int) -> np.ndarray:
    """Per-curve level counts under uniform weights, (rows, n+1) ints."""
    rows = numerators.shape[0]
    out = np.zeros((rows, n + 1), dtype=np.int64)
    for i in range(rows):
        out[i] = np.bincount(numerators[i], minlength=n + 1)
    return out


def _weighted_counts(numerators: np.ndarray, n: int, wfr: list[Fraction]) -> tuple:
    counts = [Fraction(0)] * (n + 1)
    for k, w in zip(numerators.tolist(), wfr):
        counts[k] += w
    return tuple(counts)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def pointwise_depth(sample: FunctionalSample, g, j: int) -> Fraction:
    """Depth of curve g at grid point j, exactly.

    Equals ``1 - |#below - #above| / n`` where #below and #above count
    sample curves strictly below/above g at the point; values tied with g
    count in neither.
    """
    g = as_query(sample, g)
    m = sample.n_points
    if not 0 <= j < m:
        raise IndexError(f"grid index {j} out of range for {m} points")
    col = sample.values[:, j]
    n = sample.n_functions
    lt = int(np.count_nonzero(col < g[j]))
    gt = int(np.count_nonzero(col > g[j]))
    return Fraction(n - abs(lt - gt), n)


def depth_profile(sample: FunctionalSample, g) -> DepthProfile:
    """Pointwise depth of g at every grid point."""
    g = as_query(sample, g)
    nums = _profile_numerators(_column_sorted(sample.values), g)
    return DepthProfile(numerators=nums, n=sample.n_functions)


def level_counts(sample: FunctionalSample, g) -> LevelCounts:
    """Depth-CDF of g as exact mass per level."""
    g = as_query(sample, g)
    profile = depth_profile(sample, g)
    return _level_counts_from_numerators(profile.numerators, sample)


def _level_counts_from_numerators(nums: np.ndarray, sample) -> LevelCounts:
    n = sample.n_functions
    wfr = sample.weight_fractions()
    if wfr is None:
        counts = tuple(int(c) for c in np.bincount(nums, minlength=n + 1))
    else:
        counts = _weighted_counts(nums, n, wfr)
    return LevelCounts(n=n, counts=counts)


def ed_compare(a: LevelCounts, b: LevelCounts) -> Ordering:
    """Left-tail comparison of two depth CDFs.

    Scans the common level set upward; at the first level where the
    cumulative masses differ, the larger mass is the more extreme curve.
    Identical counts are EQUIVALENT. Comparison is exact, never float.
    """
    if a.n != b.n:
        raise ValueError(f"mismatched sample sizes: {a.n} vs {b.n}")
    if a.total() != b.total():
        raise ValueError("level counts have different total mass")
    ca, cb = a.cumulative(), b.cumulative()
    for x, y in zip(ca, cb):
        if x != y:
            return Ordering.MORE_EXTREME if x > y else Ordering.LESS_EXTREME
    return Ordering.EQUIVALENT


def extremal_depth(sample: FunctionalSample, g) -> Fraction:
    """Extremal depth of g: the fraction of sample curves g weakly dominates.

    For a member of the sample this equals its normalized rank under the
    left-tail ordering.
    """
    g = as_query(sample, g)
    n = sample.n_functions
    member_nums = _member_numerators(sample.values)
    g_nums = _profile_numerators(_column_sorted(sample.values), g)
    wfr = sample.weight_fractions()
    if wfr is None:
        cm = np.cumsum(_counts_matrix(member_nums, n), axis=1)
        cg = np.cumsum(np.bincount(g_nums, minlength=n + 1))
        diff = cm - cg[None, :]
        nonzero = diff != 0
        first = np.argmax(nonzero, axis=1)
        has_diff = nonzero.any(axis=1)
        # g weakly dominates f_i when f_i is more extreme or the CDFs agree.
        more_extreme = diff[np.arange(n), first] > 0
        count = int(np.count_nonzero(~has_diff | more_extreme))
        return Fraction(count, n)
    g_lc = LevelCounts(n=n, counts=_weighted_counts(g_nums, n, wfr))
    count = 0
    for i in range(n):
        lc = LevelCounts(n=n, counts=_weighted_counts(member_nums[i], n, wfr))
        if ed_compare(g_lc, lc) in (Ordering.LESS_EXTREME, Ordering.EQUIVALENT):
            count += 1
    return Fraction(count, n)


def rank_level_counts(
    counts: Sequence[LevelCounts],
) -> tuple[np.ndarray, list[Fraction]]:
    """Order depth CDFs from most extreme to deepest.

    Returns ``(order, ed)``: ``order`` is a permutation of 0..n-1, most
    extreme first, ties broken by original index ascending; ``ed[i]`` is
    the extremal depth of curve i (members of an equivalence class share
    one value, the count of curves they weakly dominate over n).
    """
    n = len(counts)
    if n == 0:
        raise ValueError("empty collection")
    ref = counts[0]
    for lc in counts[1:]:
        if lc.n != ref.n or lc.total() != ref.total():
            raise ValueError("level counts are not mutually comparable")
    cum = [lc.cumulative() for lc in counts]
    order = sorted(range(n), key=lambda i: tuple(-c for c in cum[i]))
    ed = _group_ed(np.asarray(order), lambda i, k: cum[i] == cum[k], n)
    return np.asarray(order, dtype=np.intp), ed


def _group_ed(order: np.ndarray, same, n: int) -> list[Fraction]:
    """Extremal depths from a most-extreme-first order and an equality test."""
    ed: list[Fraction] = [Fraction(0)] * n
    start = 0
    for pos in range(1, n + 1):
        if pos == n or not same(order[pos], order[start]):
            val = Fraction(pos, n)  # group ends at 1-based position `pos`
            for p in range(start, pos):
                ed[order[p]] = val
            start = pos
    return ed


def _rank_uniform(values: np.ndarray) -> tuple[np.ndarray, list[Fraction]]:
    """Vectorized ranking under uniform weights via cumulative count rows."""
    n = values.shape[0]
    nums = _member_numerators(values)
    cm = np.cumsum(_counts_matrix(nums, n), axis=1)
    # Descending lexicographic sort of cumulative rows = most extreme first;
    # lexsort is stable, so full ties keep ascending index order.
    order = np.lexsort(np.flipud((-cm).T))
    rows = cm[order]
    same_as_prev = np.zeros(n, dtype=bool)
    if n > 1:
        same_as_prev[1:] = np.all(rows[1:] == rows[:-1], axis=1)
    ed: list[Fraction] = [Fraction(0)] * n
    start = 0
    for pos in range(1, n + 1):
        if pos == n or not same_as_prev[pos]:
            val = Fraction(pos, n)
            for p in range(start, pos):
                ed[order[p]] = val
            start = pos
    return order, ed


def rank_sample(sample: FunctionalSample) -> tuple[np.ndarray, list[Fraction]]:
    """Rank all sample curves from most extreme to deepest.

    Returns ``(order, ed)`` as in :func:`rank_level_counts`. The fast path
    sorts cumulative level-count rows lexicographically; a direct
    pairwise-comparison recount is kept in the test suite as the oracle.
    """
    if sample.weights is None:
        return _rank_uniform(sample.values)
    nums = _member_numerators(sample.values)
    wfr = sample.weight_fractions()
    n = sample.n_functions
    lcs = [
        LevelCounts(n=n, counts=_weighted_counts(nums[i], n, wfr))
        for i in range(n)
    ]
    return rank_level_counts(lcs)


def ed_median(sample: FunctionalSample) -> list[int]:
    """Indices of the deepest curves (maximal extremal depth), ascending.

    Every returned curve also maximizes the minimum pointwise depth over
    the grid.
    """
    _, ed = rank_sample(sample)
    top = max(ed)
    return [i for i, v in enumerate(ed) if v == top]


def integrated_depth(sample: FunctionalSample, g) -> float:
    """Weighted mean of the pointwise depth profile of g.

    Uses the same strict-inequality pointwise depth as the extremal
    ordering, so ties raise depth here too.
    """
    g = as_query(sample, g)
    profile = depth_profile(sample, g)
    w = sample.point_weights()
    return float(np.dot(w, profile.numerators) / sample.n_functions)


def modified_band_depth(sample: FunctionalSample, g) -> float:
    """Average band coverage of g over all unordered pairs of sample curves.

    For each pair (i, k), the weighted proportion of grid points where g
    lies inside [min(f_i, f_k), max(f_i, f_k)] (inclusive); averaged over
    all C(n, 2) pairs. Implemented by counting, per grid point, the pairs
    that do not lie entirely on one side of g; the pair-loop recount is the
    test oracle.
    """
    g = as_query(sample, g)
    n = sample.n_functions
    if n < 2:
        raise ValueError("modified band depth needs at least 2 sample functions")
    values = sample.values
    lt = np.count_nonzero(values < g[None, :], axis=0).astype(np.int64)
    gt = np.count_nonzero(values > g[None, :], axis=0).astype(np.int64)
    total = n * (n - 1) // 2
    covered = total - lt * (lt - 1) // 2 - gt * (gt - 1) // 2
    w = sample.point_weights()
    return float(np.dot(w, covered) / total)
