"""Gaussian-process simulation models and the outlier-detection benchmark.

Five generators on a shared grid: a baseline trend-plus-GP model and four
contaminated variants (symmetric shifts, partial shifts, short peaks, and
a shape-changed covariance), each tagging which curves were contaminated.
The benchmark scores boxplot outlier detection against those tags across
seeded replicates.

Randomness is counter-based: each (replicate, model) pair gets its own
Philox substream derived from the master seed, so results never depend on
execution order or worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .boxplot import DEPTH_METHODS, detect_outliers
from .sample import FunctionalSample

__all__ = [
    "ModelSpec",
    "LabeledSample",
    "BenchmarkRow",
    "BenchmarkReport",
    "gp_sample",
    "generate_model",
    "outlier_metrics",
    "run_benchmark",
]

# escalating diagonal jitter, as multiples of mean diagonal mass
_JITTER_LADDER = (1e-10, 1e-8, 1e-6)


@dataclass(frozen=True)
class ModelSpec:
    """Parameters of one simulation model.

    Defaults follow the benchmark setup: contamination probability 0.1,
    shift magnitude 6, peak width 0.08, and shape-model covariance
    8 * exp(-|t - s|^0.1).
    """

    id: int
    n: int = 100
    m: int = 50
    p: float = 0.1
    K: float = 6.0
    ell: float = 0.08
    cov_k: float = 8.0
    cov_mu: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.id not in (1, 2, 3, 4, 5):
            raise ValueError(f"model id must be 1..5, got {self.id}")
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"contamination probability {self.p} outside [0, 1]")
        if self.K < 0:
            raise ValueError("contamination magnitude K must be nonnegative")
        if not 0.0 < self.ell < 1.0:
            raise ValueError(f"peak width {self.ell} outside (0, 1)")
        if self.cov_k <= 0 or self.cov_mu <= 0:
            raise ValueError("covariance parameters must be positive")


@dataclass(frozen=True)
class LabeledSample:
    """A generated sample plus the truth tags of contaminated curves."""

    sample: FunctionalSample
    is_outlier: np.ndarray

    def __post_init__(self):
        tags = np.ascontiguousarray(self.is_outlier, dtype=bool)
        if tags.shape != (self.sample.n_functions,):
            raise ValueError("one outlier tag per sample curve required")
        tags.flags.writeable = False
        object.__setattr__(self, "is_outlier", tags)


@dataclass(frozen=True)
class BenchmarkRow:
    model: int
    method: str
    metric: str  # "p_c" or "p_f"
    mean: float | None
    se: float | None
    replicates: int


@dataclass(frozen=True)
class BenchmarkReport:
    rows: tuple[BenchmarkRow, ...]
    master_seed: int
    replicates: int

    def row(self, model: int, method: str, metric: str) -> BenchmarkRow:
        for r in self.rows:
            if (r.model, r.method, r.metric) == (model, method, metric):
                return r
        raise KeyError(f"no row for ({model}, {method}, {metric})")


def _factor_covariance(cov_matrix: np.ndarray) -> np.ndarray:
    """Lower-triangular square root, adding diagonal jitter if needed."""
    m = cov_matrix.shape[0]
    if not np.allclose(cov_matrix, cov_matrix.T, rtol=0.0, atol=1e-12):
        raise ValueError("covariance matrix is not symmetric")
    if np.all(cov_matrix == 0.0):
        return np.zeros_like(cov_matrix)
    scale = np.trace(cov_matrix) / m
    try:
        return np.linalg.cholesky(cov_matrix)
    except np.linalg.LinAlgError:
        pass
    for eps in _JITTER_LADDER:
        try:
            return np.linalg.cholesky(cov_matrix + eps * scale * np.eye(m))
        except np.linalg.LinAlgError:
            continue
    raise np.linalg.LinAlgError(
        f"covariance factorization failed after jitter up to "
        f"{_JITTER_LADDER[-1]:g} * trace/m"
    )


def _gp_paths(rng: np.random.Generator, chol: np.ndarray, mean: np.ndarray, n: int):
    z = rng.standard_normal((n, chol.shape[0]))
    return mean[None, :] + z @ chol.T


def gp_sample(grid, mean, cov, n: int, seed) -> FunctionalSample:
    """n independent Gaussian-process paths on the grid.

    Parameters
    ----------
    grid : array of m points in [0, 1]
    mean : array of m mean values
    cov : callable gamma(s, t), evaluated vectorized on the grid
    n : number of paths
    seed : int seed or a numpy Generator
    """
    grid = np.asarray(grid, dtype=np.float64)
    mean = np.asarray(mean, dtype=np.float64)
    if mean.shape != grid.shape:
        raise ValueError("mean must be evaluated on the grid")
    cov_matrix = np.asarray(
        cov(grid[:, None], grid[None, :]), dtype=np.float64
    )
    chol = _factor_covariance(cov_matrix)
    rng = seed if isinstance(seed, np.random.Generator) else _substream(seed)
    values = _gp_paths(rng, chol, mean, n)
    return FunctionalSample(grid=grid, values=values)


def _substream(master_seed: int, *key: int) -> np.random.Generator:
    """Philox stream for one (replicate, model) cell of the design."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))


def _baseline_cov(s, t):
    return np.exp(-np.abs(s - t))


def generate_model(spec: ModelSpec, replicate: int = 0) -> LabeledSample:
    """One replicate of a simulation model, with truth tags.

    Model 1 is the clean baseline 4t plus a GP with covariance
    exp(-|t - s|). Models 2-4 add c_i * sigma_i * K to the baseline curve
    everywhere, from a uniform start onward, or on a short window. Model 5
    replaces contaminated curves with paths from the shape-changed process
    cov_k * exp(-|t - s|^cov_mu). Tags are the Bernoulli(p) flags c_i,
    except Model 1 where nothing is contaminated.

    The draw order (paths, flags, signs, locations, replacement paths) is
    fixed, so every model consumes its substream identically.
    """
    rng = _substream(spec.seed, replicate, spec.id)
    grid = np.linspace(0.0, 1.0, spec.m)
    mean = 4.0 * grid
    cov_matrix = _baseline_cov(grid[:, None], grid[None, :])
    chol = _factor_covariance(cov_matrix)
    values = _gp_paths(rng, chol, mean, spec.n)

    flags = rng.random(spec.n) < spec.p
    signs = rng.integers(0, 2, size=spec.n) * 2.0 - 1.0
    starts = rng.random(spec.n)

    if spec.id == 1:
        tags = np.zeros(spec.n, dtype=bool)
    elif spec.id == 2:
        values = values + (flags * signs * spec.K)[:, None]
        tags = flags
    elif spec.id == 3:
        active = grid[None, :] >= starts[:, None]
        values = values + (flags * signs * spec.K)[:, None] * active
        tags = flags
    elif spec.id == 4:
        lo = starts * (1.0 - spec.ell)
        active = (grid[None, :] >= lo[:, None]) & (
            grid[None, :] <= (lo + spec.ell)[:, None]
        )
        values = values + (flags * signs * spec.K)[:, None] * active
        tags = flags
    else:
        d = np.abs(grid[:, None] - grid[None, :])
        shape_chol = _factor_covariance(spec.cov_k * np.exp(-(d ** spec.cov_mu)))
        shape_paths = _gp_paths(rng, shape_chol, mean, spec.n)
        values = np.where(flags[:, None], shape_paths, values)
        tags = flags

    sample = FunctionalSample(grid=grid, values=values)
    return LabeledSample(sample=sample, is_outlier=tags)


def outlier_metrics(truth, detected) -> tuple[float | None, float | None]:
    """(percent of true outliers found, percent of clean curves flagged).

    Either rate is None when its denominator is empty.
    """
    truth = np.asarray(truth, dtype=bool)
    n = truth.size
    detected = frozenset(int(i) for i in detected)
    if not all(0 <= i < n for i in detected):
        raise ValueError("detected index outside sample")
    true_set = {int(i) for i in np.flatnonzero(truth)}
    n_true = len(true_set)
    p_c = 100.0 * len(detected & true_set) / n_true if n_true else None
    n_clean = n - n_true
    p_f = 100.0 * len(detected - true_set) / n_clean if n_clean else None
    return p_c, p_f


def _score_replicate(spec: ModelSpec, replicate: int, methods):
    labeled = generate_model(spec, replicate)
    out = {}
    for method in methods:
        detected = detect_outliers(labeled.sample, method)
        out[method] = outlier_metrics(labeled.is_outlier, detected)
    return out


def _mean_se(values):
    present = [v for v in values if v is not None]
    if not present:
        return None, None
    mean = float(np.mean(present))
    se = float(np.std(present, ddof=1)) if len(present) > 1 else 0.0
    return mean, se


def run_benchmark(
    specs, methods=DEPTH_METHODS, replicates: int = 100, seed: int = 0, threads: int = 1
) -> BenchmarkReport:
    """Detection rates per (model, method) over seeded replicates.

    The master seed overrides each spec's own: one seed reproduces the
    whole table. Reported spread is the standard deviation of the
    per-replicate rates. Worker count never changes the result because
    every replicate draws from its own substream.
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    for method in methods:
        if method not in DEPTH_METHODS:
            raise ValueError(f"unknown depth method {method!r}")
    rows = []
    for spec in specs:
        seeded = replace(spec, seed=seed)
        jobs = range(replicates)
        if threads and threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(
                    pool.map(lambda r: _score_replicate(seeded, r, methods), jobs)
                )
        else:
            results = [_score_replicate(seeded, r, methods) for r in jobs]
        for method in methods:
            pc_values = [res[method][0] for res in results]
            pf_values = [res[method][1] for res in results]
            for metric, vals in (("p_c", pc_values), ("p_f", pf_values)):
                mean, se = _mean_se(vals)
                rows.append(
                    BenchmarkRow(
                        model=spec.id,
                        method=method,
                        metric=metric,
                        mean=mean,
                        se=se,
                        replicates=replicates,
                    )
                )
    return BenchmarkReport(
        rows=tuple(rows), master_seed=seed, replicates=replicates
    )
