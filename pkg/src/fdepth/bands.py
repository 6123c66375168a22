"""Simultaneous confidence bands for linear-basis regression.

Three constructions around one ordinary least squares fit: a band from the
extremal-depth central region of residual-bootstrap pivotal functions, the
classical Scheffe band, and a constant-width band from the bootstrap
sup-norm statistic. A level/power experiment compares them on a degree-5
polynomial truth against named alternative mean functions.

Bootstrap draws are counter-based (one Philox substream per bootstrap
index), so bands are reproducible and independent of evaluation order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .regions import central_region, exact_level
from .sample import FunctionalSample

__all__ = [
    "FitResult",
    "PivotalSample",
    "Band",
    "ExperimentRow",
    "ExperimentReport",
    "poly_alternative",
    "TABLE2_TRUTH",
    "TABLE2_ALTERNATIVES",
    "fit_poly",
    "predict",
    "residual_bootstrap",
    "ed_band",
    "scheffe_band",
    "k_band",
    "ExperimentConfig",
    "level_power_experiment",
]

# consecutive degenerate-refit retries before giving up
_MAX_DEGENERATE_RETRIES = 100


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of y on a fixed basis of the covariate.

    ``basis`` holds the non-intercept basis functions; None means the
    monomials x, x^2, ..., x^degree. ``s_hat`` is the residual standard
    error with n - degree - 1 degrees of freedom.
    """

    x: np.ndarray
    y: np.ndarray
    degree: int
    theta_hat: np.ndarray
    residuals: np.ndarray
    s_hat: float
    basis: tuple | None = None

    @property
    def n_obs(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class PivotalSample:
    """Bootstrap pivotal functions on an evaluation grid.

    Row j is the j-th refit's mean curve, centered at the original fit and
    scaled by that refit's residual standard error.
    """

    eval_grid: np.ndarray
    functions: np.ndarray
    B: int
    retried: int = 0

    def __post_init__(self):
        if self.B < 2:
            raise ValueError("need at least 2 bootstrap functions")
        if self.functions.shape != (self.B, self.eval_grid.size):
            raise ValueError("functions must be B rows over the eval grid")
        if not np.all(np.isfinite(self.functions)):
            raise ValueError("pivotal functions contain non-finite values")


@dataclass(frozen=True)
class Band:
    """One simultaneous confidence band on an evaluation grid."""

    eval_grid: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    mu_hat: np.ndarray
    method: str  # "ED", "Scheffe", or "K"
    level: float

    def __post_init__(self):
        if np.any(self.lower > self.upper):
            raise ValueError("band has lower > upper")

    def contains(self, f: np.ndarray) -> bool:
        """True when f stays inside the band at every evaluation point."""
        f = np.asarray(f, dtype=np.float64)
        return bool(np.all((f >= self.lower) & (f <= self.upper)))


def _design(x: np.ndarray, degree: int, basis) -> np.ndarray:
    cols = [np.ones_like(x)]
    if basis is None:
        for k in range(1, degree + 1):
            cols.append(x**k)
    else:
        for phi in basis:
            cols.append(np.asarray(phi(x), dtype=np.float64))
    return np.column_stack(cols)


def fit_poly(x, y, q: int, basis=None) -> FitResult:
    """Ordinary least squares on the degree-q monomial (or given) basis.

    With a custom basis, q is implied by its length and the q argument
    must agree.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be equal-length vectors")
    if basis is not None:
        basis = tuple(basis)
        if len(basis) != q:
            raise ValueError(f"basis has {len(basis)} functions but q = {q}")
    n = x.size
    if n <= q + 1:
        raise ValueError(f"need more than {q + 1} observations, got {n}")
    X = _design(x, q, basis)
    theta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < q + 1:
        raise np.linalg.LinAlgError(
            f"design matrix rank {rank} < {q + 1}; basis is degenerate on x"
        )
    residuals = y - X @ theta
    rss = float(residuals @ residuals)
    s_hat = math.sqrt(rss / (n - q - 1))
    return FitResult(
        x=x,
        y=y,
        degree=q,
        theta_hat=theta,
        residuals=residuals,
        s_hat=s_hat,
        basis=basis,
    )


def predict(fit: FitResult, xnew) -> np.ndarray:
    """Fitted mean curve at new covariate values."""
    xnew = np.asarray(xnew, dtype=np.float64)
    return _design(xnew, fit.degree, fit.basis) @ fit.theta_hat


def _bootstrap_rng(seed: int, j: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(j,))
    return np.random.Generator(np.random.Philox(ss))


def residual_bootstrap(fit: FitResult, B: int, eval_grid, seed: int) -> PivotalSample:
    """B pivotal functions from resampled-residual refits.

    Each bootstrap index j has its own substream: resample the residuals
    with replacement, refit on the same design, and record the refit mean
    curve centered at the original fit and scaled by the refit residual
    SE. A refit whose residual SE is zero (up to the rounding noise of
    the solve) is discarded and redrawn from the same substream; more
    than 100 consecutive discards abort.
    """
    if B < 2:
        raise ValueError("B must be at least 2")
    eval_grid = np.asarray(eval_grid, dtype=np.float64)
    n, q = fit.n_obs, fit.degree
    X = _design(fit.x, q, fit.basis)
    Q, R = np.linalg.qr(X)
    fitted = X @ fit.theta_hat
    H_eval = _design(eval_grid, q, fit.basis)
    mu_hat = H_eval @ fit.theta_hat
    out = np.empty((B, eval_grid.size))
    retried = 0
    for j in range(B):
        rng = _bootstrap_rng(seed, j)
        failures = 0
        while True:
            idx = rng.integers(0, n, size=n)
            y_star = fitted + fit.residuals[idx]
            theta_star = np.linalg.solve(R, Q.T @ y_star)
            resid_star = y_star - X @ theta_star
            rss = float(resid_star @ resid_star)
            s_star = math.sqrt(rss / (n - q - 1))
            # a refit spread at the rounding noise of the solve is zero in
            # all but floating-point accident
            floor = 1e-12 * max(1.0, float(np.max(np.abs(y_star))))
            if s_star > floor:
                break
            failures += 1
            retried += 1
            if failures >= _MAX_DEGENERATE_RETRIES:
                raise RuntimeError(
                    f"bootstrap refit degenerate {failures} times in a row "
                    f"(all resampled residuals identical)"
                )
        out[j] = (H_eval @ theta_star - mu_hat) / s_star
    return PivotalSample(eval_grid=eval_grid, functions=out, B=B, retried=retried)


def _unit_grid(eval_grid: np.ndarray) -> np.ndarray:
    """Eval grid mapped affinely onto [0, 1] for depth bookkeeping."""
    lo, hi = eval_grid[0], eval_grid[-1]
    if lo == hi:
        return np.array([0.5])
    return (eval_grid - lo) / (hi - lo)


def ed_band(fit: FitResult, piv: PivotalSample, alpha: float) -> Band:
    """Band from the extremal-depth central region of the pivotal sample.

    The deepest pivotal functions (depth above alpha) form an envelope
    [f_L, f_U]; the band is mu_hat + s_hat * [f_L, f_U].
    """
    sample = FunctionalSample(
        grid=_unit_grid(piv.eval_grid), values=piv.functions
    )
    env = central_region(sample, alpha)
    mu_hat = predict(fit, piv.eval_grid)
    return Band(
        eval_grid=piv.eval_grid,
        lower=mu_hat + fit.s_hat * env.lower,
        upper=mu_hat + fit.s_hat * env.upper,
        mu_hat=mu_hat,
        method="ED",
        level=float(1 - exact_level(alpha)),
    )


def scheffe_band(fit: FitResult, alpha: float, eval_grid) -> Band:
    """Classical normal-theory simultaneous band.

    Half-width at x is sqrt((q+1) F_{q+1, n-q-1}(1-alpha)) * s_hat *
    sqrt(h(x)' (X'X)^{-1} h(x)).
    """
    level = exact_level(alpha)
    if not 0 < level < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    eval_grid = np.asarray(eval_grid, dtype=np.float64)
    n, q = fit.n_obs, fit.degree
    X = _design(fit.x, q, fit.basis)
    H_eval = _design(eval_grid, q, fit.basis)
    chol = np.linalg.cholesky(X.T @ X)
    half_solve = np.linalg.solve(chol, H_eval.T)
    leverage = np.sum(half_solve**2, axis=0)
    crit = math.sqrt((q + 1) * stats.f.ppf(1.0 - float(level), q + 1, n - q - 1))
    half = crit * fit.s_hat * np.sqrt(leverage)
    mu_hat = H_eval @ fit.theta_hat
    return Band(
        eval_grid=eval_grid,
        lower=mu_hat - half,
        upper=mu_hat + half,
        mu_hat=mu_hat,
        method="Scheffe",
        level=float(1 - level),
    )


def k_band(fit: FitResult, piv: PivotalSample, alpha: float) -> Band:
    """Constant-width band from the bootstrap sup-norm statistic.

    The half-width is s_hat times the empirical (1 - alpha) quantile
    (order statistic at rank ceil((1 - alpha) B)) of the per-function
    sup-norms of the pivotal sample.
    """
    level = exact_level(alpha)
    if not 0 < level < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    sup_norms = np.max(np.abs(piv.functions), axis=1)
    rank = math.ceil((1 - level) * piv.B)
    c = float(np.sort(sup_norms)[rank - 1])
    mu_hat = predict(fit, piv.eval_grid)
    half = fit.s_hat * c
    return Band(
        eval_grid=piv.eval_grid,
        lower=mu_hat - half,
        upper=mu_hat + half,
        mu_hat=mu_hat,
        method="K",
        level=float(1 - level),
    )


# ---------------------------------------------------------------------------
# Level/power experiment
# ---------------------------------------------------------------------------


def poly_alternative(k: int):
    """S-shaped polynomial of degree k with unit absolute integral.

    Odd k gives (k+1) 2^k (x - 1/2)^k directly; even k needs the sign
    factor to keep the S shape.
    """
    c = (k + 1) * (2**k)

    def p(x):
        x = np.asarray(x, dtype=np.float64)
        u = x - 0.5
        if k % 2 == 1:
            return c * u**k
        return c * np.sign(u) * u**k

    return p


_P5 = poly_alternative(5)

TABLE2_TRUTH = ("P_5", _P5)

TABLE2_ALTERNATIVES = (
    ("P_4", poly_alternative(4)),
    ("P_6", poly_alternative(6)),
    ("0.2+P_5", lambda x: 0.2 + _P5(x)),
    ("0.2+0.2x+P_5", lambda x: 0.2 + 0.2 * np.asarray(x) + _P5(x)),
    (
        "0.2*sign(x-0.5)+P_5",
        lambda x: 0.2 * np.sign(np.asarray(x) - 0.5) + _P5(x),
    ),
)

BAND_METHODS = ("Scheffe", "K", "ED")


@dataclass(frozen=True)
class ExperimentConfig:
    """Setup of the band level/power experiment."""

    n: int = 100
    q: int = 5
    sd: float = 5.0
    B: int = 2000
    replicates: int = 100
    alpha: float = 0.1
    eval_points: int = 201
    seed: int = 0
    truth: tuple = TABLE2_TRUTH
    alternatives: tuple = field(default=TABLE2_ALTERNATIVES)

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.n <= self.q + 1:
            raise ValueError("n must exceed q + 1")
        if self.sd <= 0:
            raise ValueError("sd must be positive")


@dataclass(frozen=True)
class ExperimentRow:
    truth_or_alt: str
    method: str
    rate: float
    replicates: int


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple[ExperimentRow, ...]
    master_seed: int
    replicates: int

    def rate(self, truth_or_alt: str, method: str) -> float:
        for r in self.rows:
            if (r.truth_or_alt, r.method) == (truth_or_alt, method):
                return r.rate
        raise KeyError(f"no row for ({truth_or_alt!r}, {method!r})")


def _replicate_rejections(config: ExperimentConfig, rep: int, eval_grid, targets):
    """Rejection flags {(name, method): bool} for one replicate's bands."""
    truth_fn = config.truth[1]
    data_rng = np.random.Generator(
        np.random.Philox(np.random.SeedSequence(config.seed, spawn_key=(rep, 0)))
    )
    x = data_rng.uniform(0.0, 1.0, size=config.n)
    y = truth_fn(x) + config.sd * data_rng.standard_normal(config.n)
    fit = fit_poly(x, y, config.q)
    boot_seed = int(
        np.random.SeedSequence(config.seed, spawn_key=(rep, 1)).generate_state(1)[0]
    )
    piv = residual_bootstrap(fit, config.B, eval_grid, boot_seed)
    bands = {
        "Scheffe": scheffe_band(fit, config.alpha, eval_grid),
        "K": k_band(fit, piv, config.alpha),
        "ED": ed_band(fit, piv, config.alpha),
    }
    flags = {}
    for name, fn in targets:
        f = fn(eval_grid)
        for method, band in bands.items():
            flags[(name, method)] = not band.contains(f)
    return flags


def level_power_experiment(
    config: ExperimentConfig, threads: int = 1
) -> ExperimentReport:
    """Rejection rates of each band against the truth and each alternative.

    All bands are built from data generated under the truth; the level row
    is the truth's own rejection rate and the power rows are the rates at
    which the same bands exclude each alternative mean function.
    """
    eval_grid = np.linspace(0.0, 1.0, config.eval_points)
    targets = (config.truth,) + tuple(config.alternatives)
    reps = range(config.replicates)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_rep = list(
                pool.map(
                    lambda r: _replicate_rejections(config, r, eval_grid, targets),
                    reps,
                )
            )
    else:
        per_rep = [
            _replicate_rejections(config, r, eval_grid, targets) for r in reps
        ]
    rows = []
    for name, _ in targets:
        for method in BAND_METHODS:
            rate = float(
                np.mean([flags[(name, method)] for flags in per_rep])
            )
            rows.append(
                ExperimentRow(
                    truth_or_alt=name,
                    method=method,
                    rate=rate,
                    replicates=config.replicates,
                )
            )
    return ExperimentReport(
        rows=tuple(rows), master_seed=config.seed, replicates=config.replicates
    )
