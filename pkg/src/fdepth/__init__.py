"""Functional data depth toolkit.

Extremal depth ordering of curves with exact arithmetic, central regions
with guaranteed coverage, functional boxplots and outlier detection,
Gaussian-process simulation benchmarks, and bootstrap simultaneous
confidence bands for regression.
"""

from .sample import (
    FunctionalSample,
    check_sample_arrays,
    load_sample,
    save_sample,
    validate_sample,
)
from .depth import (
    DepthProfile,
    LevelCounts,
    Ordering,
    depth_profile,
    ed_compare,
    ed_median,
    extremal_depth,
    integrated_depth,
    level_counts,
    modified_band_depth,
    pointwise_depth,
    rank_level_counts,
    rank_sample,
)
from .regions import (
    Envelope,
    WidthDiagnostic,
    central_region,
    pointwise_region,
    width_diagnostic,
)
from .boxplot import (
    DEPTH_METHODS,
    FBoxplot,
    detect_outliers,
    functional_boxplot,
)
from .simulate import (
    BenchmarkReport,
    BenchmarkRow,
    LabeledSample,
    ModelSpec,
    generate_model,
    run_benchmark,
)
from .bands import (
    BAND_METHODS,
    Band,
    ExperimentConfig,
    ExperimentReport,
    FitResult,
    PivotalSample,
    ed_band,
    fit_poly,
    k_band,
    level_power_experiment,
    poly_alternative,
    predict,
    residual_bootstrap,
    scheffe_band,
)

__version__ = "0.1.0"

__all__ = [
    "FunctionalSample",
    "check_sample_arrays",
    "load_sample",
    "save_sample",
    "validate_sample",
    "DepthProfile",
    "LevelCounts",
    "Ordering",
    "depth_profile",
    "ed_compare",
    "ed_median",
    "extremal_depth",
    "integrated_depth",
    "level_counts",
    "modified_band_depth",
    "pointwise_depth",
    "rank_level_counts",
    "rank_sample",
    "Envelope",
    "WidthDiagnostic",
    "central_region",
    "pointwise_region",
    "width_diagnostic",
    "DEPTH_METHODS",
    "FBoxplot",
    "detect_outliers",
    "functional_boxplot",
    "BenchmarkReport",
    "BenchmarkRow",
    "LabeledSample",
    "ModelSpec",
    "generate_model",
    "run_benchmark",
    "BAND_METHODS",
    "Band",
    "ExperimentConfig",
    "ExperimentReport",
    "FitResult",
    "PivotalSample",
    "ed_band",
    "fit_poly",
    "k_band",
    "level_power_experiment",
    "poly_alternative",
    "predict",
    "residual_bootstrap",
    "scheffe_band",
    "__version__",
]
