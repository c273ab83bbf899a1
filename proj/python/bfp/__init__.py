"""Bankruptcy prediction from financial ratios with logistic regression."""

from ._core import (
    BfpError,
    FittedModel,
    InferenceRow,
    class_metrics,
    confusion_matrix,
    correlation_matrix,
    describe,
    fit,
    load_model,
    load_ratios,
    normal_cdf,
    normal_quantile,
    roc_curve,
    run_pipeline,
    select,
    split_indices,
    wald_row,
)

__all__ = [
    "BfpError",
    "FittedModel",
    "InferenceRow",
    "class_metrics",
    "confusion_matrix",
    "correlation_matrix",
    "describe",
    "fit",
    "load_model",
    "load_ratios",
    "normal_cdf",
    "normal_quantile",
    "roc_curve",
    "run_pipeline",
    "select",
    "split_indices",
    "wald_row",
]
