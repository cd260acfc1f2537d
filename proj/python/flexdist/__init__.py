"""Flexible univariate distributions: skew-symmetric, transformation and two-piece families."""

from ._core import (
    Distribution,
    NumericalFailure,
    Unsupported,
    ag_skewness,
    families,
    fit,
    fit_gh_quantile,
    fit_penalized_skew_normal,
    gh,
    k_transform,
    log_likelihood,
    logistic,
    lr_test,
    moment,
    normal,
    quantile_kurtosis,
    sas,
    scale_transformed,
    sfa_demo,
    skew_normal,
    skew_t,
    student_t,
    two_piece,
)

__all__ = [
    "Distribution",
    "NumericalFailure",
    "Unsupported",
    "ag_skewness",
    "families",
    "fit",
    "fit_gh_quantile",
    "fit_penalized_skew_normal",
    "gh",
    "k_transform",
    "log_likelihood",
    "logistic",
    "lr_test",
    "moment",
    "normal",
    "quantile_kurtosis",
    "sas",
    "scale_transformed",
    "sfa_demo",
    "skew_normal",
    "skew_t",
    "student_t",
    "two_piece",
]
