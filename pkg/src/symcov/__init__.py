"""Symbolic covariance and correlation matrices for interval-valued data.

Interval cells are (center, range) pairs; eight covariance/correlation
definitions, micro-data generative models, latent-weight recovery, and
distribution-fit-based model selection are provided, plus a CLI
(``symcov``) wiring them to CSV/JSON files.
"""

from .algebra import AffineSpec, add, affine, lincomb2, sub
from .errors import FormatError, InfeasibleError
from .intervals import (
    Interval,
    IntervalDataset,
    MicroTable,
    aggregate_microdata,
    interval_from_limits,
    to_limits,
    validate_dataset,
)
from .microdata import (
    WeightFamily,
    WeightModel,
    WeightTable,
    covariance_kind,
    derive_rng,
    draw_weights,
    model_variance,
    recover_weights,
    sample_weight,
    simulate_macrodata,
    simulate_microdata,
)
from .model_select import (
    CandidateFit,
    FitReport,
    QqEnvelope,
    ad_statistic,
    ad_test,
    qq_envelope,
    select_model,
    weight_cdf,
)
from .pairs_plot import PlotSpec, render_pairs_svg
from .population import (
    PopulationParams,
    expected_rr,
    pairwise_cor,
    pairwise_cov,
    population_cor_matrix,
    population_cov_matrix,
)
from .stats import (
    ALL_KINDS,
    COV_KINDS,
    CovKind,
    SymmetricMatrix,
    cov_kind,
    limits_form_mean,
    limits_form_oracle,
    sample_cor_matrix,
    sample_cov_matrix,
    sample_cov_pair,
    sample_mean,
)

__version__ = "0.1.0"

__all__ = [
    "AffineSpec",
    "ALL_KINDS",
    "COV_KINDS",
    "CandidateFit",
    "CovKind",
    "FitReport",
    "FormatError",
    "InfeasibleError",
    "Interval",
    "IntervalDataset",
    "MicroTable",
    "PlotSpec",
    "PopulationParams",
    "QqEnvelope",
    "SymmetricMatrix",
    "WeightFamily",
    "WeightModel",
    "WeightTable",
    "add",
    "ad_statistic",
    "ad_test",
    "affine",
    "aggregate_microdata",
    "cov_kind",
    "covariance_kind",
    "derive_rng",
    "draw_weights",
    "expected_rr",
    "interval_from_limits",
    "limits_form_mean",
    "limits_form_oracle",
    "lincomb2",
    "model_variance",
    "pairwise_cor",
    "pairwise_cov",
    "population_cor_matrix",
    "population_cov_matrix",
    "qq_envelope",
    "recover_weights",
    "render_pairs_svg",
    "sample_cor_matrix",
    "sample_cov_matrix",
    "sample_cov_pair",
    "sample_mean",
    "sample_weight",
    "select_model",
    "simulate_macrodata",
    "simulate_microdata",
    "sub",
    "to_limits",
    "validate_dataset",
    "weight_cdf",
]
