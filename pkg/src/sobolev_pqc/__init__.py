"""Statevector simulation of layered trigonometric-model circuits with
Sobolev-style training losses, approximation tooling (DFT extraction,
Fejer means, periodic extensions), generalization-bound evaluation, and
reproducible desk-scale regression experiments.
"""

from .autodiff import GradientReport, grad_theta, grad_x, gradient_report
from .bounds import (
    BoundInputs,
    EmbeddingProbeResult,
    GapStudyConfig,
    GapStudyResult,
    RegimeCheck,
    bound_term,
    classify_regime,
    embedding_probe,
    empirical_gap_study,
    fit_series,
    random_series,
)
from .estimators import IntervalScaler, PQCRegressor
from .metrics import (
    Dataset,
    GridSpec,
    count_derivatives,
    dist_c0,
    dist_hk,
    dist_lp,
    loss_hk,
    loss_l2,
    loss_linf,
    multi_indices,
)
from .pqc import (
    CircuitSpec,
    accessible_frequencies,
    evaluate,
    evaluate_batch,
    frequency_spectrum,
    model_degree,
    surrogate_series,
)
from .statevector import Gate, Observable, StateVector
from .trainer import (
    Adam,
    AdamParams,
    ExperimentConfig,
    Normalizer,
    RunResult,
    Target,
    TARGETS,
    make_dataset,
    run_experiment,
    train,
)
from .trigseries import (
    PeriodicExtension,
    TrigSeries,
    extract_series,
    fejer_convergence_study,
    fejer_mean,
    periodic_extension,
)

__version__ = "0.1.0"

__all__ = [
    "Adam",
    "AdamParams",
    "BoundInputs",
    "CircuitSpec",
    "Dataset",
    "EmbeddingProbeResult",
    "ExperimentConfig",
    "GapStudyConfig",
    "GapStudyResult",
    "Gate",
    "GradientReport",
    "GridSpec",
    "IntervalScaler",
    "Normalizer",
    "Observable",
    "PQCRegressor",
    "PeriodicExtension",
    "RegimeCheck",
    "RunResult",
    "StateVector",
    "TARGETS",
    "Target",
    "TrigSeries",
    "accessible_frequencies",
    "bound_term",
    "classify_regime",
    "count_derivatives",
    "dist_c0",
    "dist_hk",
    "dist_lp",
    "embedding_probe",
    "empirical_gap_study",
    "evaluate",
    "evaluate_batch",
    "extract_series",
    "fejer_convergence_study",
    "fejer_mean",
    "fit_series",
    "frequency_spectrum",
    "grad_theta",
    "grad_x",
    "gradient_report",
    "loss_hk",
    "loss_l2",
    "loss_linf",
    "make_dataset",
    "model_degree",
    "multi_indices",
    "periodic_extension",
    "random_series",
    "run_experiment",
    "surrogate_series",
    "train",
]
