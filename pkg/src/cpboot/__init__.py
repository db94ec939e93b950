"""Bootstrap confidence intervals for the change point of a stump regression.

Fits ``Y = alpha 1{Z <= zeta} + beta 1{Z > zeta} + eps`` by least squares
(smallest argmax), builds intervals for ``zeta`` from four bootstrap schemes
and simulates the compound-Poisson limit laws of the estimator and of the
ECDF-bootstrap root.
"""

__version__ = "0.1.0"

from .estimator import FitResult, Theta, fit, fit_batch, fit_bruteforce, objective, residuals
from .inference import ConfidenceInterval, covers, empirical_quantile, length, root_ci
from .limitlaw import (
    LimitDraw,
    LimitSpec,
    limit_spec_from_model,
    sample_E_star,
    sample_E_tilde_star,
    variance_report,
)
from .model import DataSet, ModelConfig, generate, study_models, regression_mean
from .randdist import StreamKey, derive_stream
from .resampling import BootstrapScheme, KdeModel, RootSamples, bootstrap_roots, resample

__all__ = [
    "BootstrapScheme",
    "ConfidenceInterval",
    "DataSet",
    "FitResult",
    "KdeModel",
    "LimitDraw",
    "LimitSpec",
    "ModelConfig",
    "RootSamples",
    "StreamKey",
    "Theta",
    "bootstrap_roots",
    "covers",
    "derive_stream",
    "empirical_quantile",
    "fit",
    "fit_batch",
    "fit_bruteforce",
    "generate",
    "length",
    "limit_spec_from_model",
    "objective",
    "study_models",
    "regression_mean",
    "resample",
    "residuals",
    "root_ci",
    "sample_E_star",
    "sample_E_tilde_star",
    "variance_report",
]
