"""Nonparametric regression when the response is truncated, censored or bias-sampled."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigurationError,
    DataError,
    DegenerateInputError,
    IdentifiabilityError,
    InfeasibleDesignError,
    NotEstimableError,
    PartObsError,
)
from .kernels import Bandwidth, Kernel, default_bandwidth, evaluation_window  # noqa: E402
from .step import Quantile, StepDistribution  # noqa: E402

__all__ = [
    "Bandwidth",
    "ConfigurationError",
    "DataError",
    "DegenerateInputError",
    "IdentifiabilityError",
    "InfeasibleDesignError",
    "Kernel",
    "NotEstimableError",
    "PartObsError",
    "Quantile",
    "StepDistribution",
    "default_bandwidth",
    "evaluation_window",
]
