"""Numerical toolkit for the bilinear Hilbert transform and its inversion."""

from .catalog import FunctionSpec, GridSignal, load_signal_csv, make_function, make_spec
from .errors import AccuracyError, BhtError, ConfigurationError, DomainError, LoadError, TailError
from .fitting import extrapolate, fit_rate
from .kernels import lemma6_kernel, majorant_integral, majorant_psi, poisson_kernel
from .operators import (
    BhtParams,
    bht_pv,
    bht_regularized,
    bht_truncated,
    invert_product,
    lemma6_gap,
    mollifier_pair,
    poisson_residual,
)
from .quadrature import QuadConfig

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "BhtError", "BhtParams", "ConfigurationError", "DomainError", "FunctionSpec",
    "GridSignal", "LoadError", "QuadConfig", "TailError", "bht_pv", "bht_regularized", "bht_truncated",
    "extrapolate", "fit_rate", "invert_product", "lemma6_gap", "lemma6_kernel", "load_signal_csv",
    "majorant_integral", "majorant_psi", "make_function", "make_spec", "mollifier_pair", "poisson_kernel",
    "poisson_residual",
]
