"""Quantum Otto engine with a squeezed hot bath: Gaussian-state propagation,
bath steady states, master-equation coefficients and cycle bookkeeping."""

from ._ode import BACKEND, available_backends
from .errors import ConfigError, DomainError, NumericError, PreconditionError, SqottoError, UnsupportedRegimeError
from .gaussian import GaussianState, SqueezeParams, ThermalSpec, WignerCoeffs

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "available_backends",
    "ConfigError",
    "DomainError",
    "NumericError",
    "PreconditionError",
    "SqottoError",
    "UnsupportedRegimeError",
    "GaussianState",
    "SqueezeParams",
    "ThermalSpec",
    "WignerCoeffs",
]
