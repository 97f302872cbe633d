"""Late-time state of an oscillator in contact with a (squeezed) Ohmic bath.

The covariances are bath-frequency integrals over the response function
``1/|w^2 - k^2 + 2 i gamma k|^2`` weighted by the noise ``k coth(beta k/2)``;
for small gamma the weight is a narrow Lorentzian at the renormalised
frequency, so the quadrature is split there.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from ._mathutil import coth, is_zero_temperature, kappa_coth
from .errors import DomainError, UnsupportedRegimeError
from .gaussian import (
    GaussianState,
    SqueezeParams,
    effective_inverse_temperature,
    half_coth,
    mechanical_energy,
)

QUAD_RTOL = 1e-9
CUTOFF_FACTOR = 10.0


class CouplingMode(str, enum.Enum):
    WEAK = "weak"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class BathSpec:
    beta: float
    squeeze: SqueezeParams = field(default_factory=lambda: SqueezeParams(0.0))
    gamma: float = 0.0
    cutoff: float = 1000.0
    kind: str = "ohmic"

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta!r}")
        if not (self.gamma >= 0 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma must be finite and >= 0, got {self.gamma!r}")
        if not (self.cutoff > 0 and math.isfinite(self.cutoff)):
            raise DomainError(f"cutoff must be positive and finite, got {self.cutoff!r}")
        if self.kind != "ohmic":
            raise DomainError(f"only the ohmic spectral family is available, got {self.kind!r}")

    def check_against(self, omega: float) -> None:
        """Raise if this bath cannot be paired with an oscillator of frequency ``omega``."""
        if not omega > 0:
            raise DomainError("omega must be positive")
        if self.gamma >= omega:
            raise UnsupportedRegimeError(f"overdamped: gamma={self.gamma!r} >= omega={omega!r}")
        need = CUTOFF_FACTOR * max(omega, self.gamma)
        if not self.cutoff > need:
            raise DomainError(f"cutoff={self.cutoff!r} must exceed {need!r} (10 x max(omega, gamma))")


@dataclass(frozen=True)
class SteadyState:
    state: GaussianState
    beta_s: float
    energy: float


def weak_coupling_covariances(beta: float, eta: float, m: float, omega: float) -> tuple[float, float]:
    if not (beta > 0 and m > 0 and omega > 0) or eta < 0:
        raise DomainError("need beta, m, omega > 0 and eta >= 0")
    n = math.cosh(2 * eta) * half_coth(beta, omega)
    return n / (m * omega), n * m * omega


def _breakpoints(b: BathSpec, omega: float):
    g = b.gamma
    wr = math.sqrt(omega * omega - g * g)
    pts = [wr]
    for k in (1.0, 10.0, 100.0, 1000.0):
        pts += [wr - k * g, wr + k * g]
    if not is_zero_temperature(b.beta):
        pts.append(1.0 / b.beta)
    return [p for p in pts if 0.0 < p < b.cutoff]


def response_weight(kappa, omega, gamma):
    """1/|(gamma + i k)^2 + w_r^2|^2 = 1/((w^2 - k^2)^2 + 4 gamma^2 k^2)."""
    k2 = kappa * kappa
    return 1.0 / ((omega * omega - k2) ** 2 + 4.0 * gamma * gamma * k2)


def _unsqueezed_integrals(b: BathSpec, m: float, omega: float, rtol: float):
    g = b.gamma

    def f(k):
        w = kappa_coth(k, b.beta) * response_weight(k, omega, g)
        return np.stack([w, w * k * k])

    res = quadrature.integrate(f, 0.0, b.cutoff, points=_breakpoints(b, omega), rtol=rtol)
    i1, i3 = res.value
    return float((2 * g / (m * math.pi)) * i1), float((2 * m * g / math.pi) * i3)


def steady_covariances(b: BathSpec, m: float, omega: float, rtol: float = QUAD_RTOL) -> tuple[float, float]:
    """Late-time (<x^2>, <p^2>) in the bath ``b``; the cross term vanishes.

    The squeeze enters only through an overall cosh(2 eta).  ``gamma == 0``
    is the weak-coupling limit and returns the closed forms.
    """
    if not m > 0:
        raise DomainError("mass must be positive")
    b.check_against(omega)
    if b.gamma == 0.0:
        return weak_coupling_covariances(b.beta, b.squeeze.eta, m, omega)
    sxx, spp = _unsqueezed_integrals(b, m, omega, rtol)
    ch = math.cosh(2 * b.squeeze.eta)
    return ch * sxx, ch * spp


def steady_state(b: BathSpec, m: float, omega: float, mode: CouplingMode | str = CouplingMode.QUADRATURE,
                 rtol: float = QUAD_RTOL) -> SteadyState:
    """Relaxed state at frequency ``omega``.

    ``beta_s`` is the weak-coupling effective inverse temperature; at
    finite gamma it is only a label.
    """
    mode = CouplingMode(mode)
    if mode is CouplingMode.WEAK:
        if not m > 0:
            raise DomainError("mass must be positive")
        sxx, spp = weak_coupling_covariances(b.beta, b.squeeze.eta, m, omega)
    else:
        sxx, spp = steady_covariances(b, m, omega, rtol)
    st = GaussianState(sxx, spp, 0.0, m, omega)
    beta_s = effective_inverse_temperature(b.squeeze.eta, b.beta, omega)
    return SteadyState(st, beta_s, mechanical_energy(st))


def weak_coupling_energy(beta: float, eta: float, omega: float) -> float:
    """cosh(2 eta) (w/2) coth(beta w/2)."""
    k = 1.0 if is_zero_temperature(beta) else coth(0.5 * beta * omega)
    return math.cosh(2 * eta) * 0.5 * omega * k


def heat_in(e_before: float, e_after: float) -> float:
    """Heat absorbed by the oscillator; positive means into it."""
    if not (math.isfinite(e_before) and math.isfinite(e_after)):
        raise DomainError("energies must be finite")
    return e_after - e_before
