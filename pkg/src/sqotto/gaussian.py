"""Single-mode Gaussian states of a harmonic oscillator (hbar = 1).

A state is stored as its symmetrised second moments

    sxx = <x^2>,  spp = <p^2>,  sxp = <{x, p}>/2

together with the oscillator mass and the frequency at which energies and
squeeze parameters are referred.  First moments are always zero.

Squeezing follows S(zeta) = exp[(zeta* a^2 - zeta a^dag^2)/2] with
zeta = eta * exp(i theta), acting on the quadratures measured at ``t = 0``.

Wigner exponent convention
--------------------------
``WignerCoeffs(a, b, c)`` stores the coefficients of the exponent
``b x^2 + a p^2 + c x p``.  The time-dependent coefficient of ``x^2`` used by
the ramp equations is therefore ``b`` and that of ``p^2`` is ``a``:

    ================  ===============
    ramp equations    WignerCoeffs
    ================  ===============
    coefficient x^2   ``b``
    coefficient p^2   ``a``
    coefficient x p   ``c``
    ================  ===============

The steady-state form ``exp[p^2/(4 A) + x^2/(4 B)]`` with ``<x^2> = -2B`` and
``<p^2> = -2A`` is returned by :func:`steady_wigner_parameters`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._mathutil import INF, arcoth, coth
from .errors import DomainError

HEISENBERG_TOL = 1e-9
_DEGENERATE_SINH = 1e-12
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GaussianState:
    """Zero-mean Gaussian state of one oscillator mode."""

    sxx: float
    spp: float
    sxp: float
    mass: float
    omega: float

    def __post_init__(self):
        for name in ("sxx", "spp", "sxp", "mass", "omega"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if self.mass <= 0 or self.omega <= 0:
            raise DomainError("mass and omega must be positive")
        if self.sxx <= 0 or self.spp <= 0:
            raise DomainError(f"variances must be positive (sxx={self.sxx}, spp={self.spp})")
        if self.determinant < 0.25 - HEISENBERG_TOL:
            raise DomainError(
                f"state violates the uncertainty bound: sxx*spp - sxp^2 = {self.determinant!r} < 1/4"
            )

    @property
    def determinant(self) -> float:
        return self.sxx * self.spp - self.sxp * self.sxp

    @property
    def covariance(self) -> np.ndarray:
        return np.array([[self.sxx, self.sxp], [self.sxp, self.spp]])

    def with_omega(self, omega: float) -> "GaussianState":
        """Same moments, energies referred to a new frequency (sudden relabel)."""
        return GaussianState(self.sxx, self.spp, self.sxp, self.mass, omega)

    def dimensionless(self) -> tuple[float, float, float]:
        """Moments in units of the ground state at ``omega``: (m w sxx, spp/(m w), sxp)."""
        mw = self.mass * self.omega
        return mw * self.sxx, self.spp / mw, self.sxp

    @classmethod
    def from_dimensionless(cls, x, p, c, mass, omega) -> "GaussianState":
        mw = mass * omega
        return cls(x / mw, p * mw, c, mass, omega)


@dataclass(frozen=True)
class SqueezeParams:
    """Polar squeeze parameter zeta = eta * exp(i theta)."""

    eta: float
    theta: float = 0.0

    def __post_init__(self):
        if not (self.eta >= 0.0) or not math.isfinite(self.eta):
            raise DomainError(f"squeeze magnitude must be finite and >= 0, got {self.eta!r}")
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

    def inverse(self) -> "SqueezeParams":
        return SqueezeParams(self.eta, self.theta + math.pi)


@dataclass(frozen=True)
class ThermalSpec:
    """Inverse temperature; ``math.inf`` is the zero-temperature state."""

    beta: float

    def __post_init__(self):
        if not (self.beta > 0):
            raise DomainError(f"inverse temperature must be positive, got {self.beta!r}")


@dataclass(frozen=True)
class WignerCoeffs:
    """W(x, p) = norm * exp(b x^2 + a p^2 + c x p)."""

    a: float
    b: float
    c: float
    norm: float

    def __post_init__(self):
        if not (self.a < 0 and self.b < 0):
            raise DomainError("Wigner coefficients a and b must be negative")
        if not (4 * self.a * self.b - self.c * self.c > 0):
            raise DomainError("Wigner exponent is not normalisable: 4ab - c^2 <= 0")

    @property
    def invariant(self) -> float:
        """4ab - c^2, conserved by closed parametric evolution."""
        return 4 * self.a * self.b - self.c * self.c


def _beta_of(th) -> float:
    beta = th.beta if isinstance(th, ThermalSpec) else float(th)
    if not beta > 0:
        raise DomainError(f"inverse temperature must be positive, got {beta!r}")
    return beta


def _check_positive(**kw):
    for k, v in kw.items():
        if not (v > 0) or not math.isfinite(v):
            raise DomainError(f"{k} must be positive and finite, got {v!r}")


def half_coth(beta: float, omega: float) -> float:
    """<N> + 1/2 = coth(beta*omega/2)/2 for a thermal oscillator."""
    if math.isinf(beta):
        return 0.5
    return 0.5 * coth(0.5 * beta * omega)


def thermal_state(beta, mass: float, omega: float) -> GaussianState:
    _check_positive(mass=mass, omega=omega)
    n = half_coth(_beta_of(beta), omega)
    return GaussianState(n / (mass * omega), n * mass * omega, 0.0, mass, omega)


def squeezed_thermal_state(sq: SqueezeParams, th, mass: float, omega: float, t: float = 0.0) -> GaussianState:
    """Free-oscillator squeezed thermal state S(zeta) rho_beta S^dag observed at time ``t``."""
    _check_positive(mass=mass, omega=omega)
    n = half_coth(_beta_of(th), omega)
    ch, sh = math.cosh(2 * sq.eta), math.sinh(2 * sq.eta)
    phase = 2 * omega * t - sq.theta
    cos_p, sin_p = math.cos(phase), math.sin(phase)
    return GaussianState(
        sxx=(ch - cos_p * sh) * n / (mass * omega),
        spp=(ch + cos_p * sh) * n * mass * omega,
        sxp=sh * sin_p * n,
        mass=mass,
        omega=omega,
    )


def mechanical_energy(s: GaussianState) -> float:
    """<p^2>/2m + m w^2 <x^2>/2."""
    return s.spp / (2 * s.mass) + 0.5 * s.mass * s.omega ** 2 * s.sxx


def mean_occupation(s: GaussianState) -> float:
    """<a^dag a> at the state's reference frequency."""
    return mechanical_energy(s) / s.omega - 0.5


def symplectic_eigenvalue(s: GaussianState) -> float:
    return math.sqrt(max(s.determinant, 0.0))


_TINY_EXCESS = 1e-290


def effective_inverse_temperature(eta: float, beta: float, omega: float) -> float:
    """beta_s with coth(beta_s w/2) = cosh(2 eta) coth(beta w/2).

    Works for ``beta = inf``; returns ``inf`` only for an unsqueezed
    zero-temperature bath.
    """
    if eta < 0:
        raise DomainError("eta must be >= 0")
    _check_positive(omega=omega)
    beta = _beta_of(beta)
    if eta == 0.0:
        return beta
    # coth(x/2) - 1 = 2 e^{-x}/(1 - e^{-x}) and cosh(2 eta) - 1 = 2 sinh(eta)^2 keep the
    # excess over one accurate when both factors are close to one
    if math.isinf(beta):
        k, k_minus_1 = 1.0, 0.0
    else:
        x = beta * omega
        k, k_minus_1 = coth(0.5 * x), 2.0 * math.exp(-x) / -math.expm1(-x)
    excess = 2.0 * math.sinh(eta) ** 2 * k + k_minus_1
    if excess > _TINY_EXCESS:
        # squeezing only heats, so anything above beta is rounding
        return min(math.log1p(2.0 / excess) / omega, beta)
    # excess under- or near-underflows: redo the sum in log space
    logs = [math.log(2.0 * k) + 2.0 * math.log(math.sinh(eta))]
    if not math.isinf(beta):
        logs.append(math.log(2.0) - x - math.log(-math.expm1(-x)))
    top = max(logs)
    log_excess = top + math.log(sum(math.exp(v - top) for v in logs))
    return min((math.log(2.0) - log_excess) / omega, beta)


def extract_squeeze(s: GaussianState) -> tuple[SqueezeParams, float]:
    """Decompose a state as squeezed thermal: returns ((eta_s, psi_s), vartheta).

    The moments satisfy

        m w sxx   = coth(vartheta/2) (cosh 2eta_s - sinh 2eta_s cos psi_s)/2
        spp/(m w) = coth(vartheta/2) (cosh 2eta_s + sinh 2eta_s cos psi_s)/2
        sxp       = -coth(vartheta/2) sinh 2eta_s sin psi_s / 2

    ``psi_s`` is 0 when the state is unsqueezed and ``vartheta`` is ``inf``
    for a pure state.
    """
    det = s.determinant
    if det < 0.25 - HEISENBERG_TOL:
        raise DomainError("state violates the uncertainty bound")
    nu = math.sqrt(max(det, 0.25))
    x, p, c = s.dimensionless()
    sinh2 = math.hypot(p - x, 2 * c) / (2 * nu)
    eta = 0.5 * math.asinh(sinh2)
    psi = 0.0 if sinh2 < _DEGENERATE_SINH else math.atan2(-2 * c, p - x) % TWO_PI
    two_nu = 2 * nu
    vartheta = INF if two_nu <= 1.0 + HEISENBERG_TOL else 2.0 * arcoth(two_nu)
    return SqueezeParams(eta, psi), vartheta


def _squeeze_matrix(sq: SqueezeParams) -> np.ndarray:
    ch, sh = math.cosh(sq.eta), math.sinh(sq.eta)
    c, s = math.cos(sq.theta), math.sin(sq.theta)
    return np.array([[ch - c * sh, -s * sh], [-s * sh, ch + c * sh]])


def apply_squeeze(s: GaussianState, sq: SqueezeParams) -> GaussianState:
    """Second moments after S(zeta) rho S(zeta)^dag."""
    x, p, c = s.dimensionless()
    m = _squeeze_matrix(sq)
    sig = m @ np.array([[x, c], [c, p]]) @ m.T
    return GaussianState.from_dimensionless(sig[0, 0], sig[1, 1], 0.5 * (sig[0, 1] + sig[1, 0]), s.mass, s.omega)


def wigner_coeffs_from_state(s: GaussianState) -> WignerCoeffs:
    det = s.determinant
    return WignerCoeffs(
        a=-s.sxx / (2 * det),
        b=-s.spp / (2 * det),
        c=s.sxp / det,
        norm=1.0 / (2 * math.pi * math.sqrt(det)),
    )


def state_from_wigner_coeffs(w: WignerCoeffs, mass: float, omega: float) -> GaussianState:
    d = w.invariant
    return GaussianState(-2 * w.a / d, -2 * w.b / d, w.c / d, mass, omega)


def steady_wigner_parameters(s: GaussianState) -> tuple[float, float]:
    """(A, B) of the uncorrelated form exp[p^2/(4A) + x^2/(4B)]: A = -<p^2>/2, B = -<x^2>/2."""
    if s.sxp != 0.0:
        raise DomainError("steady-state Wigner form requires sxp == 0")
    return -0.5 * s.spp, -0.5 * s.sxx
