"""Closed-system evolution of the working medium while its frequency is ramped.

Two independent propagation routes are provided:

* :func:`evolve_wigner` integrates the exponent coefficients of the Gaussian
  Wigner function, and
* :func:`evolve_fundamental` integrates the classical solutions d1, d2 of
  ``d'' + w^2(t) d = 0`` from which end states and the end-of-ramp squeeze
  follow algebraically.

The sudden-quench and adiabatic profiles are analytic branches, not
integrations with extreme durations.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _ode
from ._mathutil import coth
from .errors import DomainError, NumericError
from .gaussian import (
    GaussianState,
    SqueezeParams,
    WignerCoeffs,
    apply_squeeze,
    extract_squeeze,
    state_from_wigner_coeffs,
    wigner_coeffs_from_state,
)

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
ACOSH_CLAMP = 1e-9
# conserved quantities must stay within this relative drift; a ramp that
# breaks it is retried with tighter tolerances before giving up
MAX_DRIFT = 1e-8
_TIGHTEST_RTOL = 1e-13


class Profile(str, enum.Enum):
    LINEAR = "linear"  # w^2 linear in t
    SUDDEN = "sudden"
    ADIABATIC = "adiabatic"
    CUSTOM = "custom"  # user-supplied w^2(t)


@dataclass(frozen=True)
class FrequencyRamp:
    """Drive of one isentropic stage, from ``omega_start`` to ``omega_end``."""

    omega_start: float
    omega_end: float
    tau: Optional[float] = None
    profile: Profile = Profile.LINEAR
    omega_squared: Optional[Callable[[float], float]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "profile", Profile(self.profile))
        if not (self.omega_start > 0 and self.omega_end > 0):
            raise DomainError("ramp frequencies must be positive")
        if self.profile in (Profile.LINEAR, Profile.CUSTOM):
            if self.tau is None or not (self.tau > 0) or not math.isfinite(self.tau):
                raise DomainError(f"{self.profile.value} ramp needs a finite tau > 0, got {self.tau!r}")
        if self.profile is Profile.CUSTOM and self.omega_squared is None:
            raise DomainError("custom ramp needs an omega_squared callable")

    @classmethod
    def linear(cls, omega_start, omega_end, tau):
        return cls(omega_start, omega_end, tau, Profile.LINEAR)

    @classmethod
    def sudden(cls, omega_start, omega_end):
        return cls(omega_start, omega_end, None, Profile.SUDDEN)

    @classmethod
    def adiabatic(cls, omega_start, omega_end):
        return cls(omega_start, omega_end, None, Profile.ADIABATIC)

    @classmethod
    def custom(cls, omega_start, omega_end, tau, omega_squared):
        return cls(omega_start, omega_end, tau, Profile.CUSTOM, omega_squared)


@dataclass(frozen=True)
class FundamentalSolutions:
    """d1, d2 and their time derivatives at the end of a ramp."""

    d1: float
    d1dot: float
    d2: float
    d2dot: float

    @property
    def wronskian(self) -> float:
        return self.d1 * self.d2dot - self.d1dot * self.d2


@dataclass(frozen=True)
class RampInfo:
    n_steps: int
    invariant_drift: float


def ramp_omega_squared(r: FrequencyRamp, t: float) -> float:
    if r.profile not in (Profile.LINEAR, Profile.CUSTOM):
        raise DomainError(f"{r.profile.value} ramp has no time parametrisation")
    if not (0.0 <= t <= r.tau):
        raise DomainError(f"t={t!r} outside [0, {r.tau!r}]")
    if r.profile is Profile.CUSTOM:
        return float(r.omega_squared(t))
    if t == r.tau:
        return r.omega_end ** 2
    w2l, w2h = r.omega_start ** 2, r.omega_end ** 2
    return w2l + (t / r.tau) * (w2h - w2l)


def _integrate_once(system, y0, r, mass, rtol, atol, backend):
    if r.profile is Profile.CUSTOM:
        return _ode.integrate_callable(system, y0, r.tau, r.omega_squared, mass, rtol, atol)
    return _ode.integrate_linear_ramp(system, y0, r.tau, r.omega_start ** 2, r.omega_end ** 2,
                                      mass, rtol, atol, backend=backend)


def _integrate(system, y0, r, mass, rtol, atol, backend):
    # local error control does not bound the global drift over many periods
    steps = 0
    while True:
        y, n, drift = _integrate_once(system, y0, r, mass, rtol, atol, backend)
        steps += n
        if drift <= MAX_DRIFT:
            return y, steps, drift
        if rtol <= _TIGHTEST_RTOL:
            raise NumericError(f"invariant drift {drift:.3g} exceeds {MAX_DRIFT:g} at the tightest tolerance",
                               r.tau)
        rtol, atol = max(rtol * 1e-2, _TIGHTEST_RTOL), max(atol * 1e-2, _TIGHTEST_RTOL * 1e-2)


def sudden_end_state(s0: GaussianState, omega_end: float) -> GaussianState:
    """Instantaneous quench: moments frozen, frequency relabelled."""
    return s0.with_omega(omega_end)


def adiabatic_end_state(s0: GaussianState, omega_end: float) -> GaussianState:
    """Adiabatic limit: squeeze magnitude, angle and symplectic eigenvalue carried to the new frequency.

    The dynamical phase is not tracked, so for squeezed inputs the returned
    angle is defined only up to a rotation.
    """
    sq, _ = extract_squeeze(s0)
    nu = math.sqrt(max(s0.determinant, 0.25))
    ch, sh = math.cosh(2 * sq.eta), math.sinh(2 * sq.eta)
    x = nu * (ch - sh * math.cos(sq.theta))
    p = nu * (ch + sh * math.cos(sq.theta))
    c = -nu * sh * math.sin(sq.theta)
    return GaussianState.from_dimensionless(x, p, c, s0.mass, omega_end)


def evolve_wigner(s0: GaussianState, r: FrequencyRamp, tol: float = DEFAULT_RTOL,
                  atol: float = DEFAULT_ATOL, backend=None, full_output=False):
    """End state of a ramp, obtained from the Wigner-exponent equations

        dA/dt = m w^2 C,   dB/dt = -C/m,   dC/dt = 2 (m w^2 B - A/m)

    for ``W ~ exp(A x^2 + B p^2 + C x p)``.  The returned state refers to
    ``r.omega_end``.  With ``full_output`` a :class:`RampInfo` is returned too.
    """
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    if r.profile is Profile.SUDDEN:
        out, info = sudden_end_state(s0, r.omega_end), RampInfo(0, 0.0)
    elif r.profile is Profile.ADIABATIC:
        out, info = adiabatic_end_state(s0, r.omega_end), RampInfo(0, 0.0)
    else:
        w = wigner_coeffs_from_state(s0)
        y, n, drift = _integrate(_ode.WIGNER, [w.b, w.a, w.c], r, s0.mass, tol, atol, backend)
        try:
            wc = WignerCoeffs(a=y[1], b=y[0], c=y[2], norm=w.norm)
        except DomainError as exc:
            raise NumericError(f"integration left the normalisable region: {exc}", r.tau) from exc
        out, info = state_from_wigner_coeffs(wc, s0.mass, r.omega_end), RampInfo(n, drift)
    return (out, info) if full_output else out


def evolve_fundamental(r: FrequencyRamp, tol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
                       backend=None, full_output=False):
    """d1, d2 at the end of the ramp, with d1(0)=1, d1'(0)=0, d2(0)=0, d2'(0)=1."""
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    if r.profile is Profile.SUDDEN:
        out, info = FundamentalSolutions(1.0, 0.0, 0.0, 1.0), RampInfo(0, 0.0)
    elif r.profile is Profile.ADIABATIC:
        raise DomainError("the adiabatic limit has no finite-time fundamental solutions")
    else:
        y, n, drift = _integrate(_ode.FUNDAMENTAL, [1.0, 0.0, 0.0, 1.0], r, 1.0, tol, atol, backend)
        out, info = FundamentalSolutions(*y), RampInfo(n, drift)
    return (out, info) if full_output else out


def nonadiabaticity(f: FundamentalSolutions, omega_start: float, omega_end: float) -> float:
    """cosh(2 eta_s): end energy over the adiabatic end energy for a stationary start."""
    wi, wf = omega_start, omega_end
    return 0.5 * (
        (wf / wi) * f.d1 ** 2
        + wi * wf * f.d2 ** 2
        + f.d1dot ** 2 / (wi * wf)
        + (wi / wf) * f.d2dot ** 2
    )


def eta_s_from_fundamental(f: FundamentalSolutions, omega_start: float, omega_end: float) -> float:
    """End-of-ramp squeeze magnitude for a ramp ``omega_start -> omega_end``.

    Arguments within 1e-9 below one are clamped (eta_s = 0); anything lower
    means the solutions are inconsistent.
    """
    arg = nonadiabaticity(f, omega_start, omega_end)
    if arg < 1.0:
        if arg < 1.0 - ACOSH_CLAMP:
            raise NumericError(f"nonadiabaticity {arg!r} < 1: inconsistent fundamental solutions")
        return 0.0
    return 0.5 * math.acosh(arg)


def end_state_from_fundamental(f: FundamentalSolutions, beta_s: float, omega_start: float,
                               omega_end: float, mass: float) -> GaussianState:
    """End state for a start in the thermal state of inverse temperature ``beta_s`` at ``omega_start``."""
    if not (beta_s > 0 and omega_start > 0 and omega_end > 0 and mass > 0):
        raise DomainError("beta_s, frequencies and mass must be positive")
    w = omega_start
    k = coth(0.5 * beta_s * w)
    sxx = k * (f.d1 ** 2 + w ** 2 * f.d2 ** 2) / (2 * mass * w)
    spp = 0.5 * mass * w * k * (f.d1dot ** 2 / w ** 2 + f.d2dot ** 2)
    # (m/2) d<x^2>/dtau
    sxp = 0.5 * k * (f.d1 * f.d1dot / w + w * f.d2 * f.d2dot)
    return GaussianState(sxx, spp, sxp, mass, omega_end)


def propagate_with_fundamental(f: FundamentalSolutions, s0: GaussianState, omega_end: float) -> GaussianState:
    """Heisenberg-picture map x -> d1 x + d2 p/m, p -> m d1' x + d2' p for any initial state."""
    m = s0.mass
    t = np.array([[f.d1, f.d2 / m], [m * f.d1dot, f.d2dot]])
    sig = t @ s0.covariance @ t.T
    return GaussianState(sig[0, 0], sig[1, 1], 0.5 * (sig[0, 1] + sig[1, 0]), m, omega_end)


def end_state_from_initial(f: FundamentalSolutions, s0: GaussianState, omega_end: float,
                           tol: float = 1e-9) -> GaussianState:
    """:func:`end_state_from_fundamental` for an explicit stationary thermal start state."""
    x, p, c = s0.dimensionless()
    if abs(c) > tol or abs(x - p) > tol * max(1.0, x):
        raise DomainError("initial state is not stationary (thermal) at its frequency")
    sq, vartheta = extract_squeeze(s0)
    beta_s = vartheta / s0.omega
    return end_state_from_fundamental(f, beta_s, s0.omega, omega_end, s0.mass)


def work_isentropic(limit: str, stage: str, omega_l: float, omega_h: float, beta: float,
                    eta: float = 0.0) -> float:
    """Closed-form work on the oscillator in the adiabatic ("AD") or sudden ("SC") limit.

    ``stage="compression"`` (A->B) starts thermal at ``omega_l`` with inverse
    temperature ``beta``; ``stage="expansion"`` (C->D) starts in the relaxed
    hot-bath state at ``omega_h``, whose bath has squeeze ``eta``.
    Positive work is done on the oscillator.
    """
    if not (omega_h > omega_l > 0):
        raise DomainError("need omega_h > omega_l > 0")
    limit, stage = limit.upper(), stage.lower()
    if limit not in ("AD", "SC") or stage not in ("compression", "expansion"):
        raise DomainError(f"unknown limit/stage {limit!r}/{stage!r}")
    if stage == "compression":
        k = coth(0.5 * beta * omega_l)
        if limit == "AD":
            return 0.5 * (omega_h - omega_l) * k
        return (omega_h ** 2 - omega_l ** 2) / (4 * omega_l) * k
    k = math.cosh(2 * eta) * coth(0.5 * beta * omega_h)
    if limit == "AD":
        return 0.5 * (omega_l - omega_h) * k
    return (omega_l ** 2 - omega_h ** 2) / (4 * omega_h) * k


def unsqueeze_to_adiabatic(s: GaussianState) -> GaussianState:
    """Remove the squeeze of an end-of-ramp state by applying the inverse squeeze."""
    sq, _ = extract_squeeze(s)
    if sq.eta == 0.0:
        return s
    out = apply_squeeze(s, sq.inverse())
    # the result is diagonal up to rounding; pin the cross term
    x, p, _ = out.dimensionless()
    nu = math.sqrt(max(s.determinant, 0.25))
    return GaussianState.from_dimensionless(nu, nu, 0.0, s.mass, s.omega) if abs(x - p) < 1e-8 * nu else out


def squeeze_at_ramp_end(s: GaussianState) -> SqueezeParams:
    return extract_squeeze(s)[0]
