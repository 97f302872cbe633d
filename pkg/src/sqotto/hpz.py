"""Late-time coefficients of the exact master equation for a Brownian
oscillator in a squeezed Ohmic bath.

Notation (hbar = 1):

    S(k)  = I(k) coth(beta k/2),   I(k) = 2 m gamma k / pi   for k < cutoff
    Z(k)  = (gamma + i k)^2 + w_r^2 = w^2 - k^2 + 2 i gamma k
    X(k)  = exp(2 i (k t - theta)) / Z^2          (rotating factor)
    c(t)  = gamma - w_r cot(w_r t)

The master equation is taken as

    d rho/dt = -i[H, rho] + D_pp [x,[x,rho]] + D_xx [p,[p,rho]]
               + 2 D_xp [x,[p,rho]] - i Gamma [x,{p,rho}]

so the diffusion coefficients are negative for a heating bath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from ._mathutil import is_zero_temperature, kappa_coth
from .errors import DomainError, NumericError, PreconditionError, UnsupportedRegimeError
from .gaussian import GaussianState, SqueezeParams

QUAD_RTOL = 1e-10
# rotating terms are small oscillatory corrections; their absolute error is
# measured against the stationary part
ROTATING_ATOL = 1e-9
LATE_TIME_FACTOR = 10.0
# the a_ij carry 1/sin(omega_r t) factors
SINGULAR_SIN = 1e-10


@dataclass(frozen=True)
class SpectralDensity:
    gamma: float
    mass: float = 1.0
    cutoff: float = 1000.0
    kind: str = "ohmic"

    def __post_init__(self):
        for name in ("gamma", "mass", "cutoff"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")
        if self.kind != "ohmic":
            raise DomainError(f"unsupported spectral family {self.kind!r}")

    def density(self, kappa):
        """I(k) with the sharp cutoff."""
        k = np.asarray(kappa, dtype=float)
        return np.where(k < self.cutoff, 2 * self.mass * self.gamma * k / math.pi, 0.0)

    def noise(self, kappa, beta):
        """S(k) = I(k) coth(beta k / 2); finite at k = 0."""
        k = np.asarray(kappa, dtype=float)
        return np.where(k < self.cutoff, (2 * self.mass * self.gamma / math.pi) * kappa_coth(k, beta), 0.0)


@dataclass(frozen=True)
class HpzCoefficients:
    gamma_coef: float
    d_xx: float
    d_xp: float
    d_pp: float


@dataclass(frozen=True)
class AuxiliaryFunctions:
    """Boundary-value solutions u_i, v_i and the b_i of the influence-functional route."""

    omega_r: float
    gamma: float
    mass: float = 1.0

    def u1(self, s, t):
        return -np.sin(self.omega_r * (s - t)) * np.exp(-self.gamma * s) / math.sin(self.omega_r * t)

    def u2(self, s, t):
        return np.sin(self.omega_r * s) * np.exp(-self.gamma * (s - t)) / math.sin(self.omega_r * t)

    def v1(self, s, t):
        return self.u2(t - s, t)

    def v2(self, s, t):
        return self.u1(t - s, t)

    def b1(self, t):
        wr = self.omega_r
        return self.mass * (wr / math.tan(wr * t) - self.gamma)

    def b2(self, t):
        return self.mass * self.omega_r * math.exp(self.gamma * t) / math.sin(self.omega_r * t)

    def b3(self, t):
        return -self.mass * self.omega_r * math.exp(-self.gamma * t) / math.sin(self.omega_r * t)

    def b4(self, t):
        return -self.b1(t)


def renormalised_frequency(omega: float, gamma: float) -> float:
    if not omega > 0:
        raise DomainError("omega must be positive")
    if gamma >= omega:
        raise UnsupportedRegimeError(f"overdamped: gamma={gamma!r} >= omega={omega!r}")
    return math.sqrt(omega * omega - gamma * gamma)


def _omega_of(omega_r: float, gamma: float) -> float:
    if not omega_r > 0:
        raise DomainError("omega_r must be positive")
    return math.sqrt(omega_r * omega_r + gamma * gamma)


def _resolve(omega, omega_r, gamma):
    if omega is None and omega_r is None:
        raise DomainError("need omega or omega_r")
    if omega is None:
        return _omega_of(omega_r, gamma), omega_r
    wr = renormalised_frequency(omega, gamma)
    if omega_r is not None and abs(omega_r - wr) > 1e-12 * wr:
        raise DomainError(f"omega_r={omega_r!r} inconsistent with omega={omega!r}, gamma={gamma!r}")
    return omega, wr


def _points(sd: SpectralDensity, beta, wr):
    g = sd.gamma
    pts = [wr]
    for k in (1.0, 10.0, 100.0):
        pts += [wr - k * g, wr + k * g]
    if not is_zero_temperature(beta):
        pts.append(1.0 / beta)
    return [p for p in pts if 0.0 < p < sd.cutoff]


def _oscillation_width(t):
    return math.pi / (4.0 * t) if t > 0 else None


def nu_kernel(s, s_prime, sd: SpectralDensity, beta, sq: SqueezeParams, rtol=QUAD_RTOL) -> float:
    """Noise kernel of the squeezed bath (symmetrised bath-force correlation)."""
    if s < 0 or s_prime < 0:
        raise DomainError("times must be non-negative")
    ch, sh = math.cosh(2 * sq.eta), math.sinh(2 * sq.eta)
    d, plus = s - s_prime, s + s_prime
    span = max(abs(d), plus if sh else 0.0)

    def f(k):
        return sd.noise(k, beta) * (ch * np.cos(k * d) - sh * np.cos(2 * sq.theta - k * plus))

    scale = float(sd.noise(np.array([1.0]), beta)[0]) * (ch + sh)
    return quadrature.integrate(f, 0.0, sd.cutoff, max_width=_oscillation_width(span), rtol=rtol,
                                atol=1e-13 * scale * sd.cutoff).value


def _check_late(t, gamma, allow_early):
    if not t > 0:
        raise DomainError("t must be positive")
    if not allow_early and not t * gamma > LATE_TIME_FACTOR:
        raise PreconditionError(f"late-time forms need t*gamma > {LATE_TIME_FACTOR:g}, got {t * gamma!r}")


def _stationary_integrals(sd, beta, omega, rtol):
    """(int S/|Z|^2, int S k^2/|Z|^2)."""
    g = sd.gamma
    wr = renormalised_frequency(omega, g)

    def f(k):
        s = sd.noise(k, beta)
        k2 = k * k
        w = s / ((omega * omega - k2) ** 2 + 4 * g * g * k2)
        return np.stack([w, w * k2])

    return quadrature.integrate(f, 0.0, sd.cutoff, points=_points(sd, beta, wr), rtol=rtol).value


def _rotating_integrals(t, sd, beta, sq, omega, rtol, atol):
    """int S k^n X for n = 0..3, as rows (Re, Im) per power: shape (4, 2)."""
    g = sd.gamma
    wr = renormalised_frequency(omega, g)

    def f(k):
        z = omega * omega - k * k + 2j * g * k
        x = sd.noise(k, beta) * np.exp(2j * (k * t - sq.theta)) / (z * z)
        rows = []
        for _ in range(4):
            rows += [x.real, x.imag]
            x = x * k
        return np.stack(rows)

    v = quadrature.integrate(f, 0.0, sd.cutoff, points=_points(sd, beta, wr),
                             max_width=_oscillation_width(t), rtol=rtol, atol=atol).value
    return np.asarray(v).reshape(4, 2)


def a_ij_late(t, sd: SpectralDensity, beta, sq: SqueezeParams, omega_r=None, *, omega=None,
              allow_early=False, rtol=QUAD_RTOL):
    """(a11, a22, a12) with exponentially decaying transients dropped."""
    _check_late(t, sd.gamma, allow_early)
    omega, wr = _resolve(omega, omega_r, sd.gamma)
    g = sd.gamma
    sin_t = math.sin(wr * t)
    if abs(sin_t) < SINGULAR_SIN:
        raise NumericError(f"sin(omega_r t) = {sin_t!r}; the a_ij are singular here")
    c = g - wr * math.cos(wr * t) / sin_t
    ch, sh = math.cosh(2 * sq.eta), math.sinh(2 * sq.eta)
    i0, i2 = _stationary_integrals(sd, beta, omega, rtol)
    if sh:
        atol = ROTATING_ATOL * max(abs(i0) * omega ** 2, abs(i2))
        r = _rotating_integrals(t, sd, beta, sq, omega, rtol, atol)
        re0, im1, re2 = r[0, 0], r[1, 1], r[2, 0]
    else:
        re0 = im1 = re2 = 0.0
    grow = math.exp(g * t)
    if not math.isfinite(grow * grow):
        raise NumericError(f"exp(2 gamma t) overflows at t={t!r}")
    base = ch * i0 - sh * re0
    a11 = wr * wr * grow * grow / (2 * sin_t * sin_t) * base
    a12 = wr * grow / sin_t * (c * base + sh * im1)
    a22 = 0.5 * (ch * (c * c * i0 + i2) - sh * (c * c * re0 - re2) + 2 * c * sh * im1)
    return float(a11), float(a22), float(a12)


def diffusion_coefficients_rwa(sd: SpectralDensity, beta, sq: SqueezeParams, omega=None, omega_r=None,
                               rtol=QUAD_RTOL) -> HpzCoefficients:
    """Coefficients with the rotating (theta- and t-dependent) terms dropped."""
    omega, _ = _resolve(omega, omega_r, sd.gamma)
    i0, i2 = _stationary_integrals(sd, beta, omega, rtol)
    ch = math.cosh(2 * sq.eta)
    d_xp = ch * (omega * omega * i0 - i2) / (2 * sd.mass)
    d_pp = -2 * sd.gamma * ch * i2
    return HpzCoefficients(sd.gamma, 0.0, float(d_xp), float(d_pp))


def diffusion_coefficients_full(t, sd: SpectralDensity, beta, sq: SqueezeParams, omega=None, omega_r=None,
                                *, allow_early=False, rtol=QUAD_RTOL) -> HpzCoefficients:
    """Late-time coefficients keeping the rotating terms at time ``t``.

    For an unsqueezed bath the rotating terms vanish identically and the
    result equals :func:`diffusion_coefficients_rwa`.
    """
    _check_late(t, sd.gamma, allow_early)
    omega, _ = _resolve(omega, omega_r, sd.gamma)
    rwa = diffusion_coefficients_rwa(sd, beta, sq, omega, rtol=rtol)
    sh = math.sinh(2 * sq.eta)
    if not sh:
        return rwa
    g, m = sd.gamma, sd.mass
    ch = math.cosh(2 * sq.eta)
    atol = ROTATING_ATOL * max(abs(rwa.d_xp) * m, abs(rwa.d_pp) / g) / ch
    r = _rotating_integrals(t, sd, beta, sq, omega, rtol, atol)
    (re0, _), (re1, im1), (re2, _), (_, im3) = r
    d_xp = rwa.d_xp - sh / (2 * m) * (3 * re2 + omega * omega * re0 - 2 * g * im1)
    d_pp = rwa.d_pp + sh * (im3 - omega * omega * im1 - 6 * g * re1)
    return HpzCoefficients(g, 0.0, float(d_xp), float(d_pp))


def steady_state_from_coefficients(c: HpzCoefficients, m: float, omega: float) -> GaussianState:
    """Stationary second moments of the Gaussian solution of the master equation.

    The moment equations

        d<x^2>/dt = 2 sxp/m - 2 D_xx
        d<p^2>/dt = -2 m w^2 sxp - 4 Gamma spp - 2 D_pp
        d sxp/dt  = spp/m - m w^2 sxx - 2 Gamma sxp + 2 D_xp

    are set to zero and solved directly.
    """
    if not (m > 0 and omega > 0):
        raise DomainError("mass and omega must be positive")
    if not c.gamma_coef > 0:
        raise DomainError("Gamma must be positive for a stationary solution")
    sxp = m * c.d_xx
    spp = -(c.d_pp + m * omega * omega * sxp) / (2 * c.gamma_coef)
    sxx = (spp / m - 2 * c.gamma_coef * sxp + 2 * c.d_xp) / (m * omega * omega)
    if not (sxx > 0 and spp > 0):
        raise NumericError(f"coefficients give non-positive variances ({sxx!r}, {spp!r})")
    try:
        return GaussianState(sxx, spp, sxp, m, omega)
    except DomainError as exc:
        raise NumericError(f"inconsistent coefficients: {exc}") from exc


COEFFICIENT_COLUMNS = ("beta", "eta", "gamma", "gamma_coef", "d_xx", "d_xp", "d_pp", "status")


def coefficient_table(betas, etas, gammas, *, mass=1.0, omega=1.0, cutoff=1000.0, theta=0.0, t=None,
                      rtol=QUAD_RTOL):
    """Rows of :data:`COEFFICIENT_COLUMNS` over the (beta, eta, gamma) grid.

    With ``t`` the rotating terms are kept; failures are tagged in ``status``.
    """
    rows = []
    for beta in betas:
        for eta in etas:
            for g in gammas:
                row = {"beta": beta, "eta": eta, "gamma": g}
                try:
                    sd = SpectralDensity(g, mass, cutoff)
                    sq = SqueezeParams(eta, theta)
                    if t is None:
                        co = diffusion_coefficients_rwa(sd, beta, sq, omega, rtol=rtol)
                    else:
                        co = diffusion_coefficients_full(t, sd, beta, sq, omega, rtol=rtol)
                    row.update(gamma_coef=co.gamma_coef, d_xx=co.d_xx, d_xp=co.d_xp, d_pp=co.d_pp, status="ok")
                except (DomainError, NumericError) as exc:
                    row.update(gamma_coef=math.nan, d_xx=math.nan, d_xp=math.nan, d_pp=math.nan,
                               status=f"{type(exc).__name__}: {exc}")
                rows.append(row)
    return rows
