"""Quantum Otto cycle: cold relaxation (A), compression A->B, hot relaxation
(C), expansion C->D, and back to A.

Sign convention: work and heat are positive when energy flows into the
oscillator.  Junction energies are mechanical energies of the states after
any unsqueezing, so each stage's work includes the energy removed by the
unsqueezing step; that part is also reported separately.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

import numpy as np

from . import isentropic as ise
from ._mathutil import coth, is_zero_temperature
from .errors import DomainError, NumericError, SqottoError
from .gaussian import GaussianState, SqueezeParams, effective_inverse_temperature, mechanical_energy
from .isentropic import FrequencyRamp, Profile
from .isothermal import BathSpec, CouplingMode, steady_state

WORKERS_ENV = "SQOTTO_WORKERS"
ENERGY_TOL = 1e-10
# above this gamma/omega the bath-oscillator interaction energy is no longer
# negligible, so heats computed from the oscillator energy alone are only indicative
WEAK_COUPLING_RATIO = 0.01

RampLike = Union[FrequencyRamp, Profile, str]


class Flagged(NamedTuple):
    """A value together with whether the engine is operational at it."""

    value: float
    operational: bool
    reason: str = ""


def _coth_half(beta, omega):
    return 1.0 if is_zero_temperature(beta) else coth(0.5 * beta * omega)


def stage_ramp(spec: RampLike, omega_start: float, omega_end: float) -> FrequencyRamp:
    """Ramp between the given frequencies, keeping the profile and duration of ``spec``."""
    if isinstance(spec, FrequencyRamp):
        return dataclasses.replace(spec, omega_start=omega_start, omega_end=omega_end)
    prof = Profile(spec)
    if prof in (Profile.LINEAR, Profile.CUSTOM):
        raise DomainError(f"a {prof.value} ramp needs a FrequencyRamp with its duration")
    return FrequencyRamp(omega_start, omega_end, None, prof)


@dataclass(frozen=True)
class EngineConfig:
    omega_l: float = 1.0
    omega_h: float = 5.0
    beta_l: float = 1000.0
    beta_h: float = 0.1
    hot_squeeze: SqueezeParams = field(default_factory=lambda: SqueezeParams(0.0))
    gamma_l: float = 0.0
    gamma_h: float = 0.0
    cutoff_l: float = 1000.0
    cutoff_h: float = 1000.0
    mass: float = 1.0
    ramp_ab: RampLike = Profile.ADIABATIC
    ramp_cd: RampLike = Profile.ADIABATIC
    unsqueeze_at_ramp_end: bool = False
    coupling_mode: CouplingMode = CouplingMode.WEAK

    def __post_init__(self):
        object.__setattr__(self, "coupling_mode", CouplingMode(self.coupling_mode))
        for name in ("ramp_ab", "ramp_cd"):
            v = getattr(self, name)
            if not isinstance(v, FrequencyRamp):
                object.__setattr__(self, name, Profile(v))

    @property
    def eta(self) -> float:
        return self.hot_squeeze.eta

    def problems(self) -> list[str]:
        """Every violated constraint, as ``key: message`` strings."""
        out = []

        def pos(name):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0):
                out.append(f"{name}: must be > 0 (got {v!r})")
                return False
            return True

        ok_l, ok_h = pos("omega_l"), pos("omega_h")
        if ok_l and ok_h and not self.omega_h > self.omega_l:
            out.append(f"omega_h, omega_l: need omega_h > omega_l (got {self.omega_h!r} <= {self.omega_l!r})")
        for name in ("omega_l", "omega_h", "mass", "cutoff_l", "cutoff_h"):
            v = getattr(self, name)
            if isinstance(v, float) and math.isinf(v):
                out.append(f"{name}: must be finite")
        bl, bh = pos("beta_l"), pos("beta_h")
        if bl and bh and not self.beta_h < self.beta_l:
            out.append(f"beta_h, beta_l: need beta_h < beta_l (got {self.beta_h!r} >= {self.beta_l!r})")
        pos("mass")
        if not self.hot_squeeze.eta >= 0:
            out.append(f"eta: must be >= 0 (got {self.hot_squeeze.eta!r})")
        for side, omega in (("l", self.omega_l), ("h", self.omega_h)):
            g, cut = getattr(self, f"gamma_{side}"), getattr(self, f"cutoff_{side}")
            if not (g >= 0 and math.isfinite(g)):
                out.append(f"gamma_{side}: must be finite and >= 0 (got {g!r})")
                continue
            if isinstance(omega, (int, float)) and omega > 0:
                if g >= omega:
                    out.append(f"gamma_{side}: must be < omega_{side}={omega!r} (underdamped only)")
                if self.coupling_mode is CouplingMode.QUADRATURE:
                    if g == 0:
                        out.append(f"gamma_{side}: must be > 0 in quadrature coupling mode")
                    need = 10.0 * max(omega, g)
                    if not cut > need:
                        out.append(f"cutoff_{side}: must exceed 10*max(omega_{side}, gamma_{side}) = {need!r}")
        for name, (a, b) in (("ramp_ab", ("omega_l", "omega_h")), ("ramp_cd", ("omega_h", "omega_l"))):
            r = getattr(self, name)
            if isinstance(r, FrequencyRamp):
                if (r.omega_start, r.omega_end) != (getattr(self, a), getattr(self, b)):
                    out.append(f"{name}: endpoints ({r.omega_start!r}, {r.omega_end!r}) must be ({a}, {b})")
            elif r in (Profile.LINEAR, Profile.CUSTOM):
                out.append(f"{name}: {r.value} profile needs a duration")
        return out

    def validate(self) -> "EngineConfig":
        probs = self.problems()
        if probs:
            raise DomainError("invalid engine configuration:\n  " + "\n  ".join(probs))
        return self

    def evolve(self, **changes) -> "EngineConfig":
        """Copy with changes; ``eta``/``theta`` edit the hot squeeze, ``tau``/``tau_ab``/``tau_cd``
        set linear ramps, and ramp endpoints follow the stage frequencies."""
        changes = dict(changes)
        sq = self.hot_squeeze
        if "eta" in changes or "theta" in changes:
            sq = SqueezeParams(changes.pop("eta", sq.eta), changes.pop("theta", sq.theta))
            changes["hot_squeeze"] = sq
        tau = changes.pop("tau", None)
        for name in ("ab", "cd"):
            t = changes.pop(f"tau_{name}", tau)
            if t is not None:
                changes[f"ramp_{name}"] = FrequencyRamp(1.0, 1.0, t, Profile.LINEAR)
        new = dataclasses.replace(self, **changes)
        return dataclasses.replace(
            new,
            ramp_ab=_retarget(new.ramp_ab, new.omega_l, new.omega_h),
            ramp_cd=_retarget(new.ramp_cd, new.omega_h, new.omega_l),
        )

    def ramps(self) -> tuple[FrequencyRamp, FrequencyRamp]:
        return (stage_ramp(self.ramp_ab, self.omega_l, self.omega_h),
                stage_ramp(self.ramp_cd, self.omega_h, self.omega_l))

    def cold_bath(self) -> BathSpec:
        return BathSpec(self.beta_l, SqueezeParams(0.0), self.gamma_l, self.cutoff_l)

    def hot_bath(self) -> BathSpec:
        return BathSpec(self.beta_h, self.hot_squeeze, self.gamma_h, self.cutoff_h)


def _retarget(r, start, end):
    if isinstance(r, FrequencyRamp) and start > 0 and end > 0:
        return dataclasses.replace(r, omega_start=start, omega_end=end)
    return r


@dataclass(frozen=True)
class CycleReport:
    state_a: GaussianState
    state_b: GaussianState
    state_c: GaussianState
    state_d: GaussianState
    e_a: float
    e_b: float
    e_c: float
    e_d: float
    w_ab: float
    w_cd: float
    q_in: float
    q_out: float
    w_tot: float
    efficiency: float
    operational: bool
    eta_s_ab: float
    eta_s_cd: float
    unsqueeze_ab: float
    unsqueeze_cd: float
    w_tot_drive: float
    beta_s_h: float
    heat_diagnostic: bool = False

    FIELDS = ("e_a", "e_b", "e_c", "e_d", "w_ab", "w_cd", "q_in", "q_out", "w_tot", "efficiency",
              "operational", "eta_s_ab", "eta_s_cd", "unsqueeze_ab", "unsqueeze_cd", "w_tot_drive", "beta_s_h",
              "heat_diagnostic")

    @property
    def energy_balance(self) -> float:
        """Sum of all stage energy changes; zero for a closed cycle."""
        return (self.e_b - self.e_a) + (self.e_c - self.e_b) + (self.e_d - self.e_c) + (self.e_a - self.e_d)

    def as_row(self) -> dict:
        row = {k: getattr(self, k) for k in self.FIELDS}
        for label in "abcd":
            s = getattr(self, f"state_{label}")
            row[f"{label}_sxx"] = s.sxx
            row[f"{label}_spp"] = s.spp
            row[f"{label}_sxp"] = s.sxp
        return row


REPORT_COLUMNS = CycleReport.FIELDS + tuple(f"{lab}_{k}" for lab in "abcd" for k in ("sxx", "spp", "sxp"))


def _isentropic(s0: GaussianState, r: FrequencyRamp, unsqueeze: bool, tol: float):
    raw = ise.evolve_wigner(s0, r, tol)
    eta_s = ise.squeeze_at_ramp_end(raw).eta
    out = ise.unsqueeze_to_adiabatic(raw) if unsqueeze else raw
    return out, eta_s, mechanical_energy(out) - mechanical_energy(raw)


def efficiency_from_energies(w_tot: float, q_in: float) -> Flagged:
    if w_tot < 0 and q_in > 0:
        return Flagged(-w_tot / q_in, True)
    return Flagged(math.nan, False, "no net work output" if w_tot >= 0 else "no heat intake")


def run_cycle(cfg: EngineConfig, tol: float = ise.DEFAULT_RTOL) -> CycleReport:
    """Run one full cycle, assuming complete relaxation in each bath."""
    cfg.validate()
    m = cfg.mass
    ramp_ab, ramp_cd = cfg.ramps()
    a = steady_state(cfg.cold_bath(), m, cfg.omega_l, cfg.coupling_mode).state
    b, eta_ab, unsq_b = _isentropic(a, ramp_ab, cfg.unsqueeze_at_ramp_end, tol)
    hot = steady_state(cfg.hot_bath(), m, cfg.omega_h, cfg.coupling_mode)
    c = hot.state
    d, eta_cd, unsq_d = _isentropic(c, ramp_cd, cfg.unsqueeze_at_ramp_end, tol)
    e_a, e_b, e_c, e_d = (mechanical_energy(s) for s in (a, b, c, d))
    w_ab, w_cd = e_b - e_a, e_d - e_c
    q_in, q_out = e_c - e_b, e_a - e_d
    w_tot = w_ab + w_cd
    eff = efficiency_from_energies(w_tot, q_in)
    return CycleReport(
        a, b, c, d, e_a, e_b, e_c, e_d, w_ab, w_cd, q_in, q_out, w_tot, eff.value, eff.operational,
        eta_ab, eta_cd, unsq_b, unsq_d, w_tot - unsq_b - unsq_d, hot.beta_s, strong_coupling(cfg),
    )


def strong_coupling(cfg: EngineConfig) -> bool:
    """True when the quadrature states come from a non-weakly coupled bath."""
    if CouplingMode(cfg.coupling_mode) is CouplingMode.WEAK:
        return False
    return cfg.gamma_l > WEAK_COUPLING_RATIO * cfg.omega_l or cfg.gamma_h > WEAK_COUPLING_RATIO * cfg.omega_h


def _closed_form_inputs(cfg: EngineConfig):
    k_h = math.cosh(2 * cfg.eta) * _coth_half(cfg.beta_h, cfg.omega_h)
    k_l = _coth_half(cfg.beta_l, cfg.omega_l)
    return k_h, k_l


def net_work(limit: str, cfg: EngineConfig) -> Flagged:
    """Weak-coupling total work in the adiabatic ("AD") or sudden ("SC") limit."""
    wl, wh = cfg.omega_l, cfg.omega_h
    k_h, k_l = _closed_form_inputs(cfg)
    limit = limit.upper()
    if limit == "AD":
        w = -0.5 * (wh - wl) * (k_h - k_l)
    elif limit == "SC":
        w = -0.25 * (wh * wh - wl * wl) * (k_h / wh - k_l / wl)
    else:
        raise DomainError(f"unknown limit {limit!r}")
    return Flagged(w, w < 0, "" if w < 0 else "no net work output")


def efficiency_adiabatic(cfg: EngineConfig) -> Flagged:
    xi = 1.0 - cfg.omega_l / cfg.omega_h
    k_h, k_l = _closed_form_inputs(cfg)
    if not k_h > k_l:
        return Flagged(xi, False, "cosh(2 eta) coth(beta_h omega_h/2) <= coth(beta_l omega_l/2)")
    return Flagged(xi, True)


def efficiency_sudden(cfg: EngineConfig) -> Flagged:
    """Closed-form sudden-quench efficiency; heat intake as E_C minus the adiabatic E_B."""
    wl, wh = cfg.omega_l, cfg.omega_h
    k_h, k_l = _closed_form_inputs(cfg)
    num = 0.25 * (wh * wh - wl * wl) * (k_h / wh - k_l / wl)
    den = 0.5 * wh * (k_h - k_l)
    if not k_h / wh > k_l / wl:
        xi = num / den if den > 0 else math.nan
        return Flagged(xi, False, "coth(beta_sh omega_h/2)/omega_h <= coth(beta_l omega_l/2)/omega_l")
    return Flagged(num / den, True)


def carnot_bound_check(cfg: EngineConfig) -> bool:
    """Otto efficiency below the Carnot value; holds whenever beta_h omega_h < beta_l omega_l."""
    if is_zero_temperature(cfg.beta_l):
        return 1.0 - cfg.omega_l / cfg.omega_h < 1.0
    return (1.0 - cfg.omega_l / cfg.omega_h) < (1.0 - cfg.beta_h / cfg.beta_l)


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise DomainError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
        if n < 1:
            raise DomainError(f"{WORKERS_ENV} must be >= 1, got {n}")
        return n
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class SweepRow:
    index: int
    params: dict
    report: Optional[CycleReport]
    status: str


def grid_points(axes: dict) -> list[dict]:
    names = list(axes)
    return [dict(zip(names, combo)) for combo in itertools.product(*(list(axes[n]) for n in names))]


def sweep(base: EngineConfig, axes: dict, *, workers: Optional[int] = None,
          tol: float = ise.DEFAULT_RTOL) -> list[SweepRow]:
    """run_cycle over the Cartesian product of ``axes`` (name -> values), in grid order.

    Failing points are kept with their error in ``status``.
    """
    points = grid_points(axes) if axes else []

    def one(item):
        i, params = item
        try:
            rep = run_cycle(base.evolve(**params), tol)
        except SqottoError as exc:
            return SweepRow(i, params, None, f"{type(exc).__name__}: {exc}")
        return SweepRow(i, params, rep, "ok" if rep.operational else "non-operational")

    n = workers or worker_count()
    items = list(enumerate(points))
    if n == 1 or len(items) < 2:
        rows = [one(it) for it in items]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(one, items))
    rows.sort(key=lambda r: r.index)
    return rows


@dataclass(frozen=True)
class OptimumResult:
    config: EngineConfig
    report: Optional[CycleReport]
    operational: bool
    output_work: float


def maximize_output_work(base: EngineConfig, bounds: dict, *, seeds_per_axis: int = 5,
                         tol: float = ise.DEFAULT_RTOL, max_iter: int = 400) -> OptimumResult:
    """Maximise -W_tot over box ``bounds`` (name -> (lo, hi)) with Nelder-Mead.

    Points are clipped into the box; invalid or non-operational points score
    by how far they are from producing work, so the search can still move.
    """
    from scipy.optimize import minimize

    names = list(bounds)
    lo = np.array([bounds[n][0] for n in names], dtype=float)
    hi = np.array([bounds[n][1] for n in names], dtype=float)
    if not np.all(hi >= lo):
        raise DomainError("each bound needs lo <= hi")
    span = np.where(hi > lo, hi - lo, 1.0)
    cache = {}

    def evaluate(u):
        x = lo + np.clip(u, 0.0, 1.0) * (hi - lo)
        key = tuple(x)
        if key not in cache:
            try:
                cfg = base.evolve(**dict(zip(names, map(float, x))))
                rep = run_cycle(cfg, tol)
            except (DomainError, NumericError):
                cache[key] = (cfg if "cfg" in locals() else None, None, math.inf)
            else:
                # operational points rank by output; others by their work deficit
                score = rep.w_tot if rep.operational else 1e6 + rep.w_tot
                cache[key] = (cfg, rep, score)
        return cache[key]

    grids = [np.linspace(0.0, 1.0, seeds_per_axis) for _ in names]
    seed = min(itertools.product(*grids), key=lambda u: evaluate(np.array(u))[2])
    res = minimize(lambda u: evaluate(u)[2], np.array(seed), method="Nelder-Mead",
                   options={"maxiter": max_iter, "xatol": 1e-6, "fatol": 1e-12, "initial_simplex": None})
    best_u = min([np.array(seed), np.clip(res.x, 0, 1)], key=lambda u: evaluate(u)[2])
    cfg, rep, score = evaluate(best_u)
    if cfg is None or rep is None:
        return OptimumResult(base, None, False, math.nan)
    return OptimumResult(cfg, rep, rep.operational, -rep.w_tot)
