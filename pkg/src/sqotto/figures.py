"""Data behind the two figures: end-of-ramp squeeze vs ramp duration, and
late-time covariances over coupling and temperature."""

from __future__ import annotations

import math

from . import isentropic as ise
from .cycle import EngineConfig
from .errors import SqottoError
from .gaussian import SqueezeParams
from .isothermal import BathSpec, steady_covariances, steady_state

R_DRIVING_COLUMNS = ("tau", "eta_s", "status")
COV_COLUMNS = ("gamma", "temperature", "sxx_scaled", "spp_scaled", "status")


def _tag(exc):
    return f"{type(exc).__name__}: {exc}"


def r_driving_rows(cfg: EngineConfig, taus, tol: float = ise.DEFAULT_RTOL) -> list[dict]:
    """eta_s at the end of a linear compression ramp, for each duration.

    The ramp starts from the cold-bath steady state of ``cfg``.
    """
    start = steady_state(cfg.cold_bath(), cfg.mass, cfg.omega_l, cfg.coupling_mode).state
    rows = []
    for tau in taus:
        try:
            r = ise.FrequencyRamp.linear(cfg.omega_l, cfg.omega_h, tau)
            end = ise.evolve_wigner(start, r, tol)
            rows.append({"tau": tau, "eta_s": ise.squeeze_at_ramp_end(end).eta, "status": "ok"})
        except SqottoError as exc:
            rows.append({"tau": tau, "eta_s": math.nan, "status": _tag(exc)})
    return rows


def cov_rows(gammas, temperatures, *, mass: float = 1.0, omega: float = 1.0, cutoff: float = 1000.0) -> list[dict]:
    """Late-time variances in a plain thermal bath, scaled by their ground-state values."""
    rows = []
    for g in gammas:
        for temp in temperatures:
            row = {"gamma": g, "temperature": temp}
            try:
                beta = math.inf if temp == 0 else 1.0 / temp
                sxx, spp = steady_covariances(BathSpec(beta, SqueezeParams(0.0), g, cutoff), mass, omega)
                row.update(sxx_scaled=2 * mass * omega * sxx, spp_scaled=2 * spp / (mass * omega), status="ok")
            except (SqottoError, ValueError) as exc:
                row.update(sxx_scaled=math.nan, spp_scaled=math.nan, status=_tag(exc))
            rows.append(row)
    return rows
