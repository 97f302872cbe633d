"""Backend selection for the ramp integrator.

The compiled kernel is used when importable; set ``SQOTTO_BACKEND=python``
to force the pure-Python fallback.
"""

import os

from . import _ode_py
from .errors import NumericError

WIGNER = _ode_py.WIGNER
FUNDAMENTAL = _ode_py.FUNDAMENTAL

_BACKENDS = {"python": _ode_py.integrate_linear_ramp}
try:
    from . import _ode_ext
except ImportError:  # extension not built
    _ode_ext = None
else:
    _BACKENDS["compiled"] = _ode_ext.integrate_linear_ramp


def _default_backend():
    forced = os.environ.get("SQOTTO_BACKEND", "").strip().lower()
    if forced:
        if forced not in _BACKENDS:
            raise ImportError(f"SQOTTO_BACKEND={forced!r} is not available (have {sorted(_BACKENDS)})")
        return forced
    return "compiled" if "compiled" in _BACKENDS else "python"


BACKEND = _default_backend()


def available_backends():
    return sorted(_BACKENDS)


def _check(status, t_last, tau):
    if status == _ode_py.STATUS_MAX_STEPS:
        raise NumericError(f"ramp integration exceeded the step budget at t={t_last!r} of {tau!r}", t_last)
    if status == _ode_py.STATUS_STEP_UNDERFLOW:
        raise NumericError(f"ramp integration step size underflow at t={t_last!r}", t_last)


def integrate_linear_ramp(system, y0, tau, w2_start, w2_end, mass=1.0,
                          rtol=1e-10, atol=1e-12, max_steps=2_000_000, backend=None):
    """Integrate a built-in system; returns ``(y_end, n_steps, max_invariant_drift)``."""
    fn = _BACKENDS[backend or BACKEND]
    y, status, t_last, n_acc, n_rej, drift = fn(system, list(y0), float(tau), float(w2_start),
                                                float(w2_end), float(mass), float(rtol),
                                                float(atol), int(max_steps))
    _check(status, t_last, tau)
    return list(y), n_acc + n_rej, drift


def integrate_callable(system, y0, tau, w2, mass=1.0, rtol=1e-10, atol=1e-12, max_steps=2_000_000):
    """Integrate with a user-supplied ``w2(t)``; always the Python path."""
    rhs = _ode_py.wigner_rhs(mass, w2) if system == WIGNER else _ode_py.fundamental_rhs(w2)
    y, status, t_last, n_acc, n_rej, drift = _ode_py.dopri5(rhs, y0, 0.0, tau, rtol, atol, max_steps, system)
    _check(status, t_last, tau)
    return list(y), n_acc + n_rej, drift
