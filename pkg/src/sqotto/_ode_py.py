"""Pure-Python Dormand-Prince 5(4) integrator for the ramp equations.

Reference implementation and fallback for the compiled ``_ode_ext`` kernel.
The two share the step-size controller and the Butcher tableau, so they
agree to rounding on the same problem.
"""

import math

WIGNER = 0
FUNDAMENTAL = 1

# Dormand & Prince (1980) tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 10.0

STATUS_OK = 0
STATUS_MAX_STEPS = 1
STATUS_STEP_UNDERFLOW = 2


def wigner_rhs(mass, w2):
    """Right-hand side for (coef x^2, coef p^2, coef xp) under frequency w2(t)."""

    def rhs(t, y):
        a, b, c = y
        mw2 = mass * w2(t)
        return [mw2 * c, -c / mass, 2.0 * (mw2 * b - a / mass)]

    return rhs


def fundamental_rhs(w2):
    def rhs(t, y):
        d1, d1dot, d2, d2dot = y
        w = w2(t)
        return [d1dot, -w * d1, d2dot, -w * d2]

    return rhs


def invariant(system, y):
    if system == WIGNER:
        return 4.0 * y[0] * y[1] - y[2] * y[2]
    return y[0] * y[3] - y[1] * y[2]


def _rms(vals):
    return math.sqrt(sum(v * v for v in vals) / len(vals))


def _initial_step(rhs, t0, y0, f0, t_span, rtol, atol):
    sc = [atol + rtol * abs(v) for v in y0]
    d0 = _rms([v / s for v, s in zip(y0, sc)])
    d1 = _rms([v / s for v, s in zip(f0, sc)])
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t_span)
    y1 = [v + h0 * f for v, f in zip(y0, f0)]
    f1 = rhs(t0 + h0, y1)
    d2 = _rms([(a - b) / s for a, b, s in zip(f1, f0, sc)]) / h0
    dm = max(d1, d2)
    h1 = max(1e-6, h0 * 1e-3) if dm <= 1e-15 else (0.01 / dm) ** 0.2
    return min(100 * h0, h1, t_span)


def dopri5(rhs, y0, t0, t1, rtol=1e-10, atol=1e-12, max_steps=1_000_000, system=None):
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1``.

    Returns ``(y, status, t_last, n_accepted, n_rejected, max_drift)`` where
    ``max_drift`` is the largest relative change of the conserved quantity of
    ``system`` over accepted steps (0.0 when ``system`` is None).
    """
    n = len(y0)
    y = [float(v) for v in y0]
    t = float(t0)
    span = float(t1) - t
    if span <= 0.0:
        return y, STATUS_OK, t, 0, 0, 0.0
    inv0 = invariant(system, y) if system is not None else 0.0
    max_drift = 0.0
    k1 = rhs(t, y)
    h = _initial_step(rhs, t, y, k1, span, rtol, atol)
    n_acc = n_rej = 0
    rejected_last = False
    rng = range(n)
    while True:
        if n_acc + n_rej >= max_steps:
            return y, STATUS_MAX_STEPS, t, n_acc, n_rej, max_drift
        if t + h >= t1 or t + 1.01 * h >= t1:
            h = t1 - t
            last = True
        else:
            last = False
        if h <= 1e-14 * max(1.0, abs(t)):
            return y, STATUS_STEP_UNDERFLOW, t, n_acc, n_rej, max_drift
        k2 = rhs(t + C2 * h, [y[i] + h * A21 * k1[i] for i in rng])
        k3 = rhs(t + C3 * h, [y[i] + h * (A31 * k1[i] + A32 * k2[i]) for i in rng])
        k4 = rhs(t + C4 * h, [y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]) for i in rng])
        k5 = rhs(t + C5 * h, [y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]) for i in rng])
        k6 = rhs(t + h, [y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]) for i in rng])
        y_new = [y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]) for i in rng]
        t_new = t1 if last else t + h
        k7 = rhs(t_new, y_new)
        acc = 0.0
        for i in rng:
            e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
            s = atol + rtol * max(abs(y[i]), abs(y_new[i]))
            acc += (e / s) ** 2
        err = math.sqrt(acc / n)
        if err <= 1.0:
            t, y, k1 = t_new, y_new, k7
            n_acc += 1
            if system is not None:
                d = abs(invariant(system, y) - inv0) / abs(inv0)
                if d > max_drift:
                    max_drift = d
            if last:
                return y, STATUS_OK, t, n_acc, n_rej, max_drift
            fac = FAC_MAX if err == 0.0 else min(FAC_MAX, max(FAC_MIN, SAFETY * err ** -0.2))
            if rejected_last:
                fac = min(fac, 1.0)
            h *= fac
            rejected_last = False
        else:
            n_rej += 1
            h *= max(FAC_MIN, SAFETY * err ** -0.2)
            rejected_last = True


def integrate_linear_ramp(system, y0, tau, w2_start, w2_end, mass, rtol, atol, max_steps):
    """Integrate one of the built-in systems over the linear-in-w^2 ramp."""
    slope = (w2_end - w2_start) / tau

    def w2(t):
        return w2_start + slope * t

    rhs = wigner_rhs(mass, w2) if system == WIGNER else fundamental_rhs(w2)
    return dopri5(rhs, y0, 0.0, tau, rtol, atol, max_steps, system)
