# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) kernel for the linear-in-w^2 ramp.

Mirrors ``sqotto._ode_py`` step for step; runs without the GIL.
"""

from libc.math cimport sqrt, fabs, pow

DEF WIGNER = 0
DEF FUNDAMENTAL = 1

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40

cdef double SAFETY = 0.9, FAC_MIN = 0.2, FAC_MAX = 10.0


cdef struct Ramp:
    int system
    double w2_start
    double slope
    double mass


cdef inline void rhs(Ramp* r, double t, double* y, double* out) noexcept nogil:
    cdef double w2 = r.w2_start + r.slope * t
    cdef double mw2
    if r.system == WIGNER:
        mw2 = r.mass * w2
        out[0] = mw2 * y[2]
        out[1] = -y[2] / r.mass
        out[2] = 2.0 * (mw2 * y[1] - y[0] / r.mass)
    else:
        out[0] = y[1]
        out[1] = -w2 * y[0]
        out[2] = y[3]
        out[3] = -w2 * y[2]


cdef inline double invariant(int system, double* y) noexcept nogil:
    if system == WIGNER:
        return 4.0 * y[0] * y[1] - y[2] * y[2]
    return y[0] * y[3] - y[1] * y[2]


cdef inline double rms(double* v, double* sc, int n) noexcept nogil:
    cdef double acc = 0.0, q
    cdef int i
    for i in range(n):
        q = v[i] / sc[i]
        acc += q * q
    return sqrt(acc / n)


cdef double initial_step(Ramp* r, int n, double t0, double* y0, double* f0,
                         double span, double rtol, double atol) noexcept nogil:
    cdef double sc[4]
    cdef double y1[4]
    cdef double f1[4]
    cdef double df[4]
    cdef double d0, d1, d2, dm, h0, h1
    cdef int i
    for i in range(n):
        sc[i] = atol + rtol * fabs(y0[i])
    d0 = rms(y0, sc, n)
    d1 = rms(f0, sc, n)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    if h0 > span:
        h0 = span
    for i in range(n):
        y1[i] = y0[i] + h0 * f0[i]
    rhs(r, t0 + h0, y1, f1)
    for i in range(n):
        df[i] = f1[i] - f0[i]
    d2 = rms(df, sc, n) / h0
    dm = d1 if d1 > d2 else d2
    if dm <= 1e-15:
        h1 = h0 * 1e-3
        if h1 < 1e-6:
            h1 = 1e-6
    else:
        h1 = pow(0.01 / dm, 0.2)
    h0 = 100.0 * h0
    if h1 < h0:
        h0 = h1
    if span < h0:
        h0 = span
    return h0


cdef int run(Ramp* r, int n, double* y, double t1, double rtol, double atol,
             long max_steps, double* t_out, long* n_acc_out, long* n_rej_out,
             double* drift_out) noexcept nogil:
    cdef double k1[4]
    cdef double k2[4]
    cdef double k3[4]
    cdef double k4[4]
    cdef double k5[4]
    cdef double k6[4]
    cdef double k7[4]
    cdef double ys[4]
    cdef double yn[4]
    cdef double t = 0.0, h, t_new, err, acc, e, s, fac, inv0, d, ay, ayn
    cdef long n_acc = 0, n_rej = 0
    cdef int i, last, rejected_last = 0, status = 0
    cdef double max_drift = 0.0

    inv0 = invariant(r.system, y)
    rhs(r, t, y, k1)
    h = initial_step(r, n, t, y, k1, t1, rtol, atol)
    while True:
        if n_acc + n_rej >= max_steps:
            status = 1
            break
        if t + h >= t1 or t + 1.01 * h >= t1:
            h = t1 - t
            last = 1
        else:
            last = 0
        if h <= 1e-14 * (1.0 if fabs(t) < 1.0 else fabs(t)):
            status = 2
            break
        for i in range(n):
            ys[i] = y[i] + h * A21 * k1[i]
        rhs(r, t + C2 * h, ys, k2)
        for i in range(n):
            ys[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
        rhs(r, t + C3 * h, ys, k3)
        for i in range(n):
            ys[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
        rhs(r, t + C4 * h, ys, k4)
        for i in range(n):
            ys[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
        rhs(r, t + C5 * h, ys, k5)
        for i in range(n):
            ys[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
        rhs(r, t + h, ys, k6)
        for i in range(n):
            yn[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i])
        t_new = t1 if last else t + h
        rhs(r, t_new, yn, k7)
        acc = 0.0
        for i in range(n):
            e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
            ay = fabs(y[i])
            ayn = fabs(yn[i])
            s = atol + rtol * (ay if ay > ayn else ayn)
            acc += (e / s) * (e / s)
        err = sqrt(acc / n)
        if err <= 1.0:
            t = t_new
            for i in range(n):
                y[i] = yn[i]
                k1[i] = k7[i]
            n_acc += 1
            d = fabs(invariant(r.system, y) - inv0) / fabs(inv0)
            if d > max_drift:
                max_drift = d
            if last:
                break
            if err == 0.0:
                fac = FAC_MAX
            else:
                fac = SAFETY * pow(err, -0.2)
                if fac > FAC_MAX:
                    fac = FAC_MAX
                if fac < FAC_MIN:
                    fac = FAC_MIN
            if rejected_last and fac > 1.0:
                fac = 1.0
            h *= fac
            rejected_last = 0
        else:
            n_rej += 1
            fac = SAFETY * pow(err, -0.2)
            if fac < FAC_MIN:
                fac = FAC_MIN
            h *= fac
            rejected_last = 1
    t_out[0] = t
    n_acc_out[0] = n_acc
    n_rej_out[0] = n_rej
    drift_out[0] = max_drift
    return status


def integrate_linear_ramp(int system, y0, double tau, double w2_start, double w2_end,
                          double mass, double rtol, double atol, long max_steps):
    """Same contract as ``sqotto._ode_py.integrate_linear_ramp``."""
    cdef Ramp r
    cdef double y[4]
    cdef double t_last = 0.0, drift = 0.0
    cdef long n_acc = 0, n_rej = 0
    cdef int n = 3 if system == WIGNER else 4
    cdef int i, status
    if len(y0) != n:
        raise ValueError(f"expected {n} initial values")
    for i in range(n):
        y[i] = y0[i]
    if tau <= 0.0:
        return [y[i] for i in range(n)], 0, 0.0, 0, 0, 0.0
    r.system = system
    r.w2_start = w2_start
    r.slope = (w2_end - w2_start) / tau
    r.mass = mass
    with nogil:
        status = run(&r, n, y, tau, rtol, atol, max_steps, &t_last, &n_acc, &n_rej, &drift)
    return [y[i] for i in range(n)], status, t_last, n_acc, n_rej, drift
