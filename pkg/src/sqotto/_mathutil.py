"""Scalar helpers: hyperbolic cotangent with a zero-temperature sentinel."""

import math

import numpy as np

#: Inverse temperature of a zero-temperature bath.
INF = math.inf

_SERIES_CUTOFF = 1e-4


def is_zero_temperature(beta):
    return math.isinf(beta) and beta > 0


def coth(x):
    """coth(x) for x > 0, with coth(inf) == 1 exactly.

    Small arguments use the Laurent series 1/x + x/3 - x**3/45.
    """
    if math.isinf(x):
        return 1.0
    if x <= 0.0:
        raise ValueError(f"coth argument must be positive, got {x!r}")
    if x < _SERIES_CUTOFF:
        return 1.0 / x + x / 3.0 - x ** 3 / 45.0
    if x > 20.0:
        # 1 + 2 e^{-2x} + ... ; avoids tanh rounding to exactly 1 too early
        e = math.exp(-2.0 * x)
        return 1.0 + 2.0 * e / (1.0 - e)
    return 1.0 / math.tanh(x)


def coth_array(x):
    """Vectorised :func:`coth` for arrays of non-negative arguments.

    ``x == 0`` maps to ``inf``; callers multiply by a vanishing factor.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < _SERIES_CUTOFF
    big = ~small
    xs = x[small]
    with np.errstate(divide="ignore"):
        out[small] = 1.0 / xs + xs / 3.0 - xs ** 3 / 45.0
    out[big] = 1.0 / np.tanh(x[big])
    return out


def kappa_coth(kappa, beta):
    """kappa * coth(beta*kappa/2), finite at kappa = 0 (limit 2/beta).

    ``beta = inf`` gives ``kappa`` (zero temperature).
    """
    kappa = np.asarray(kappa, dtype=float)
    if is_zero_temperature(beta):
        return kappa.copy()
    x = 0.5 * beta * kappa
    out = np.empty_like(kappa)
    small = x < _SERIES_CUTOFF
    xs = x[small]
    # kappa*coth(x) = (2/beta) * x*coth(x),  x*coth(x) = 1 + x^2/3 - x^4/45
    out[small] = (2.0 / beta) * (1.0 + xs ** 2 / 3.0 - xs ** 4 / 45.0)
    big = ~small
    out[big] = kappa[big] / np.tanh(x[big])
    return out


def arcoth(y):
    """Inverse hyperbolic cotangent for y >= 1; arcoth(1) == inf."""
    if y < 1.0:
        raise ValueError(f"arcoth argument must be >= 1, got {y!r}")
    if y == 1.0:
        return math.inf
    return 0.5 * math.log((y + 1.0) / (y - 1.0))
