"""Vectorised adaptive Gauss-Kronrod (G10/K21) quadrature on finite intervals.

Used for the bath-frequency integrals, whose integrands have a narrow
resonance peak and, for late-time rotating terms, fast oscillation.  Callers
pass breakpoints at known features and a maximum panel width that resolves
the oscillation; the adaptive loop then bisects the panels carrying the
largest error estimates, many at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError

# QUADPACK qk21 abscissae / weights on [-1, 1] (positive half, centre last)
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077624732558940,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
_g_idx = [1, 3, 5, 7, 9]
GAUSS_WEIGHTS[_g_idx] = _WG
GAUSS_WEIGHTS[[20 - i for i in _g_idx]] = _WG

_CHUNK = 16384


@dataclass
class QuadResult:
    value: np.ndarray | float
    error: np.ndarray | float
    n_panels: int
    n_evals: int


def _gk(f, lo, hi):
    """G10/K21 sums on panels [lo, hi]; returns (kronrod, |kronrod - gauss|), each (k, P)."""
    ks, es = [], []
    for start in range(0, lo.size, _CHUNK):
        a = lo[start:start + _CHUNK]
        b = hi[start:start + _CHUNK]
        half = 0.5 * (b - a)
        mid = 0.5 * (b + a)
        x = mid[:, None] + half[:, None] * NODES[None, :]
        vals = np.asarray(f(x.ravel()), dtype=float)
        vals = vals.reshape(-1, a.size, NODES.size)
        k = (vals @ KRONROD_WEIGHTS) * half
        g = (vals @ GAUSS_WEIGHTS) * half
        ks.append(k)
        es.append(np.abs(k - g))
    return np.concatenate(ks, axis=1), np.concatenate(es, axis=1)


def initial_panels(a, b, points=(), max_width=None, max_panels=None):
    edges = sorted({float(a), float(b), *(float(p) for p in points if a < p < b)})
    counts = [1] * (len(edges) - 1)
    if max_width is not None and max_width > 0:
        counts = [max(1, int(np.ceil((r - l) / max_width))) for l, r in zip(edges[:-1], edges[1:])]
    if max_panels is not None and sum(counts) > max_panels:
        raise NumericError(f"resolving the oscillation needs {sum(counts)} panels (limit {max_panels})")
    lo, hi = [], []
    for left, right, n in zip(edges[:-1], edges[1:], counts):
        cuts = np.linspace(left, right, n + 1)
        lo.append(cuts[:-1])
        hi.append(cuts[1:])
    return np.concatenate(lo), np.concatenate(hi)


def integrate(f, a, b, *, points=(), max_width=None, rtol=1e-9, atol=0.0, max_panels=1_000_000):
    """Integrate ``f`` over ``[a, b]``.

    ``f`` maps a 1-D array of abscissae to an array of shape ``(n,)`` or
    ``(k, n)``; vector-valued integrands share the panel refinement and each
    component must meet ``max(atol, rtol * |I_k|)``.

    Raises :class:`NumericError` when the panel budget is exhausted.
    """
    if b < a:
        res = integrate(f, b, a, points=points, max_width=max_width, rtol=rtol, atol=atol, max_panels=max_panels)
        res.value = -res.value
        return res
    if a == b:
        probe = np.asarray(f(np.array([float(a)])))
        shape = probe.shape[:-1]
        return QuadResult(np.zeros(shape) if shape else 0.0, np.zeros(shape) if shape else 0.0, 0, 1)

    lo, hi = initial_panels(a, b, points, max_width, max_panels)
    probe_shape = np.asarray(f(np.array([0.5 * (lo[0] + hi[0])]))).shape
    scalar = len(probe_shape) == 1
    kval, kerr = _gk(f, lo, hi)
    n_evals = lo.size * NODES.size
    # converged panels are folded into these running sums
    done_val = np.zeros(kval.shape[0])
    done_err = np.zeros(kval.shape[0])
    n_done = 0
    while True:
        total = done_val + kval.sum(axis=1)
        err = done_err + kerr.sum(axis=1)
        target = np.maximum(atol, rtol * np.abs(total))
        if np.all(err <= target):
            break
        n_live = lo.size
        if n_live + n_done > max_panels or n_live == 0:
            raise NumericError(
                f"quadrature did not converge: error {err.max():.3g} > target {target.min():.3g} "
                f"with {n_live} panels", last_good=None)
        # equidistribution: refine panels whose error exceeds their share
        share = target[:, None] / n_live
        ratio = (kerr / np.maximum(share, 1e-300)).max(axis=0)
        split = ratio > 1.0
        if not split.any():
            split[np.argmax(ratio)] = True
        width = hi - lo
        tiny = width <= 1e-13 * np.maximum(1.0, np.abs(lo))
        if np.all(tiny[split]):
            raise NumericError("quadrature panels underflowed before reaching tolerance",
                               last_good=float(lo[split][0]))
        # panels that stay are frozen only when their error is negligible
        keep = ~split & (ratio < 1e-3)
        done_val += kval[:, keep].sum(axis=1)
        done_err += kerr[:, keep].sum(axis=1)
        n_done += int(keep.sum())
        stay = ~split & ~keep
        s_lo, s_hi = lo[split & ~tiny], hi[split & ~tiny]
        mid = 0.5 * (s_lo + s_hi)
        new_lo = np.concatenate([s_lo, mid])
        new_hi = np.concatenate([mid, s_hi])
        nk, ne = _gk(f, new_lo, new_hi)
        n_evals += new_lo.size * NODES.size
        tiny_split = split & tiny
        lo = np.concatenate([lo[stay], lo[tiny_split], new_lo])
        hi = np.concatenate([hi[stay], hi[tiny_split], new_hi])
        kval = np.concatenate([kval[:, stay], kval[:, tiny_split], nk], axis=1)
        kerr = np.concatenate([kerr[:, stay], kerr[:, tiny_split], ne], axis=1)
    n_panels = lo.size + n_done
    if scalar:
        return QuadResult(float(total[0]), float(err[0]), n_panels, n_evals)
    return QuadResult(total, err, n_panels, n_evals)
