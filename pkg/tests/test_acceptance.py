"""Ten end-to-end acceptance checks, each timed against its budget.

Every check records one PASS/FAIL line; the lines are echoed at the end of the
pytest run (see conftest.py) and also printed directly when run with ``-s``.
"""
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from sqotto import cycle as cy
from sqotto import hpz
from sqotto import isentropic as ise
from sqotto.config import load_config
from sqotto.figures import r_driving_rows
from sqotto.gaussian import SqueezeParams, effective_inverse_temperature, squeezed_thermal_state, thermal_state
from sqotto.gaussian import wigner_coeffs_from_state
from sqotto.isothermal import BathSpec, steady_covariances, weak_coupling_covariances

from conftest import ACCEPTANCE_LINES
from oracles import a_ij_double_time

HALF_LN5 = 0.5 * math.log(5.0)


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"FAIL criterion {number:2d} {title} ({time.perf_counter() - start:.2f}s): {exc!r}"[:300]
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {title} ({elapsed:.2f}s, budget {budget:g}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, f"over the time budget: {elapsed:.2f}s"


def test_01_adiabatic_efficiency():
    with criterion(1, "adiabatic Otto efficiency", 5.0):
        cfg = cy.EngineConfig(omega_l=1.0, omega_h=5.0, beta_l=math.inf, beta_h=0.1)
        assert cy.efficiency_adiabatic(cfg).value == pytest.approx(0.8, abs=1e-15)
        assert cy.run_cycle(cfg).efficiency == pytest.approx(0.8, abs=1e-14)
        ramped = cy.run_cycle(cfg.evolve(tau=200.0))
        assert ramped.efficiency == pytest.approx(0.8, abs=0.008)


def test_02_sudden_quench_squeeze():
    with criterion(2, "sudden-quench squeeze from both routes", 2.0):
        r = ise.FrequencyRamp.linear(1.0, 5.0, 1e-4)
        s0 = thermal_state(1000.0, 1.0, 1.0)
        via_wigner = ise.squeeze_at_ramp_end(ise.evolve_wigner(s0, r)).eta
        via_fundamental = ise.eta_s_from_fundamental(ise.evolve_fundamental(r), 1.0, 5.0)
        assert via_wigner == pytest.approx(HALF_LN5, abs=1e-3)
        assert via_fundamental == pytest.approx(HALF_LN5, abs=1e-3)


def test_03_r_driving_figure_shape():
    with criterion(3, "r-driving curve shape", 60.0):
        rc = load_config("r-driving")
        taus = rc.fig["tau_grid"].values
        assert len(taus) == 40 and taus[0] == pytest.approx(1e-4) and taus[-1] == pytest.approx(1e3)
        e = rc.engine
        assert (e.omega_l, e.omega_h, e.mass, e.gamma_l, e.cutoff_l) == (1.0, 5.0, 1.0, 2e-5, 1000.0)
        assert 1.0 / e.beta_l == pytest.approx(0.001)
        rows = r_driving_rows(e, taus)
        assert all(r["status"] == "ok" for r in rows)
        etas = [r["eta_s"] for r in rows]
        assert all(b <= a + 1e-9 for a, b in zip(etas, etas[1:]))
        assert etas[0] == pytest.approx(HALF_LN5, abs=1e-3)
        assert etas[-1] < 0.02


def test_04_effective_temperature_law():
    with criterion(4, "effective temperature law", 1.0):
        rng = np.random.default_rng(20240504)
        for _ in range(50):
            eta = rng.uniform(0.0, 3.0)
            beta = 10 ** rng.uniform(-2, 2)
            omega = 10 ** rng.uniform(-1, 1)
            bs = effective_inverse_temperature(eta, beta, omega)
            lhs = 1 / math.tanh(0.5 * bs * omega)
            rhs = math.cosh(2 * eta) / math.tanh(0.5 * beta * omega)
            assert lhs == pytest.approx(rhs, rel=1e-10)
            assert bs <= beta


def test_05_steady_state_closed_form():
    with criterion(5, "steady-state quadrature vs closed form", 10.0):
        for temp in (0.001, 0.1, 1.0, 10.0):
            bath = BathSpec(1 / temp, SqueezeParams(0.0), 1e-5, 1000.0)
            got = steady_covariances(bath, 1.0, 1.0)
            assert got == pytest.approx(weak_coupling_covariances(1 / temp, 0.0, 1.0, 1.0), rel=5e-3)


def test_06_extreme_squeezing_sudden_efficiency():
    with criterion(6, "extreme-squeezing sudden efficiency", 2.0):
        base = cy.EngineConfig(omega_l=1.0, omega_h=5.0, beta_l=10.0, beta_h=0.1)
        assert cy.efficiency_sudden(base.evolve(eta=20.0)).value == pytest.approx(0.48, abs=1e-3)
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 100:
            cfg = cy.EngineConfig(omega_l=1.0, omega_h=rng.uniform(1.5, 10.0), beta_h=10 ** rng.uniform(-2, 0),
                                  beta_l=10 ** rng.uniform(0, 3)).evolve(eta=rng.uniform(0.0, 3.0))
            sc = cy.efficiency_sudden(cfg)
            if not sc.operational:
                continue
            assert sc.value < cy.efficiency_adiabatic(cfg).value
            checked += 1


RAMPS = [(wl, wh, tau, m, eta) for wl, wh in ((1.0, 5.0), (0.5, 3.0))
         for tau in (1e-3, 0.1, 2.0, 30.0, 1000.0) for m, eta in ((1.0, 0.0), (2.5, 0.8))]


def test_07_symplectic_conservation():
    assert len(RAMPS) == 20
    with criterion(7, "symplectic invariant and Wronskian", 10.0):
        for wl, wh, tau, m, eta in RAMPS:
            s0 = squeezed_thermal_state(SqueezeParams(eta, 0.7), 1.5, m, wl)
            r = ise.FrequencyRamp.linear(wl, wh, tau)
            out = ise.evolve_wigner(s0, r)
            w0, w1 = wigner_coeffs_from_state(s0), wigner_coeffs_from_state(out)
            assert abs(w1.invariant - w0.invariant) < 1e-8 * abs(w0.invariant)
            assert abs(ise.evolve_fundamental(r).wronskian - 1.0) < 1e-8


def test_08_hpz_coefficients():
    with criterion(8, "HPZ coefficient suite", 120.0):
        d = hpz.SpectralDensity(0.01, 1.0, 1000.0)
        c0 = hpz.diffusion_coefficients_rwa(d, 1.0, SqueezeParams(0.0), omega=1.0)
        c1 = hpz.diffusion_coefficients_rwa(d, 1.0, SqueezeParams(0.8, 1.3), omega=1.0)
        for c in (c0, c1):
            assert c.gamma_coef == 0.01 and c.d_xx == 0.0
        assert c1.d_xp / c0.d_xp == pytest.approx(math.cosh(1.6), rel=1e-12)
        assert c1.d_pp / c0.d_pp == pytest.approx(math.cosh(1.6), rel=1e-12)

        g, t, cut = 0.1, 200.0, 20.0
        wr = math.sqrt(1 - g * g)
        sd = hpz.SpectralDensity(g, 1.0, cut)
        sq = SqueezeParams(0.3, 0.4)
        h = 1e-3
        a11_up = hpz.a_ij_late(t + h, sd, 1.0, sq, omega=1.0, rtol=1e-12)[0]
        a11_dn = hpz.a_ij_late(t - h, sd, 1.0, sq, omega=1.0, rtol=1e-12)[0]
        a11, _, a12 = hpz.a_ij_late(t, sd, 1.0, sq, omega=1.0, rtol=1e-12)
        from_derivative = (a11_up - a11_dn) / (2 * h) * math.sin(wr * t) / (wr * math.exp(g * t))
        assert from_derivative == pytest.approx(a12, rel=1e-4)

        assert t * g == pytest.approx(20.0)
        ref = a_ij_double_time(t, g, wr, 1.0, 1.0, sq.eta, sq.theta, cut)
        assert a11 == pytest.approx(ref[0], rel=1e-2)


def test_09_cross_route_steady_state():
    with criterion(9, "cross-route steady state", 30.0):
        for gamma in (1e-3, 1e-4):
            for eta in (0.0, 0.5):
                for beta in (2.0, 1000.0):
                    c = hpz.diffusion_coefficients_rwa(hpz.SpectralDensity(gamma, 1.0, 1000.0), beta,
                                                       SqueezeParams(eta), omega=1.0)
                    s = hpz.steady_state_from_coefficients(c, 1.0, 1.0)
                    ref = steady_covariances(BathSpec(beta, SqueezeParams(eta), gamma, 1000.0), 1.0, 1.0)
                    assert (s.sxx, s.spp) == pytest.approx(ref, rel=1e-2)


def test_10_unsqueezing_restores_adiabatic_efficiency():
    with criterion(10, "unsqueezing as shortcut to adiabaticity", 30.0):
        base = cy.EngineConfig(omega_l=1.0, omega_h=5.0, beta_l=10.0, beta_h=0.1, unsqueeze_at_ramp_end=True)
        for tau in (0.01, 1.0, 100.0):
            rep = cy.run_cycle(base.evolve(tau=tau, eta=0.5))
            assert rep.efficiency == pytest.approx(cy.efficiency_adiabatic(base).value, abs=1e-3)
