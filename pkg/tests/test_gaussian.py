import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp
from scipy.linalg import expm
from scipy.optimize import brentq

from sqotto import gaussian as g
from sqotto._mathutil import coth
from sqotto.errors import DomainError

INF = math.inf


def _symplectic_squeeze(eta, theta, t=0.0, omega=1.0):
    """Covariance of a squeezed vacuum by exponentiating the quadratic generator, then free rotation."""
    # generator of S(zeta) on (x, p) in ground-state units
    gen = -eta * np.array([[math.cos(theta), math.sin(theta)], [math.sin(theta), -math.cos(theta)]])
    s = expm(gen)
    rot = np.array([[math.cos(omega * t), math.sin(omega * t)], [-math.sin(omega * t), math.cos(omega * t)]])
    m = rot @ s
    return 0.5 * m @ m.T


def test_thermal_unsqueezed_is_stationary():
    s = g.squeezed_thermal_state(g.SqueezeParams(0.0, 1.3), 1.0, 1.0, 1.0, t=0.7)
    assert s.sxx == pytest.approx(0.5 / math.tanh(0.5), rel=1e-14)
    assert s.spp == pytest.approx(1.0820, abs=1e-4)
    assert s.sxp == 0.0


def test_squeezed_vacuum_matches_symplectic_oracle():
    s = g.squeezed_thermal_state(g.SqueezeParams(0.5, 0.0), INF, 1.0, 1.0)
    ref = _symplectic_squeeze(0.5, 0.0)
    assert s.sxx == pytest.approx(ref[0, 0], rel=1e-12) == pytest.approx(0.5 * math.exp(-1))
    assert s.spp == pytest.approx(ref[1, 1], rel=1e-12) == pytest.approx(0.5 * math.exp(1))
    assert s.sxp == pytest.approx(0.0, abs=1e-15)


def test_squeezed_vacuum_rotated_quarter_period():
    s = g.squeezed_thermal_state(g.SqueezeParams(0.5, 0.0), INF, 1.0, 1.0, t=math.pi / 4)
    ref = _symplectic_squeeze(0.5, 0.0, t=math.pi / 4)
    assert abs(s.sxp) == pytest.approx(0.5 * math.sinh(1.0), rel=1e-12)
    assert s.sxp == pytest.approx(ref[0, 1], rel=1e-12)
    assert s.sxx == pytest.approx(ref[0, 0], rel=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.4, 1.9, 3.0, 5.5])
def test_apply_squeeze_agrees_with_generator(theta):
    s = g.apply_squeeze(g.thermal_state(INF, 1.0, 1.0), g.SqueezeParams(0.7, theta))
    ref = _symplectic_squeeze(0.7, theta)
    np.testing.assert_allclose(s.covariance, ref, rtol=1e-12, atol=1e-14)


def test_mechanical_energy_examples():
    assert g.mechanical_energy(g.thermal_state(INF, 2.0, 3.0)) == pytest.approx(1.5, rel=1e-15)
    mp.dps = 40
    assert g.mechanical_energy(g.thermal_state(1.0, 1.0, 1.0)) == pytest.approx(float(mp.coth(0.5) / 2), rel=1e-15)


def test_squeezed_energy_law():
    e0 = g.mechanical_energy(g.thermal_state(0.7, 1.0, 2.0))
    for theta, t in ((0.0, 0.0), (1.0, 0.3), (2.5, 11.0)):
        s = g.squeezed_thermal_state(g.SqueezeParams(0.4, theta), 0.7, 1.0, 2.0, t)
        assert g.mechanical_energy(s) == pytest.approx(math.cosh(0.8) * e0, rel=1e-12)


def _beta_s_oracle(eta, beta, omega):
    target = math.cosh(2 * eta) * (1.0 if math.isinf(beta) else 1 / math.tanh(beta * omega / 2))
    return brentq(lambda b: 1 / math.tanh(b * omega / 2) - target, 1e-9, 1e4, xtol=1e-15, rtol=1e-15)


def test_effective_temperature_examples():
    assert g.effective_inverse_temperature(0.0, 1.7, 1.3) == pytest.approx(1.7, rel=1e-13)
    eta2 = 0.5 * math.acosh(2.0)
    assert g.effective_inverse_temperature(eta2, 1.0, 1.0) == pytest.approx(_beta_s_oracle(eta2, 1.0, 1.0), rel=1e-10)
    assert g.effective_inverse_temperature(eta2, 1.0, 1.0) == pytest.approx(0.4706, abs=1e-4)
    assert g.effective_inverse_temperature(0.5, INF, 1.0) == pytest.approx(_beta_s_oracle(0.5, INF, 1.0), rel=1e-10)
    mp.dps = 40
    assert g.effective_inverse_temperature(0.5, INF, 1.0) == pytest.approx(float(2 * mp.acoth(mp.cosh(1))), rel=1e-13)
    assert g.effective_inverse_temperature(0.0, INF, 1.0) == INF


def test_effective_temperature_monotone_in_eta():
    etas = np.linspace(0, 3, 40)
    bs = [g.effective_inverse_temperature(e, 2.0, 1.5) for e in etas]
    assert all(b1 > b2 for b1, b2 in zip(bs, bs[1:]))


def test_extract_squeeze_cases():
    sq, vt = g.extract_squeeze(g.thermal_state(0.8, 1.0, 2.0))
    assert sq.eta == 0.0 and sq.theta == 0.0
    assert vt == pytest.approx(1.6, rel=1e-12)
    pure = g.GaussianState(math.exp(-1.0) / 2, math.exp(1.0) / 2, 0.0, 1.0, 1.0)
    sq, vt = g.extract_squeeze(pure)
    assert sq.eta == pytest.approx(0.5, rel=1e-13) and sq.theta == 0.0 and vt == INF


def test_extract_squeeze_of_sudden_quench():
    s = g.thermal_state(INF, 1.0, 1.0).with_omega(5.0)
    assert g.extract_squeeze(s)[0].eta == pytest.approx(0.5 * math.log(5), rel=1e-13)


def test_wigner_coeffs():
    w = g.wigner_coeffs_from_state(g.thermal_state(INF, 1.0, 1.0))
    assert w.c == 0.0
    s = g.squeezed_thermal_state(g.SqueezeParams(0.3, 0.0), 2.0, 1.3, 0.9)
    w = g.wigner_coeffs_from_state(s)
    assert w.c == pytest.approx(0.0, abs=1e-16)
    inv = np.linalg.inv(s.covariance)
    # exponent -(1/2) z^T Sigma^{-1} z
    assert w.b == pytest.approx(-0.5 * inv[0, 0], rel=1e-13)
    assert w.a == pytest.approx(-0.5 * inv[1, 1], rel=1e-13)
    assert w.norm == pytest.approx(1 / (2 * math.pi * math.sqrt(np.linalg.det(s.covariance))), rel=1e-13)


def test_squeeze_inverse_and_vacuum():
    s = g.thermal_state(0.5, 1.0, 1.0)
    sq = g.SqueezeParams(0.9, 2.1)
    back = g.apply_squeeze(g.apply_squeeze(s, sq), sq.inverse())
    np.testing.assert_allclose(back.covariance, s.covariance, rtol=1e-12, atol=1e-14)
    vac = g.apply_squeeze(g.thermal_state(INF, 1.0, 1.0), g.SqueezeParams(0.5, 0.0))
    assert g.extract_squeeze(vac)[0].eta == pytest.approx(0.5, rel=1e-12)


def test_squeezing_multiplies_thermal_energy():
    s = g.thermal_state(0.3, 2.0, 1.5)
    out = g.apply_squeeze(s, g.SqueezeParams(1.1, 0.2))
    assert g.mechanical_energy(out) == pytest.approx(math.cosh(2.2) * g.mechanical_energy(s), rel=1e-12)


def test_steady_wigner_parameters():
    s = g.thermal_state(1.0, 1.0, 1.0)
    a, b = g.steady_wigner_parameters(s)
    assert (a, b) == (-0.5 * s.spp, -0.5 * s.sxx)
    with pytest.raises(DomainError):
        g.steady_wigner_parameters(g.squeezed_thermal_state(g.SqueezeParams(0.3), 1.0, 1.0, 1.0, t=0.4))


@pytest.mark.parametrize("kw", [
    dict(sxx=0.1, spp=0.1, sxp=0.0, mass=1.0, omega=1.0),
    dict(sxx=-1.0, spp=1.0, sxp=0.0, mass=1.0, omega=1.0),
    dict(sxx=1.0, spp=1.0, sxp=0.0, mass=0.0, omega=1.0),
    dict(sxx=float("nan"), spp=1.0, sxp=0.0, mass=1.0, omega=1.0),
])
def test_invalid_states_rejected(kw):
    with pytest.raises(DomainError):
        g.GaussianState(**kw)


def test_invalid_inputs():
    with pytest.raises(DomainError):
        g.SqueezeParams(-0.1)
    with pytest.raises(DomainError):
        g.ThermalSpec(0.0)
    with pytest.raises(DomainError):
        g.thermal_state(-1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        g.WignerCoeffs(a=-1.0, b=-1.0, c=3.0, norm=1.0)


def test_coth_series_branch():
    mp.dps = 40
    for x in (1e-8, 5e-5, 9.9e-5, 1e-3, 0.5, 25.0):
        assert coth(x) == pytest.approx(float(mp.coth(x)), rel=1e-14)
    assert coth(INF) == 1.0


eta_st = st.floats(0.0, 3.0)
theta_st = st.floats(0.0, 2 * math.pi)
beta_st = st.floats(0.05, 50.0)
pos_st = st.floats(0.2, 5.0)


@given(eta_st, theta_st, beta_st, pos_st, pos_st, st.floats(0.0, 100.0))
def test_constructor_respects_uncertainty(eta, theta, beta, m, w, t):
    s = g.squeezed_thermal_state(g.SqueezeParams(eta, theta), beta, m, w, t)
    assert s.determinant >= 0.25 - 1e-9


@given(eta_st, theta_st, beta_st, pos_st, pos_st, st.floats(0.0, 100.0))
def test_energy_independent_of_angle_and_time(eta, theta, beta, m, w, t):
    e = g.mechanical_energy(g.squeezed_thermal_state(g.SqueezeParams(eta, theta), beta, m, w, t))
    e0 = g.mechanical_energy(g.squeezed_thermal_state(g.SqueezeParams(eta, 0.0), beta, m, w, 0.0))
    assert e == pytest.approx(e0, rel=1e-10)


@given(st.floats(0.0, 2.5), theta_st, beta_st, pos_st)
def test_extract_recovers_applied_squeeze(eta, theta, beta, w):
    s = g.apply_squeeze(g.thermal_state(beta, 1.0, w), g.SqueezeParams(eta, theta))
    sq, vt = g.extract_squeeze(s)
    assert abs(sq.eta - eta) < 1e-9
    if eta > 1e-3:
        diff = (sq.theta - theta + math.pi) % (2 * math.pi) - math.pi
        assert abs(diff) < 1e-6
    if beta * w < 15:
        # beyond this the state is pure to within the purity threshold
        assert vt == pytest.approx(beta * w, rel=1e-8)


@given(st.floats(0.0, 2.5), theta_st, beta_st)
def test_squeeze_preserves_symplectic_eigenvalue(eta, theta, beta):
    s = g.thermal_state(beta, 1.3, 0.7)
    out = g.apply_squeeze(s, g.SqueezeParams(eta, theta))
    assert g.symplectic_eigenvalue(out) == pytest.approx(g.symplectic_eigenvalue(s), rel=1e-12)


@given(st.floats(0.0, 2.0), theta_st, beta_st, pos_st, pos_st, st.floats(0.0, 10.0))
def test_wigner_round_trip(eta, theta, beta, m, w, t):
    s = g.squeezed_thermal_state(g.SqueezeParams(eta, theta), beta, m, w, t)
    back = g.state_from_wigner_coeffs(g.wigner_coeffs_from_state(s), m, w)
    np.testing.assert_allclose(back.covariance, s.covariance, rtol=1e-12, atol=1e-12 * max(s.sxx, s.spp))


@given(st.floats(0.0, 3.0), st.floats(0.05, 1e4), pos_st)
def test_effective_temperature_law(eta, beta, w):
    bs = g.effective_inverse_temperature(eta, beta, w)
    assert coth(bs * w / 2) == pytest.approx(math.cosh(2 * eta) * coth(beta * w / 2), rel=1e-10)
    assert bs <= beta


def test_effective_temperature_with_vanishing_squeeze():
    # the excess of coth over one underflows here; the result must stay finite
    assert g.effective_inverse_temperature(1.2322935071446801e-219, 150.0, 5.0) == 150.0
    # zero temperature: coth(bs/2) - 1 = 2 sinh(eta)^2, so bs = -2 ln sinh(eta)
    assert g.effective_inverse_temperature(1e-200, math.inf, 1.0) == pytest.approx(-2 * math.log(1e-200), rel=1e-14)
