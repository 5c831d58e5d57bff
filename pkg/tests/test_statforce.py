"""Coupled amplitude/release-time saddle system (photon-statistics force)."""

import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from qsfa.statforce import (
    RESIDUAL_NORM_TOL,
    PsfSolution,
    psf_sweep,
    solve_psf,
    taylor_coefficients,
    zeroth_order_psf,
    _ic_antideriv,
    _is_antideriv,
    _kcc,
    _kcs,
    _kss,
)

# drive scale shared by the solver tests (400 nm doubled field, He target)
OMEGA = 0.057
E2W = 0.106
G = 1e-8


# --- closed-form antiderivatives -------------------------------------------

def _velocity(t, px, a2, b, ax, ay, w):
    return (px + a2 * cmath.cos(2.0 * w * t)
            + b * (ax * cmath.cos(w * t) + ay * cmath.sin(w * t)))


@pytest.mark.parametrize("t0", [0.4 + 0.0j, 3.0 + 9.0j, -7.0 + 2.5j])
def test_antiderivatives_differentiate_to_integrands(t0):
    px, a2, b, ax, ay, w = 0.2, 0.93, 1.7, 0.3 + 0.1j, -0.2 + 0.4j, OMEGA
    h = 1e-3

    def fd(f):
        return (8.0 * (f(t0 + h) - f(t0 - h))
                - (f(t0 + 2 * h) - f(t0 - 2 * h))) / (12.0 * h)

    v = _velocity(t0, px, a2, b, ax, ay, w)
    dic = fd(lambda t: _ic_antideriv(t, px, a2, b, ax, ay, w))
    dis = fd(lambda t: _is_antideriv(t, px, a2, b, ax, ay, w))
    assert dic == pytest.approx(v * cmath.cos(w * t0), rel=1e-8)
    assert dis == pytest.approx(v * cmath.sin(w * t0), rel=1e-8)
    assert fd(lambda t: _kcc(t, w)) == pytest.approx(
        cmath.cos(w * t0) ** 2, rel=1e-8)
    assert fd(lambda t: _kcs(t, w)) == pytest.approx(
        cmath.cos(w * t0) * cmath.sin(w * t0), rel=1e-7)
    assert fd(lambda t: _kss(t, w)) == pytest.approx(
        cmath.sin(w * t0) ** 2, rel=1e-8)


# --- the saddle equations are the gradient of the effective action ---------

def _assembled_residual(tp, ax, ay, *, p, r, g, w, e_2w, ip, t_up):
    """The three saddle equations rebuilt from the closed-form pieces."""
    px, py = p
    a2 = e_2w / (2.0 * w)
    b = 2.0 * g / w
    c_minus = 2.0 / (math.exp(-r) * math.cosh(r)) + 1.0
    c_plus = 2.0 / (math.exp(r) * math.cosh(r)) + 1.0
    v = _velocity(tp, px, a2, b, ax, ay, w)
    ic = (_ic_antideriv(t_up, px, a2, b, ax, ay, w)
          - _ic_antideriv(tp, px, a2, b, ax, ay, w))
    is_ = (_is_antideriv(t_up, px, a2, b, ax, ay, w)
           - _is_antideriv(tp, px, a2, b, ax, ay, w))
    f1 = 0.5 * v * v + ip + 0.5 * py**2
    f2 = -b * ic + 1j * c_minus * ax + math.tanh(r) * ay
    f3 = -b * is_ + 1j * c_plus * ay + math.tanh(r) * ax
    return f1, f2, f3


def _action_value(tp, ax, ay, *, p, r, g, w, e_2w, ip, t_up):
    """Effective action by numerical quadrature along a straight path."""
    px, py = p
    a2 = e_2w / (2.0 * w)
    b = 2.0 * g / w
    span = t_up - tp

    def integrand(s):
        tau = tp + s * span
        return (_velocity(tau, px, a2, b, ax, ay, w) ** 2 + py**2) * span

    re, _ = quad(lambda s: integrand(s).real, 0.0, 1.0, epsabs=1e-12,
                 epsrel=1e-12, limit=400)
    im, _ = quad(lambda s: integrand(s).imag, 0.0, 1.0, epsabs=1e-12,
                 epsrel=1e-12, limit=400)
    kinetic = -0.5 * complex(re, im)
    em = math.exp(-r) * math.cosh(r)
    ep = math.exp(r) * math.cosh(r)
    squeeze = 1j * (ax**2 / em + ay**2 / ep + 0.5 * (ax**2 + ay**2))
    return kinetic + ip * tp + squeeze + ax * ay * math.tanh(r)


def test_saddle_equations_are_action_gradient():
    # generic (non-solution) point with order-one coupling so every term in
    # the gradient is O(1); central differences of the quadrature action
    # must match the assembled equations
    params = dict(p=(0.1, 0.2), r=1.3, g=0.05, w=OMEGA, e_2w=E2W,
                  ip=0.904, t_up=4.5 * 2.0 * math.pi / OMEGA)
    tp, ax, ay = 3.0 + 9.0j, 0.3 + 0.1j, -0.2 + 0.4j
    f1, f2, f3 = _assembled_residual(tp, ax, ay, **params)

    def s_at(dt=0.0, dax=0.0, day=0.0):
        return _action_value(tp + dt, ax + dax, ay + day, **params)

    h = 1e-4
    ds_dt = (s_at(dt=h) - s_at(dt=-h)) / (2.0 * h)
    ds_dax = (s_at(dax=h) - s_at(dax=-h)) / (2.0 * h)
    ds_day = (s_at(day=h) - s_at(day=-h)) / (2.0 * h)
    assert ds_dt == pytest.approx(f1, rel=1e-6)
    assert ds_dax == pytest.approx(f2, rel=1e-6)
    assert ds_day == pytest.approx(f3, rel=1e-6)


# --- zeroth order and coefficients -----------------------------------------

def test_zeroth_order_vanishes_identically():
    for r in (0.0, 1.0, 12.15, 40.0):
        assert zeroth_order_psf(r) == (0j, 0j)


def test_taylor_coefficient_identities():
    tc = taylor_coefficients(2.0, 0.3)
    # e^{-+r} cosh r = (1 + e^{-+2r}) / 2 exactly
    assert tc.exact_minus == pytest.approx((1.0 + math.exp(-4.0)) / 2.0,
                                           rel=1e-15)
    assert tc.exact_plus == pytest.approx((1.0 + math.exp(4.0)) / 2.0,
                                          rel=1e-15)
    i_squ = (0.3 * math.sinh(2.0)) ** 2
    assert tc.approx_minus == pytest.approx(0.5 + 0.3**2 / (8.0 * i_squ))
    assert tc.approx_plus == pytest.approx(2.0 * i_squ / 0.3**2)
    assert tc.rel_err_minus == pytest.approx(
        abs(tc.approx_minus - tc.exact_minus) / tc.exact_minus)


def test_taylor_error_at_strong_squeezing():
    # truncation error of e^{r} cosh r ~ 3/(4 sinh^2 r), frozen at the
    # headline squeezing
    tc = taylor_coefficients(12.15, 1e-8)
    assert tc.rel_err_plus == pytest.approx(8.390065367546137e-11, rel=1e-6)
    assert tc.rel_err_plus == pytest.approx(3.0 / (4.0 * math.sinh(12.15) ** 2),
                                            rel=1e-4)
    assert tc.rel_err_minus < 1e-12
    with pytest.raises(ValueError):
        taylor_coefficients(2.0, 0.0)
    with pytest.raises(ValueError):
        taylor_coefficients(0.0, 1e-8)  # i_squ = 0


# --- full solver -----------------------------------------------------------

def test_solver_reference_solution():
    sol = solve_psf((0.0, 0.0), 12.0, G, OMEGA, E2W)
    assert sol.residual_norm <= RESIDUAL_NORM_TOL
    assert sol.t_sp.imag > 0.0
    assert sol.t_sp == pytest.approx(13.778915 + 10.214806j, rel=1e-6)
    assert abs(sol.alpha_x) == pytest.approx(1.1290048988e-06, rel=1e-8)
    assert abs(sol.alpha_y) == pytest.approx(5.4815785086e-06, rel=1e-8)
    assert sol.params == (G, OMEGA, E2W, (0.0, 0.0))
    # the root satisfies the independently assembled equations
    f = _assembled_residual(sol.t_sp, sol.alpha_x, sol.alpha_y,
                            p=(0.0, 0.0), r=12.0, g=G, w=OMEGA, e_2w=E2W,
                            ip=0.904, t_up=4.5 * 2.0 * math.pi / OMEGA)
    assert max(abs(x) for x in f) <= 1e-10


def test_amplitudes_scale_linearly_with_coupling():
    gs = [1e-9, 1e-8, 1e-7]
    ax = [abs(solve_psf((0.0, 0.0), 12.0, g, OMEGA, E2W).alpha_x) for g in gs]
    ay = [abs(solve_psf((0.0, 0.0), 12.0, g, OMEGA, E2W).alpha_y) for g in gs]
    sx = np.polyfit(np.log10(gs), np.log10(ax), 1)[0]
    sy = np.polyfit(np.log10(gs), np.log10(ay), 1)[0]
    assert sx == pytest.approx(1.0, abs=0.05)
    assert sy == pytest.approx(1.0, abs=0.05)


def test_continuum_upper_limit_insensitivity():
    a = solve_psf((0.0, 0.0), 12.0, G, OMEGA, E2W, periods=4)
    b = solve_psf((0.0, 0.0), 12.0, G, OMEGA, E2W, periods=8)
    assert abs(b.alpha_x) == pytest.approx(abs(a.alpha_x), rel=1e-10)
    assert abs(b.alpha_y) == pytest.approx(abs(a.alpha_y), rel=1e-10)
    assert b.t_sp == pytest.approx(a.t_sp, rel=1e-12)


def test_taylor_coefficients_change_amplitudes_below_one_percent():
    exact = solve_psf((0.0, 0.0), 12.0, G, OMEGA, E2W)
    approx = solve_psf((0.0, 0.0), 12.0, G, OMEGA, E2W, coefficients="taylor")
    assert abs(approx.alpha_x) == pytest.approx(abs(exact.alpha_x), rel=0.01)
    assert abs(approx.alpha_y) == pytest.approx(abs(exact.alpha_y), rel=0.01)
    with pytest.raises(ValueError):
        solve_psf((0.0, 0.0), 12.0, G, OMEGA, E2W, coefficients="pade")


def test_sweep_order_and_shapes():
    sols = psf_sweep([8.0, 12.0], [1e-8, 2e-8, 4e-8])
    assert len(sols) == 6
    assert [s.r for s in sols] == [8.0, 8.0, 8.0, 12.0, 12.0, 12.0]
    assert [s.params[0] for s in sols[:3]] == [1e-8, 2e-8, 4e-8]


def test_validation():
    with pytest.raises(ValueError):
        solve_psf((0.0, 0.0), 12.0, 0.0, OMEGA, E2W)
    with pytest.raises(ValueError):
        solve_psf((0.0, 0.0), -1.0, G, OMEGA, E2W)
    with pytest.raises(ValueError):
        PsfSolution(t_sp=0j, alpha_x=0j, alpha_y=0j, residual_norm=1.0,
                    r=1.0, params=(G, OMEGA, E2W, (0.0, 0.0)))
