"""Field model: unit conversions, harmonic table, analytic continuation."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsfa.fields import (
    INTENSITY_WCM2_PER_AU,
    NM_TO_OMEGA,
    AtomSpec,
    FieldConfig,
    coherent_alpha0_for_intensity,
    config_for_drive,
    electric_field,
    g_for_squeezing_and_intensity,
    intensity_from_squeezing,
    intensity_to_amplitude,
    nbar_for_intensity,
    squeezing_for_intensity,
    squeezing_from_intensity,
    vector_harmonics,
    vector_potential,
    wrap_angle,
)

OMEGA_800 = NM_TO_OMEGA / 800.0

angles = st.floats(-50.0, 50.0)
small_alphas = st.complex_numbers(max_magnitude=10.0, allow_nan=False,
                                  allow_infinity=False)
real_times = st.floats(-500.0, 500.0)


# --- unit conversions ------------------------------------------------------

def test_wavelength_to_frequency_from_fundamental_constants():
    # omega = 2 pi c / lambda with CODATA c and Bohr radius, independent of
    # the packaged constant
    c_au = 137.035999084
    bohr_nm = 0.0529177210903
    expected = 2.0 * math.pi * c_au * bohr_nm  # omega * lambda[nm]
    assert NM_TO_OMEGA == pytest.approx(expected, rel=1e-9)


def test_intensity_unit_from_fundamental_constants():
    # I = eps0 c E^2 / 2 evaluated in SI for E = 1 a.u., converted to W/cm^2
    eps0 = 8.8541878128e-12
    c = 2.99792458e8
    e_au_v_per_m = 5.14220674763e11
    expected = 0.5 * eps0 * c * e_au_v_per_m**2 / 1e4
    assert INTENSITY_WCM2_PER_AU == pytest.approx(expected, rel=1e-3)


def test_amplitude_round_trip():
    e0 = intensity_to_amplitude(3e14)
    assert e0**2 * INTENSITY_WCM2_PER_AU == pytest.approx(3e14, rel=1e-14)
    assert intensity_to_amplitude(0.0) == 0.0
    with pytest.raises(ValueError):
        intensity_to_amplitude(-1.0)


def test_drive_cutoff_momentum_value():
    # 3e14 W/cm^2 at 400 nm: integrating E sin(2 w t) gives an A amplitude
    # of E / (2 w) with w the fundamental
    cfg = config_for_drive(OMEGA_800, 3e14)
    e_2w = math.sqrt(3e14 / INTENSITY_WCM2_PER_AU)
    a_expected = e_2w / (2.0 * OMEGA_800)
    assert cfg.e_2w == pytest.approx(e_2w, rel=1e-14)
    assert cfg.a_2w == pytest.approx(a_expected, rel=1e-14)
    assert cfg.cutoff_px == pytest.approx(0.8116810696273359, rel=1e-13)
    assert cfg.cutoff_px == pytest.approx(2.0 * math.sqrt(cfg.up), rel=1e-14)
    assert cfg.period == pytest.approx(2.0 * math.pi / OMEGA_800, rel=1e-14)


def test_matched_intensity_parameter_maps():
    g = 1e-8
    intensity = 3e12
    alpha0 = coherent_alpha0_for_intensity(intensity, g)
    r = squeezing_for_intensity(intensity, g)
    nbar = nbar_for_intensity(intensity, g)
    # equal mean intensity: alpha0^2 = sinh^2 r = nbar
    assert math.sinh(r) ** 2 == pytest.approx(alpha0**2, rel=1e-12)
    assert nbar == pytest.approx(alpha0**2, rel=1e-12)
    # round trips
    i_squ = intensity_from_squeezing(r, g)
    assert squeezing_from_intensity(i_squ, g) == pytest.approx(r, rel=1e-12)


def test_coupling_for_target_squeezing():
    g = g_for_squeezing_and_intensity(12.15, 3e12)
    e0 = math.sqrt(3e12 / INTENSITY_WCM2_PER_AU)
    assert g == pytest.approx(e0 / (2.0 * math.sinh(12.15)), rel=1e-14)
    assert g == pytest.approx(4.889485275461841e-08, rel=1e-13)
    # this coupling reproduces the requested mean intensity
    assert squeezing_for_intensity(3e12, g) == pytest.approx(12.15, rel=1e-12)


# --- angle wrapping --------------------------------------------------------

@given(angles)
def test_wrap_angle_range(x):
    w = wrap_angle(x)
    assert -math.pi < w <= math.pi


@given(angles, st.integers(-5, 5))
def test_wrap_angle_periodic(x, k):
    assert wrap_angle(x + 2.0 * math.pi * k) == pytest.approx(
        wrap_angle(x), abs=1e-10)


def test_wrap_angle_branch_cut():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(0.0) == 0.0


# --- config validation -----------------------------------------------------

def test_config_validation():
    with pytest.raises(ValueError):
        FieldConfig(omega=-1.0)
    with pytest.raises(ValueError):
        FieldConfig(omega=OMEGA_800, g_w=0.0)
    with pytest.raises(ValueError):
        FieldConfig(omega=OMEGA_800, alpha_2w=-1.0)
    with pytest.raises(ValueError):
        AtomSpec(ip=-0.5)
    cfg = FieldConfig(omega=OMEGA_800)
    assert cfg.g_2w == pytest.approx(cfg.g_w * math.sqrt(2.0), rel=1e-15)
    assert FieldConfig(omega=OMEGA_800, theta=3.0 * math.pi).theta == (
        pytest.approx(math.pi))


def test_with_theta_only_changes_theta(cfg800):
    other = cfg800.with_theta(1.0)
    assert other.theta == 1.0
    assert other.omega == cfg800.omega
    assert other.alpha_2w == cfg800.alpha_2w


# --- harmonic table and analytic continuation ------------------------------

def test_monochromatic_vector_potential_closed_form(cfg800):
    t = np.linspace(0.0, cfg800.period, 37)
    a = vector_potential(t, cfg800, 0.0)
    expected = cfg800.a_2w * np.cos(2.0 * cfg800.omega * t)
    np.testing.assert_allclose(a.real, expected, rtol=0, atol=1e-13)
    np.testing.assert_allclose(a.imag, 0.0, atol=1e-13)


@given(small_alphas, angles, real_times)
def test_field_is_minus_da_dt(alpha, theta, t):
    # fourth-order central difference of A against the direct field
    cfg = FieldConfig(omega=OMEGA_800, g_w=1e-3, alpha_2w=2.0, theta=theta)
    h = 1e-2

    def a(tt):
        return vector_potential(tt, cfg, alpha).real

    da = (8.0 * (a(t + h) - a(t - h)) - (a(t + 2 * h) - a(t - 2 * h))) / (
        12.0 * h)
    e = electric_field(t, cfg, alpha)
    assert abs(e.imag) < 1e-13
    scale = max(1.0, abs(da))
    assert e.real == pytest.approx(-da, abs=1e-9 * scale)


@given(small_alphas, angles, angles, real_times)
def test_field_depends_on_alpha_e_itheta_only(alpha, th1, th2, t):
    cfg1 = FieldConfig(omega=OMEGA_800, g_w=1e-3, alpha_2w=2.0, theta=th1)
    cfg2 = FieldConfig(omega=OMEGA_800, g_w=1e-3, alpha_2w=2.0, theta=th2)
    alpha2 = alpha * np.exp(1j * (th1 - th2))
    e1 = electric_field(t, cfg1, alpha)
    e2 = electric_field(t, cfg2, complex(alpha2))
    scale = max(1.0, abs(e1))
    assert e1.real == pytest.approx(e2.real, abs=1e-12 * scale)


@given(small_alphas, angles)
def test_harmonic_table_is_real_field(alpha, theta):
    # A_k coefficients of a real signal satisfy A_{-k} = conj(A_k)
    cfg = FieldConfig(omega=OMEGA_800, g_w=1e-3, alpha_2w=2.0, theta=theta)
    coeffs = vector_harmonics(cfg, alpha)
    assert coeffs[2] == 0.0
    assert coeffs[0] == pytest.approx(np.conj(coeffs[4]), abs=1e-18)
    assert coeffs[1] == pytest.approx(np.conj(coeffs[3]), abs=1e-18)


def test_explicit_field_form(cfg800):
    # compare against the manifestly real two-term expression
    cfg = FieldConfig(omega=OMEGA_800, g_w=1e-3, alpha_2w=2.0, theta=0.7)
    alpha = 1.3 - 0.4j
    t = np.linspace(-30.0, 30.0, 101)
    expected = (
        2.0 * cfg.g_w * (alpha.real * np.sin(cfg.omega * t - cfg.theta)
                         - alpha.imag * np.cos(cfg.omega * t - cfg.theta))
        + 2.0 * cfg.g_2w * cfg.alpha_2w * np.sin(2.0 * cfg.omega * t)
    )
    e = electric_field(t, cfg, alpha)
    np.testing.assert_allclose(e.real, expected, rtol=0, atol=1e-15)


def test_vector_potential_periodicity(cfg800):
    t = 13.7 + 4.2j
    a1 = vector_potential(t, cfg800, 0.3 + 0.1j)
    a2 = vector_potential(t + cfg800.period, cfg800, 0.3 + 0.1j)
    assert a1 == pytest.approx(a2, rel=1e-12)
