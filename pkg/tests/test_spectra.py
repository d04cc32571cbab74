import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circsim import spectra as sp
from circsim.errors import DegenerateError, MismatchError, RegimeError

FM = 12.5e6
TD = 1 / (4 * FM)  # quarter modulation period


def cfg(phi=0.0, il=0.0, td=TD, halfbw=20e6, f=900e6):
    return sp.PathConfig(f, sp.ClockSpec(FM, 0.5, phi), td, halfbw, il)


# frozen from the time-domain oracle (see test_timedomain) and the closed form
B_MAG = {0: 0.45264, 1: 0.31831, 2: 0.06755, 3: 0.05305, 4: 0.01351}


def test_clock_validation_and_folding():
    with pytest.raises(ValueError):
        sp.ClockSpec(0)
    with pytest.raises(ValueError):
        sp.ClockSpec(FM, duty=1.0)
    assert sp.ClockSpec(FM, phase_rad=2 * math.pi + 0.5).phase_rad == pytest.approx(0.5)


def test_clock_states():
    ck = sp.ClockSpec(FM)
    t = np.array([0.1, 0.4, 0.6, 0.9]) / FM
    assert ck.is_on(t).tolist() == [True, True, False, False]
    assert ck.complement().is_on(t).tolist() == [False, False, True, True]


def test_square_wave_coefficients():
    ck = sp.ClockSpec(FM)
    assert sp.square_wave_coefficient(ck, 0) == 0.5
    assert sp.square_wave_coefficient(ck, 1) == pytest.approx(-1j / math.pi)
    assert sp.square_wave_coefficient(ck, 2) == 0
    assert sp.square_wave_coefficient(ck, -3) == pytest.approx(1j / (3 * math.pi))


@given(st.floats(0.05, 0.95), st.floats(0, 2 * math.pi), st.integers(-7, 7))
def test_general_duty_matches_numerical_fourier(duty, phi, n):
    ck = sp.ClockSpec(FM, duty, phi)
    t = (np.arange(20000) + 0.5) / 20000
    g = ck.is_on(t / FM).astype(float)
    ref = np.mean(g * np.exp(-2j * math.pi * n * t))
    assert abs(sp.square_wave_coefficient(ck, n) - ref) < 2e-4


def test_path_sidebands_t0_example():
    a1, a2, a3 = sp.path_sidebands(cfg(td=0.0))
    assert a1 == pytest.approx(-1 / math.pi)
    assert a2 == pytest.approx(0.5)
    assert a3 == pytest.approx(-1 / math.pi)


def test_path_sidebands_loss_scales():
    a = sp.path_sidebands(cfg())
    b = sp.path_sidebands(cfg(il=6.0))
    for x, y in zip(a, b):
        assert abs(y) == pytest.approx(abs(x) * 10 ** (-0.3))


def test_regime_errors():
    with pytest.raises(RegimeError):
        sp.path_sidebands(cfg(halfbw=10e6))
    bad = sp.PathConfig(900e6, sp.ClockSpec(FM, 0.4), TD, 20e6)
    with pytest.raises(RegimeError):
        sp.branch_output_coeffs(bad, 4)


def test_branch_coefficient_table():
    spec = sp.branch_output_coeffs(cfg(), 6)
    for n, mag in B_MAG.items():
        assert abs(spec[n]) == pytest.approx(mag, abs=5e-6)
        assert abs(spec[-n]) == pytest.approx(mag, abs=5e-6)
    assert abs(spec[5]) == pytest.approx(1 / (10 * math.pi))


def test_branch_matches_direct_convolution():
    # independent check: b_n = sum over passed k of a_k * c_(n-k) of the delayed clock
    for phi in (0.0, 0.7, math.pi):
        c = cfg(phi)
        a1, a2, a3 = sp.path_sidebands(c)
        a = {1: a1, 0: a2, -1: a3}
        spec = sp.branch_output_coeffs(c, 5)
        for n in range(-5, 6):
            ref = sum(a[k] * sp.square_wave_coefficient(c.clock_out, n - k) for k in a)
            assert spec[n] == pytest.approx(ref, abs=1e-14)


def test_differential_cancels_odd():
    spec = sp.differential_spectrum(cfg(), 7)
    assert abs(spec[0]) == pytest.approx(2 * (0.25 + 2 / math.pi**2))
    for n in (1, 3, 5, 7, -1, -3):
        assert spec[n] == 0


def test_quad_cancels_through_third_order():
    spec = sp.quad_spectrum(cfg(), 8)
    for n in (1, 2, 3, -1, -2, -3, 5, 6, 7):
        assert spec[n] == 0
    assert sp.imp_levels_dbc(spec)[4] == pytest.approx(-30.5, abs=0.05)


def test_quad_phase_error_leaks_second_order():
    spec = sp.quad_spectrum(cfg(), 4, math.radians(5))
    assert spec[2] != 0
    assert sp.imp_levels_dbc(spec)[2] < -16.5


@settings(max_examples=40)
@given(st.floats(0, 2 * math.pi), st.integers(-6, 6))
def test_clock_shift_covariance(dphi, n):
    base = sp.branch_output_coeffs(cfg(0.0), 6)
    shifted = sp.branch_output_coeffs(cfg(dphi), 6)
    assert shifted[n] == pytest.approx(base[n] * np.exp(-1j * n * dphi), abs=1e-13)


@settings(max_examples=30)
@given(st.floats(0, 2 * math.pi))
def test_differential_odd_zero_any_phase(phi):
    spec = sp.differential_spectrum(cfg(phi), 5)
    assert all(spec[n] == 0 for n in (1, 3, 5))


def test_superpose_mismatch_and_identity():
    a = sp.branch_output_coeffs(cfg(), 3)
    b = sp.branch_output_coeffs(cfg(f=901e6), 3)
    with pytest.raises(MismatchError):
        sp.superpose_branches([a, b])
    twice = sp.superpose_branches([a, a], 0.5)
    for n in range(-3, 4):
        assert twice[n] == pytest.approx(a[n])


def test_insertion_loss_and_degenerate():
    assert sp.theoretical_insertion_loss(sp.differential_spectrum(cfg(), 2)) == pytest.approx(
        0.864, abs=5e-4)
    with pytest.raises(DegenerateError):
        sp.theoretical_insertion_loss(sp.HarmonicSpectrum(900e6, FM, {0: 0}))
    with pytest.raises(DegenerateError):
        sp.imp_levels_dbc(sp.HarmonicSpectrum(900e6, FM, {0: 0, 1: 1}))


def test_spectrum_container():
    s = sp.HarmonicSpectrum(900e6, FM, {2: 1j})
    assert s[0] == 0 and s[5] == 0 and s[2] == 1j
    assert s.frequency(-2) == 875e6
    assert s.as_array(2).tolist() == [0, 0, 0, 0, 1j]
