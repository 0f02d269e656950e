import numpy as np
import pytest

from qfchub import (DeviceConfig, DomainError, InteractionTriple, SpectralPoint,
                    group_index, group_index_mismatch, make_device,
                    phase_mismatch, phase_mismatch_vs_converted, pm_efficiency,
                    pump_for, sinc, solve_poling_period)
from qfchub.constants import C_UM_THZ

# Frozen from a standalone evaluation of 2*pi/(k_s - k_p - k_c) with the
# default material at 48 C; regression constants, not external references.
PERIOD_780_1540_48C_UM = 19.17364940565507
PERIOD_493_1540_48C_UM = 5.935077859071032


def _point(nm):
    return SpectralPoint.from_wavelength_nm(nm)


def test_pump_for_examples():
    pump = pump_for(_point(780.0), _point(1540.0))
    # exact algebra: lam_p = lam_s*lam_c/(lam_c - lam_s)
    assert pump.wavelength_nm == pytest.approx(780.0 * 1540.0 / 760.0, rel=1e-12)
    assert pump.wavelength_nm == pytest.approx(1580.526, abs=5e-4)

    degenerate = pump_for(_point(780.0), _point(1560.0))
    assert degenerate.wavelength_nm == pytest.approx(1560.0, rel=1e-12)

    port7 = pump_for(SpectralPoint.from_frequency_thz(384.200),
                     SpectralPoint.from_frequency_thz(194.700))
    assert port7.frequency_thz == pytest.approx(189.500, abs=1e-9)
    assert port7.wavelength_nm == pytest.approx(1582.02, abs=0.005)


def test_pump_for_rejects_nonpositive_pump():
    with pytest.raises(DomainError):
        pump_for(_point(1540.0), _point(780.0))
    with pytest.raises(DomainError):
        pump_for(_point(780.0), _point(780.0))


def test_triple_energy_conservation_enforced():
    with pytest.raises(DomainError, match="energy conservation"):
        InteractionTriple(_point(780.0), _point(1580.0), _point(1540.0))
    triple = InteractionTriple.from_signal_converted(_point(780.0), _point(1540.0))
    nu = triple.pump.frequency_thz + triple.converted.frequency_thz
    assert nu == pytest.approx(triple.signal.frequency_thz, rel=1e-12)


def test_device_validation(jundt):
    with pytest.raises(DomainError):
        DeviceConfig(-1.0, 40.0, 48.0, jundt)
    with pytest.raises(DomainError):
        DeviceConfig(19.0, 0.0, 48.0, jundt)


def test_poling_period_regression(jundt):
    period = solve_poling_period(_point(780.0), _point(1540.0), 48.0, jundt)
    assert period == pytest.approx(PERIOD_780_1540_48C_UM, rel=1e-9)
    assert 10.0 < period < 40.0


def test_poling_period_inverse_relation(jundt):
    device = make_device(780.0, 1540.0, 40.0, 48.0, jundt)
    triple = InteractionTriple.from_signal_converted(_point(780.0), _point(1540.0))
    assert abs(phase_mismatch(triple, device)) < 1e-6


def test_poling_period_depends_on_signal(jundt):
    p1 = solve_poling_period(_point(780.0), _point(1540.0), 48.0, jundt)
    p2 = solve_poling_period(_point(493.0), _point(1540.0), 48.0, jundt)
    assert p2 == pytest.approx(PERIOD_493_1540_48C_UM, rel=1e-9)
    assert p1 > 0 and p2 > 0 and p1 != p2


def test_phase_mismatch_sign_flips_with_detuning(jundt):
    device = make_device(780.0, 1540.0, 40.0, 48.0, jundt)
    signal = _point(780.0)
    nu_c0 = _point(1540.0).frequency_thz
    up = float(phase_mismatch_vs_converted(nu_c0 + 0.5, signal, device))
    down = float(phase_mismatch_vs_converted(nu_c0 - 0.5, signal, device))
    assert up != 0 and down != 0
    assert up * down < 0


def test_swap_symmetry_pump_converted(jundt):
    device = make_device(780.0, 1540.0, 40.0, 48.0, jundt)
    signal = _point(780.0)
    converted = _point(1540.0)
    pump = pump_for(signal, converted)
    direct = phase_mismatch(InteractionTriple(signal, pump, converted), device)
    swapped = phase_mismatch(InteractionTriple(signal, converted, pump), device)
    assert direct == pytest.approx(swapped, abs=1e-9)


def test_degenerate_sweet_spot_quadratic_bound(jundt):
    # pump and converted both at twice the signal wavelength
    signal = _point(780.0)
    device = make_device(780.0, 1560.0, 40.0, 48.0, jundt)
    nu_c0 = signal.frequency_thz / 2.0
    detunings = np.linspace(-1.0, 1.0, 41)
    dk = phase_mismatch_vs_converted(nu_c0 + detunings, signal, device)
    quad, lin, const = np.polyfit(detunings, dk, 2)
    assert np.all(np.abs(dk) <= abs(quad) * detunings ** 2 + 1e-3)

    work = make_device(780.0, 1540.0, 40.0, 48.0, jundt)
    dk_w = phase_mismatch_vs_converted(
        _point(1540.0).frequency_thz + detunings, signal, work)
    _, lin_w, _ = np.polyfit(detunings, dk_w, 2)
    assert abs(lin) < 1e-3 * abs(lin_w)


def test_pm_efficiency_values():
    assert pm_efficiency(0.0, 40.0) == 1.0
    length_mm = 40.0
    dk_first_zero = 2.0 * np.pi / (length_mm * 1e-3)
    assert pm_efficiency(dk_first_zero, length_mm) == pytest.approx(0.0, abs=1e-12)
    dk_90 = 2.0 * 0.559 / (length_mm * 1e-3)
    assert pm_efficiency(dk_90, length_mm) == pytest.approx(0.90, abs=0.005)
    assert pm_efficiency(-dk_90, length_mm) == pytest.approx(0.90, abs=0.005)


def test_pm_efficiency_even_and_bounded(rng):
    dk = rng.uniform(-5000, 5000, size=500)
    eff = pm_efficiency(dk, 40.0)
    assert np.all((eff >= 0.0) & (eff <= 1.0))
    assert np.allclose(eff, pm_efficiency(-dk, 40.0), atol=1e-15)


def test_sinc_series_branch_continuity():
    assert sinc(0.0) == 1.0
    for x in (1e-9, 1e-6, 9.9e-5):
        assert sinc(x) == pytest.approx(1.0 - x * x / 6.0, abs=1e-15)
    # branch boundary is seamless
    assert sinc(1.0001e-4) == pytest.approx(sinc(0.9999e-4), abs=1e-12)


def test_group_index_mismatch_identity(jundt):
    # equals the group-index difference by construction, checked to 1e-12
    lam_c, lam_p = 1.540, 1.5805263157894738
    expected = group_index(jundt, lam_c, 48.0) - group_index(jundt, lam_p, 48.0)
    assert group_index_mismatch(lam_c, lam_p, 48.0, jundt) == pytest.approx(
        expected, abs=1e-12)


def test_group_index_mismatch_zero_at_degeneracy(jundt):
    assert group_index_mismatch(1.560, 1.560, 48.0, jundt) == 0.0


def test_group_index_mismatch_matches_numeric_slope(jundt):
    # slope of the mismatch w.r.t. antisymmetric pump-side detuning
    signal = _point(780.0)
    converted = _point(1540.0)
    pump = pump_for(signal, converted)
    device = make_device(780.0, 1540.0, 40.0, 48.0, jundt)
    h = 0.01  # THz of pump detuning; converted compensates
    nu_c0 = converted.frequency_thz
    dk = phase_mismatch_vs_converted(np.array([nu_c0 - h, nu_c0 + h]), signal, device)
    slope_rad_per_m_per_thz = float(dk[0] - dk[1]) / (2.0 * h)
    bracket = slope_rad_per_m_per_thz * C_UM_THZ / (2.0 * np.pi * 1e6)
    coefficient = group_index_mismatch(
        converted.wavelength_um, pump.wavelength_um, 48.0, jundt)
    assert coefficient == pytest.approx(bracket, rel=1e-3)


def test_group_index_mismatch_2350_smaller_than_working_point(jundt):
    pump0_um = pump_for(_point(780.0), _point(1540.0)).wavelength_um
    near_zero = group_index_mismatch(1.540, 2.350, 48.0, jundt)
    working = group_index_mismatch(1.540, pump0_um, 48.0, jundt)
    assert abs(near_zero) < abs(working)


def test_cross_module_group_slope_consistency(jundt):
    # analytic group-index difference vs numeric mismatch slope at 1.54/1.58 um
    lam_c, lam_p = 1.540, 1.580
    nu_c = C_UM_THZ / lam_c
    nu_p = C_UM_THZ / lam_p
    signal = SpectralPoint.from_frequency_thz(nu_c + nu_p)
    period = solve_poling_period(signal, SpectralPoint.from_wavelength_um(lam_c),
                                 48.0, jundt)
    device = DeviceConfig(period, 40.0, 48.0, jundt)
    h = 0.005
    dk = phase_mismatch_vs_converted(np.array([nu_c - h, nu_c + h]), signal, device)
    slope = float(dk[0] - dk[1]) / (2.0 * h) * C_UM_THZ / (2.0 * np.pi * 1e6)
    diff = group_index(jundt, lam_c, 48.0) - group_index(jundt, lam_p, 48.0)
    assert diff == pytest.approx(slope, rel=1e-4)
