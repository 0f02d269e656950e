"""Quasi-phase-matching core: phase mismatch, poling period, sinc^2 efficiency.

Difference-frequency generation with first-order QPM only: the grating
contributes a single 2*pi/period term to the phase mismatch. All functions
are pure; wavevectors are handled in rad/um internally and reported in rad/m.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_UM_THZ, RAD_PER_UM_TO_RAD_PER_M
from .dispersion import (SellmeierModel, SpectralPoint, group_index,
                         refractive_index)
from .errors import DomainError

ENERGY_CONSERVATION_RTOL = 1e-9


@dataclass(frozen=True)
class InteractionTriple:
    """Signal/pump/converted wavelengths bound by nu_s = nu_p + nu_c."""

    signal: SpectralPoint
    pump: SpectralPoint
    converted: SpectralPoint

    def __post_init__(self) -> None:
        nu_s = self.signal.frequency_thz
        nu_sum = self.pump.frequency_thz + self.converted.frequency_thz
        if abs(nu_s - nu_sum) > ENERGY_CONSERVATION_RTOL * nu_s:
            raise DomainError(
                f"energy conservation violated: nu_s={nu_s:.9f} THz but "
                f"nu_p+nu_c={nu_sum:.9f} THz")

    @classmethod
    def from_signal_converted(cls, signal: SpectralPoint,
                              converted: SpectralPoint) -> "InteractionTriple":
        return cls(signal, pump_for(signal, converted), converted)


@dataclass(frozen=True)
class DeviceConfig:
    """Poled-waveguide configuration: period (um), length (mm), temperature (C)."""

    poling_period_um: float
    length_mm: float
    temperature_c: float
    material: SellmeierModel

    def __post_init__(self) -> None:
        if self.poling_period_um <= 0:
            raise DomainError(f"poling period must be > 0, got {self.poling_period_um}")
        if self.length_mm <= 0:
            raise DomainError(f"length must be > 0, got {self.length_mm}")


def pump_for(signal: SpectralPoint, converted: SpectralPoint) -> SpectralPoint:
    """Pump implied by energy conservation, nu_p = nu_s - nu_c."""
    nu_p = signal.frequency_thz - converted.frequency_thz
    if nu_p <= 0:
        raise DomainError(
            f"signal frequency {signal.frequency_thz:.3f} THz must exceed "
            f"converted frequency {converted.frequency_thz:.3f} THz")
    return SpectralPoint.from_frequency_thz(nu_p)


def wavenumber(model: SellmeierModel, wavelength_um, temperature_c: float,
               allow_extrapolation: bool = False):
    """k = 2*pi*n/lambda in rad/um."""
    n = refractive_index(model, wavelength_um, temperature_c, allow_extrapolation)
    return 2.0 * np.pi * n / np.asarray(wavelength_um, dtype=float) \
        if not np.isscalar(wavelength_um) else 2.0 * np.pi * n / wavelength_um


def phase_mismatch(triple: InteractionTriple, device: DeviceConfig,
                   allow_extrapolation: bool = False) -> float:
    """Signed phase mismatch k_s - k_p - k_c - 2*pi/period, in rad/m."""
    t = device.temperature_c
    d = (wavenumber(device.material, triple.signal.wavelength_um, t, allow_extrapolation)
         - wavenumber(device.material, triple.pump.wavelength_um, t, allow_extrapolation)
         - wavenumber(device.material, triple.converted.wavelength_um, t, allow_extrapolation)
         - 2.0 * np.pi / device.poling_period_um)
    return d * RAD_PER_UM_TO_RAD_PER_M


def solve_poling_period(signal: SpectralPoint, converted: SpectralPoint,
                        temperature_c: float, material: SellmeierModel,
                        allow_extrapolation: bool = False) -> float:
    """Period (um) nulling the phase mismatch for this triple.

    Closed form: the period enters the mismatch linearly, so
    period = 2*pi / (k_s - k_p - k_c).
    """
    pump = pump_for(signal, converted)
    d = (wavenumber(material, signal.wavelength_um, temperature_c, allow_extrapolation)
         - wavenumber(material, pump.wavelength_um, temperature_c, allow_extrapolation)
         - wavenumber(material, converted.wavelength_um, temperature_c, allow_extrapolation))
    if d <= 0:
        raise DomainError(
            "no first-order QPM solution: k_s - k_p - k_c = "
            f"{d:.6e} rad/um is not positive")
    return 2.0 * np.pi / d


def make_device(signal_nm: float, target_nm: float, length_mm: float,
                temperature_c: float, material: SellmeierModel,
                allow_extrapolation: bool = False) -> DeviceConfig:
    """Device with the period solved for (signal, target) at temperature."""
    period = solve_poling_period(
        SpectralPoint.from_wavelength_nm(signal_nm),
        SpectralPoint.from_wavelength_nm(target_nm),
        temperature_c, material, allow_extrapolation)
    return DeviceConfig(period, length_mm, temperature_c, material)


def sinc(x):
    """sin(x)/x with a series branch near zero; sinc(0) = 1.

    The series branch keeps the tuning-range bisection, which evaluates
    arbitrarily close to the phase-matching null, free of cancellation noise.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)
    return float(out) if out.ndim == 0 else out


def pm_efficiency(dk_rad_per_m, length_mm: float):
    """Phase-matching efficiency sinc^2(dk * L / 2), in [0, 1]."""
    x = np.asarray(dk_rad_per_m, dtype=float) * (length_mm * 1e-3) / 2.0
    out = sinc(x) ** 2
    return float(out) if np.ndim(out) == 0 else out


def group_index_mismatch(converted_um: float, pump_um: float,
                         temperature_c: float, material: SellmeierModel,
                         allow_extrapolation: bool = False) -> float:
    """Group-index difference N_g(converted) - N_g(pump), dimensionless.

    This is the coefficient of the linear term of the phase mismatch under
    antisymmetric pump/converted frequency detuning (times 2*pi*dnu/c); it
    vanishes when the pump and converted wavelengths share a group index,
    which is what makes a hub wavelength broadband.
    """
    return (group_index(material, converted_um, temperature_c, allow_extrapolation)
            - group_index(material, pump_um, temperature_c, allow_extrapolation))


def detuned_frequencies(center_converted_thz: float, signal_thz: float, detuning_thz):
    """Converted/pump frequency pair under antisymmetric detuning of the pair."""
    nu_c = np.asarray(center_converted_thz, dtype=float) + np.asarray(detuning_thz, dtype=float)
    return nu_c, signal_thz - nu_c


def phase_mismatch_vs_converted(nu_c_thz, signal: SpectralPoint, device: DeviceConfig,
                                allow_extrapolation: bool = False):
    """Vectorized mismatch (rad/m) as a function of converted frequency (THz).

    The pump follows from energy conservation at each point.
    """
    nu_c = np.asarray(nu_c_thz, dtype=float)
    nu_p = signal.frequency_thz - nu_c
    if np.any(nu_p <= 0):
        raise DomainError("converted frequency exceeds the signal frequency")
    t = device.temperature_c
    lam_c = C_UM_THZ / nu_c
    lam_p = C_UM_THZ / nu_p
    k_s = wavenumber(device.material, signal.wavelength_um, t, allow_extrapolation)
    k_p = wavenumber(device.material, lam_p, t, allow_extrapolation)
    k_c = wavenumber(device.material, lam_c, t, allow_extrapolation)
    d = k_s - k_p - k_c - 2.0 * np.pi / device.poling_period_um
    return d * RAD_PER_UM_TO_RAD_PER_M
