"""ITU-T DWDM grid arithmetic and per-channel pump planning.

Port frequencies descend with ascending port index from an anchor frequency.
For a fixed signal frequency the planner assigns one pump per port via
energy conservation, checks it against the tunable-laser range, and predicts
the relative conversion efficiency with the poling period solved once at the
plan's center channel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_NM_THZ, C_UM_THZ
from .dispersion import SellmeierModel, SpectralPoint
from .errors import DomainError, RangeError
from .qpm import DeviceConfig, solve_poling_period
from .tuning import _efficiency_fn


@dataclass(frozen=True)
class DwdmGrid:
    """Descending-frequency DWDM grid: port n sits at anchor - (n-1)*spacing."""

    anchor_frequency_thz: float = 194.850
    spacing_ghz: float = 25.0
    port_count: int = 16

    def __post_init__(self) -> None:
        if self.anchor_frequency_thz <= 0 or self.spacing_ghz <= 0:
            raise DomainError("grid anchor and spacing must be positive")
        if self.port_count < 1:
            raise DomainError("grid needs at least one port")


@dataclass(frozen=True)
class LaserSpec:
    """Tunable pump laser wavelength range in nm."""

    min_wavelength_nm: float = 1572.063
    max_wavelength_nm: float = 1607.760

    def __post_init__(self) -> None:
        if not 0 < self.min_wavelength_nm < self.max_wavelength_nm:
            raise DomainError("laser range must satisfy 0 < min < max")

    def contains(self, wavelength_nm: float) -> bool:
        return self.min_wavelength_nm <= wavelength_nm <= self.max_wavelength_nm


@dataclass(frozen=True)
class PumpPlanEntry:
    port: int
    nu_c_thz: float
    lambda_c_nm: float
    nu_p_thz: float
    lambda_p_nm: float
    in_laser_range: bool
    relative_efficiency: float


@dataclass(frozen=True)
class PumpPlan:
    signal_frequency_thz: float
    poling_period_um: float
    center_frequency_thz: float
    entries: tuple[PumpPlanEntry, ...]


def port_frequency(grid: DwdmGrid, port: int) -> float:
    """Center frequency (THz) of a 1-based port index."""
    if not 1 <= port <= grid.port_count:
        raise RangeError(
            f"port {port} outside grid range [1, {grid.port_count}]")
    return grid.anchor_frequency_thz - (port - 1) * grid.spacing_ghz / 1000.0


def grid_frequencies(grid: DwdmGrid) -> list[float]:
    return [port_frequency(grid, p) for p in range(1, grid.port_count + 1)]


def plan_center_frequency(grid: DwdmGrid) -> float:
    """Default plan center: midpoint of the two middle ports (or the middle port)."""
    n = grid.port_count
    if n % 2:
        return port_frequency(grid, (n + 1) // 2)
    return 0.5 * (port_frequency(grid, n // 2) + port_frequency(grid, n // 2 + 1))


def plan_pumps(grid: DwdmGrid, signal_frequency_thz: float, laser: LaserSpec,
               length_mm: float, temperature_c: float, material: SellmeierModel,
               center_frequency_thz: float | None = None) -> PumpPlan:
    """One pump record per DeMux port for a fixed signal frequency.

    The poling period is solved once at the plan center; every port's
    relative efficiency is the phase-matching function evaluated at that
    port's detuning (1.0 at the center by construction).
    """
    freqs = grid_frequencies(grid)
    if signal_frequency_thz <= max(freqs):
        raise DomainError(
            f"signal frequency {signal_frequency_thz:.3f} THz must exceed every "
            f"port frequency (max {max(freqs):.3f} THz)")
    center = plan_center_frequency(grid) if center_frequency_thz is None \
        else center_frequency_thz
    signal = SpectralPoint.from_frequency_thz(signal_frequency_thz)
    period = solve_poling_period(
        signal, SpectralPoint.from_frequency_thz(center), temperature_c, material)
    device = DeviceConfig(period, length_mm, temperature_c, material)
    eff = _efficiency_fn(signal, device)(np.array(freqs))

    entries = []
    for port_index, (nu_c, e) in enumerate(zip(freqs, eff), start=1):
        nu_p = signal_frequency_thz - nu_c
        lam_p = C_NM_THZ / nu_p
        entries.append(PumpPlanEntry(
            port=port_index,
            nu_c_thz=nu_c,
            lambda_c_nm=C_NM_THZ / nu_c,
            nu_p_thz=nu_p,
            lambda_p_nm=lam_p,
            in_laser_range=laser.contains(lam_p),
            relative_efficiency=float(e),
        ))
    return PumpPlan(signal_frequency_thz, period, center, tuple(entries))


@dataclass(frozen=True)
class EfficiencyCurvePoint:
    nu_p_thz: float
    relative_efficiency: float
    extrapolated: bool


def relative_efficiency_curve(device: DeviceConfig, signal_frequency_thz: float,
                              pump_range_thz: tuple[float, float],
                              step_ghz: float = 1.0) -> list[EfficiencyCurvePoint]:
    """Model conversion efficiency vs pump frequency, normalized to its peak.

    The device period should already be solved for a working point inside the
    range. Points whose pump or converted wavelength leaves the material
    validity window are flagged, not dropped.
    """
    lo, hi = pump_range_thz
    if not 0 < lo < hi:
        raise DomainError("pump range must be ascending and positive")
    if step_ghz <= 0:
        raise DomainError("step must be positive")
    signal = SpectralPoint.from_frequency_thz(signal_frequency_thz)
    step = step_ghz / 1000.0
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    nu_p = lo + step * np.arange(count)
    nu_c = signal_frequency_thz - nu_p
    if np.any(nu_c <= 0):
        raise DomainError("pump range reaches the signal frequency")
    eff = _efficiency_fn(signal, device)(nu_c)
    peak = np.nanmax(eff)
    if not np.isfinite(peak) or peak <= 0:
        raise DomainError("efficiency is zero or undefined over the whole range")
    rel = eff / peak

    w_lo, w_hi = device.material.wavelength_um
    t_ok = (device.material.temperature_c[0] <= device.temperature_c
            <= device.material.temperature_c[1])
    lam_p_um = C_UM_THZ / nu_p
    lam_c_um = C_UM_THZ / nu_c
    in_domain = ((lam_p_um >= w_lo) & (lam_p_um <= w_hi)
                 & (lam_c_um >= w_lo) & (lam_c_um <= w_hi) & t_ok)
    return [EfficiencyCurvePoint(float(nu), float(r), bool(~ok))
            for nu, r, ok in zip(nu_p, rel, in_domain)]


def high_efficiency_band(curve: list[EfficiencyCurvePoint],
                         threshold: float = 0.9) -> tuple[float, float]:
    """Contiguous pump-frequency band around the peak with efficiency >= threshold."""
    rel = np.array([p.relative_efficiency for p in curve])
    nus = np.array([p.nu_p_thz for p in curve])
    peak = int(np.nanargmax(rel))
    lo = peak
    while lo > 0 and rel[lo - 1] >= threshold:
        lo -= 1
    hi = peak
    while hi < len(rel) - 1 and rel[hi + 1] >= threshold:
        hi += 1
    return float(nus[lo]), float(nus[hi])


PLAN_CSV_COLUMNS = ("port", "nu_c_THz", "lambda_c_nm", "nu_p_THz", "lambda_p_nm",
                    "in_laser_range", "rel_eff")


def plan_csv_rows(plan: PumpPlan) -> list[tuple[str, ...]]:
    """Wavelengths at 2 decimals (nm) and frequencies at 3 decimals (THz)."""
    return [(
        str(e.port),
        f"{e.nu_c_thz:.3f}",
        f"{e.lambda_c_nm:.2f}",
        f"{e.nu_p_thz:.3f}",
        f"{e.lambda_p_nm:.2f}",
        "true" if e.in_laser_range else "false",
        f"{e.relative_efficiency:.6f}",
    ) for e in plan.entries]
