"""Phase-matching spectra, 90%-threshold tuning ranges, and hub-wavelength sweeps.

The tuning range of a conversion process is the maximal contiguous
converted-wavelength interval around the design center where the
phase-matching efficiency stays at or above the threshold, intersected with
the Raman-noise constraints. Boundaries are located with a coarse scan plus
bisection refinement to 0.1 GHz.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .constants import C_NM_THZ, C_UM_THZ, REFINE_GHZ
from .dispersion import SellmeierModel, SpectralPoint, _n_squared
from .errors import DomainError, ValidityError
from .qpm import (DeviceConfig, group_index_mismatch, make_device,
                  pm_efficiency, pump_for)

ConstraintMode = Literal["max_converted_wavelength", "min_pump_converted_separation"]

LimitTag = Literal["threshold", "cutoff", "separation", "scan_edge"]


@dataclass(frozen=True)
class TuningConstraints:
    """Threshold and practical constraints applied to a tuning scan.

    The threshold is a fraction of the peak efficiency within the scan
    window; with the period solved at the scan center that peak is exactly 1,
    so the default means "90% of the phase-matching maximum". The constraint
    mode is either a hard upper converted wavelength (nm) or a minimum
    pump/converted wavelength separation (nm). Crossing the pump/converted
    degeneracy point is never allowed (Raman noise floods the converted band
    there), in either mode.
    """

    efficiency_threshold: float = 0.9
    constraint_mode: ConstraintMode = "min_pump_converted_separation"
    constraint_value_nm: float = 20.0
    scan_halfwidth_thz: float = 60.0
    coarse_step_ghz: float = 5.0
    channel_spacing_ghz: float = 25.0

    def __post_init__(self) -> None:
        if not 0.0 < self.efficiency_threshold < 1.0:
            raise DomainError("efficiency threshold must be in (0, 1)")
        if self.constraint_mode not in (
                "max_converted_wavelength", "min_pump_converted_separation"):
            raise DomainError(f"unknown constraint mode {self.constraint_mode!r}")
        if self.scan_halfwidth_thz <= 0 or self.coarse_step_ghz <= 0:
            raise DomainError("scan halfwidth and coarse step must be positive")
        if self.channel_spacing_ghz <= 0:
            raise DomainError("channel spacing must be positive")


@dataclass(frozen=True)
class TuningResult:
    """A converted-wavelength tuning interval and its DWDM capacity."""

    converted_interval_nm: tuple[float, float]
    width_nm: float
    width_thz: float
    channel_count: int
    limiting_constraint: LimitTag

    @property
    def is_empty(self) -> bool:
        return self.width_nm == 0.0


@dataclass(frozen=True)
class HubSweepPoint:
    signal_nm: float
    tuning: TuningResult


@dataclass(frozen=True)
class SpectrumPoint:
    nu_c_thz: float
    lambda_c_nm: float
    lambda_p_nm: float
    efficiency: float
    extrapolated: bool


@dataclass(frozen=True)
class SweetSpotReport:
    """First-order behaviour of a conversion working point."""

    signal_nm: float
    converted_nm: float
    pump_nm: float
    group_index_mismatch: float
    midpoint_nm: float
    second_harmonic_nm: float
    is_second_harmonic_midpoint: bool


def channel_count(width_thz: float, spacing_ghz: float) -> int:
    """Number of DWDM channels of the given spacing that fit in the width."""
    if width_thz < 0:
        raise DomainError(f"width must be non-negative, got {width_thz}")
    if spacing_ghz <= 0:
        raise DomainError(f"channel spacing must be positive, got {spacing_ghz}")
    return int(np.floor(width_thz * 1000.0 / spacing_ghz))


def _efficiency_fn(signal: SpectralPoint, device: DeviceConfig):
    """Vectorized efficiency vs converted frequency for one device.

    Evaluation is done through the raw Sellmeier form so that the tuning scan
    can touch its pre-clamped validity edges without per-point checks.
    """
    model = device.material
    t = device.temperature_c
    k_s = 2.0 * np.pi * np.sqrt(_n_squared(model, signal.wavelength_um, t)) \
        / signal.wavelength_um
    grating = 2.0 * np.pi / device.poling_period_um

    def fn(nu_c):
        nu_c = np.asarray(nu_c, dtype=float)
        lam_c = C_UM_THZ / nu_c
        lam_p = C_UM_THZ / (signal.frequency_thz - nu_c)
        with np.errstate(invalid="ignore"):
            k_c = 2.0 * np.pi * np.sqrt(_n_squared(model, lam_c, t)) / lam_c
            k_p = 2.0 * np.pi * np.sqrt(_n_squared(model, lam_p, t)) / lam_p
        dk = (k_s - k_p - k_c - grating) * 1.0e6
        return pm_efficiency(dk, device.length_mm)

    return fn


def _validity_bounds_nu_c(signal: SpectralPoint, model: SellmeierModel) -> tuple[float, float]:
    """Converted-frequency interval where both converted and pump stay in validity."""
    lam_lo, lam_hi = model.wavelength_um
    lo = C_UM_THZ / lam_hi
    hi = C_UM_THZ / lam_lo
    # pump-side window mapped through nu_p = nu_s - nu_c
    lo = max(lo, signal.frequency_thz - C_UM_THZ / lam_lo)
    hi = min(hi, signal.frequency_thz - C_UM_THZ / lam_hi)
    return lo, hi


def _separation_nm(nu_c: float, nu_s: float) -> float:
    return abs(C_NM_THZ / (nu_s - nu_c) - C_NM_THZ / nu_c)


def _bisect_boundary(eff_fn, nu_good: float, nu_bad: float, threshold: float) -> float:
    """Refine a threshold crossing between a passing and a failing frequency."""
    tol = REFINE_GHZ / 1000.0
    while abs(nu_bad - nu_good) > tol:
        mid = 0.5 * (nu_good + nu_bad)
        if float(eff_fn(np.array([mid]))[0]) >= threshold:
            nu_good = mid
        else:
            nu_bad = mid
    return nu_good


def _expand_side(eff_fn, nu_center: float, direction: float, bound: float,
                 bound_tag: LimitTag, coarse_thz: float, threshold: float,
                 block: int = 256) -> tuple[float, LimitTag]:
    """Walk outward from the center until the threshold or the bound stops us."""
    nu_prev = nu_center
    while True:
        steps = nu_prev + direction * coarse_thz * np.arange(1, block + 1)
        inside = steps < bound if direction > 0 else steps > bound
        chunk = steps[inside]
        exhausted = chunk.size < block
        if chunk.size:
            eff = eff_fn(chunk)
            bad = np.nonzero(eff < threshold)[0]
            if bad.size:
                good = chunk[bad[0] - 1] if bad[0] > 0 else nu_prev
                return _bisect_boundary(eff_fn, good, chunk[bad[0]], threshold), "threshold"
            nu_prev = float(chunk[-1])
        if exhausted:
            if float(eff_fn(np.array([bound]))[0]) >= threshold:
                return bound, bound_tag
            return _bisect_boundary(eff_fn, nu_prev, bound, threshold), "threshold"


def _combine_tags(tag_lo: LimitTag, tag_hi: LimitTag) -> LimitTag:
    for tag in (tag_lo, tag_hi):
        if tag in ("cutoff", "separation"):
            return tag
    for tag in (tag_lo, tag_hi):
        if tag == "scan_edge":
            return tag
    return "threshold"


def _empty_result(target_nm: float, tag: LimitTag) -> TuningResult:
    return TuningResult((target_nm, target_nm), 0.0, 0.0, 0, tag)


def tuning_range(signal_nm: float, target_center_nm: float, length_mm: float,
                 temperature_c: float, material: SellmeierModel,
                 constraints: TuningConstraints) -> TuningResult:
    """Tuning interval around the design center for one signal wavelength.

    The poling period is solved at (signal, target_center), so the center
    sits at unit efficiency. A constraint violated at the center itself gives
    an empty result tagged with the violated constraint, never an exception.
    """
    signal = SpectralPoint.from_wavelength_nm(signal_nm)
    center = SpectralPoint.from_wavelength_nm(target_center_nm)
    pump0 = pump_for(signal, center)
    device = make_device(signal_nm, target_center_nm, length_mm, temperature_c, material)

    nu_s = signal.frequency_thz
    nu_c0 = center.frequency_thz
    nu_deg = nu_s / 2.0

    val_lo, val_hi = _validity_bounds_nu_c(signal, material)
    lo_bound = max(nu_c0 - constraints.scan_halfwidth_thz, val_lo)
    hi_bound = min(nu_c0 + constraints.scan_halfwidth_thz, val_hi)
    lo_tag: LimitTag = "scan_edge"
    hi_tag: LimitTag = "scan_edge"

    # Raman rule: the interval must stay on the center's side of the
    # pump/converted degeneracy.
    if nu_c0 == nu_deg:
        return _empty_result(target_center_nm, "separation")
    if nu_c0 > nu_deg and nu_deg > lo_bound:
        lo_bound, lo_tag = nu_deg, "separation"
    elif nu_c0 < nu_deg and nu_deg < hi_bound:
        hi_bound, hi_tag = nu_deg, "separation"

    if constraints.constraint_mode == "max_converted_wavelength":
        if target_center_nm > constraints.constraint_value_nm:
            return _empty_result(target_center_nm, "cutoff")
        nu_cut = C_NM_THZ / constraints.constraint_value_nm
        if nu_cut > lo_bound:
            lo_bound, lo_tag = nu_cut, "cutoff"
    else:
        min_sep = constraints.constraint_value_nm
        if _separation_nm(nu_c0, nu_s) < min_sep:
            return _empty_result(target_center_nm, "separation")
        # separation shrinks monotonically toward the degeneracy point
        near, far = nu_c0, nu_deg
        for _ in range(200):
            mid = 0.5 * (near + far)
            if _separation_nm(mid, nu_s) >= min_sep:
                near = mid
            else:
                far = mid
        if nu_c0 > nu_deg and near > lo_bound:
            lo_bound, lo_tag = near, "separation"
        elif nu_c0 < nu_deg and near < hi_bound:
            hi_bound, hi_tag = near, "separation"

    eff_fn = _efficiency_fn(signal, device)
    coarse = constraints.coarse_step_ghz / 1000.0
    thr = constraints.efficiency_threshold
    nu_lo, tag_lo = _expand_side(eff_fn, nu_c0, -1.0, lo_bound, lo_tag, coarse, thr)
    nu_hi, tag_hi = _expand_side(eff_fn, nu_c0, +1.0, hi_bound, hi_tag, coarse, thr)

    lam_lo = C_NM_THZ / nu_hi
    lam_hi = C_NM_THZ / nu_lo
    width_thz = nu_hi - nu_lo
    return TuningResult(
        converted_interval_nm=(lam_lo, lam_hi),
        width_nm=lam_hi - lam_lo,
        width_thz=width_thz,
        channel_count=channel_count(width_thz, constraints.channel_spacing_ghz),
        limiting_constraint=_combine_tags(tag_lo, tag_hi),
    )


def pm_spectrum(signal_nm: float, target_center_nm: float, device: DeviceConfig,
                window_thz: float, step_ghz: float) -> list[SpectrumPoint]:
    """Efficiency vs converted frequency around the target, ascending in frequency.

    Points that leave the material validity window are evaluated by
    extrapolation and flagged rather than dropped.
    """
    if window_thz <= 0 or step_ghz <= 0:
        raise DomainError("window and step must be positive")
    signal = SpectralPoint.from_wavelength_nm(signal_nm)
    center = SpectralPoint.from_wavelength_nm(target_center_nm)
    nu_s, nu_c0 = signal.frequency_thz, center.frequency_thz
    step = step_ghz / 1000.0
    n_side = int(np.floor(window_thz / step + 1e-9))
    nu_c = nu_c0 + step * np.arange(-n_side, n_side + 1)
    nu_c = nu_c[(nu_c > 0.0) & (nu_c < nu_s)]

    eff = _efficiency_fn(signal, device)(nu_c)
    lam_c = C_NM_THZ / nu_c
    lam_p = C_NM_THZ / (nu_s - nu_c)
    w_lo, w_hi = device.material.wavelength_um
    t_lo, t_hi = device.material.temperature_c
    in_domain = ((lam_c / 1000.0 >= w_lo) & (lam_c / 1000.0 <= w_hi)
                 & (lam_p / 1000.0 >= w_lo) & (lam_p / 1000.0 <= w_hi)
                 & (t_lo <= device.temperature_c <= t_hi))
    return [
        SpectrumPoint(float(nu), float(lc), float(lp), float(e), bool(~ok))
        for nu, lc, lp, e, ok in zip(nu_c, lam_c, lam_p, eff, in_domain)
    ]


def _sweep_point(args) -> HubSweepPoint:
    (signal_nm, target_nm, length_mm, temperature_c, material, constraints) = args
    try:
        result = tuning_range(signal_nm, target_nm, length_mm, temperature_c,
                              material, constraints)
    except (ValidityError, DomainError):
        result = _empty_result(target_nm, "scan_edge")
    return HubSweepPoint(signal_nm, result)


def hub_sweep(signal_range_nm: tuple[float, float], signal_step_nm: float,
              target_center_nm: float, length_mm: float, temperature_c: float,
              material: SellmeierModel, constraints: TuningConstraints,
              workers: int = 1) -> list[HubSweepPoint]:
    """One tuning range per signal wavelength, ordered by signal wavelength.

    Points are independent; with ``workers`` > 1 they are evaluated in a
    process pool and reassembled in input order, so the output is identical
    for any worker count.
    """
    lo, hi = signal_range_nm
    if hi < lo or signal_step_nm <= 0:
        raise DomainError("signal range must be ascending with positive step")
    count = int(np.floor((hi - lo) / signal_step_nm + 1e-9)) + 1
    signals = [lo + i * signal_step_nm for i in range(count)]
    jobs = [(s, target_center_nm, length_mm, temperature_c, material, constraints)
            for s in signals]
    if workers <= 1:
        return [_sweep_point(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(jobs) // (workers * 4))
        return list(pool.map(_sweep_point, jobs, chunksize=chunk))


def sweet_spot_report(signal_nm: float, target_center_nm: float,
                      temperature_c: float, material: SellmeierModel,
                      tolerance_nm: float = 0.5) -> SweetSpotReport:
    """Group-index mismatch at the working point and the second-harmonic test.

    The flag is set when twice the signal wavelength falls inside
    [converted, pump] (within the tolerance) with the converted side shorter,
    which is the geometry that keeps the linear mismatch term small.
    """
    signal = SpectralPoint.from_wavelength_nm(signal_nm)
    center = SpectralPoint.from_wavelength_nm(target_center_nm)
    pump0 = pump_for(signal, center)
    coefficient = group_index_mismatch(center.wavelength_um, pump0.wavelength_um,
                                       temperature_c, material)
    second_harmonic = 2.0 * signal_nm
    pump_nm = pump0.wavelength_nm
    midpoint = 0.5 * (target_center_nm + pump_nm)
    flag = (target_center_nm < pump_nm
            and target_center_nm - tolerance_nm <= second_harmonic <= pump_nm + tolerance_nm)
    return SweetSpotReport(
        signal_nm=signal_nm,
        converted_nm=target_center_nm,
        pump_nm=pump_nm,
        group_index_mismatch=coefficient,
        midpoint_nm=midpoint,
        second_harmonic_nm=second_harmonic,
        is_second_harmonic_midpoint=flag,
    )


SWEEP_CSV_COLUMNS = ("signal_nm", "lo_nm", "hi_nm", "width_nm", "width_THz",
                     "channels", "limiting_constraint")


def sweep_csv_rows(points: list[HubSweepPoint]) -> list[tuple[str, ...]]:
    rows = []
    for p in points:
        t = p.tuning
        rows.append((
            f"{p.signal_nm:.4f}",
            f"{t.converted_interval_nm[0]:.4f}",
            f"{t.converted_interval_nm[1]:.4f}",
            f"{t.width_nm:.4f}",
            f"{t.width_thz:.6f}",
            str(t.channel_count),
            t.limiting_constraint,
        ))
    return rows


def tuning_result_payload(result: TuningResult, threshold: float) -> dict:
    """JSON-ready view of a tuning result, with the threshold convention noted."""
    return {
        "converted_interval_nm": [round(result.converted_interval_nm[0], 4),
                                  round(result.converted_interval_nm[1], 4)],
        "width_nm": round(result.width_nm, 4),
        "width_THz": round(result.width_thz, 6),
        "channels": result.channel_count,
        "limiting_constraint": result.limiting_constraint,
        "threshold": threshold,
        "threshold_reference": "fraction of peak efficiency within the scan window",
    }
