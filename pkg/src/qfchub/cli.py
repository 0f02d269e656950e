"""Command-line interface wiring all toolkit modules to reproducible files.

Every subcommand prints a one-line JSON summary on stdout (command, key
results, elapsed time) and honors --format/--output uniformly. Exit codes:
0 success (an empty tuning range is still success), 2 usage or validation
failure, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from datetime import date
from pathlib import Path

from .config import ENV_CONFIG_PATH, RunConfig, apply_overrides, load_config
from .dispersion import get_material, group_index, index_derivative, refractive_index
from .dwdm import (PLAN_CSV_COLUMNS, DwdmGrid, LaserSpec, high_efficiency_band,
                   plan_csv_rows, plan_pumps, relative_efficiency_curve)
from .emit import read_two_column_csv, write_csv, write_json
from .errors import (ConfigError, ConvergenceError, DegenerateError, DomainError,
                     RangeError, SingularityError, ValidityError)
from .constants import C_NM_THZ
from .polarization import (PolarizationState, QfcChannelModel, apply_channel,
                           chi_payload, fit_efficiency, kraus_to_chi,
                           process_fidelity, reconstruct_chi, simulate_tomography)
from .qpm import DeviceConfig, make_device
from .tuning import (SWEEP_CSV_COLUMNS, HubSweepPoint, TuningConstraints,
                     hub_sweep, pm_spectrum, sweep_csv_rows, sweet_spot_report,
                     tuning_range, tuning_result_payload)

USAGE_EXIT = 2
NUMERIC_EXIT = 3

_USAGE_ERRORS = (ValidityError, DomainError, RangeError, ConfigError)
_NUMERIC_ERRORS = (DegenerateError, SingularityError, ConvergenceError,
                   FloatingPointError, ZeroDivisionError)

SPECTRUM_CSV_COLUMNS = ("nu_c_THz", "lambda_c_nm", "lambda_p_nm", "efficiency",
                        "extrapolated")
INDEX_CSV_COLUMNS = ("wavelength_nm", "n", "dn_dlambda_per_um", "group_index")


def _shared_options(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("run configuration")
    g.add_argument("--config", help="JSON config file (default: $%s)" % ENV_CONFIG_PATH)
    g.add_argument("--material", help="material model name")
    g.add_argument("--material-file", dest="material_file",
                   help="extra material definitions (JSON)")
    g.add_argument("--temperature", dest="temperature_c", type=float,
                   help="crystal temperature in deg C")
    g.add_argument("--length", dest="length_mm", type=float,
                   help="crystal length in mm")
    g.add_argument("--format", dest="output_format", choices=("csv", "json"),
                   help="output file format")
    g.add_argument("--output", help="output file path")
    g.add_argument("--workers", type=int, help="parallel workers for sweeps")
    g.add_argument("--allow-extrapolation", dest="allow_extrapolation",
                   action="store_const", const=True,
                   help="evaluate dispersion outside stated validity (flagged)")


def _constraint_options(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("tuning constraints")
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--cutoff", type=float, metavar="NM",
                      help="max converted wavelength in nm")
    mode.add_argument("--separation", type=float, metavar="NM",
                      help="min pump/converted separation in nm")
    g.add_argument("--threshold", dest="efficiency_threshold", type=float,
                   help="efficiency threshold, fraction of the scan peak")
    g.add_argument("--scan-halfwidth-thz", dest="scan_halfwidth_thz", type=float)
    g.add_argument("--coarse-step-ghz", dest="coarse_step_ghz", type=float)
    g.add_argument("--channel-spacing-ghz", dest="channel_spacing_ghz", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfchub",
        description="Quasi-phase-matched frequency-conversion design toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="refractive index table")
    p.add_argument("wavelengths_nm", nargs="+", type=float, metavar="NM")
    _shared_options(p)

    p = sub.add_parser("pm-scan", help="phase-matching spectrum around a target")
    p.add_argument("--signal", type=float, required=True, metavar="NM")
    p.add_argument("--target", type=float, required=True, metavar="NM")
    p.add_argument("--window-thz", type=float, default=6.0)
    p.add_argument("--step-ghz", type=float, default=2.0)
    _shared_options(p)

    p = sub.add_parser("tuning-range", help="90%%-threshold tuning interval")
    p.add_argument("--signal", type=float, required=True, metavar="NM")
    p.add_argument("--target", type=float, required=True, metavar="NM")
    _constraint_options(p)
    _shared_options(p)

    p = sub.add_parser("sweet-spot", help="group-index mismatch report")
    p.add_argument("--signal", type=float, required=True, metavar="NM")
    p.add_argument("--target", type=float, required=True, metavar="NM")
    _shared_options(p)

    p = sub.add_parser("hub-sweep", help="tuning range vs signal wavelength")
    p.add_argument("--start", type=float, required=True, metavar="NM")
    p.add_argument("--stop", type=float, required=True, metavar="NM")
    p.add_argument("--step", type=float, default=1.0, metavar="NM")
    p.add_argument("--target", type=float, required=True, metavar="NM")
    _constraint_options(p)
    _shared_options(p)

    p = sub.add_parser("plan", help="per-port DWDM pump plan")
    p.add_argument("--signal-freq", dest="signal_frequency_thz", type=float,
                   metavar="THZ", help="signal frequency in THz")
    p.add_argument("--center-freq", dest="center_frequency_thz", type=float,
                   metavar="THZ", help="plan center (default: middle of the grid)")
    p.add_argument("--grid-anchor-thz", dest="grid_anchor_thz", type=float)
    p.add_argument("--grid-spacing-ghz", dest="grid_spacing_ghz", type=float)
    p.add_argument("--grid-ports", dest="grid_ports", type=int)
    p.add_argument("--laser-min-nm", dest="laser_min_nm", type=float)
    p.add_argument("--laser-max-nm", dest="laser_max_nm", type=float)
    p.add_argument("--curve", action="store_true",
                   help="also emit the efficiency-vs-pump-frequency curve")
    p.add_argument("--curve-step-ghz", type=float, default=1.0)
    _shared_options(p)

    p = sub.add_parser("simulate", help="apply the polarization channel to a state")
    p.add_argument("--eta-cw", type=float, required=True)
    p.add_argument("--eta-ccw", type=float, required=True)
    p.add_argument("--phase", type=float, default=0.0, metavar="RAD")
    p.add_argument("--mix", type=float, default=0.0, metavar="EPS")
    p.add_argument("--input", default="D", metavar="LABEL",
                   help="input state label (H/V/D/A/R/L)")
    _shared_options(p)

    p = sub.add_parser("tomography", help="simulated process tomography")
    p.add_argument("--eta-cw", type=float, required=True)
    p.add_argument("--eta-ccw", type=float, required=True)
    p.add_argument("--phase", type=float, default=0.0, metavar="RAD")
    p.add_argument("--mix", type=float, default=0.0, metavar="EPS")
    _shared_options(p)

    p = sub.add_parser("fit", help="fit the pump-power efficiency curve")
    p.add_argument("--input", required=True, metavar="CSV",
                   help="two-column CSV: P_mW, eta")
    _shared_options(p)

    p = sub.add_parser("reproduce-paper",
                       help="run the bundled figure-data reproduction set")
    p.add_argument("--out-dir", default=".", metavar="DIR")
    p.add_argument("--sweep-step", type=float, default=1.0, metavar="NM")
    _constraint_options(p)
    _shared_options(p)

    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    path = getattr(args, "config", None) or os.environ.get(ENV_CONFIG_PATH)
    config = load_config(path) if path else RunConfig()
    overrides = {}
    for name in ("material", "material_file", "temperature_c", "length_mm",
                 "output_format", "output", "workers", "allow_extrapolation",
                 "efficiency_threshold", "scan_halfwidth_thz", "coarse_step_ghz",
                 "channel_spacing_ghz", "grid_anchor_thz", "grid_spacing_ghz",
                 "grid_ports", "laser_min_nm", "laser_max_nm",
                 "signal_frequency_thz"):
        if hasattr(args, name):
            overrides[name] = getattr(args, name)
    if getattr(args, "cutoff", None) is not None:
        overrides["constraint_mode"] = "max_converted_wavelength"
        overrides["constraint_value_nm"] = args.cutoff
    elif getattr(args, "separation", None) is not None:
        overrides["constraint_mode"] = "min_pump_converted_separation"
        overrides["constraint_value_nm"] = args.separation
    return apply_overrides(config, **overrides)


def _constraints(config: RunConfig) -> TuningConstraints:
    return TuningConstraints(
        efficiency_threshold=config.efficiency_threshold,
        constraint_mode=config.constraint_mode,
        constraint_value_nm=config.constraint_value_nm,
        scan_halfwidth_thz=config.scan_halfwidth_thz,
        coarse_step_ghz=config.coarse_step_ghz,
        channel_spacing_ghz=config.channel_spacing_ghz,
    )


def _out_path(config: RunConfig, default_name: str) -> Path:
    if config.output:
        return Path(config.output)
    return Path(default_name)


def cmd_index(config: RunConfig, args: argparse.Namespace) -> dict:
    model = get_material(config.material, config.material_file)
    rows = []
    for nm in args.wavelengths_nm:
        um = nm / 1000.0
        n = refractive_index(model, um, config.temperature_c,
                             config.allow_extrapolation)
        d = index_derivative(model, um, config.temperature_c,
                             config.allow_extrapolation)
        g = group_index(model, um, config.temperature_c,
                        config.allow_extrapolation)
        rows.append((f"{nm:.4f}", f"{n:.8f}", f"{d:.8f}", f"{g:.8f}"))
    if config.output:
        if config.output_format == "json":
            payload = [dict(zip(INDEX_CSV_COLUMNS, map(float, row[:4])))
                       for row in rows]
            out = write_json(config.output, payload)
        else:
            out = write_csv(config.output, INDEX_CSV_COLUMNS, rows)
        return {"rows": len(rows), "output": str(out)}
    print(",".join(INDEX_CSV_COLUMNS))
    for row in rows:
        print(",".join(row))
    return {"rows": len(rows)}


def _spectrum_rows(points) -> list[tuple[str, ...]]:
    return [(f"{p.nu_c_thz:.6f}", f"{p.lambda_c_nm:.4f}", f"{p.lambda_p_nm:.4f}",
             f"{p.efficiency:.8f}", "true" if p.extrapolated else "false")
            for p in points]


def cmd_pm_scan(config: RunConfig, args: argparse.Namespace) -> dict:
    model = get_material(config.material, config.material_file)
    device = make_device(args.signal, args.target, config.length_mm,
                         config.temperature_c, model,
                         config.allow_extrapolation)
    points = pm_spectrum(args.signal, args.target, device,
                         args.window_thz, args.step_ghz)
    ext = config.output_format
    out = _out_path(config, f"pm_scan.{ext}")
    if ext == "json":
        payload = [{"nu_c_THz": p.nu_c_thz, "lambda_c_nm": p.lambda_c_nm,
                    "lambda_p_nm": p.lambda_p_nm, "efficiency": p.efficiency,
                    "extrapolated": p.extrapolated} for p in points]
        write_json(out, payload)
    else:
        write_csv(out, SPECTRUM_CSV_COLUMNS, _spectrum_rows(points))
    peak = max(points, key=lambda p: p.efficiency)
    return {"signal_nm": args.signal, "target_nm": args.target,
            "points": len(points), "peak_lambda_c_nm": round(peak.lambda_c_nm, 4),
            "poling_period_um": round(device.poling_period_um, 6),
            "output": str(out)}


def cmd_tuning_range(config: RunConfig, args: argparse.Namespace) -> dict:
    model = get_material(config.material, config.material_file)
    constraints = _constraints(config)
    result = tuning_range(args.signal, args.target, config.length_mm,
                          config.temperature_c, model, constraints)
    summary = {"signal_nm": args.signal, "target_nm": args.target,
               "length_mm": config.length_mm,
               "constraint_mode": constraints.constraint_mode,
               "constraint_value_nm": constraints.constraint_value_nm}
    summary.update(tuning_result_payload(result, constraints.efficiency_threshold))
    summary["width_nm"] = round(result.width_nm, 4)
    if config.output:
        if config.output_format == "json":
            write_json(config.output, summary)
        else:
            point = HubSweepPoint(args.signal, result)
            write_csv(config.output, SWEEP_CSV_COLUMNS, sweep_csv_rows([point]))
        summary["output"] = config.output
    return summary


def cmd_sweet_spot(config: RunConfig, args: argparse.Namespace) -> dict:
    model = get_material(config.material, config.material_file)
    report = sweet_spot_report(args.signal, args.target, config.temperature_c, model)
    return {"signal_nm": report.signal_nm,
            "converted_nm": report.converted_nm,
            "pump_nm": round(report.pump_nm, 4),
            "group_index_mismatch": report.group_index_mismatch,
            "midpoint_nm": round(report.midpoint_nm, 4),
            "second_harmonic_nm": report.second_harmonic_nm,
            "is_second_harmonic_midpoint": report.is_second_harmonic_midpoint}


def cmd_hub_sweep(config: RunConfig, args: argparse.Namespace) -> dict:
    model = get_material(config.material, config.material_file)
    constraints = _constraints(config)
    points = hub_sweep((args.start, args.stop), args.step, args.target,
                       config.length_mm, config.temperature_c, model,
                       constraints, workers=config.workers)
    ext = config.output_format
    out = _out_path(config, f"hub_sweep.{ext}")
    if ext == "json":
        payload = [{"signal_nm": p.signal_nm,
                    **tuning_result_payload(p.tuning,
                                            constraints.efficiency_threshold)}
                   for p in points]
        write_json(out, payload)
    else:
        write_csv(out, SWEEP_CSV_COLUMNS, sweep_csv_rows(points))
    widest = max(points, key=lambda p: p.tuning.width_nm)
    return {"target_nm": args.target, "points": len(points),
            "max_width_nm": round(widest.tuning.width_nm, 4),
            "max_width_signal_nm": widest.signal_nm, "output": str(out)}


def cmd_plan(config: RunConfig, args: argparse.Namespace) -> dict:
    model = get_material(config.material, config.material_file)
    grid = DwdmGrid(config.grid_anchor_thz, config.grid_spacing_ghz,
                    config.grid_ports)
    laser = LaserSpec(config.laser_min_nm, config.laser_max_nm)
    plan = plan_pumps(grid, config.signal_frequency_thz, laser,
                      config.length_mm, config.temperature_c, model,
                      center_frequency_thz=args.center_frequency_thz)
    ext = config.output_format
    out = _out_path(config, f"pump_plan.{ext}")
    if ext == "json":
        payload = {
            "signal_frequency_THz": plan.signal_frequency_thz,
            "poling_period_um": plan.poling_period_um,
            "center_frequency_THz": plan.center_frequency_thz,
            "ports": [{"port": e.port, "nu_c_THz": round(e.nu_c_thz, 6),
                       "lambda_c_nm": round(e.lambda_c_nm, 2),
                       "nu_p_THz": round(e.nu_p_thz, 6),
                       "lambda_p_nm": round(e.lambda_p_nm, 2),
                       "in_laser_range": e.in_laser_range,
                       "rel_eff": round(e.relative_efficiency, 6)}
                      for e in plan.entries],
        }
        write_json(out, payload)
    else:
        write_csv(out, PLAN_CSV_COLUMNS, plan_csv_rows(plan))
    pumps = [e.lambda_p_nm for e in plan.entries]
    summary = {"ports": len(plan.entries),
               "poling_period_um": round(plan.poling_period_um, 6),
               "pump_min_nm": round(min(pumps), 2),
               "pump_max_nm": round(max(pumps), 2),
               "all_in_laser_range": all(e.in_laser_range for e in plan.entries),
               "output": str(out)}
    if args.curve:
        device = DeviceConfig(plan.poling_period_um, config.length_mm,
                              config.temperature_c, model)
        pump_lo = C_NM_THZ / config.laser_max_nm
        pump_hi = C_NM_THZ / config.laser_min_nm
        curve = relative_efficiency_curve(device, config.signal_frequency_thz,
                                          (pump_lo, pump_hi),
                                          args.curve_step_ghz)
        curve_out = out.with_name(out.stem + "_curve.csv")
        write_csv(curve_out, ("nu_p_THz", "rel_eff", "extrapolated"),
                  [(f"{p.nu_p_thz:.6f}", f"{p.relative_efficiency:.8f}",
                    "true" if p.extrapolated else "false") for p in curve])
        band = high_efficiency_band(curve)
        summary["curve_output"] = str(curve_out)
        summary["band_90_THz"] = [round(band[0], 4), round(band[1], 4)]
    return summary


def cmd_simulate(config: RunConfig, args: argparse.Namespace) -> dict:
    model = QfcChannelModel(args.eta_cw, args.eta_ccw, args.phase, args.mix)
    state = PolarizationState.from_label(args.input)
    out_state, probability = apply_channel(state, model)
    payload = {"input": args.input.upper(),
               "success_probability": probability,
               "output_bloch": [round(v, 12) for v in out_state.bloch_vector()],
               "output_matrix": [[[round(z.real, 12), round(z.imag, 12)]
                                  for z in row] for row in out_state.matrix]}
    if config.output:
        write_json(config.output, payload)
        payload["output"] = config.output
    return payload


def cmd_tomography(config: RunConfig, args: argparse.Namespace) -> dict:
    model = QfcChannelModel(args.eta_cw, args.eta_ccw, args.phase, args.mix)
    outputs = simulate_tomography(model)
    inputs = {label: PolarizationState.from_label(label) for label in outputs}
    chi = reconstruct_chi(inputs, outputs)
    fidelity = process_fidelity(chi)
    payload = {
        "process_fidelity": fidelity,
        "success_probabilities": {k: outputs[k][1] for k in sorted(outputs)},
        "chi_reconstructed": chi_payload(chi),
        "chi_closed_form": chi_payload(kraus_to_chi(model)),
    }
    out = _out_path(config, "tomography.json")
    write_json(out, payload)
    return {"process_fidelity": round(fidelity, 9), "output": str(out)}


def cmd_fit(config: RunConfig, args: argparse.Namespace) -> dict:
    powers, etas = read_two_column_csv(args.input)
    if not powers:
        raise DomainError(f"no (P, eta) rows found in {args.input}")
    fit = fit_efficiency(powers, etas)
    summary = {"eta_max": round(fit.params.eta_max, 6),
               "eta_nor_per_mW": round(fit.params.eta_nor_per_mw, 6),
               "residual_norm": round(fit.residual_norm, 9),
               "points": len(powers)}
    if config.output:
        write_json(config.output, summary)
        summary["output"] = config.output
    return summary


def cmd_reproduce_paper(config: RunConfig, args: argparse.Namespace) -> dict:
    run_dir = Path(args.out_dir) / f"paper-run-{date.today():%Y%m%d}"
    run_dir.mkdir(parents=True, exist_ok=True)
    model = get_material(config.material, config.material_file)
    produced: list[str] = []

    def scan(signal: float, target: float, length: float, window: float,
             step: float, name: str) -> None:
        device = make_device(signal, target, length, config.temperature_c, model)
        points = pm_spectrum(signal, target, device, window, step)
        produced.append(str(write_csv(run_dir / name, SPECTRUM_CSV_COLUMNS,
                                      _spectrum_rows(points))))

    # phase-matching spectra for the three representative signals, both lengths
    scan(780.0, 1540.0, 40.0, 6.0, 2.0, "pm_scan_780_L40.csv")
    scan(780.0, 1540.0, 20.0, 6.0, 2.0, "pm_scan_780_L20.csv")
    scan(493.0, 1540.0, 40.0, 1.0, 0.5, "pm_scan_493_L40.csv")
    scan(934.0, 1540.0, 40.0, 20.0, 5.0, "pm_scan_934_L40.csv")

    sweep_constraints = TuningConstraints(
        efficiency_threshold=config.efficiency_threshold,
        constraint_mode="min_pump_converted_separation",
        constraint_value_nm=20.0,
        scan_halfwidth_thz=config.scan_halfwidth_thz,
        coarse_step_ghz=config.coarse_step_ghz,
        channel_spacing_ghz=config.channel_spacing_ghz)
    for target, name in ((1540.0, "sweep_cband.csv"), (1310.0, "sweep_oband.csv")):
        points = hub_sweep((400.0, 1000.0), args.sweep_step, target,
                           config.length_mm, config.temperature_c, model,
                           sweep_constraints, workers=config.workers)
        produced.append(str(write_csv(run_dir / name, SWEEP_CSV_COLUMNS,
                                      sweep_csv_rows(points))))

    cutoff_constraints = TuningConstraints(
        constraint_mode="max_converted_wavelength", constraint_value_nm=1550.0,
        channel_spacing_ghz=config.channel_spacing_ghz)
    for length, name in ((40.0, "tuning_range_L40.json"),
                         (20.0, "tuning_range_L20.json")):
        result = tuning_range(780.0, 1540.0, length, config.temperature_c,
                              model, cutoff_constraints)
        produced.append(str(write_json(
            run_dir / name,
            tuning_result_payload(result, cutoff_constraints.efficiency_threshold))))

    plan_args = argparse.Namespace(center_frequency_thz=None, curve=True,
                                   curve_step_ghz=1.0)
    plan_config = apply_overrides(config, output=str(run_dir / "pump_plan.csv"),
                                  output_format="csv")
    cmd_plan(plan_config, plan_args)
    produced.extend([str(run_dir / "pump_plan.csv"),
                     str(run_dir / "pump_plan_curve.csv")])

    return {"directory": str(run_dir), "files": sorted(produced)}


_HANDLERS = {
    "index": cmd_index,
    "pm-scan": cmd_pm_scan,
    "tuning-range": cmd_tuning_range,
    "sweet-spot": cmd_sweet_spot,
    "hub-sweep": cmd_hub_sweep,
    "plan": cmd_plan,
    "simulate": cmd_simulate,
    "tomography": cmd_tomography,
    "fit": cmd_fit,
    "reproduce-paper": cmd_reproduce_paper,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        config = _resolve_config(args)
        summary = _HANDLERS[args.command](config, args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except _NUMERIC_ERRORS as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return NUMERIC_EXIT
    summary_line = {"command": args.command, **summary,
                    "elapsed_s": round(time.perf_counter() - started, 3)}
    print(json.dumps(summary_line))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
