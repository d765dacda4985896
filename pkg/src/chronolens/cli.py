"""Command-line interface.

Usage:
    chronolens spectrum     --scenario fig1.cfg --out-dir out/
    chronolens pixels       --scenario fig2.cfg --out-dir out/
    chronolens design       --scenario bbo_design.cfg --out-dir out/ --margin 10
    chronolens mismatch-map --scenario bbo_design.cfg --out-dir out/
    chronolens sfg-verify   --scenario sfg.cfg --out-dir out/ --delta 6283 --n-steps 10000

Exit codes: 0 success, 2 configuration error, 3 infeasible design,
4 numerical error (time window too small, step size too large).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import design as dsg
from .errors import ConfigError, InvalidArgument, MeasurementError, NumericalError, ValidityError
from .field import ComplexEnvelope, TimeGrid, amplitude_fwhm, apply_gdd, gaussian_pulse, relative_l2_error, temporal_centroid
from .imaging import PixelTrain, PumpedLens, ideal_image, simulate_chain, solve_imaging_config
from .scenario import Scenario, load_scenario
from .sfg import apply_sfg_analytic, chirped_pump, flat_pump, integrate_sfg_ode, mismatched_efficiency, shaped_pump
from .squeezing import HomodyneSetting, OpaModel, fig1_dataset

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERICAL = 4

FLOAT_FORMAT = ".12g"


def fmt(x) -> str:
    return format(float(x), FLOAT_FORMAT)


def _round_floats(obj):
    """Round every float to 12 significant digits so reports are byte-stable."""
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            return None
        return float(fmt(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def to_json(obj) -> str:
    return json.dumps(_round_floats(obj), indent=2, sort_keys=True) + "\n"


def to_csv(header, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in zip(*columns):
        writer.writerow([fmt(v) if not isinstance(v, (bool, np.bool_)) else int(v) for v in row])
    return buf.getvalue()


def envelope_csv(env: ComplexEnvelope) -> str:
    s = env.samples
    return to_csv(("t", "re", "im", "abs"), (env.times, s.real, s.imag, np.abs(s)))


class Infeasible(Exception):
    """Raised after the outputs are written, to select exit code 3."""


def _grid(sc: Scenario) -> TimeGrid:
    return TimeGrid(sc.n_samples, sc.span / sc.n_samples, -sc.span / 2.0)


# -- commands: each returns {filename: content} ------------------------------


def cmd_spectrum(sc: Scenario) -> dict:
    model = OpaModel.reference(sc.r0, sc.omega_c, sc.psi0)
    data = fig1_dataset(model, sc.magnification, sc.lens_efficiency, HomodyneSetting(sc.lo))
    header = ("omega_over_omega_c", "S")
    return {
        "spectrum_input.csv": to_csv(header, (data.omega_over_omega_c, data.source)),
        "spectrum_output.csv": to_csv(header, (data.omega_over_omega_c, data.imaged)),
    }


def _lens_mode(sc: Scenario, grid: TimeGrid, config, train: PixelTrain):
    if sc.lens_mode == "ideal":
        return "ideal"
    if sc.lens_mode == "chirped":
        pump = chirped_pump(grid, sc.pump_duration, sc.focal_gdd)
    else:
        aperture = sc.aperture
        if aperture is None:
            # default aperture T = T_s, the stretched input duration
            delta_s = 2.0 * np.pi / train.pixel_duration
            aperture = abs(config.input_gdd) * delta_s + (train.n_pixels - 1) * train.pixel_duration
        pump = shaped_pump(grid, aperture, sc.focal_gdd)
    return PumpedLens(pump, sc.coupling)


def cmd_pixels(sc: Scenario) -> dict:
    grid = _grid(sc)
    config = solve_imaging_config(sc.focal_gdd, sc.magnification)
    train = PixelTrain(sc.n_pixels, sc.pixel_duration, sc.weights)
    mode = _lens_mode(sc, grid, config, train)
    result = simulate_chain(train, config, grid, mode)

    report = result.report.to_dict()
    stretched_one = apply_gdd(train.pixel(grid, 0), config.input_gdd)
    peaks = [temporal_centroid(apply_gdd(train.pixel(grid, k), config.input_gdd)) for k in range(train.n_pixels)]
    report.update(
        {
            "configured_magnification": config.magnification,
            "focal_gdd": config.focal_gdd,
            "input_gdd": config.input_gdd,
            "output_gdd": config.output_gdd,
            "pixel_duration": train.pixel_duration,
            "expected_spacing": abs(config.magnification) * train.pixel_duration,
            "expected_frequency_step": train.pixel_duration / config.focal_gdd,
            "stretched_pixel_fwhm": amplitude_fwhm(stretched_one),
            "stretched_peak_spacing": float(np.mean(np.diff(peaks))) if len(peaks) > 1 else None,
            "expected_stretched_duration": abs(config.input_gdd) * 2.0 * np.pi / train.pixel_duration,
            "lens_mode": sc.lens_mode,
        }
    )
    files = {
        "envelope_input.csv": envelope_csv(result.input),
        "envelope_intermediate.csv": envelope_csv(result.stretched),
        "envelope_output.csv": envelope_csv(result.output),
    }
    ideal = ideal_image(result.input, config)
    report["ideal_image_l2_error"] = relative_l2_error(result.output, ideal)
    files["envelope_ideal.csv"] = envelope_csv(ideal)
    files["pixel_report.json"] = to_json(report)
    return files


def _require_crystal(sc: Scenario):
    if sc.crystal is None:
        raise ConfigError("this command needs a [crystal] section")
    return sc.crystal


def _design_pump_duration(sc: Scenario):
    if sc.design_pump_duration is not None:
        return sc.design_pump_duration
    if sc.lens_mode == "chirped":
        return sc.pump_duration
    return None


def build_design_report(sc: Scenario) -> dsg.DesignReport:
    return dsg.design_report(
        _require_crystal(sc),
        sc.pixel_duration,
        sc.magnification,
        sc.n_pixels,
        sc.focal_gdd,
        pump_duration=_design_pump_duration(sc),
        margin=sc.margin,
    )


def cmd_design(sc: Scenario) -> dict:
    report = build_design_report(sc)
    files = {"design_report.json": to_json(report.to_dict())}
    if not report.feasible:
        raise Infeasible(files)
    return files


def cmd_mismatch_map(sc: Scenario) -> dict:
    disp = _require_crystal(sc)
    rep = build_design_report(sc)
    ws_max = sc.map_omega_s_max or 1.5 * rep.delta_pa
    wi_max = sc.map_omega_i_max or 1.5 * rep.delta_pa
    omega_s = np.linspace(-ws_max, ws_max, sc.map_n_s)
    omega_i = np.linspace(-wi_max, wi_max, sc.map_n_i)
    mm = dsg.mismatch_map(
        disp, omega_s, omega_i, sc.map_threshold, sc.map_quadratic,
        delta_s=rep.delta_s, delta_i=rep.delta_i, delta_pa=rep.delta_pa,
    )
    ws, wi = np.meshgrid(mm.omega_s, mm.omega_i)
    csv_text = to_csv(
        ("Omega_s", "Omega_i", "abs_delta", "negligible_flag"),
        (ws.ravel(), wi.ravel(), mm.abs_delta.ravel(), mm.negligible.ravel()),
    )
    overlays = dict(mm.overlays)
    overlays.update({"delta_s": rep.delta_s, "delta_i": rep.delta_i, "delta_pa": rep.delta_pa,
                     "crystal_length": disp.length})
    return {"mismatch.csv": csv_text, "overlays.json": to_json(overlays)}


def cmd_sfg_verify(sc: Scenario, delta: float | None = None, n_steps: int | None = None) -> dict:
    delta = sc.sfg_mismatch if delta is None else delta
    n_steps = sc.n_steps if n_steps is None else n_steps
    length = sc.crystal_length
    grid = _grid(sc)
    sig = gaussian_pulse(grid, 0.0, sc.pixel_duration)
    vac = sig.with_samples(np.zeros(grid.n_samples))
    pump = flat_pump(grid, sc.focal_gdd)
    s_ode, i_ode = integrate_sfg_ode(sig, vac, pump, sc.coupling, delta, length, n_steps)
    s_an, i_an = apply_sfg_analytic(sig, vac, pump, sc.coupling)
    max_error = float(max(np.max(np.abs(s_ode.samples - s_an.samples)), np.max(np.abs(i_ode.samples - i_an.samples))))
    report = {
        "mismatch": delta,
        "crystal_length": length,
        "mismatch_phase": delta * length,
        "coupling": sc.coupling,
        "n_steps": n_steps,
        "max_error": max_error,
        "efficiency": i_ode.energy() / sig.energy(),
        "efficiency_analytic_phase_matched": i_an.energy() / sig.energy(),
        "efficiency_closed_form": mismatched_efficiency(sc.coupling, delta * length),
        "energy_balance_error": abs(s_ode.energy() + i_ode.energy() - sig.energy()) / sig.energy(),
    }
    return {"sfg_verify.json": to_json(report)}


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chronolens", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", type=Path, help="scenario file (built-in default if omitted)")
    common.add_argument("--out-dir", type=Path, default=Path("."), help="directory for all outputs")
    common.add_argument("--margin", type=float, help="factor operationalising strong inequalities")
    common.add_argument("--grid-n", type=int, help="number of time samples (dt is kept, span scales)")
    sub.add_parser("spectrum", parents=[common], help="source and imaged squeezing spectra")
    sub.add_parser("pixels", parents=[common], help="propagate a pixel train through the imaging chain")
    sub.add_parser("design", parents=[common], help="phase-matching, pump and FOV budgets")
    mm = sub.add_parser("mismatch-map", parents=[common], help="phase mismatch over signal/idler detunings")
    mm.add_argument("--omega-s-max", type=float)
    mm.add_argument("--omega-i-max", type=float)
    mm.add_argument("--map-n", type=int)
    sv = sub.add_parser("sfg-verify", parents=[common], help="analytic SFG solution vs RK4 integration")
    sv.add_argument("--delta", type=float, help="phase mismatch [1/m]")
    sv.add_argument("--n-steps", type=int)
    return parser


def _apply_overrides(sc: Scenario, args) -> Scenario:
    updates = {}
    if args.margin is not None:
        if args.margin < 1:
            raise ConfigError("--margin must be >= 1")
        updates["margin"] = args.margin
    if args.grid_n is not None:
        if args.grid_n < 2:
            raise ConfigError("--grid-n must be >= 2")
        dt = sc.span / sc.n_samples
        updates["n_samples"] = args.grid_n
        updates["span"] = dt * args.grid_n
    if getattr(args, "omega_s_max", None) is not None:
        updates["map_omega_s_max"] = args.omega_s_max
    if getattr(args, "omega_i_max", None) is not None:
        updates["map_omega_i_max"] = args.omega_i_max
    if getattr(args, "map_n", None) is not None:
        updates["map_n_s"] = updates["map_n_i"] = args.map_n
    return replace(sc, **updates)


def _write(out_dir: Path, files: dict):
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, content in files.items():
        (out_dir / name).write_text(content)


COMMANDS = {
    "spectrum": lambda sc, args: cmd_spectrum(sc),
    "pixels": lambda sc, args: cmd_pixels(sc),
    "design": lambda sc, args: cmd_design(sc),
    "mismatch-map": lambda sc, args: cmd_mismatch_map(sc),
    "sfg-verify": lambda sc, args: cmd_sfg_verify(sc, args.delta, args.n_steps),
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario) if args.scenario else Scenario()
        sc = _apply_overrides(sc, args)
        files = COMMANDS[args.command](sc, args)
    except Infeasible as exc:
        _write(args.out_dir, exc.args[0])
        print("design is infeasible; see design_report.json", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, InvalidArgument, ValidityError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, MeasurementError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write(args.out_dir, files)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
