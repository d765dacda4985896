"""Regenerate the committed golden fixtures in tests/fixtures/.

sfg_golden.json   conversion efficiency of a flat-pump, phase-mismatched SFG
                  crystal from RK4 at 10^4 steps, Richardson-checked against
                  2 x 10^4 steps and the closed form.
bbo_golden.json   Sellmeier-derived wavevector derivatives of a 500 um BBO
                  crystal cut at 28.1 deg (830 nm o + 830 nm o -> 415 nm e)
                  and the design report of the reference BBO scenario.

Run from the repository root:  python scripts/make_golden_fixtures.py
"""
import argparse
import json
from pathlib import Path

import numpy as np

from chronolens.design import design_report, mismatch_map
from chronolens.dispersion import bbo_spec, dispersion_from_sellmeier
from chronolens.field import gaussian_pulse, make_time_grid
from chronolens.sfg import flat_pump, integrate_sfg_ode, mismatched_efficiency

# reference BBO design scenario (also in scenarios/bbo_design.cfg)
BBO_SCENARIO = dict(pixel_duration=1e-12, magnification=-10.0, n_pixels=4,
                    focal_gdd=1e-24, pump_duration=50e-15, margin=10.0)
SFG_CASES = [(np.pi / 2, np.pi), (np.pi / 2, 2 * np.pi), (np.pi / 4, np.pi)]


def rk4_efficiency(coupling, phase, n_steps):
    grid = make_time_grid(1024, 64e-12)
    sig = gaussian_pulse(grid, 0.0, 2e-12)
    length = 1e-3
    _, idl = integrate_sfg_ode(sig, sig * 0.0, flat_pump(grid), coupling, phase / length, length, n_steps)
    return idl.energy() / sig.energy()


def sfg_golden():
    cases = []
    for coupling, phase in SFG_CASES:
        coarse = rk4_efficiency(coupling, phase, 10_000)
        fine = rk4_efficiency(coupling, phase, 20_000)
        richardson = fine + (fine - coarse) / 15.0
        closed = mismatched_efficiency(coupling, phase)
        assert abs(coarse - richardson) < 1e-12, (coarse, richardson)
        assert abs(coarse - closed) < 1e-12, (coarse, closed)
        cases.append({"coupling": coupling, "mismatch_phase": phase, "efficiency": coarse})
    return {"description": "flat pump, Gaussian signal, vacuum idler; RK4 at 10000 steps", "cases": cases}


def bbo_golden():
    disp = dispersion_from_sellmeier(bbo_spec())
    report = design_report(disp, **BBO_SCENARIO)
    mm = mismatch_map(disp, [0.0], [0.0])
    return {
        "crystal": {"length": disp.length, "cut_angle_deg": 28.1,
                    "wavelengths": {"s": 830e-9, "p": 830e-9, "i": 415e-9}},
        "dispersion": {
            "k_prime_s": disp.k_prime_s,
            "k_prime_p": disp.k_prime_p,
            "k_prime_i": disp.k_prime_i,
            "k_double_prime_s": disp.k_double_prime_s,
        },
        "idler_half_width": mm.overlays["idler_half_width"],
        "scenario": BBO_SCENARIO,
        "design_report": report.to_dict(),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--out-dir", type=Path, default=Path(__file__).parents[1] / "tests" / "fixtures")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for name, data in (("sfg_golden.json", sfg_golden()), ("bbo_golden.json", bbo_golden())):
        path = args.out_dir / name
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
