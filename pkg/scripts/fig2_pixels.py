"""Four temporal pixels through the three-stage imaging chain at M = -3.

Runs the ideal lens and a rectangular (shaped) pump whose aperture equals the
stretched input duration, then writes envelopes and a per-pixel summary.
"""

import json

import numpy as np
from _common import parse_args, pyplot

from chronolens.field import make_time_grid
from chronolens.imaging import PixelTrain, PumpedLens, simulate_chain, solve_imaging_config
from chronolens.sfg import shaped_pump

PS = 1e-12
TAU0 = PS
STRETCH = 20  # stretched pixel width in units of tau0


def main():
    args = parse_args(__doc__.splitlines()[0])
    grid = make_time_grid(32768, 2048 * PS)
    d_s = STRETCH * TAU0**2 / (2 * np.pi)
    cfg = solve_imaging_config(d_s * -3.0 / (-3.0 - 1.0), -3.0)
    train = PixelTrain(4, TAU0)

    ideal = simulate_chain(train, cfg, grid)
    aperture = abs(cfg.input_gdd) * 2 * np.pi / TAU0 + train.field_of_view
    shaped = simulate_chain(train, cfg, grid, PumpedLens(shaped_pump(grid, aperture, cfg.focal_gdd)))

    keep = np.abs(grid.times) < 60 * PS
    columns = [grid.times[keep] / PS]
    for result in (ideal, shaped):
        columns += [np.abs(result.input.samples[keep]), np.abs(result.stretched.samples[keep]),
                    np.abs(result.output.samples[keep])]
    np.savetxt(args.out_dir / "fig2_envelopes.csv", np.column_stack(columns), delimiter=",", fmt="%.10g",
               header="t_ps,ideal_in,ideal_stretched,ideal_out,shaped_in,shaped_stretched,shaped_out", comments="")
    summary = {
        name: {
            "magnification": result.report.measured_magnification,
            "centers_ps": (result.report.centers / PS).tolist(),
            "energies": result.report.energies.tolist(),
            "efficiencies": result.report.efficiencies.tolist(),
        }
        for name, result in (("ideal", ideal), ("shaped", shaped))
    }
    (args.out_dir / "fig2_summary.json").write_text(json.dumps(summary, indent=2))
    print(json.dumps(summary, indent=2))

    plt = pyplot(args)
    if plt is None:
        return
    fig, axes = plt.subplots(3, 1, figsize=(6, 7), sharex=True)
    t = grid.times[keep] / PS
    for ax, label, field in zip(axes, ("input", "after input GDD", "output"), ("input", "stretched", "output")):
        ax.plot(t, np.abs(getattr(ideal, field).samples[keep]), label="ideal lens")
        ax.plot(t, np.abs(getattr(shaped, field).samples[keep]), "--", label="shaped pump")
        ax.set_ylabel(f"|a| {label}")
    axes[0].legend()
    axes[-1].set_xlabel("t [ps]")
    fig.tight_layout()
    fig.savefig(args.out_dir / "fig2_pixels.png", dpi=150)


if __name__ == "__main__":
    main()
