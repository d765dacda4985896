"""Phase-mismatch map of a 500 um BBO crystal with the bandwidth overlays.

Writes fig3_mismatch.npz and fig3_overlays.json (plus a PNG with matplotlib).
"""

import json

import numpy as np
from _common import parse_args, pyplot

from chronolens.design import active_pump_bandwidth, idler_bandwidth, mismatch_map
from chronolens.dispersion import bbo_spec, dispersion_from_sellmeier

TAU0 = 1e-12
MAGNIFICATION = -10.0
N_PIXELS = 4
FOCAL_GDD = 1e-24


def main():
    args = parse_args(__doc__.splitlines()[0])
    disp = dispersion_from_sellmeier(bbo_spec())
    delta_s = 2 * np.pi / TAU0
    delta_i = idler_bandwidth(delta_s, MAGNIFICATION, N_PIXELS, TAU0, FOCAL_GDD)
    delta_pa = active_pump_bandwidth(delta_s, MAGNIFICATION, N_PIXELS, TAU0, FOCAL_GDD)
    omega_s = np.linspace(-1.5 * delta_s, 1.5 * delta_s, 301)
    # the idler axis reaches past the negligible-mismatch band edge
    half_width = mismatch_map(disp, [0.0], [0.0]).overlays["idler_half_width"]
    omega_i = np.linspace(-1.5 * half_width, 1.5 * half_width, 301)
    result = mismatch_map(disp, omega_s, omega_i, delta_s=delta_s, delta_i=delta_i, delta_pa=delta_pa)
    np.savez(args.out_dir / "fig3_mismatch.npz", omega_s=omega_s, omega_i=omega_i,
             abs_delta=result.abs_delta, negligible=result.negligible)
    (args.out_dir / "fig3_overlays.json").write_text(json.dumps(result.overlays, indent=2))
    print(f"idler half width {result.overlays['idler_half_width']:.4g} rad/s, idler band {delta_i / 2:.4g} rad/s")

    plt = pyplot(args)
    if plt is None:
        return
    fig, ax = plt.subplots(figsize=(5.5, 5))
    scale = 1e12
    extent = [omega_s[0] / scale, omega_s[-1] / scale, omega_i[0] / scale, omega_i[-1] / scale]
    ax.imshow(result.abs_delta * disp.length / 2, origin="lower", extent=extent, cmap="viridis", aspect="auto")
    ax.contour(omega_s / scale, omega_i / scale, result.negligible.astype(float), levels=[0.5], colors="w")
    for edge in result.overlays["signal_band"]:
        ax.axvline(edge / scale, color="r", ls="--")
    for edge in result.overlays["idler_band"]:
        ax.axhline(edge / scale, color="r", ls="--")
    for c in result.overlays["pump_lines"]["intercepts"]:
        ax.plot(omega_s / scale, (omega_s + c) / scale, color="orange", lw=1)
    ax.set_xlim(extent[:2])
    ax.set_ylim(extent[2:])
    ax.set_xlabel("Omega_s [rad/ps]")
    ax.set_ylabel("Omega_i [rad/ps]")
    fig.tight_layout()
    fig.savefig(args.out_dir / "fig3_mismatch_map.png", dpi=150)


if __name__ == "__main__":
    main()
