"""Squeezing spectrum before and after a lossy M = -3 time lens.

Writes fig1_spectrum.csv (and fig1_spectrum.png when matplotlib is present).
"""

import numpy as np
from _common import parse_args, pyplot

from chronolens.squeezing import OpaModel, fig1_dataset

MAGNIFICATION = -3.0
EFFICIENCY = 0.8


def main():
    args = parse_args(__doc__.splitlines()[0])
    model = OpaModel.reference(np.log(3.0), omega_c=1.0)
    data = fig1_dataset(model, MAGNIFICATION, EFFICIENCY)
    lossless = fig1_dataset(model, MAGNIFICATION, 1.0)
    table = np.column_stack([data.omega_over_omega_c, data.source, data.imaged, lossless.imaged])
    np.savetxt(args.out_dir / "fig1_spectrum.csv", table, delimiter=",", fmt="%.12g",
               header="omega_over_omega_c,S_source,S_imaged,S_imaged_lossless", comments="")
    print(f"S_s(0) = {data.source[0]:.6f}, S_i(0) = {data.imaged[0]:.6f}")

    plt = pyplot(args)
    if plt is None:
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(data.omega_over_omega_c, data.source, label="source")
    ax.semilogy(data.omega_over_omega_c, data.imaged, label=f"image, eta = {EFFICIENCY}")
    ax.semilogy(data.omega_over_omega_c, lossless.imaged, "--", label="image, eta = 1")
    ax.axhline(1.0, color="k", lw=0.8)
    ax.set_xlabel("Omega / Omega_c")
    ax.set_ylabel("S(Omega) / shot noise")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out_dir / "fig1_spectrum.png", dpi=150)


if __name__ == "__main__":
    main()
