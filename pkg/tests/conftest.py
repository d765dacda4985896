import numpy as np
import pytest

from chronolens.imaging import solve_imaging_config

PS = 1e-12
TAU0 = 1 * PS


def stretched_config(stretch, magnification, tau0=TAU0):
    """Imaging configuration whose input GDD stretches a tau0 pixel to ``stretch * tau0``.

    The stretched amplitude width is D_s * delta_s with delta_s = 2 pi / tau0.
    """
    d_s = stretch * tau0**2 / (2 * np.pi)
    return solve_imaging_config(d_s * magnification / (magnification - 1), magnification)


@pytest.fixture
def tmp_out(tmp_path):
    out = tmp_path / "out"
    return out
