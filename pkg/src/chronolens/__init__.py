"""Quantum temporal imaging of squeezed light through an SFG time lens."""

from .design import (
    CrystalDispersion,
    DesignReport,
    active_pump_bandwidth,
    check_constraints,
    design_report,
    fov_classical,
    fov_quantum,
    idler_bandwidth,
    idler_delay,
    mismatch_map,
    phase_mismatch,
    phase_mismatch_quadratic,
    pixel_budget,
    spreading_time,
)
from .dispersion import IndexFormula, SellmeierSpec, bbo_spec, dispersion_from_sellmeier
from .errors import *  # noqa: F401,F403
from .field import (
    ComplexEnvelope,
    Spectrum,
    TimeGrid,
    apply_gdd,
    gaussian_pulse,
    make_time_grid,
    to_spectrum,
    to_time,
)
from .imaging import (
    ImagingConfig,
    PixelReport,
    PixelTrain,
    PumpedLens,
    ideal_image,
    measure_pixels,
    simulate_chain,
    solve_imaging_config,
)
from .sfg import (
    LensConfig,
    PumpProfile,
    apply_ideal_lens,
    apply_sfg_analytic,
    chirped_pump,
    integrate_sfg_ode,
    lens_coefficients,
    shaped_pump,
)
from .squeezing import (
    HomodyneSetting,
    OpaModel,
    SqueezingSpectrum,
    bogoliubov_from_rpsi,
    fig1_dataset,
    imaged_squeezing_spectrum,
    squeezing_spectrum,
)

__version__ = "0.1.0"
