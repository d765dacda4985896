"""Single-lens temporal imaging of Gaussian pixel trains.

The chain is input GDD D_s, time lens, output GDD D_i.  Every element is
linear, so per-pixel diagnostics are obtained by sending each pixel through
the chain on its own; the full train is propagated as well for the output
field itself.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ._threads import parallel_map
from .errors import InvalidArgument, MeasurementError
from .field import (
    ComplexEnvelope,
    TimeGrid,
    apply_gdd,
    check_window,
    gaussian_pulse,
    interpolate,
    pulse_duration,
    spectral_centroid,
    temporal_centroid,
)
from .sfg import PumpProfile, apply_ideal_lens, apply_sfg_analytic

# A pixel whose energy transfer falls below 1 - LOSS_TOL is reported as lossy.
LOSS_TOL = 1e-3
OVERLAP_TOL = 1e-3


@dataclass(frozen=True)
class ImagingConfig:
    focal_gdd: float
    magnification: float
    input_gdd: float
    output_gdd: float


def solve_imaging_config(focal_gdd: float, magnification: float) -> ImagingConfig:
    """Dispersions satisfying 1/D_i + 1/D_s = 1/D_f with M = -D_i/D_s."""
    if focal_gdd == 0:
        raise InvalidArgument("focal GDD must be non-zero")
    if magnification == 0:
        raise InvalidArgument("magnification must be non-zero")
    if magnification == 1:
        raise InvalidArgument("M = 1 requires D_s = 0; no single-lens system realises it")
    d_s = focal_gdd * (magnification - 1.0) / magnification
    d_i = focal_gdd * (1.0 - magnification)
    return ImagingConfig(focal_gdd, magnification, d_s, d_i)


@dataclass(frozen=True)
class PixelTrain:
    n_pixels: int
    pixel_duration: float
    amplitudes: tuple = ()

    def __post_init__(self):
        if self.n_pixels < 1:
            raise InvalidArgument("a pixel train needs at least one pixel")
        if not self.pixel_duration > 0:
            raise InvalidArgument("pixel duration must be positive")
        amps = tuple(complex(a) for a in self.amplitudes) or (1.0 + 0j,) * self.n_pixels
        if len(amps) != self.n_pixels:
            raise InvalidArgument(f"{len(amps)} amplitudes given for {self.n_pixels} pixels")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def spacing(self) -> float:
        return self.pixel_duration

    @property
    def field_of_view(self) -> float:
        return self.n_pixels * self.pixel_duration

    @property
    def centers(self) -> np.ndarray:
        k = np.arange(self.n_pixels)
        return (k - (self.n_pixels - 1) / 2.0) * self.spacing

    def pixel(self, grid: TimeGrid, k: int) -> ComplexEnvelope:
        return gaussian_pulse(grid, self.centers[k], self.pixel_duration, amplitude=self.amplitudes[k])

    def synthesize(self, grid: TimeGrid) -> ComplexEnvelope:
        total = np.zeros(grid.n_samples, dtype=complex)
        for k in range(self.n_pixels):
            total += self.pixel(grid, k).samples
        return ComplexEnvelope(grid, total)


@dataclass
class PixelReport:
    centers: np.ndarray
    durations: np.ndarray
    spectral_centroids: np.ndarray
    energies: np.ndarray
    spacing: float | None = None
    frequency_step: float | None = None
    measured_magnification: float | None = None
    efficiencies: np.ndarray | None = None
    lossy: np.ndarray | None = None
    extras: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.centers)

    def to_dict(self) -> dict:
        out = {}
        for key, value in asdict(self).items():
            if key == "extras":
                out.update(value)
            elif isinstance(value, np.ndarray):
                out[key] = value.tolist()
            else:
                out[key] = value
        return out


def _measure_one(env: ComplexEnvelope) -> tuple[float, float, float, float]:
    return (
        temporal_centroid(env),
        pulse_duration(env),
        spectral_centroid(env),
        env.energy(),
    )


def _steps(values: np.ndarray) -> float | None:
    if len(values) < 2:
        return None
    return float(np.mean(np.diff(values)))


def measure_pixels(env: ComplexEnvelope, expected_centers) -> PixelReport:
    """Per-pixel diagnostics inside windows split halfway between expected centers.

    The field must be negligible (below 1e-3 of its peak amplitude) at every
    window boundary, otherwise the windows overlap and the measurement is refused.
    """
    centers = np.sort(np.asarray(expected_centers, dtype=float))
    t = env.times
    amp = np.abs(env.samples)
    peak = amp.max()
    bounds = (centers[1:] + centers[:-1]) / 2.0
    edges = np.concatenate(([t[0] - env.grid.dt], bounds, [t[-1] + env.grid.dt]))
    for b in bounds:
        i = int(np.argmin(np.abs(t - b)))
        if amp[i] > OVERLAP_TOL * peak:
            raise MeasurementError(
                f"pixel windows overlap at t = {b:.4g} s (amplitude {amp[i] / peak:.3g} of peak)"
            )
    rows = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask = (t > lo) & (t <= hi)
        rows.append(_measure_one(env.with_samples(np.where(mask, env.samples, 0.0))))
    cols = [np.array(c) for c in zip(*rows)]
    return PixelReport(
        centers=cols[0],
        durations=cols[1],
        spectral_centroids=cols[2],
        energies=cols[3],
        spacing=_steps(cols[0]),
        frequency_step=_steps(cols[2]),
    )


def ideal_image(env_in: ComplexEnvelope, config: ImagingConfig) -> ComplexEnvelope:
    """Direct evaluation of the imaging equation -exp(i t^2/2MD_f) a(t/M) / sqrt(M)."""
    m = config.magnification
    t = env_in.times
    prefactor = -1.0 / np.sqrt(complex(m))
    samples = prefactor * np.exp(1j * t**2 / (2.0 * m * config.focal_gdd)) * interpolate(env_in, t / m)
    return check_window(env_in.with_samples(samples), "ideal image")


@dataclass(frozen=True)
class PumpedLens:
    pump: PumpProfile
    coupling: float = np.pi / 2


def _through_lens(env: ComplexEnvelope, config: ImagingConfig, lens_mode) -> ComplexEnvelope:
    if lens_mode == "ideal":
        return apply_ideal_lens(env, config.focal_gdd)
    if isinstance(lens_mode, PumpedLens):
        vacuum = env.with_samples(np.zeros(env.grid.n_samples))
        _, idler = apply_sfg_analytic(env, vacuum, lens_mode.pump, lens_mode.coupling)
        return idler
    raise InvalidArgument(f"unknown lens mode {lens_mode!r}")


def propagate_chain(env: ComplexEnvelope, config: ImagingConfig, lens_mode="ideal"):
    """Returns (after input GDD, after lens, output)."""
    stretched = apply_gdd(env, config.input_gdd)
    converted = _through_lens(stretched, config, lens_mode)
    out = apply_gdd(converted, config.output_gdd)
    return stretched, converted, out


@dataclass
class ChainResult:
    input: ComplexEnvelope
    stretched: ComplexEnvelope
    converted: ComplexEnvelope
    output: ComplexEnvelope
    report: PixelReport


def simulate_chain(
    train: PixelTrain,
    config: ImagingConfig,
    grid: TimeGrid,
    lens_mode="ideal",
) -> ChainResult:
    env_in = train.synthesize(grid)
    stretched, converted, out = propagate_chain(env_in, config, lens_mode)

    def one(k):
        pix = train.pixel(grid, k)
        pix_out = propagate_chain(pix, config, lens_mode)[2]
        return pix.energy(), pulse_duration(pix), _measure_one(pix_out)

    per_pixel = parallel_map(one, range(train.n_pixels))
    e_in = np.array([p[0] for p in per_pixel])
    d_in = np.array([p[1] for p in per_pixel])
    cols = [np.array(c) for c in zip(*(p[2] for p in per_pixel))]
    centers_out, durations, centroids, energies = cols
    eff = energies / e_in

    magnification = None
    if train.n_pixels >= 2:
        magnification = float(np.polyfit(train.centers, centers_out, 1)[0])

    report = PixelReport(
        centers=centers_out,
        durations=durations,
        spectral_centroids=centroids,
        energies=energies,
        spacing=float(np.mean(np.abs(np.diff(centers_out)))) if train.n_pixels >= 2 else None,
        frequency_step=_steps(centroids),
        measured_magnification=magnification,
        efficiencies=eff,
        lossy=eff < 1.0 - LOSS_TOL,
        extras={
            "input_centers": train.centers.tolist(),
            "input_durations": d_in.tolist(),
            "measured_stretch": float(np.mean(durations / d_in)),
        },
    )
    return ChainResult(env_in, stretched, converted, out, report)
