"""Uniform time grids, complex envelopes, spectral transforms and GDD.

Transform convention: a(W) = integral a(t) exp(+i W t) dt, with the inverse
a(t) = (1/2pi) integral a(W) exp(-i W t) dW.  The discrete transforms carry
the dt and dW measure factors so that Parseval holds in the continuous form.

Frequency bookkeeping: ``carrier_shift`` in :func:`gaussian_pulse` and the
value returned by :func:`spectral_centroid` both refer to the instantaneous
frequency d(arg a)/dt.  Under the transform convention above a field
exp(+i w1 t) has its spectral peak at W = -w1, so the centroid is reported
with the sign flipped.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq, minimize_scalar
from scipy.signal import czt

from .errors import InvalidArgument, ResolutionError, WindowError

# Sign of the quadratic spectral phase imposed by a positive GDD.  Pinned by
# requiring D_s -> lens -> D_i to reproduce the imaging equation.
GDD_SIGN = +1

# Width convention: a pulse "duration" is the amplitude FWHM times 2pi/(8 ln 2).
DURATION_FACTOR = 2.0 * np.pi / (8.0 * np.log(2.0))

EDGE_FRACTION = 1.0 / 16.0
EDGE_ENERGY_TOL = 1e-6
EDGE_AMPLITUDE_TOL = 1e-6


@dataclass(frozen=True)
class TimeGrid:
    n_samples: int
    dt: float
    t0: float

    def __post_init__(self):
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise InvalidArgument(f"n_samples must be an integer >= 2, got {self.n_samples}")
        if not self.dt > 0:
            raise InvalidArgument(f"dt must be positive, got {self.dt}")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_samples)

    @property
    def span(self) -> float:
        return self.n_samples * self.dt

    @property
    def d_omega(self) -> float:
        return 2.0 * np.pi / (self.n_samples * self.dt)

    @property
    def omega(self) -> np.ndarray:
        """Angular-frequency grid in ascending order (spans +-pi/dt)."""
        return np.fft.fftshift(2.0 * np.pi * np.fft.fftfreq(self.n_samples, self.dt))


def make_time_grid(n_samples: int, span: float) -> TimeGrid:
    """Grid of ``n_samples`` points covering ``span`` seconds, centred on zero."""
    if n_samples < 2:
        raise InvalidArgument(f"n_samples must be >= 2, got {n_samples}")
    if not span > 0:
        raise InvalidArgument(f"span must be positive, got {span}")
    dt = span / n_samples
    return TimeGrid(int(n_samples), dt, -span / 2.0)


@dataclass(frozen=True)
class ComplexEnvelope:
    grid: TimeGrid
    samples: np.ndarray
    carrier_detuning: float = 0.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.shape != (self.grid.n_samples,):
            raise InvalidArgument(
                f"expected {self.grid.n_samples} samples, got shape {samples.shape}"
            )
        object.__setattr__(self, "samples", samples)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.samples) ** 2

    def energy(self) -> float:
        return float(np.sum(self.intensity) * self.grid.dt)

    def with_samples(self, samples) -> "ComplexEnvelope":
        return replace(self, samples=np.asarray(samples, dtype=complex))

    def __add__(self, other: "ComplexEnvelope") -> "ComplexEnvelope":
        require_same_grid(self, other)
        return self.with_samples(self.samples + other.samples)

    def __mul__(self, factor) -> "ComplexEnvelope":
        return self.with_samples(self.samples * factor)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Spectrum:
    grid: TimeGrid
    samples: np.ndarray
    carrier_detuning: float = 0.0
    omega: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=complex))
        object.__setattr__(self, "omega", self.grid.omega)

    def energy(self) -> float:
        """(1/2pi) sum |a(W)|^2 dW, equal to the time-domain energy."""
        return float(np.sum(np.abs(self.samples) ** 2) * self.grid.d_omega / (2.0 * np.pi))


def require_same_grid(*envs: ComplexEnvelope) -> TimeGrid:
    grid = envs[0].grid
    for env in envs[1:]:
        if env.grid != grid:
            raise InvalidArgument("envelopes live on different time grids")
    return grid


def to_spectrum(env: ComplexEnvelope) -> Spectrum:
    grid = env.grid
    n = grid.n_samples
    omega_fft = 2.0 * np.pi * np.fft.fftfreq(n, grid.dt)
    spec = grid.dt * n * np.fft.ifft(env.samples) * np.exp(1j * omega_fft * grid.t0)
    return Spectrum(grid, np.fft.fftshift(spec), env.carrier_detuning)


def to_time(spec: Spectrum) -> ComplexEnvelope:
    grid = spec.grid
    n = grid.n_samples
    omega_fft = 2.0 * np.pi * np.fft.fftfreq(n, grid.dt)
    unshifted = np.fft.ifftshift(spec.samples) * np.exp(-1j * omega_fft * grid.t0)
    samples = np.fft.fft(unshifted) / (n * grid.dt)
    return ComplexEnvelope(grid, samples, spec.carrier_detuning)


def edge_energy_fraction(env: ComplexEnvelope) -> float:
    n_edge = max(1, int(round(env.grid.n_samples * EDGE_FRACTION)))
    intensity = env.intensity
    total = intensity.sum()
    if total == 0:
        return 0.0
    return float((intensity[:n_edge].sum() + intensity[-n_edge:].sum()) / total)


def check_window(env: ComplexEnvelope, what: str = "field") -> ComplexEnvelope:
    frac = edge_energy_fraction(env)
    if frac > EDGE_ENERGY_TOL:
        span = env.grid.span
        raise WindowError(
            f"{what}: {frac:.3g} of the energy sits in the outer grid edges "
            f"(span {span:.4g} s, {env.grid.n_samples} samples); "
            f"increase the grid span, e.g. to {4 * span:.4g} s with --grid-n "
            f"{4 * env.grid.n_samples} to keep the same dt"
        )
    return env


def gaussian_sigma(duration: float) -> float:
    """Standard deviation of exp(-t^2/2 sigma^2) having the given duration."""
    fwhm_amplitude = duration / DURATION_FACTOR
    return fwhm_amplitude / (2.0 * np.sqrt(2.0 * np.log(2.0)))


def gaussian_pulse(
    grid: TimeGrid,
    center: float,
    duration: float,
    carrier_shift: float = 0.0,
    amplitude: complex = 1.0,
) -> ComplexEnvelope:
    """Gaussian pixel of the given duration (amplitude FWHM x 2pi/(8 ln 2))."""
    if not duration > 3.0 * grid.dt:
        raise ResolutionError(
            f"pulse duration {duration:.4g} s is not resolved by dt = {grid.dt:.4g} s"
        )
    sigma = gaussian_sigma(duration)
    t = grid.times - center
    samples = amplitude * np.exp(-(t**2) / (2.0 * sigma**2)) * np.exp(1j * carrier_shift * t)
    env = ComplexEnvelope(grid, samples)
    edge = max(abs(samples[0]), abs(samples[-1]))
    if edge > EDGE_AMPLITUDE_TOL * abs(amplitude):
        raise WindowError(
            f"Gaussian pulse at {center:.4g} s is clipped by the grid edge "
            f"(edge amplitude {edge / abs(amplitude):.3g} of peak)"
        )
    return env


def spectral_phase_gdd(omega: np.ndarray, gdd: float) -> np.ndarray:
    return np.exp(1j * GDD_SIGN * gdd * omega**2 / 2.0)


def apply_gdd(env: ComplexEnvelope, gdd: float, check: bool = True) -> ComplexEnvelope:
    """Propagate through a lossless element with group delay dispersion ``gdd`` [s^2]."""
    if gdd == 0:
        return env
    spec = to_spectrum(env)
    out = to_time(replace(spec, samples=spec.samples * spectral_phase_gdd(spec.omega, gdd)))
    if check:
        check_window(out, f"field after GDD {gdd:.4g} s^2")
    return out


# -- measurements -----------------------------------------------------------


def _half_max_crossing(x, y, i_lo, i_hi, level):
    """Root of y - level between samples i_lo and i_hi, refined on a cubic spline."""
    lo = max(0, min(i_lo, i_hi) - 3)
    hi = min(len(x), max(i_lo, i_hi) + 4)
    spline = CubicSpline(x[lo:hi], y[lo:hi])
    return brentq(lambda u: spline(u) - level, x[i_lo], x[i_hi], xtol=1e-12 * abs(x[i_hi] - x[i_lo]))


def _refined_peak(x, y, i_peak):
    """Peak value of the cubic-spline interpolant near sample ``i_peak``."""
    if i_peak == 0 or i_peak == len(y) - 1:
        return y[i_peak]
    lo = max(0, i_peak - 4)
    hi = min(len(x), i_peak + 5)
    spline = CubicSpline(x[lo:hi], y[lo:hi])
    res = minimize_scalar(lambda u: -spline(u), bounds=(x[i_peak - 1], x[i_peak + 1]),
                          method="bounded", options={"xatol": 1e-10 * (x[1] - x[0])})
    return max(y[i_peak], float(-res.fun))


def fwhm(x: np.ndarray, y: np.ndarray) -> float:
    """Full width at half maximum of a single-peaked, non-negative profile."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    i_peak = int(np.argmax(y))
    level = _refined_peak(x, y, i_peak) / 2.0
    left = i_peak
    while left > 0 and y[left] > level:
        left -= 1
    right = i_peak
    while right < len(y) - 1 and y[right] > level:
        right += 1
    if y[left] > level or y[right] > level:
        raise WindowError("profile does not fall to half maximum inside the grid")
    x_left = _half_max_crossing(x, y, left, left + 1, level)
    x_right = _half_max_crossing(x, y, right - 1, right, level)
    return float(x_right - x_left)


def amplitude_fwhm(env: ComplexEnvelope) -> float:
    return fwhm(env.times, np.abs(env.samples))


def pulse_duration(env: ComplexEnvelope) -> float:
    """Pulse duration: amplitude FWHM x 2pi/(8 ln 2)."""
    return DURATION_FACTOR * amplitude_fwhm(env)


def spectral_fwhm(env: ComplexEnvelope) -> float:
    """Amplitude FWHM of the spectrum, i.e. the bandwidth convention."""
    spec = to_spectrum(env)
    return fwhm(spec.omega, np.abs(spec.samples))


def temporal_centroid(env: ComplexEnvelope) -> float:
    w = env.intensity
    return float(np.sum(w * env.times) / np.sum(w))


def spectral_centroid(env: ComplexEnvelope) -> float:
    """Intensity-weighted mean instantaneous frequency d(arg a)/dt [rad/s]."""
    spec = to_spectrum(env)
    w = np.abs(spec.samples) ** 2
    return float(-np.sum(w * spec.omega) / np.sum(w))


def interpolate(env: ComplexEnvelope, times: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Band-limited (trigonometric) interpolation of the envelope at arbitrary times.

    Points outside the grid window evaluate to zero. Equally spaced ``times`` are
    evaluated with a chirp-z transform, anything else with a direct sum.
    """
    times = np.asarray(times, dtype=float)
    spec = to_spectrum(env)
    grid = env.grid
    out = np.zeros(times.shape, dtype=complex)
    t_end = grid.t0 + grid.span - grid.dt
    inside = np.flatnonzero((times >= grid.t0) & (times <= t_end))
    if inside.size == 0:
        return out
    order = np.argsort(spec.omega)
    omega = spec.omega[order]
    amps = spec.samples[order] / grid.span
    t_in = times[inside]
    step = (t_in[-1] - t_in[0]) / max(t_in.size - 1, 1)
    if t_in.size > chunk and np.allclose(np.diff(t_in), step, rtol=1e-9, atol=0):
        # sum_k a_k exp(-i t_j w_k) with t_j = t_s + j h and w_k = w_0 + k dw
        t_s, dw = t_in[0], grid.d_omega
        k = np.arange(omega.size)
        x = amps * np.exp(-1j * t_s * k * dw)
        vals = czt(x, m=t_in.size, w=np.exp(-1j * step * dw), a=1.0)
        out[inside] = vals * np.exp(-1j * (t_s + step * np.arange(t_in.size)) * omega[0])
        return out
    for start in range(0, inside.size, chunk):
        idx = inside[start:start + chunk]
        phase = np.exp(-1j * np.outer(times[idx], omega))
        out[idx] = phase @ amps
    return out


def align_global_phase(env: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Multiply ``env`` by the unit phase that best matches ``reference``."""
    overlap = np.vdot(env, reference)
    if overlap == 0:
        return env
    return env * (overlap / abs(overlap))


def relative_l2_error(env, reference, modulo_phase: bool = True) -> float:
    a = env.samples if isinstance(env, ComplexEnvelope) else np.asarray(env)
    b = reference.samples if isinstance(reference, ComplexEnvelope) else np.asarray(reference)
    if modulo_phase:
        a = align_global_phase(a, b)
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))
