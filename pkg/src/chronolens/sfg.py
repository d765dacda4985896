"""Sum-frequency-generation time lens.

The undepleted pump enters only as data: a complex envelope whose modulus,
normalised to its peak, scales the coupling ``g A_p0 L`` pointwise and whose
phase is imprinted on the converted field.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, StepError, WindowError
from .field import (
    ComplexEnvelope,
    TimeGrid,
    apply_gdd,
    gaussian_pulse,
    require_same_grid,
)

# A chirped pump's aperture is where its modulus stays above this fraction of the peak.
APERTURE_THRESHOLD = 1.0 - 1e-3


@dataclass(frozen=True)
class LensConfig:
    coupling: float
    focal_gdd: float

    @property
    def efficiency(self) -> float:
        return float(np.sin(self.coupling) ** 2)


@dataclass(frozen=True)
class PumpProfile:
    envelope: ComplexEnvelope
    focal_gdd: float
    aperture: tuple[float, float]

    @property
    def modulus(self) -> np.ndarray:
        return np.abs(self.envelope.samples)

    @property
    def phase(self) -> np.ndarray:
        return np.angle(self.envelope.samples)

    @property
    def peak(self) -> float:
        return float(self.modulus.max())

    @property
    def aperture_duration(self) -> float:
        return self.aperture[1] - self.aperture[0]

    def normalized(self) -> np.ndarray:
        """Complex pump a_p(t)/A_p0 with A_p0 the peak modulus."""
        peak = self.peak
        if peak == 0:
            return np.zeros_like(self.envelope.samples)
        return self.envelope.samples / peak


def flat_pump(grid: TimeGrid, focal_gdd: float = np.inf, peak: float = 1.0) -> PumpProfile:
    """Constant-modulus pump over the whole grid; quadratic phase unless focal_gdd is infinite."""
    t = grid.times
    phase = np.zeros_like(t) if np.isinf(focal_gdd) else t**2 / (2.0 * focal_gdd)
    env = ComplexEnvelope(grid, peak * np.exp(1j * phase))
    return PumpProfile(env, focal_gdd, (t[0], t[-1]))


def lens_coefficients(coupling_profile) -> tuple[np.ndarray, np.ndarray]:
    """Transmission c = cos(gA_pL) and reflection s = sin(gA_pL), pointwise."""
    coupling_profile = np.asarray(coupling_profile, dtype=float)
    return np.cos(coupling_profile), np.sin(coupling_profile)


def apply_sfg_analytic(
    sig_in: ComplexEnvelope,
    idl_in: ComplexEnvelope,
    pump: PumpProfile,
    coupling: float,
) -> tuple[ComplexEnvelope, ComplexEnvelope]:
    """Phase-matched SFG as a time-dependent beam splitter."""
    require_same_grid(sig_in, idl_in, pump.envelope)
    p = pump.normalized()
    c, s = lens_coefficients(coupling * np.abs(p))
    rot = np.exp(1j * np.angle(p))
    sig_out = c * sig_in.samples + s * np.conj(rot) * idl_in.samples
    idl_out = -s * rot * sig_in.samples + c * idl_in.samples
    return sig_in.with_samples(sig_out), idl_in.with_samples(idl_out)


def apply_ideal_lens(sig_in: ComplexEnvelope, focal_gdd: float) -> ComplexEnvelope:
    """Unit-efficiency, infinite-aperture lens: idler = -exp(i t^2 / 2 D_f) * signal."""
    if focal_gdd == 0:
        raise InvalidArgument("focal GDD must be non-zero")
    t = sig_in.times
    return sig_in.with_samples(-np.exp(1j * t**2 / (2.0 * focal_gdd)) * sig_in.samples)


def integrate_sfg_ode(
    sig_in: ComplexEnvelope,
    idl_in: ComplexEnvelope,
    pump: PumpProfile,
    coupling: float,
    mismatch: float = 0.0,
    crystal_length: float = 1.0,
    n_steps: int = 1000,
) -> tuple[ComplexEnvelope, ComplexEnvelope]:
    """Fixed-step RK4 integration of the coupled signal/idler equations.

    Works in the normalised coordinate u = z/L, so the right-hand side is
    d a_s/du = K p* a_i exp(-i dL u),  d a_i/du = -K p a_s exp(+i dL u)
    with K = g A_p0 L, p = a_p/A_p0 and dL = mismatch * crystal_length.
    Every time sample evolves independently; the loop runs over z only.
    """
    require_same_grid(sig_in, idl_in, pump.envelope)
    if n_steps < 100:
        raise StepError(f"n_steps must be >= 100, got {n_steps}")
    dl = mismatch * crystal_length
    h = 1.0 / n_steps
    if abs(dl * h) >= 0.1:
        raise StepError(
            f"phase step |mismatch*L/n_steps| = {abs(dl * h):.3g} rad exceeds 0.1; "
            f"use n_steps > {int(np.ceil(abs(dl) / 0.1))}"
        )
    kp = coupling * pump.normalized()
    kp_conj = np.conj(kp)

    def rhs(u, a_s, a_i):
        ph = np.exp(1j * dl * u)
        return kp_conj * a_i / ph, -kp * a_s * ph

    a_s = sig_in.samples.copy()
    a_i = idl_in.samples.copy()
    for step in range(n_steps):
        u = step * h
        k1s, k1i = rhs(u, a_s, a_i)
        k2s, k2i = rhs(u + h / 2, a_s + h / 2 * k1s, a_i + h / 2 * k1i)
        k3s, k3i = rhs(u + h / 2, a_s + h / 2 * k2s, a_i + h / 2 * k2i)
        k4s, k4i = rhs(u + h, a_s + h * k3s, a_i + h * k3i)
        a_s = a_s + h / 6 * (k1s + 2 * k2s + 2 * k3s + k4s)
        a_i = a_i + h / 6 * (k1i + 2 * k2i + 2 * k3i + k4i)
    return sig_in.with_samples(a_s), idl_in.with_samples(a_i)


def mismatched_efficiency(coupling: float, mismatch_phase: float) -> float:
    """Closed-form conversion efficiency for a flat pump with constant mismatch dL."""
    q = np.hypot(coupling, mismatch_phase / 2.0)
    if q == 0:
        return 0.0
    return float((coupling / q) ** 2 * np.sin(q) ** 2)


def _central_interval(times, mask, center_index):
    """Contiguous run of True in ``mask`` containing ``center_index``."""
    if not mask[center_index]:
        return times[center_index], times[center_index]
    lo = center_index
    while lo > 0 and mask[lo - 1]:
        lo -= 1
    hi = center_index
    while hi < len(mask) - 1 and mask[hi + 1]:
        hi += 1
    return float(times[lo]), float(times[hi])


def chirped_pump(
    grid: TimeGrid,
    pulse_duration: float,
    focal_gdd: float,
    peak: float = 1.0,
    threshold: float = APERTURE_THRESHOLD,
) -> PumpProfile:
    """Short Gaussian pulse sent through GDD -D_f, rescaled to the requested peak modulus."""
    if focal_gdd == 0:
        raise InvalidArgument("focal GDD must be non-zero")
    pulse = gaussian_pulse(grid, 0.0, pulse_duration)
    stretched = apply_gdd(pulse, -focal_gdd)
    modulus = np.abs(stretched.samples)
    env = stretched * (peak / modulus.max())
    i_peak = int(np.argmax(modulus))
    aperture = _central_interval(grid.times, modulus >= threshold * modulus.max(), i_peak)
    return PumpProfile(env, focal_gdd, aperture)


def shaped_pump(grid: TimeGrid, aperture: float, focal_gdd: float, peak: float = 1.0) -> PumpProfile:
    """Rectangular-modulus pump with exact quadratic phase t^2 / 2 D_f."""
    if focal_gdd == 0:
        raise InvalidArgument("focal GDD must be non-zero")
    if aperture < 0:
        raise InvalidArgument("aperture must be non-negative")
    if aperture > grid.span:
        raise WindowError(f"aperture {aperture:.4g} s exceeds the grid span {grid.span:.4g} s")
    t = grid.times
    inside = (np.abs(t) <= aperture / 2.0) & (aperture > 0)
    samples = np.where(inside, peak * np.exp(1j * t**2 / (2.0 * focal_gdd)), 0.0)
    return PumpProfile(ComplexEnvelope(grid, samples), focal_gdd, (-aperture / 2.0, aperture / 2.0))
