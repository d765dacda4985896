"""Squeezed-light source model and homodyne squeezing spectra.

The source is described by its squeezing parameter r(W) and squeezing angle
psi(W).  Spectra are normalised to shot noise (S = 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidArgument


@dataclass(frozen=True)
class OpaModel:
    r_of: Callable[[np.ndarray], np.ndarray]
    psi_of: Callable[[np.ndarray], np.ndarray]
    omega_c: float
    beta2: float | None = None
    length: float | None = None

    @classmethod
    def reference(cls, r0: float, omega_c: float, psi0: float = 0.0) -> "OpaModel":
        """Flat gain r(W) = r0 and quadratic angle psi(W) = psi0 + (W/W_c)^2 / 2."""
        if not omega_c > 0:
            raise InvalidArgument("omega_c must be positive")
        if r0 < 0:
            raise InvalidArgument("r0 must be non-negative")

        def r_of(omega):
            return np.full(np.shape(omega), float(r0))

        def psi_of(omega):
            return psi0 + 0.5 * (np.asarray(omega, dtype=float) / omega_c) ** 2

        return cls(r_of, psi_of, omega_c)

    @classmethod
    def from_source(cls, r0: float, beta2: float, length: float, psi0: float = 0.0) -> "OpaModel":
        """Reference model with W_c = (beta2 * l)^(-1/2) from the OPA crystal GVD and length."""
        if not beta2 * length > 0:
            raise InvalidArgument("beta2 * length must be positive")
        base = cls.reference(r0, (beta2 * length) ** -0.5, psi0)
        return cls(base.r_of, base.psi_of, base.omega_c, beta2, length)


@dataclass(frozen=True)
class HomodyneSetting:
    lo_phase: float

    def __post_init__(self):
        object.__setattr__(self, "lo_phase", float(np.mod(self.lo_phase, 2.0 * np.pi)))


@dataclass(frozen=True)
class SqueezingSpectrum:
    frequencies: np.ndarray
    values: np.ndarray


def bogoliubov_from_rpsi(model: OpaModel, omega) -> tuple[np.ndarray, np.ndarray]:
    """U = cosh r, V = sinh r exp(2i psi), in the gauge arg U = 0."""
    r = np.asarray(model.r_of(omega), dtype=float)
    psi = np.asarray(model.psi_of(omega), dtype=float)
    return np.cosh(r) + 0j, np.sinh(r) * np.exp(2j * psi)


def rpsi_from_bogoliubov(u, v) -> tuple[np.ndarray, np.ndarray]:
    """Inverse map: exp(+-r) = |U| +- |V| and psi = arg(V/U)/2."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    r = np.log(np.abs(u) + np.abs(v))
    psi = 0.5 * np.angle(v / u)
    return r, psi


def _homodyne(r, theta):
    return np.cos(theta) ** 2 * np.exp(2.0 * r) + np.sin(theta) ** 2 * np.exp(-2.0 * r)


def squeezing_spectrum(model: OpaModel, lo: HomodyneSetting, omega) -> SqueezingSpectrum:
    omega = np.asarray(omega, dtype=float)
    theta = model.psi_of(omega) - lo.lo_phase
    return SqueezingSpectrum(omega, _homodyne(model.r_of(omega), theta))


def imaged_squeezing_spectrum(
    model: OpaModel,
    lo: HomodyneSetting,
    magnification: float,
    efficiency: float,
    omega,
) -> SqueezingSpectrum:
    """Spectrum after the imaging system: 1 - eta + eta * S_s(|M| W)."""
    if magnification == 0:
        raise InvalidArgument("magnification must be non-zero")
    if not 0.0 <= efficiency <= 1.0:
        raise InvalidArgument(f"efficiency must lie in [0, 1], got {efficiency}")
    omega = np.asarray(omega, dtype=float)
    source = squeezing_spectrum(model, lo, abs(magnification) * omega)
    return SqueezingSpectrum(omega, 1.0 - efficiency + efficiency * source.values)


def shot_noise_crossing(spectrum: Callable[[float], float], lo: float, hi: float) -> float:
    """First frequency in [lo, hi] where S(W) = 1, located by bisection."""
    return float(brentq(lambda w: spectrum(w) - 1.0, lo, hi, xtol=1e-14 * max(abs(hi), 1.0)))


@dataclass(frozen=True)
class Fig1Dataset:
    omega_over_omega_c: np.ndarray
    source: np.ndarray
    imaged: np.ndarray


def fig1_dataset(
    model: OpaModel,
    magnification: float,
    efficiency: float,
    lo: HomodyneSetting | None = None,
    n_points: int = 801,
    omega_max: float = 4.0,
) -> Fig1Dataset:
    """Source and imaged spectra on a shared grid over [0, omega_max * W_c].

    The default LO phase selects the squeezed quadrature at W = 0.
    """
    if lo is None:
        lo = HomodyneSetting(float(model.psi_of(0.0)) - np.pi / 2.0)
    x = np.linspace(0.0, omega_max, n_points)
    omega = x * model.omega_c
    s_in = squeezing_spectrum(model, lo, omega).values
    s_out = imaged_squeezing_spectrum(model, lo, magnification, efficiency, omega).values
    return Fig1Dataset(x, s_in, s_out)
