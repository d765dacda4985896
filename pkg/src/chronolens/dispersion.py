"""Crystal dispersion: wavevector derivatives from Sellmeier formulas.

Index formulas take the vacuum wavelength in micrometres:

``sellmeier``  n^2 = A + sum_j B_j l^2 / (l^2 - C_j),  coefficients [A, B1, C1, B2, C2, ...]
``eimerl``     n^2 = A + B / (l^2 - C) - D l^2,        coefficients [A, B, C, D]
``constant``   n = A
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import InvalidArgument, ValidityError

WAVES = ("s", "p", "i")


@dataclass(frozen=True)
class CrystalDispersion:
    k_prime_s: float
    k_prime_p: float
    k_prime_i: float
    k_double_prime_s: float
    length: float

    def __post_init__(self):
        values = (self.k_prime_s, self.k_prime_p, self.k_prime_i, self.k_double_prime_s)
        if not all(np.isfinite(v) for v in values):
            raise InvalidArgument("wavevector derivatives must be finite")
        if not self.length > 0:
            raise InvalidArgument("crystal length must be positive")

    @property
    def degenerate(self) -> bool:
        """Signal and pump share one group velocity (frequency-degenerate type I)."""
        return self.k_prime_s == self.k_prime_p


@dataclass(frozen=True)
class IndexFormula:
    form: str
    coefficients: tuple
    valid_range: tuple = (0.0, np.inf)  # metres

    def __post_init__(self):
        coeffs = tuple(float(x) for x in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if self.form == "sellmeier" and len(coeffs) % 2 != 1:
            raise InvalidArgument("sellmeier form needs A followed by (B, C) pairs")
        if self.form == "eimerl" and len(coeffs) != 4:
            raise InvalidArgument("eimerl form needs exactly [A, B, C, D]")
        if self.form == "constant" and len(coeffs) != 1:
            raise InvalidArgument("constant form needs a single coefficient")
        if self.form not in ("sellmeier", "eimerl", "constant"):
            raise InvalidArgument(f"unknown index formula {self.form!r}")

    def __call__(self, wavelength):
        lo, hi = self.valid_range
        wl = np.asarray(wavelength, dtype=float)
        if np.any(wl < lo) or np.any(wl > hi):
            raise ValidityError(
                f"wavelength {np.min(wl):.4g}-{np.max(wl):.4g} m outside validity "
                f"range [{lo:.4g}, {hi:.4g}] m"
            )
        lam2 = (wl * 1e6) ** 2
        a = self.coefficients
        if self.form == "constant":
            return np.full(wl.shape, a[0])[()]
        if self.form == "eimerl":
            n2 = a[0] + a[1] / (lam2 - a[2]) - a[3] * lam2
        else:
            n2 = a[0] + sum(b * lam2 / (lam2 - cc) for b, cc in zip(a[1::2], a[2::2]))
        return np.sqrt(n2)


# Eimerl et al., J. Appl. Phys. 62, 1968 (1987); 0.22-1.06 um.
BBO_ORDINARY = IndexFormula("eimerl", (2.7359, 0.01878, 0.01822, 0.01354), (0.22e-6, 1.06e-6))
BBO_EXTRAORDINARY = IndexFormula("eimerl", (2.3753, 0.01224, 0.01667, 0.01516), (0.22e-6, 1.06e-6))


@dataclass(frozen=True)
class SellmeierSpec:
    ordinary: IndexFormula
    extraordinary: IndexFormula
    cut_angle_deg: float
    wavelengths: dict  # wave -> vacuum wavelength [m]
    polarizations: dict = field(default_factory=lambda: {"s": "o", "p": "o", "i": "e"})
    length: float = 1.0

    def index(self, wave: str, wavelength):
        pol = self.polarizations[wave]
        n_o = self.ordinary(wavelength)
        if pol == "o":
            return n_o
        if pol != "e":
            raise InvalidArgument(f"polarization must be 'o' or 'e', got {pol!r}")
        n_e = self.extraordinary(wavelength)
        theta = np.deg2rad(self.cut_angle_deg)
        return (np.cos(theta) ** 2 / n_o**2 + np.sin(theta) ** 2 / n_e**2) ** -0.5

    def wavevector(self, wave: str):
        """k(w) = n(w) w / c for the given wave."""

        def k(omega):
            return self.index(wave, 2.0 * np.pi * SPEED_OF_LIGHT / omega) * omega / SPEED_OF_LIGHT

        return k


def bbo_spec(length=500e-6, cut_angle_deg=28.1, signal_wavelength=830e-9) -> SellmeierSpec:
    """Frequency-degenerate type-I BBO: o-wave signal and pump, e-wave idler at half wavelength."""
    return SellmeierSpec(
        BBO_ORDINARY,
        BBO_EXTRAORDINARY,
        cut_angle_deg,
        {"s": signal_wavelength, "p": signal_wavelength, "i": signal_wavelength / 2.0},
        length=length,
    )


def finite_difference_derivatives(k, omega: float, step: float) -> tuple[float, float]:
    """Richardson-extrapolated central differences for k' and k'' at ``omega``."""

    def central(h):
        kp, k0, km = k(omega + h), k(omega), k(omega - h)
        return (kp - km) / (2.0 * h), (kp - 2.0 * k0 + km) / h**2

    d1_h, d2_h = central(step)
    d1_h2, d2_h2 = central(step / 2.0)
    return (4.0 * d1_h2 - d1_h) / 3.0, (4.0 * d2_h2 - d2_h) / 3.0


def _close(a, b, rtol, atol):
    return abs(a - b) <= rtol * max(abs(a), abs(b)) + atol


def wavevector_derivatives(k, omega: float, rtol: float = 1e-6, max_halvings: int = 30):
    """Halve the finite-difference step until successive estimates agree to ``rtol``."""
    h = 1e-2 * omega
    prev = finite_difference_derivatives(k, omega, h)
    # absolute floors so that identically-zero derivatives still converge
    atol1 = 1e-12 * abs(k(omega)) / omega
    atol2 = 1e-10 * abs(k(omega)) / omega**2
    for _ in range(max_halvings):
        h /= 2.0
        cur = finite_difference_derivatives(k, omega, h)
        if _close(cur[0], prev[0], rtol, atol1) and _close(cur[1], prev[1], rtol, atol2):
            return cur
        prev = cur
    raise ValidityError("finite-difference derivatives did not converge")


def dispersion_from_sellmeier(spec: SellmeierSpec) -> CrystalDispersion:
    derivs = {}
    for wave in WAVES:
        omega = 2.0 * np.pi * SPEED_OF_LIGHT / spec.wavelengths[wave]
        derivs[wave] = wavevector_derivatives(spec.wavevector(wave), omega)
    return CrystalDispersion(
        k_prime_s=float(derivs["s"][0]),
        k_prime_p=float(derivs["p"][0]),
        k_prime_i=float(derivs["i"][0]),
        k_double_prime_s=float(derivs["s"][1]),
        length=spec.length,
    )
