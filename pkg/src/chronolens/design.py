"""Design budgets for an SFG temporal imaging system.

Strong inequalities ("much less than") are operationalised with an explicit
margin factor: a constraint x << y passes when margin * x <= y.  Reports carry
the ratio margin * x / y so callers can apply their own threshold.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .dispersion import CrystalDispersion
from .errors import InfeasibleError, InvalidArgument

DEFAULT_MARGIN = 10.0
# Negligible-mismatch level |Delta| L / 2 <= pi/2: half-power point of the sinc response.
DEFAULT_MISMATCH_THRESHOLD = np.pi / 2
_BOUNDARY_RTOL = 1e-12


def phase_mismatch(disp: CrystalDispersion, omega_s, omega_i):
    """Linearised mismatch (k_s' - k_p') W_s + (k_p' - k_i') W_i, zero at the carriers."""
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    return (disp.k_prime_s - disp.k_prime_p) * omega_s + (disp.k_prime_p - disp.k_prime_i) * omega_i


def phase_mismatch_quadratic(disp: CrystalDispersion, omega_s, omega_i):
    """Degenerate type-I mismatch with the signal GVD term: k_s'' W_s^2 + (k_p' - k_i') W_i."""
    if not disp.degenerate:
        raise InvalidArgument("quadratic mismatch model requires k_s' == k_p' (degenerate type I)")
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    return disp.k_double_prime_s * omega_s**2 + (disp.k_prime_p - disp.k_prime_i) * omega_i


def idler_delay(disp: CrystalDispersion) -> float:
    return abs(disp.k_prime_p - disp.k_prime_i) * disp.length


def spreading_time(disp: CrystalDispersion) -> float:
    """sqrt(|k_s''| L); a negative k_s'' (anomalous GVD) spreads just the same."""
    return float(np.sqrt(abs(disp.k_double_prime_s) * disp.length))


def active_pump_bandwidth(delta_s, magnification, n_pixels, pixel_duration, focal_gdd):
    return delta_s * (1.0 + 1.0 / abs(magnification)) + (n_pixels - 1) * pixel_duration / focal_gdd


def idler_bandwidth(delta_s, magnification, n_pixels, pixel_duration, focal_gdd):
    return delta_s / abs(magnification) + (n_pixels - 1) * pixel_duration / focal_gdd


def pixel_budget(focal_gdd, pixel_duration, delta_i_max, delta_s, magnification,
                 idler_delay_time=None, margin=DEFAULT_MARGIN):
    """Real-valued pixel count supported by an idler bandwidth ``delta_i_max``.

    Returns (N, high_magnification) where the flag tells whether |M| >> tau_i/tau0,
    in which case the delta_s/|M| term is negligible.
    """
    floor = delta_s / abs(magnification)
    if delta_i_max < floor * (1.0 - _BOUNDARY_RTOL):
        raise InfeasibleError(
            f"idler bandwidth {delta_i_max:.4g} rad/s is below delta_s/|M| = {floor:.4g} rad/s: "
            "not even a single pixel can be imaged"
        )
    n = 1.0 + focal_gdd / pixel_duration * (delta_i_max - floor)
    high_mag = None
    if idler_delay_time is not None:
        high_mag = bool(abs(magnification) >= margin * idler_delay_time / pixel_duration)
    return float(n), high_mag


@dataclass(frozen=True)
class QuantumFov:
    bound_crystal: float
    bound_pump: float | None
    margin: float

    @property
    def bound(self) -> float:
        if self.bound_pump is None:
            return self.bound_crystal
        return min(self.bound_crystal, self.bound_pump)

    @property
    def operational(self) -> float:
        """Tightest bound divided by the margin: the FOV with negligible degradation."""
        return self.bound / self.margin


def fov_quantum(focal_gdd, tau_i, tau_p, margin=DEFAULT_MARGIN) -> QuantumFov:
    """Quantum FOV bounds 2 pi D_f / tau_i and 2 pi D_f / tau_p.

    ``tau_p=None`` marks a shaped pump, for which only the crystal bound applies.
    """
    if not tau_i > 0:
        raise InvalidArgument("tau_i must be positive")
    if tau_p is not None and not tau_p > 0:
        raise InvalidArgument("tau_p must be positive")
    crystal = 2.0 * np.pi * abs(focal_gdd) / tau_i
    pump = None if tau_p is None else 2.0 * np.pi * abs(focal_gdd) / tau_p
    return QuantumFov(crystal, pump, margin)


def fov_classical(focal_gdd, tau_i, tau_p) -> float:
    if tau_i == 0 and tau_p == 0:
        raise InvalidArgument("tau_i and tau_p cannot both vanish")
    return float(2.0 * np.pi * abs(focal_gdd) / np.hypot(tau_p, tau_i))


@dataclass(frozen=True)
class ConstraintFlags:
    idler_ok: bool
    idler_ratio: float
    signal_ok: bool
    signal_ratio: float
    margin: float


def check_constraints(disp: CrystalDispersion, delta_s, delta_i, margin=DEFAULT_MARGIN) -> ConstraintFlags:
    """tau_i << 2 pi / delta_i and tau_s << 2 pi / delta_s, with the given margin."""
    if margin < 1:
        raise InvalidArgument("margin must be >= 1")
    idler_ratio = margin * idler_delay(disp) * delta_i / (2.0 * np.pi)
    signal_ratio = margin * spreading_time(disp) * delta_s / (2.0 * np.pi)
    return ConstraintFlags(
        idler_ok=bool(idler_ratio <= 1.0 + _BOUNDARY_RTOL),
        idler_ratio=float(idler_ratio),
        signal_ok=bool(signal_ratio <= 1.0 + _BOUNDARY_RTOL),
        signal_ratio=float(signal_ratio),
        margin=float(margin),
    )


@dataclass(frozen=True)
class MismatchMap:
    omega_s: np.ndarray
    omega_i: np.ndarray
    abs_delta: np.ndarray  # shape (len(omega_i), len(omega_s))
    negligible: np.ndarray
    threshold: float
    overlays: dict


def mismatch_map(
    disp: CrystalDispersion,
    omega_s,
    omega_i,
    threshold=DEFAULT_MISMATCH_THRESHOLD,
    quadratic=False,
    delta_s=None,
    delta_i=None,
    delta_pa=None,
) -> MismatchMap:
    """|Delta| over a (W_s, W_i) grid with the negligible region |Delta| L/2 <= threshold.

    Overlay geometry (band edges, pump-constancy lines) is included for the
    bandwidths that are given.
    """
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    ws, wi = np.meshgrid(omega_s, omega_i)
    model = phase_mismatch_quadratic if quadratic else phase_mismatch
    abs_delta = np.abs(model(disp, ws, wi))
    limit = 2.0 * threshold / disp.length
    negligible = abs_delta <= limit

    a = disp.k_prime_s - disp.k_prime_p
    b = disp.k_prime_p - disp.k_prime_i
    overlays = {
        "threshold_phase": float(threshold),
        "threshold_note": "negligible where |Delta| L / 2 <= threshold_phase (default pi/2, half power)",
        "model": "quadratic" if quadratic else "linear",
        # a W_s + b W_i = +-limit bound the negligible band (linear model)
        "mismatch_lines": {"a": float(a), "b": float(b), "levels": [-limit, limit]},
        "idler_half_width": float(limit / abs(b)) if b != 0 else None,
    }
    if delta_s is not None:
        overlays["signal_band"] = [-delta_s / 2.0, delta_s / 2.0]
    if delta_i is not None:
        overlays["idler_band"] = [-delta_i / 2.0, delta_i / 2.0]
    if delta_pa is not None:
        # pump detuning W_p = W_i - W_s held inside +-delta_pa/2
        overlays["pump_lines"] = {
            "slope": 1.0,
            "intercepts": [-delta_pa / 2.0, delta_pa / 2.0],
            "separation": delta_pa / np.sqrt(2.0),
        }
    return MismatchMap(omega_s, omega_i, abs_delta, negligible, float(threshold), overlays)


@dataclass(frozen=True)
class DesignReport:
    delta_s: float
    delta_pa: float
    delta_i: float
    tau_i: float
    tau_s: float
    n_pixels: int
    n_max: float | None
    high_magnification: bool | None
    T_F_quantum_crystal_bound: float
    T_F_quantum_pump_bound: float | None
    T_F_quantum: float
    T_F_classical: float
    tau_p: float | None
    delta_p: float | None
    delta_t_p: float | None
    idler_ok: bool
    idler_ratio: float
    signal_ok: bool
    signal_ratio: float
    pump_ok: bool | None
    pump_ratio: float | None
    margin: float
    feasible: bool
    notes: tuple = ()

    def to_dict(self) -> dict:
        out = asdict(self)
        out["notes"] = list(self.notes)
        for key, value in out.items():
            if isinstance(value, float) and not np.isfinite(value):
                out[key] = None
        return out


def design_report(
    disp: CrystalDispersion,
    pixel_duration: float,
    magnification: float,
    n_pixels: int,
    focal_gdd: float,
    pump_duration: float | None = None,
    margin: float = DEFAULT_MARGIN,
) -> DesignReport:
    """Aggregate every budget for one configuration.

    ``pump_duration`` is the pre-chirp pulse duration tau_p of a chirped pump;
    ``None`` selects a shaped pump, for which the pump FOV bound does not apply.
    """
    if not pixel_duration > 0:
        raise InvalidArgument("pixel duration must be positive")
    if n_pixels < 1:
        raise InvalidArgument("n_pixels must be >= 1")
    notes = []
    delta_s = 2.0 * np.pi / pixel_duration
    delta_pa = active_pump_bandwidth(delta_s, magnification, n_pixels, pixel_duration, focal_gdd)
    delta_i = idler_bandwidth(delta_s, magnification, n_pixels, pixel_duration, focal_gdd)
    tau_i = idler_delay(disp)
    tau_s = spreading_time(disp)
    flags = check_constraints(disp, delta_s, delta_i, margin)

    delta_i_max = np.inf if tau_i == 0 else 2.0 * np.pi / (margin * tau_i)
    try:
        n_max, high_mag = pixel_budget(
            focal_gdd, pixel_duration, delta_i_max, delta_s, magnification, tau_i, margin
        )
    except InfeasibleError as exc:
        n_max, high_mag = None, None
        notes.append(str(exc))

    if tau_i > 0:
        qfov = fov_quantum(focal_gdd, tau_i, pump_duration, margin)
        crystal_bound, pump_bound = qfov.bound_crystal, qfov.bound_pump
        t_quantum = qfov.operational
    else:
        crystal_bound = np.inf
        pump_bound = None if pump_duration is None else 2.0 * np.pi * abs(focal_gdd) / pump_duration
        t_quantum = np.inf if pump_bound is None else pump_bound / margin
    if pump_duration is None:
        notes.append("shaped pump: pump FOV bound not applicable; classical FOV uses tau_p = 0")
        t_classical = fov_classical(focal_gdd, tau_i, 0.0) if tau_i > 0 else np.inf
        delta_p = delta_t_p = pump_ok = pump_ratio = None
    else:
        t_classical = fov_classical(focal_gdd, tau_i, pump_duration)
        delta_p = 2.0 * np.pi / pump_duration
        delta_t_p = abs(focal_gdd) * delta_p
        pump_ratio = float(margin * delta_pa / delta_p)
        pump_ok = bool(pump_ratio <= 1.0 + _BOUNDARY_RTOL)

    feasible = (
        flags.idler_ok
        and flags.signal_ok
        and (pump_ok is None or pump_ok)
        and n_max is not None
        and n_pixels <= n_max * (1.0 + _BOUNDARY_RTOL)
    )
    if n_max is not None and n_pixels > n_max:
        notes.append(f"{n_pixels} pixels requested but the idler budget supports {n_max:.3f}")

    return DesignReport(
        delta_s=delta_s,
        delta_pa=float(delta_pa),
        delta_i=float(delta_i),
        tau_i=float(tau_i),
        tau_s=tau_s,
        n_pixels=int(n_pixels),
        n_max=n_max,
        high_magnification=high_mag,
        T_F_quantum_crystal_bound=float(crystal_bound),
        T_F_quantum_pump_bound=None if pump_bound is None else float(pump_bound),
        T_F_quantum=float(t_quantum),
        T_F_classical=float(t_classical),
        tau_p=pump_duration,
        delta_p=delta_p,
        delta_t_p=delta_t_p,
        idler_ok=flags.idler_ok,
        idler_ratio=flags.idler_ratio,
        signal_ok=flags.signal_ok,
        signal_ratio=flags.signal_ratio,
        pump_ok=pump_ok,
        pump_ratio=pump_ratio,
        margin=float(margin),
        feasible=bool(feasible),
        notes=tuple(notes),
    )
