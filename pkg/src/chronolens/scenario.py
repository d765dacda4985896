"""Scenario and crystal-dispersion files.

Both are INI-style key/value files with ``[sections]`` and must declare
``units = SI``.  See ``scenarios/`` in the repository for annotated examples.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .design import DEFAULT_MARGIN, DEFAULT_MISMATCH_THRESHOLD
from .dispersion import CrystalDispersion, IndexFormula, SellmeierSpec, bbo_spec, dispersion_from_sellmeier
from .errors import ChronolensError, ConfigError

KNOWN_SECTIONS = {
    "scenario": {"units", "name"},
    "grid": {"n_samples", "span"},
    "opa": {"r0", "exp_r0", "omega_c", "beta2", "length", "psi0", "lo_phase"},
    "imaging": {"focal_gdd", "magnification", "efficiency"},
    "lens": {"mode", "coupling", "pump_duration", "aperture"},
    "pixels": {"count", "duration", "weights"},
    "crystal": {"units", "file", "preset", "k_prime_s", "k_prime_p", "k_prime_i",
                "k_double_prime_s", "length"},
    "sellmeier": {"ordinary", "ordinary_form", "extraordinary", "extraordinary_form",
                  "valid_range", "cut_angle_deg", "wavelength_s", "wavelength_p",
                  "wavelength_i", "polarization_s", "polarization_p", "polarization_i"},
    "design": {"margin", "pump_duration"},
    "sfg": {"mismatch", "crystal_length", "n_steps"},
    "map": {"omega_s_max", "omega_i_max", "n_s", "n_i", "threshold", "quadratic"},
}


class _Source:
    """configparser wrapper that remembers where each key was written."""

    def __init__(self, text: str, path: str, allowed=KNOWN_SECTIONS):
        self.path = path
        self.parser = configparser.ConfigParser(
            inline_comment_prefixes=("#", ";"), interpolation=None
        )
        try:
            self.parser.read_string(text, source=path)
        except configparser.Error as exc:
            raise ConfigError(str(exc).replace("\n", " "), path, getattr(exc, "lineno", None)) from exc
        self.lines = {}
        section = None
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            m = re.match(r"\[([^\]]+)\]", line)
            if m:
                section = m.group(1).strip()
                self.lines[(section, None)] = number
                continue
            m = re.match(r"([^=:#;\s][^=:]*?)\s*[=:]", line)
            if m and section is not None:
                self.lines[(section, m.group(1).strip().lower())] = number
        for section in self.parser.sections():
            if section not in allowed:
                raise self.error(f"unknown section [{section}]", section)
            for key in self.parser[section]:
                if key not in allowed[section]:
                    raise self.error(f"unknown key '{key}' in [{section}]", section, key)

    def error(self, message, section, key=None):
        return ConfigError(message, self.path, self.lines.get((section, key), self.lines.get((section, None))))

    def has(self, section, key=None):
        if key is None:
            return self.parser.has_section(section)
        return self.parser.has_option(section, key)

    def raw(self, section, key):
        return self.parser.get(section, key)

    def get_float(self, section, key, default=None, positive=False, nonzero=False):
        if not self.has(section, key):
            return default
        text = self.raw(section, key)
        try:
            value = float(eval_number(text))
        except ValueError:
            raise self.error(f"{key} = {text!r} is not a number", section, key) from None
        if not np.isfinite(value):
            raise self.error(f"{key} must be finite", section, key)
        if positive and not value > 0:
            raise self.error(f"{key} must be positive, got {value}", section, key)
        if nonzero and value == 0:
            raise self.error(f"{key} must be non-zero", section, key)
        return value

    def get_int(self, section, key, default=None, minimum=None):
        if not self.has(section, key):
            return default
        text = self.raw(section, key)
        try:
            value = int(text)
        except ValueError:
            raise self.error(f"{key} = {text!r} is not an integer", section, key) from None
        if minimum is not None and value < minimum:
            raise self.error(f"{key} must be >= {minimum}, got {value}", section, key)
        return value

    def get_list(self, section, key, default=()):
        if not self.has(section, key):
            return tuple(default)
        text = self.raw(section, key)
        try:
            return tuple(float(eval_number(x)) for x in text.split(",") if x.strip())
        except ValueError:
            raise self.error(f"{key} = {text!r} is not a comma-separated list of numbers", section, key) from None

    def get_str(self, section, key, default=None):
        if not self.has(section, key):
            return default
        return self.raw(section, key).strip()

    def require_si(self, section):
        units = self.get_str(section, "units")
        if units is None:
            raise self.error(f"[{section}] must declare 'units = SI'", section)
        if units.upper() != "SI":
            raise self.error(f"only SI units are supported, got units = {units}", section, "units")


_PI_TOKEN = re.compile(r"^\s*([-+]?[0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def eval_number(text: str) -> float:
    """Parse a float; also accepts multiples of pi such as ``pi/2`` or ``-0.5*pi``."""
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_TOKEN.match(text)
    if not m:
        raise ValueError(text)
    coef = m.group(1)
    if coef in ("", "+"):
        coef = 1.0
    elif coef == "-":
        coef = -1.0
    value = float(coef) * np.pi
    if m.group(2):
        value /= float(m.group(2))
    return value


def _formula(src: _Source, name: str) -> IndexFormula:
    if not src.has("sellmeier", name):
        raise src.error(f"[sellmeier] is missing '{name}'", "sellmeier")
    form = src.get_str("sellmeier", f"{name}_form", "sellmeier")
    rng = src.get_list("sellmeier", "valid_range", (0.0, np.inf))
    try:
        return IndexFormula(form, src.get_list("sellmeier", name), tuple(rng))
    except ChronolensError as exc:
        raise src.error(str(exc), "sellmeier", name) from None


def _crystal_from_source(src: _Source, base_dir: Path) -> CrystalDispersion | None:
    if src.has("crystal", "file"):
        path = base_dir / src.get_str("crystal", "file")
        if not path.is_file():
            raise src.error(f"crystal file {path} not found", "crystal", "file")
        return load_crystal(path)
    preset = src.get_str("crystal", "preset")
    length = src.get_float("crystal", "length", positive=True)
    if preset is not None:
        if preset.lower() != "bbo":
            raise src.error(f"unknown crystal preset {preset!r} (known: bbo)", "crystal", "preset")
        return dispersion_from_sellmeier(bbo_spec(length=length or 500e-6))
    if src.has("sellmeier"):
        if length is None:
            raise src.error("[crystal] needs 'length'", "crystal")
        waves = {}
        pols = {}
        for wave, pol in (("s", "o"), ("p", "o"), ("i", "e")):
            wl = src.get_float("sellmeier", f"wavelength_{wave}", positive=True)
            if wl is None:
                raise src.error(f"[sellmeier] is missing 'wavelength_{wave}'", "sellmeier")
            waves[wave] = wl
            pols[wave] = src.get_str("sellmeier", f"polarization_{wave}", pol)
        spec = SellmeierSpec(
            _formula(src, "ordinary"),
            _formula(src, "extraordinary") if src.has("sellmeier", "extraordinary") else _formula(src, "ordinary"),
            src.get_float("sellmeier", "cut_angle_deg", 0.0),
            waves,
            pols,
            length,
        )
        try:
            return dispersion_from_sellmeier(spec)
        except ChronolensError as exc:
            raise src.error(str(exc), "sellmeier") from None
    keys = ("k_prime_s", "k_prime_p", "k_prime_i", "k_double_prime_s")
    if not src.has("crystal"):
        return None
    values = {}
    for key in keys:
        value = src.get_float("crystal", key)
        if value is None:
            raise src.error(f"[crystal] is missing '{key}'", "crystal")
        values[key] = value
    if length is None:
        raise src.error("[crystal] needs 'length'", "crystal")
    return CrystalDispersion(length=length, **values)


def load_crystal(path) -> CrystalDispersion:
    """Read a dispersion file: either direct k', k'' values or a [sellmeier] block."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read crystal file: {exc}", str(path)) from None
    src = _Source(text, str(path))
    if not src.has("crystal"):
        raise ConfigError("crystal file needs a [crystal] section", str(path), 1)
    src.require_si("crystal")
    if src.has("crystal", "file"):
        raise src.error("crystal files cannot reference other files", "crystal", "file")
    return _crystal_from_source(src, path.parent)


@dataclass
class Scenario:
    name: str = "default"
    n_samples: int = 4096
    span: float = 256e-12
    r0: float = float(np.log(3.0))
    omega_c: float = 1e12
    psi0: float = 0.0
    lo_phase: float | None = None
    focal_gdd: float = 15.0 * (1e-12) ** 2 / (2.0 * np.pi)
    magnification: float = -3.0
    efficiency: float | None = 0.8
    lens_mode: str = "ideal"
    coupling: float = np.pi / 2
    pump_duration: float | None = None
    aperture: float | None = None
    n_pixels: int = 4
    pixel_duration: float = 1e-12
    weights: tuple = ()
    crystal: CrystalDispersion | None = field(default_factory=lambda: dispersion_from_sellmeier(bbo_spec()))
    margin: float = DEFAULT_MARGIN
    design_pump_duration: float | None = None
    sfg_mismatch: float = 0.0
    sfg_length: float | None = None
    n_steps: int = 1000
    map_omega_s_max: float | None = None
    map_omega_i_max: float | None = None
    map_n_s: int = 201
    map_n_i: int = 201
    map_threshold: float = DEFAULT_MISMATCH_THRESHOLD
    map_quadratic: bool = False

    @property
    def lo(self) -> float:
        return self.psi0 - np.pi / 2 if self.lo_phase is None else self.lo_phase

    @property
    def lens_efficiency(self) -> float:
        if self.efficiency is not None:
            return self.efficiency
        return float(np.sin(self.coupling) ** 2)

    @property
    def crystal_length(self) -> float:
        if self.sfg_length is not None:
            return self.sfg_length
        return self.crystal.length if self.crystal is not None else 1.0


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario: {exc}", str(path)) from None
    return parse_scenario(text, str(path), path.parent)


def parse_scenario(text: str, source: str = "<scenario>", base_dir: Path = Path(".")) -> Scenario:
    src = _Source(text, source)
    if not src.has("scenario"):
        raise ConfigError("scenario needs a [scenario] section declaring 'units = SI'", source, 1)
    src.require_si("scenario")
    sc = Scenario()
    updates = {"name": src.get_str("scenario", "name", sc.name)}

    updates["n_samples"] = src.get_int("grid", "n_samples", sc.n_samples, minimum=2)
    updates["span"] = src.get_float("grid", "span", sc.span, positive=True)

    r0 = src.get_float("opa", "r0", None)
    exp_r0 = src.get_float("opa", "exp_r0", None, positive=True)
    if r0 is not None and exp_r0 is not None:
        raise src.error("give either r0 or exp_r0, not both", "opa", "exp_r0")
    if exp_r0 is not None:
        r0 = float(np.log(exp_r0))
    if r0 is not None:
        if r0 < 0:
            raise src.error("r0 must be non-negative", "opa", "r0")
        updates["r0"] = r0
    omega_c = src.get_float("opa", "omega_c", None, positive=True)
    beta2 = src.get_float("opa", "beta2", None, positive=True)
    opa_length = src.get_float("opa", "length", None, positive=True)
    if omega_c is not None and (beta2 is not None or opa_length is not None):
        raise src.error("give either omega_c or (beta2, length), not both", "opa", "omega_c")
    if (beta2 is None) != (opa_length is None):
        raise src.error("beta2 and length must be given together", "opa")
    if beta2 is not None:
        omega_c = (beta2 * opa_length) ** -0.5
    if omega_c is not None:
        updates["omega_c"] = omega_c
    updates["psi0"] = src.get_float("opa", "psi0", sc.psi0)
    updates["lo_phase"] = src.get_float("opa", "lo_phase", None)

    updates["focal_gdd"] = src.get_float("imaging", "focal_gdd", sc.focal_gdd, nonzero=True)
    m = src.get_float("imaging", "magnification", sc.magnification, nonzero=True)
    if m == 1:
        raise src.error("magnification 1 is degenerate (D_s = 0)", "imaging", "magnification")
    updates["magnification"] = m
    eff = src.get_float("imaging", "efficiency", None)
    if eff is not None and not 0 <= eff <= 1:
        raise src.error("efficiency must lie in [0, 1]", "imaging", "efficiency")

    mode = src.get_str("lens", "mode", sc.lens_mode).lower()
    if mode not in ("ideal", "chirped", "shaped"):
        raise src.error(f"lens mode must be ideal, chirped or shaped, got {mode!r}", "lens", "mode")
    updates["lens_mode"] = mode
    updates["coupling"] = src.get_float("lens", "coupling", sc.coupling)
    updates["pump_duration"] = src.get_float("lens", "pump_duration", None, positive=True)
    updates["aperture"] = src.get_float("lens", "aperture", None, positive=True)
    if mode == "chirped" and updates["pump_duration"] is None:
        raise src.error("chirped lens needs pump_duration", "lens", "mode")
    # an explicit efficiency wins; otherwise it follows from the coupling (or the default)
    if eff is not None:
        updates["efficiency"] = eff
    elif src.has("lens", "coupling"):
        updates["efficiency"] = None

    updates["n_pixels"] = src.get_int("pixels", "count", sc.n_pixels, minimum=1)
    updates["pixel_duration"] = src.get_float("pixels", "duration", sc.pixel_duration, positive=True)
    weights = src.get_list("pixels", "weights", ())
    if weights and len(weights) != updates["n_pixels"]:
        raise src.error(f"{len(weights)} weights for {updates['n_pixels']} pixels", "pixels", "weights")
    updates["weights"] = weights

    if src.has("crystal"):
        updates["crystal"] = _crystal_from_source(src, base_dir)
    elif src.has("sellmeier"):
        raise src.error("[sellmeier] requires a [crystal] section with the length", "sellmeier")

    updates["margin"] = src.get_float("design", "margin", sc.margin)
    if updates["margin"] < 1:
        raise src.error("margin must be >= 1", "design", "margin")
    updates["design_pump_duration"] = src.get_float("design", "pump_duration", None, positive=True)

    updates["sfg_mismatch"] = src.get_float("sfg", "mismatch", sc.sfg_mismatch)
    updates["sfg_length"] = src.get_float("sfg", "crystal_length", None, positive=True)
    updates["n_steps"] = src.get_int("sfg", "n_steps", sc.n_steps, minimum=1)

    updates["map_omega_s_max"] = src.get_float("map", "omega_s_max", None, positive=True)
    updates["map_omega_i_max"] = src.get_float("map", "omega_i_max", None, positive=True)
    updates["map_n_s"] = src.get_int("map", "n_s", sc.map_n_s, minimum=2)
    updates["map_n_i"] = src.get_int("map", "n_i", sc.map_n_i, minimum=2)
    updates["map_threshold"] = src.get_float("map", "threshold", sc.map_threshold, positive=True)
    quad = src.get_str("map", "quadratic", "no").lower()
    if quad not in ("yes", "no", "true", "false"):
        raise src.error("quadratic must be yes or no", "map", "quadratic")
    updates["map_quadratic"] = quad in ("yes", "true")
    return replace(sc, **updates)
