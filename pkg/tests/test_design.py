import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.constants import c as SPEED_OF_LIGHT

from chronolens.design import (
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
from chronolens.dispersion import (
    BBO_EXTRAORDINARY,
    BBO_ORDINARY,
    CrystalDispersion,
    IndexFormula,
    SellmeierSpec,
    bbo_spec,
    dispersion_from_sellmeier,
    finite_difference_derivatives,
)
from chronolens.errors import InfeasibleError, InvalidArgument, ValidityError
from chronolens.field import gaussian_pulse, make_time_grid
from chronolens.sfg import flat_pump, integrate_sfg_ode

FIXTURES = Path(__file__).parent / "fixtures"
PS = 1e-12
finite = dict(allow_nan=False, allow_infinity=False)
positive = st.floats(1e-3, 1e3, **finite)


@pytest.fixture(scope="module")
def bbo():
    return dispersion_from_sellmeier(bbo_spec())


@pytest.fixture(scope="module")
def golden():
    return json.loads((FIXTURES / "bbo_golden.json").read_text())


def generic_crystal(length=1e-3):
    return CrystalDispersion(5.60e-9, 5.55e-9, 5.80e-9, 7.0e-26, length)


# -- phase mismatch ------------------------------------------------------------


def test_mismatch_zero_at_carriers(bbo):
    assert phase_mismatch(bbo, 0.0, 0.0) == 0.0
    assert phase_mismatch(generic_crystal(), 0.0, 0.0) == 0.0


def test_degenerate_mismatch_ignores_signal(bbo):
    assert bbo.degenerate
    wi = 3e12
    values = phase_mismatch(bbo, np.linspace(-5e13, 5e13, 11), wi)
    assert np.all(values == values[0])


@settings(max_examples=100, deadline=None)
@given(st.floats(-1e14, 1e14, **finite), st.floats(-1e14, 1e14, **finite))
def test_mismatch_linearity(ws, wi):
    disp = generic_crystal()
    assert phase_mismatch(disp, 2 * ws, 2 * wi) == pytest.approx(2 * phase_mismatch(disp, ws, wi), rel=1e-12, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e14, 1e14, **finite), st.floats(-1e14, 1e14, **finite))
def test_quadratic_mismatch_identity(ws, wi):
    disp = dispersion_from_sellmeier(bbo_spec())
    quad = phase_mismatch_quadratic(disp, ws, wi)
    lin = phase_mismatch(disp, ws, wi)
    scale = max(abs(quad), abs(lin), 1.0)
    assert quad - lin == pytest.approx(disp.k_double_prime_s * ws**2, abs=1e-12 * scale)
    assert phase_mismatch_quadratic(disp, -ws, wi) == quad


def test_quadratic_mismatch_reduces_to_idler_term(bbo):
    wi = -4e12
    assert phase_mismatch_quadratic(bbo, 0.0, wi) == (bbo.k_prime_p - bbo.k_prime_i) * wi


def test_quadratic_mismatch_needs_degenerate():
    with pytest.raises(InvalidArgument):
        phase_mismatch_quadratic(generic_crystal(), 1.0, 1.0)


# -- mismatch map --------------------------------------------------------------


def test_map_degenerate_band_is_horizontal(bbo):
    ws = np.linspace(-1e14, 1e14, 41)
    wi = np.linspace(-1e14, 1e14, 61)
    mm = mismatch_map(bbo, ws, wi)
    assert mm.abs_delta.shape == (61, 41)
    # every row (fixed W_i) is uniformly negligible or not
    assert np.all(mm.negligible == mm.negligible[:, :1])
    rows = mm.negligible[:, 0]
    assert rows.any() and not rows.all()
    assert np.all(np.abs(wi[rows]) <= mm.overlays["idler_half_width"])


def test_map_infinite_threshold(bbo):
    mm = mismatch_map(bbo, np.linspace(-1e14, 1e14, 5), np.linspace(-1e15, 1e15, 5), threshold=np.inf)
    assert mm.negligible.all()


def test_map_band_is_convex():
    disp = generic_crystal()
    ws = np.linspace(-3e13, 3e13, 81)
    wi = np.linspace(-3e13, 3e13, 81)
    mask = mismatch_map(disp, ws, wi).negligible
    # a band between parallel lines meets every grid row and column in one interval
    for line in list(mask) + list(mask.T):
        idx = np.flatnonzero(line)
        if idx.size:
            assert np.all(np.diff(idx) == 1)


def test_map_overlays(bbo):
    mm = mismatch_map(bbo, [0.0], [0.0], delta_s=2.0, delta_i=1.0, delta_pa=3.0)
    ov = mm.overlays
    assert ov["signal_band"] == [-1.0, 1.0]
    assert ov["idler_band"] == [-0.5, 0.5]
    assert ov["pump_lines"]["separation"] == pytest.approx(3.0 / np.sqrt(2))
    assert "half power" in ov["threshold_note"]


def test_map_bbo_golden_half_width(bbo, golden):
    half = mismatch_map(bbo, [0.0], [0.0]).overlays["idler_half_width"]
    assert half == pytest.approx(golden["idler_half_width"], rel=1e-9)
    # |k_p' - k_i'| W L / 2 = pi/2 at the band edge
    assert half * (bbo.k_prime_i - bbo.k_prime_p) * bbo.length / 2 == pytest.approx(np.pi / 2, rel=1e-12)


# -- Sellmeier dispersion ----------------------------------------------------------


def vacuum_spec():
    one = IndexFormula("constant", (1.0,))
    return SellmeierSpec(one, one, 0.0, {"s": 800e-9, "p": 800e-9, "i": 400e-9}, length=1e-3)


def test_vacuum_dispersion():
    disp = dispersion_from_sellmeier(vacuum_spec())
    for kp in (disp.k_prime_s, disp.k_prime_p, disp.k_prime_i):
        assert kp == pytest.approx(1 / SPEED_OF_LIGHT, rel=1e-12)
    # k'' of a straight line is pure round-off
    assert abs(disp.k_double_prime_s) < 1e-30


def test_same_o_wave_gives_equal_group_velocity(bbo):
    assert bbo.k_prime_s == bbo.k_prime_p


def test_bbo_indices_are_physical():
    spec = bbo_spec()
    for wave in ("s", "p", "i"):
        assert spec.index(wave, spec.wavelengths[wave]) > 1
    # type-I phase matching at 28.1 deg: n_o(830) ~= n_e(28.1 deg, 415)
    assert spec.index("s", 830e-9) == pytest.approx(spec.index("i", 415e-9), abs=1e-3)


def test_bbo_golden(bbo, golden):
    for key, value in golden["dispersion"].items():
        assert getattr(bbo, key) == pytest.approx(value, rel=1e-9)
    assert idler_delay(bbo) == pytest.approx(golden["design_report"]["tau_i"], rel=1e-9)
    assert spreading_time(bbo) == pytest.approx(golden["design_report"]["tau_s"], rel=1e-9)
    # sanity against familiar BBO numbers: ~176 fs/mm group-velocity mismatch, ~70 fs^2/mm GVD
    assert idler_delay(bbo) / bbo.length == pytest.approx(176e-15 / 1e-3, rel=0.02)
    assert bbo.k_double_prime_s == pytest.approx(70e-30 / 1e-3, rel=0.02)


def test_derivatives_stable_under_step_halving():
    spec = bbo_spec()
    omega = 2 * np.pi * SPEED_OF_LIGHT / 830e-9
    k = spec.wavevector("s")
    a = finite_difference_derivatives(k, omega, 1e-3 * omega)
    b = finite_difference_derivatives(k, omega, 0.5e-3 * omega)
    assert a[0] == pytest.approx(b[0], rel=1e-6)
    assert a[1] == pytest.approx(b[1], rel=1e-6)


def test_out_of_range_wavelength():
    spec = SellmeierSpec(BBO_ORDINARY, BBO_EXTRAORDINARY, 28.1, {"s": 1550e-9, "p": 1550e-9, "i": 775e-9})
    with pytest.raises(ValidityError):
        dispersion_from_sellmeier(spec)


@pytest.mark.parametrize("form, coeffs", [("eimerl", (1, 2)), ("sellmeier", (1, 2)), ("constant", (1, 2)), ("cauchy", (1,))])
def test_index_formula_validation(form, coeffs):
    with pytest.raises(InvalidArgument):
        IndexFormula(form, coeffs)


def test_crystal_validation():
    with pytest.raises(InvalidArgument):
        CrystalDispersion(1.0, 1.0, 1.0, 0.0, 0.0)
    with pytest.raises(InvalidArgument):
        CrystalDispersion(np.nan, 1.0, 1.0, 0.0, 1.0)


# -- delay and spreading times --------------------------------------------------------


def test_delay_and_spreading_scaling():
    base = generic_crystal(1e-3)
    assert idler_delay(CrystalDispersion(1.0, 2.0, 2.0, 0.0, 1e-3)) == 0.0
    assert idler_delay(generic_crystal(2e-3)) == pytest.approx(2 * idler_delay(base), rel=1e-15)
    assert spreading_time(CrystalDispersion(1.0, 1.0, 2.0, 0.0, 1e-3)) == 0.0
    assert spreading_time(generic_crystal(4e-3)) == pytest.approx(2 * spreading_time(base), rel=1e-15)
    anomalous = CrystalDispersion(1.0, 1.0, 2.0, -7.0e-26, 1e-3)
    assert spreading_time(anomalous) == spreading_time(CrystalDispersion(1.0, 1.0, 2.0, 7.0e-26, 1e-3))


# -- bandwidths and pixel budget ---------------------------------------------------


def test_bandwidth_limits():
    ds, tau0, d_f = 2 * np.pi / PS, PS, 3 * PS**2
    assert active_pump_bandwidth(ds, -3.0, 1, tau0, d_f) == pytest.approx(ds * 4 / 3)
    assert idler_bandwidth(ds, -3.0, 1, tau0, d_f) == pytest.approx(ds / 3)
    assert active_pump_bandwidth(ds, -1e12, 1, tau0, d_f) == pytest.approx(ds, rel=1e-11)


bandwidth_args = st.tuples(
    st.floats(1e9, 1e15, **finite),
    st.floats(-1e3, 1e3, **finite).filter(lambda m: abs(m) > 1e-3),
    st.integers(1, 10_000),
    st.floats(1e-15, 1e-9, **finite),
    st.floats(1e-30, 1e-18, **finite),
)


@settings(max_examples=300, deadline=None)
@given(bandwidth_args)
def test_fundamental_relation(args):
    ds, m, n, tau0, d_f = args
    dpa = active_pump_bandwidth(ds, m, n, tau0, d_f)
    di = idler_bandwidth(ds, m, n, tau0, d_f)
    assert abs(dpa - ds - di) <= 4 * np.finfo(float).eps * dpa


@settings(max_examples=300, deadline=None)
@given(bandwidth_args)
def test_pixel_budget_round_trip(args):
    ds, m, n, tau0, d_f = args
    di = idler_bandwidth(ds, m, n, tau0, d_f)
    assume((n - 1) * tau0 / d_f > 1e-6 * di or n == 1)
    n_back, flag = pixel_budget(d_f, tau0, di, ds, m)
    assert flag is None
    assert n_back == pytest.approx(n, rel=1e-8, abs=1e-8)


def test_pixel_budget_floor_and_infeasible():
    ds, tau0, d_f = 2 * np.pi / PS, PS, 3 * PS**2
    assert pixel_budget(d_f, tau0, ds / 3, ds, -3.0)[0] == pytest.approx(1.0)
    with pytest.raises(InfeasibleError):
        pixel_budget(d_f, tau0, 0.9 * ds / 3, ds, -3.0)


def test_pixel_budget_high_magnification_flag():
    ds, tau0, d_f = 2 * np.pi / PS, PS, 3 * PS**2
    # |M| >> tau_i / tau0 with the default margin 10: threshold |M| = 10 for tau_i = tau0
    assert pixel_budget(d_f, tau0, ds, ds, -100.0, idler_delay_time=PS)[1] is True
    assert pixel_budget(d_f, tau0, ds, ds, -3.0, idler_delay_time=PS)[1] is False


# -- field of view -------------------------------------------------------------------


def test_fov_quantum_examples():
    q = fov_quantum(2 * PS**2, 0.1 * PS, 0.1 * PS)
    assert q.bound_crystal == q.bound_pump
    q2 = fov_quantum(4 * PS**2, 0.1 * PS, 0.05 * PS)
    q1 = fov_quantum(2 * PS**2, 0.1 * PS, 0.05 * PS)
    assert q2.bound_crystal == pytest.approx(2 * q1.bound_crystal)
    assert q2.bound_pump == pytest.approx(2 * q1.bound_pump)
    assert q1.bound == q1.bound_crystal  # the longer delay sets the tighter bound
    assert q1.operational == pytest.approx(q1.bound / 10)
    assert fov_quantum(2 * PS**2, 0.1 * PS, None).bound_pump is None
    with pytest.raises(InvalidArgument):
        fov_quantum(PS**2, 0.0, PS)


def test_fov_classical_examples():
    d_f, tau = 2 * PS**2, 0.1 * PS
    assert fov_classical(d_f, tau, 0.0) == pytest.approx(2 * np.pi * d_f / tau)
    assert fov_classical(d_f, tau, tau) == pytest.approx(2 * np.pi * d_f / (tau * np.sqrt(2)))
    with pytest.raises(InvalidArgument):
        fov_classical(d_f, 0.0, 0.0)


@settings(max_examples=500, deadline=None)
@given(positive, positive, positive, st.floats(2, 100, **finite))
def test_quantum_fov_below_classical(tau_p, tau_i, d_f, margin):
    q = fov_quantum(d_f * PS**2, tau_i * 1e-15, tau_p * 1e-15, margin)
    assert q.operational < fov_classical(d_f * PS**2, tau_i * 1e-15, tau_p * 1e-15)


# -- constraints -----------------------------------------------------------------------


def test_constraints_zero_delay():
    disp = CrystalDispersion(1.0, 1.0, 1.0, 0.0, 1e-3)
    flags = check_constraints(disp, 1e15, 1e15)
    assert flags.idler_ok and flags.idler_ratio == 0.0


def test_constraints_boundary():
    tau_i = 1e-13
    delta_i = 2 * np.pi / (10 * tau_i)
    disp = CrystalDispersion(5e-9, 5e-9, 5e-9 + tau_i / 1e-3, 0.0, 1e-3)
    flags = check_constraints(disp, 1.0, delta_i, margin=10)
    assert flags.idler_ok
    assert flags.idler_ratio == pytest.approx(1.0, rel=1e-12)
    assert not check_constraints(disp, 1.0, 1.01 * delta_i, margin=10).idler_ok


def test_constraints_margin_validated(bbo):
    with pytest.raises(InvalidArgument):
        check_constraints(bbo, 1.0, 1.0, margin=0.5)


def test_violated_idler_constraint_costs_conversion(bbo):
    # idler band ten times wider than the margin-10 budget allows
    tau_i = idler_delay(bbo)
    delta_i = 10 * 2 * np.pi / (10 * tau_i)
    flags = check_constraints(bbo, 2 * np.pi / PS, delta_i, margin=10)
    assert not flags.idler_ok and flags.idler_ratio == pytest.approx(10.0)
    g = make_time_grid(256, 32 * PS)
    sig = gaussian_pulse(g, 0.0, 2 * PS)
    mismatch = (bbo.k_prime_p - bbo.k_prime_i) * delta_i
    _, idl = integrate_sfg_ode(sig, sig * 0.0, flat_pump(g), np.pi / 2, mismatch, bbo.length, 1000)
    assert idl.energy() / sig.energy() < 0.9
    # at the margin boundary the same edge detuning still converts most of the light
    edge = (bbo.k_prime_p - bbo.k_prime_i) * delta_i / 10
    _, idl = integrate_sfg_ode(sig, sig * 0.0, flat_pump(g), np.pi / 2, edge, bbo.length, 1000)
    assert 0.9 < idl.energy() / sig.energy() < 1.0


# -- design report -----------------------------------------------------------------------


def test_design_report_golden(bbo, golden):
    report = design_report(bbo, **golden["scenario"]).to_dict()
    expected = golden["design_report"]
    assert report.keys() == expected.keys()
    for key, value in expected.items():
        if isinstance(value, float):
            assert report[key] == pytest.approx(value, rel=1e-9), key
        else:
            assert report[key] == value, key


def test_design_report_identities(bbo):
    rep = design_report(bbo, PS, -10.0, 4, 1e-24, pump_duration=50e-15)
    assert rep.feasible
    assert abs(rep.delta_pa - rep.delta_s - rep.delta_i) <= 4 * np.finfo(float).eps * rep.delta_pa
    assert rep.T_F_quantum < rep.T_F_classical
    assert rep.delta_t_p == pytest.approx(1e-24 * 2 * np.pi / 50e-15)


def test_design_report_shaped_pump(bbo):
    rep = design_report(bbo, PS, -10.0, 4, 1e-24, pump_duration=None)
    assert rep.T_F_quantum_pump_bound is None and rep.pump_ok is None
    assert any("shaped pump" in note for note in rep.notes)
    assert rep.T_F_classical == pytest.approx(2 * np.pi * 1e-24 / rep.tau_i)


def test_design_report_infeasible(bbo):
    # too many pixels for the idler bandwidth budget
    rep = design_report(bbo, PS, -10.0, 40, 1e-24, pump_duration=50e-15)
    assert not rep.feasible
    assert not rep.idler_ok
    assert any("pixels requested" in note for note in rep.notes)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(0.1, 10, **finite),
    st.floats(-100, -1.1, **finite),
    st.integers(1, 50),
    st.floats(0.1, 100, **finite),
    st.one_of(st.none(), st.floats(10, 500, **finite)),
)
def test_design_report_invariants(tau0, m, n, d_f, tau_p):
    disp = dispersion_from_sellmeier(bbo_spec())
    rep = design_report(disp, tau0 * PS, m, n, d_f * PS**2, None if tau_p is None else tau_p * 1e-15)
    d = rep.to_dict()
    for key in ("delta_s", "delta_pa", "delta_i", "tau_i", "tau_s", "T_F_quantum", "T_F_classical"):
        assert d[key] >= 0
    assert abs(rep.delta_pa - rep.delta_s - rep.delta_i) <= 4 * np.finfo(float).eps * rep.delta_pa
    assert rep.T_F_quantum < rep.T_F_classical
    assert rep.idler_ok == (rep.idler_ratio <= 1 + 1e-12)
    assert rep.signal_ok == (rep.signal_ratio <= 1 + 1e-12)
