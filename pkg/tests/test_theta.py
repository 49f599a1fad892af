"""Generating-function machinery against closed forms and frozen integrals.

The scalar phase-integral references were frozen from 30-digit
arbitrary-precision quadrature of the defining integrands.
"""

import math

import numpy as np
import pytest

from genrabi.closed_forms import (
    beta0_series,
    case1_detuning_ratio,
    case1_series,
    case2_detuning_ratio,
    case2_series,
    elliptic_phase,
    resonance_series,
)
from genrabi.errors import ConfigError, InconsistentProfileError, NumericError, SingularAnsatzError
from genrabi.scenarios import ScenarioParams, make_scenario
from genrabi.theta import (
    ThetaAnsatz,
    ThetaEvaluator,
    ansatz_from_table,
    beta0_ansatz,
    case1_ansatz,
    case2_ansatz,
    general_entries,
    general_entries_series,
    induced_detuning,
    load_ansatz_table,
    named_ansatz,
    phase_integrals,
    verify_ansatz,
    zero_ansatz,
)

# accumulated cosine integral of the half-flip ansatz at tau = 1.7
PHI1_AT_1_7 = 0.6423724425387892
# accumulated cosine integral of the full-inversion ansatz at tau = 0.9
PHI2_AT_0_9 = 0.7328151017865066
# second phase integral of the half-flip ansatz at tau = sqrt(3)/2
R1_AT_SQRT3_2 = 1.0937414513053796
# second phase integral of the full-inversion ansatz at tau = 2.5
R2_AT_2_5 = 2.4625153547689225


def test_ansatz_must_vanish_at_origin():
    with pytest.raises(ConfigError):
        ThetaAnsatz(theta=lambda x: np.asarray(x, dtype=float) + 0.1,
                    label="offset")


def test_evaluator_rejects_bad_tolerances():
    with pytest.raises(ConfigError):
        ThetaEvaluator(case1_ansatz(), quad_tol=0.0)
    with pytest.raises(ConfigError):
        ThetaEvaluator(case1_ansatz(), eps_taylor=0.1)


def test_induced_ratio_matches_closed_forms():
    taus = np.linspace(0.0, 6.0, 31)
    ev1 = ThetaEvaluator(case1_ansatz())
    ev2 = ThetaEvaluator(case2_ansatz())
    got1 = np.array([ev1.detuning_ratio(x) for x in taus])
    got2 = np.array([ev2.detuning_ratio(x) for x in taus])
    assert np.max(np.abs(got1 - case1_detuning_ratio(taus))) < 1e-9
    assert np.max(np.abs(got2 - case2_detuning_ratio(taus))) < 1e-9
    # characteristic values at the origin and at tau = 1
    assert ev1.detuning_ratio(0.0) == pytest.approx(2.0 * math.sqrt(2.0))
    assert ev2.detuning_ratio(1.0) == pytest.approx(
        1.0 / (2.0 * math.sqrt(3.0)), abs=1e-12)


def test_induced_detuning_scales_with_envelope():
    prof = make_scenario(ScenarioParams("case2", {"omega_mag0": 2.0}))
    got = induced_detuning(case2_ansatz(), prof.omega_mag, 0.5)
    assert got == pytest.approx(2.0 * case2_detuning_ratio(1.0), abs=1e-9)


def test_locked_ratio_ansatz_is_constant_across_branches():
    # the exact dr/dtau path has no cotangent, so crossing the points where
    # the stretched clock passes multiples of pi must be smooth
    for beta in (1.0, -0.7):
        ev = ThetaEvaluator(beta0_ansatz(beta))
        taus = np.linspace(0.0, 5.0, 101)
        got = np.array([ev.detuning_ratio(x) for x in taus])
        assert np.max(np.abs(got - beta)) < 1e-12, beta


def test_phase_integrals_frozen_values():
    ev1 = ThetaEvaluator(case1_ansatz())
    assert ev1.phi_int(1.7) == pytest.approx(PHI1_AT_1_7, abs=1e-10)
    assert ev1.phi_int(1.7) == pytest.approx(
        0.5 * math.atan(2.0 * 1.7), abs=1e-10)
    assert ev1.r_int(math.sqrt(3.0) / 2.0) == pytest.approx(
        R1_AT_SQRT3_2, abs=1e-9)
    ev2 = ThetaEvaluator(case2_ansatz())
    assert ev2.phi_int(0.9) == pytest.approx(PHI2_AT_0_9, abs=1e-10)
    assert ev2.phi_int(0.9) == pytest.approx(math.atan(0.9), abs=1e-10)
    assert ev2.r_int(2.5) == pytest.approx(R2_AT_2_5, abs=1e-9)


def test_generic_quadrature_agrees_with_elliptic_closed_form():
    ev = ThetaEvaluator(case1_ansatz())
    for tau in (0.5, 1.0, 2.0, 5.0):
        assert ev.r_int(tau) == pytest.approx(-elliptic_phase(tau), abs=1e-9)


def test_zero_ansatz_phase_integrals():
    prof = make_scenario(ScenarioParams("rabi", {
        "omega_z0": 0.0, "omega_mag0": 1.0, "phi_dot0": 0.0}))
    out = phase_integrals(zero_ansatz(), prof.omega_mag, 2.3)
    assert out.phi_int == pytest.approx(2.3, abs=1e-10)
    assert out.r_int == 0.0


def test_taylor_split_point_is_immaterial():
    a = ThetaEvaluator(case2_ansatz(), eps_taylor=1e-6)
    b = ThetaEvaluator(case2_ansatz(), eps_taylor=1e-5)
    assert abs(a.r_int(2.0) - b.r_int(2.0)) < 1e-9
    assert abs(a.r_int(3e-6) - b.r_int(3e-6)) < 1e-12


def test_general_entries_identity_at_t_zero():
    prof1 = make_scenario("case1")
    prof2 = make_scenario(ScenarioParams("case2", split_fraction=0.5))
    for ansatz, prof in ((case1_ansatz(), prof1), (case2_ansatz(), prof2)):
        e = general_entries(ansatz, prof, 0.0)
        assert e.a == 1.0 + 0.0j
        assert e.b == 0.0j


def test_general_route_matches_case_closed_forms():
    ts = np.linspace(0.0, 4.0, 9)
    prof1 = make_scenario("case1")
    a1, b1 = general_entries_series(case1_ansatz(), prof1, ts)
    ac1, bc1 = case1_series(prof1, ts)
    assert np.max(np.abs(a1 - ac1)) < 5e-9
    assert np.max(np.abs(b1 - bc1)) < 5e-9
    prof2 = make_scenario(ScenarioParams("case2", split_fraction=1.0))
    a2, b2 = general_entries_series(case2_ansatz(), prof2, ts)
    ac2, bc2 = case2_series(prof2, ts)
    assert np.max(np.abs(a2 - ac2)) < 5e-9
    assert np.max(np.abs(b2 - bc2)) < 5e-9


def test_general_route_matches_locked_ratio_closed_form():
    beta = 1.5
    prof = make_scenario(ScenarioParams("constant_beta0", {"beta0": beta}))
    ts = np.linspace(0.0, 6.0, 13)
    a, b = general_entries_series(beta0_ansatz(beta), prof, ts)
    ac, bc = beta0_series(prof, beta, ts)
    assert np.max(np.abs(a - ac)) < 1e-12
    assert np.max(np.abs(b - bc)) < 1e-12


def test_zero_ansatz_reproduces_resonance():
    prof = make_scenario("sech_resonant")
    ts = np.linspace(0.0, 6.0, 25)
    a, b = general_entries_series(zero_ansatz(), prof, ts)
    ar, br = resonance_series(prof, ts)
    assert np.max(np.abs(a - ar)) < 1e-12
    assert np.max(np.abs(b - br)) < 1e-12


def test_mismatched_profile_is_rejected_unless_unchecked():
    prof = make_scenario("constant_beta0")
    with pytest.raises(InconsistentProfileError):
        general_entries(zero_ansatz(), prof, 2.0)
    with pytest.raises(InconsistentProfileError):
        general_entries_series(zero_ansatz(), prof, np.linspace(0.0, 2.0, 5))
    e = general_entries(zero_ansatz(), prof, 2.0, check=False)
    assert e.unitarity_defect < 1e-12


def test_series_requires_ascending_grid():
    prof = make_scenario("case1")
    with pytest.raises(ConfigError):
        general_entries_series(case1_ansatz(), prof, np.array([0.0, 1.0, 0.5]))
    with pytest.raises(ConfigError):
        general_entries_series(case1_ansatz(), prof, np.array([-1.0, 0.5]))


def test_interior_singularity_is_reported():
    # a shallow linear ansatz drives the accumulated cosine past a quarter
    # turn with sin(Theta) != 0 there, which has no integrable detuning
    slope = ThetaAnsatz(theta=lambda x: 0.3 * np.asarray(x, dtype=float),
                        label="slope")
    ev = ThetaEvaluator(slope)
    with pytest.raises(SingularAnsatzError):
        ev.detuning_ratio(1.7)
    with pytest.raises(NumericError):
        ev.r_int(2.0)
    # before the crossing everything is regular
    assert math.isfinite(ev.detuning_ratio(1.0))
    assert math.isfinite(ev.r_int(1.0))


def test_tabulated_ansatz_validation():
    with pytest.raises(ConfigError):
        ansatz_from_table([0.0, 1.0, 0.5], [0.0, 0.1, 0.2])
    with pytest.raises(ConfigError):
        ansatz_from_table([0.5, 1.0], [0.0, 0.1])
    with pytest.raises(ConfigError):
        ansatz_from_table([0.0, 1.0], [0.3, 0.1])
    with pytest.raises(ConfigError):
        ansatz_from_table([0.0], [0.0])
    with pytest.raises(ConfigError):
        ansatz_from_table([0.0, float("inf")], [0.0, 0.1])


def test_tabulated_ansatz_tracks_its_source():
    base = case2_ansatz()
    taus = np.linspace(0.0, 3.0, 601)
    table = ansatz_from_table(taus, base.theta(taus), label="sampled")
    # kinky interpolant: quadrature tolerance must sit below the tracking
    # accuracy, not at the smooth-ansatz default
    ev = ThetaEvaluator(table, quad_tol=1e-6)
    assert abs(ev.detuning_ratio(1.0) - case2_detuning_ratio(1.0)) < 1e-3
    prof = make_scenario("case2")
    e = general_entries(table, prof, 2.0, check=False, quad_tol=1e-6)
    ref = case2_series(prof, np.array([2.0]))
    assert abs(e.b - complex(ref[1][0])) < 1e-4
    assert abs(e.a - complex(ref[0][0])) < 1e-4


def test_table_loading_round_trip(tmp_path):
    path = tmp_path / "ramp.csv"
    path.write_text("tau,theta\n0.0,0.0\n1.0,0.2\n2.0,0.8\n")
    ansatz = load_ansatz_table(path)
    assert ansatz.label == "ramp"
    assert ansatz.theta(0.5) == pytest.approx(0.1)
    assert ansatz.theta(3.0) == pytest.approx(0.8)  # held past the last node
    bad = tmp_path / "bad.csv"
    bad.write_text("0.0,0.0\n0.5,oops\n")
    with pytest.raises(ConfigError):
        load_ansatz_table(bad)
    empty = tmp_path / "empty.csv"
    empty.write_text("# comment only\n")
    with pytest.raises(ConfigError):
        load_ansatz_table(empty)


def test_verify_matching_pairs_pass():
    report = verify_ansatz(case1_ansatz(), make_scenario("case1"), 3.0)
    assert report.passed
    assert report.residual_max <= 1e-9
    assert report.entries_deviation_max <= 1e-6
    report2 = verify_ansatz(case2_ansatz(), make_scenario("case2"), 5.0)
    assert report2.passed
    assert report2.residual_max <= 1e-9


def test_verify_reports_mismatch_without_raising():
    prof = make_scenario("constant_beta0")  # detuning = |omega|, never zero
    report = verify_ansatz(zero_ansatz(), prof, 4.0)
    assert not report.passed
    assert not report.residual_ok
    assert report.residual_max == pytest.approx(1.0, abs=1e-9)


def test_verify_window_validation():
    with pytest.raises(ConfigError):
        verify_ansatz(case1_ansatz(), make_scenario("case1"), (1.0, 3.0))
    with pytest.raises(ConfigError):
        verify_ansatz(case1_ansatz(), make_scenario("case1"), 0.0)


def test_named_ansatz_catalog():
    assert named_ansatz("zero").label == "zero"
    assert named_ansatz("case1").label == "case1"
    assert named_ansatz("case2").label == "case2"
    with pytest.raises(ConfigError):
        named_ansatz("case3")


def test_zero_locked_ratio_degenerates_to_zero_ansatz():
    ansatz = beta0_ansatz(0.0)
    assert ansatz.label == "beta0=0"
    ev = ThetaEvaluator(ansatz)
    assert ev.detuning_ratio(1.3) == 0.0
    assert ev.phi_int(1.3) == 1.3
    assert ev.r_int(1.3) == 0.0
