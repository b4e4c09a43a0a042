import math

import numpy as np
import pytest

from rittcalc import linalg
from rittcalc.diagnostics import (AnalyzeConfig, SUITE_NAMES, VerifyConfig, analyze, angle_estimates,
                                  angle_growth_demo, apply_function, chebyshev_midpoints, epsilon_phi,
                                  epsilon_scenario, growth_diagonal, power_diagnostics,
                                  ritt_constant_estimate, run_suite, spectral_stolz_index,
                                  stolz_type_estimate, v_phi, verify_improving, verify_subordination)
from rittcalc.funclasses.named import NamedFunction
from rittcalc.funclasses.series import ConvexSeries, FunctionSpecError
from rittcalc.linalg import NumericalFailure
from rittcalc.regions import sample_stolz, stolz_to_sector_angle


def _shift(n):
    return np.diag(np.ones(n - 1), -1)


# ---------------------------------------------------------------------------
# estimates


def test_power_diagnostics_examples():
    p = power_diagnostics(np.eye(3), 64)
    assert p.M_N == pytest.approx(1.0) and p.ritt_ratio == 0.0 and not p.divergence_flag
    p = power_diagnostics(np.diag([0.5]), 64)
    # n 0.5^n (1 - 0.5) peaks at n = 1, 2 with value 0.25
    assert p.ritt_ratio == pytest.approx(0.25) and p.argmax_n in (1, 2)
    p = power_diagnostics(np.diag([-1.0]), 256)
    assert p.ritt_ratio == pytest.approx(512.0) and p.divergence_flag
    with pytest.raises(ValueError):
        power_diagnostics(np.eye(2), 0)


def test_ritt_constant_estimate_examples():
    r = ritt_constant_estimate(np.zeros((2, 2)))
    # |z - 1|/|z| over |z| > 1 has sup 2 approached as |z| -> 1, z -> -1
    assert 1.9 < r.value <= 2.0 + 1e-12 and r.finite
    r = ritt_constant_estimate(np.diag([0.5, 0.5j]))
    assert r.finite
    r = ritt_constant_estimate(np.diag([1j]))
    assert not r.finite
    with pytest.raises(ValueError):
        ritt_constant_estimate(np.eye(2), radii=[0.9])
    with pytest.raises(NumericalFailure):
        ritt_constant_estimate(np.diag([1.5]))


def test_spectral_stolz_index():
    assert spectral_stolz_index(np.array([0.0])) == 1.0
    assert spectral_stolz_index(np.array([1.0, 0.5])) == pytest.approx(1.0)
    assert spectral_stolz_index(np.array([0.9j])) == pytest.approx(math.hypot(1, 0.9) / 0.1)
    assert spectral_stolz_index(np.array([1j])) == math.inf


def test_stolz_type_estimate_examples():
    st = stolz_type_estimate(np.eye(2))
    assert st.sigma_hat == 1.0 and st.resolvent_delta == 1.0
    st = stolz_type_estimate(np.diag([0.5, 0.4 + 0.3j]))
    assert st.sigma_hat >= st.spectral and math.isfinite(st.sigma_hat)
    assert stolz_type_estimate(np.diag([-1.0])).sigma_hat == math.inf


def test_angle_estimates_examples():
    a = angle_estimates(np.diag([0.0, 1.0]))
    assert a.alpha_hat == 0.0 and a.omega_hat == 0.0 and a.n_used == 1
    a = angle_estimates(np.diag([1 - 0.1 * np.exp(0.5j)]))
    assert a.alpha_hat == pytest.approx(0.5)
    a = angle_estimates(np.diag([-1.0, 0.5]))
    assert not a.omega_defined
    assert angle_estimates(np.eye(3)).n_used == 0


def test_analyze_identity():
    rep = analyze(np.eye(2)).to_json()
    assert rep["power_bound"] == pytest.approx(1.0) and rep["ritt_ratio"] == 0
    assert rep["stolz_type"] == 1.0 and rep["minimal_angle"] == 0.0
    assert rep["spectral_flags"]["one_in_spectrum"] and rep["consistent"]


def test_analyze_flags():
    rep = analyze(np.diag([-1.0, 0.0])).to_json()
    assert rep["divergence_flag"] and rep["cayley_angle"] == "undefined"
    assert rep["spectral_flags"]["minus_one_in_spectrum"] and rep["spectral_flags"]["unit_circle_contact"]
    assert rep["stolz_type"] == "inf"
    rep = analyze(np.diag([1.5])).to_json()
    assert rep["spectral_flags"]["outside_disc"] and rep["ritt_constant"] == "inf"


def test_analyze_stolz_matrix_consistency(rng):
    ev = sample_stolz(3.0, 6, rng)
    U = linalg.random_unitary(6, rng)
    T = U @ np.diag(ev) @ U.conj().T
    rep = analyze(T, AnalyzeConfig(N=128))
    assert rep.consistent and rep.ritt_constant_finite
    assert rep.minimal_angle <= stolz_to_sector_angle(3.0)
    assert math.isfinite(rep.stolz_type)


# ---------------------------------------------------------------------------
# subordination and improving


def test_apply_function_methods():
    T = np.diag([0.2, 0.5])
    ap = apply_function(ConvexSeries([0.0, 1.0]), T)
    assert ap.method == "wiener" and ap.error_bound == 0
    ap = apply_function(NamedFunction("h_alpha", alpha=0.5), T)
    assert ap.method == "hausdorff"
    np.testing.assert_allclose(np.diag(ap.matrix), 1 - np.sqrt(1 - np.diag(T)), atol=1e-9)


def test_verify_subordination_identity_series(rng):
    ev = sample_stolz(2.0, 5, rng)
    rep = verify_subordination(np.diag(ev), ConvexSeries([0.0, 1.0]), VerifyConfig(angular_nodes=64))
    assert rep.passed
    assert rep.clauses[0].lhs == pytest.approx(spectral_stolz_index(ev))


@pytest.mark.parametrize("seed", range(5))
def test_verify_subordination_stolz_diagonals(seed):
    rng = np.random.default_rng(seed)
    T = np.diag(sample_stolz(2.0, 6, rng))
    rep = verify_subordination(T, NamedFunction("h_alpha", alpha=0.5), VerifyConfig(angular_nodes=64))
    assert rep.passed, rep.to_json()


def test_verify_subordination_squaring_growth_example():
    T = np.diag(growth_diagonal(math.pi / 6, 0.5, 64))
    rep = verify_subordination(T, ConvexSeries([0.0, 0.0, 1.0]), VerifyConfig(angular_nodes=64))
    assert rep.passed
    angle = rep.clauses[1]
    assert angle.lhs <= angle.rhs


def test_verify_subordination_rejects_signed():
    with pytest.raises(FunctionSpecError):
        verify_subordination(np.eye(1) * 0.5, NamedFunction("g_eps", eps=0.5))


@pytest.mark.parametrize("nf", [NamedFunction("h_alpha", alpha=0.5), NamedFunction("h_eps", eps=0.3),
                                NamedFunction("h_one")])
def test_verify_improving_on_shift(nf):
    rep = verify_improving(nf, _shift(6), VerifyConfig(samples=20_000, angular_nodes=64))
    assert rep.passed, rep.to_json()
    assert rep.power_bound == pytest.approx(1.0)


def test_verify_improving_rejects_non_hausdorff():
    with pytest.raises(FunctionSpecError):
        verify_improving(ConvexSeries([0.5, 0.5]), np.eye(2) * 0.5)


# ---------------------------------------------------------------------------
# angle growth


def test_chebyshev_midpoints_and_v_phi():
    t = chebyshev_midpoints(8)
    assert np.all((0 < t) & (t < 1)) and np.allclose(t + t[::-1], 1.0)
    assert v_phi(0.3, 0.0) == pytest.approx(1.0)
    assert v_phi(math.pi / 4, 0.5) == pytest.approx(0.5)
    assert v_phi(math.pi / 4, 1.0) == pytest.approx(0.0)


def test_angle_growth_demo_frozen():
    r = angle_growth_demo(math.pi / 6, 0.5, 256)
    assert r.formulas_agree and r.beta_not_below_alpha
    assert r.tan_gamma_formula == pytest.approx(2 * math.tan(math.pi / 6), rel=1e-15)
    assert r.tan_beta_formula == pytest.approx(math.tan(math.pi / 6), rel=1e-15)
    fine = angle_growth_demo(math.pi / 6, 0.5, 1024)
    assert abs(fine.beta_hat - r.beta_hat) < 1e-4 and abs(fine.gamma_hat - r.gamma_hat) < 1e-4
    with pytest.raises(ValueError):
        angle_growth_demo(2.0, 0.5)
    with pytest.raises(ValueError):
        angle_growth_demo(0.5, 1.0)


def test_epsilon_scenario():
    assert epsilon_phi(0.2, 1.0) == 0.0
    sc = epsilon_scenario(0.2, 256)
    assert sc.conditions_met and sc.holds and sc.tan_beta_hat >= sc.target


# ---------------------------------------------------------------------------
# suites


@pytest.mark.parametrize("name", ["appendix_a", "appendix_b", "measures", "calculus"])
def test_fast_suites_pass(name):
    (res,) = run_suite(name)
    bad = [c.to_json() for c in res.checks if not c.passed]
    assert res.passed, bad
    assert all(c.violations == 0 for c in res.checks)


def test_geometry_suite_passes():
    (res,) = run_suite("geometry")
    assert res.passed, [c.to_json() for c in res.checks if not c.passed]


def test_run_suite_unknown():
    assert "all" in SUITE_NAMES
    with pytest.raises(ValueError):
        run_suite("nope")
