"""One check per acceptance criterion; each prints a PASS/FAIL line."""

import json
import math
import time

import numpy as np
import pytest

from rittcalc import linalg
from rittcalc.cli import EXIT_OK, main
from rittcalc.diagnostics import (TargetSummary, VerifyConfig, angle_growth_demo, epsilon_scenario,
                                  run_suite, verify_subordination, v_phi)
from rittcalc.diagnostics.suites import (check_cayley_op_involution, check_cayley_shift,
                                         check_cbf_link_matrix, check_measure_roundtrip,
                                         check_spectral_mapping)
from rittcalc.funclasses.measures import hausdorff_coeffs
from rittcalc.funclasses.named import NamedFunction, named_coeffs
from rittcalc.funclasses.series import ConvexSeries, bold_h_eval
from rittcalc.opcalc import RqConfig, frac_power, mq_estimate, rq_resolvent, sect_constant
from rittcalc.regions import sample_sector, sample_stolz
from rittcalc.special import binom_abs


@pytest.fixture
def report(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
        return ok
    return emit


def _random_convex(rng, max_degree=30):
    deg = int(rng.integers(1, max_degree + 1))
    return ConvexSeries.from_coeffs(rng.dirichlet(np.full(deg + 1, 0.5)))


def _improve_check(tmp_path, capsys, spec):
    path = tmp_path / "f.json"
    path.write_text(json.dumps(spec))
    t0 = time.perf_counter()
    code = main(["improve-check", str(path), "--samples", "100000"])
    secs = time.perf_counter() - t0
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    return out["estimate"]["gamma_hat"], out["estimate"]["n_samples"], secs


def test_criterion_1_improving_angles(tmp_path, capsys, report):
    rows, ok = [], True
    for a in (0.25, 0.5, 0.75):
        g, n, secs = _improve_check(tmp_path, capsys, {"kind": "named", "family": "h_alpha", "alpha": a})
        ref = a * math.pi / 2
        good = ref - 1e-2 <= g <= ref + 1e-6 and secs < 10 and n >= 100_000
        ok &= good
        rows.append(f"h_{a}: {g:.6f} vs {ref:.6f} ({secs:.2f}s)")
    for e in (0.2, 0.5):
        g, n, secs = _improve_check(tmp_path, capsys, {"kind": "named", "family": "h_eps", "eps": e})
        good = g <= e * math.pi / 2 + 1e-6 and secs < 10 and n >= 100_000
        ok &= good
        rows.append(f"h_eps{e}: {g:.6f} <= {e * math.pi / 2:.6f}")
    g, n, secs = _improve_check(tmp_path, capsys, {"kind": "named", "family": "h_one"})
    good = g <= math.pi / 3 + 1e-6 and secs < 10
    ok &= good
    rows.append(f"h_one: {g:.6f} <= {math.pi / 3:.6f}")
    report(1, ok, "; ".join(rows))
    assert ok


def test_criterion_2_wiener_norm(report):
    errs = {}
    for eps in (0.1, 0.5, 0.9):
        ser = named_coeffs(NamedFunction("g_eps", eps=eps), 10_000)
        assert len(ser.coeffs) >= 10_000
        errs[eps] = abs(ser.l1_norm() - 1.0)
    ok = max(errs.values()) <= 1e-12
    report(2, ok, "max |l1 - 1| = %.3g" % max(errs.values()))
    assert ok


def test_criterion_3_roundtrip_and_moments(report):
    rt = check_measure_roundtrip()
    c = hausdorff_coeffs(NamedFunction("h_alpha", alpha=0.5).hausdorff(), 50).coeffs
    err = float(np.max(np.abs(c[1:51] - binom_abs(0.5, 50)[1:])))
    ok = rt.passed and rt.worst <= 1e-12 and err <= 1e-8
    report(3, ok, f"round trip worst {rt.worst:.3g}, nu_1/2 moments worst {err:.3g}")
    assert ok


def test_criterion_4_rq_oracle(report):
    rng = np.random.default_rng(4)
    q, gamma = 3.0, math.pi / 3
    t0 = time.perf_counter()
    worst_rel, violations, checked = 0.0, 0, 0
    for _ in range(20):
        lam = rng.uniform(0.1, 2.0, 16) * np.exp(1j * rng.uniform(-math.pi / 6, math.pi / 6, 16))
        A = np.diag(lam)
        c = _random_convex(rng)
        z = sample_sector(math.pi / 4, 10, rng, 0.1, 10.0)
        Aq = frac_power(A, q)
        res = rq_resolvent(c, A, z, RqConfig(q, gamma), Aq=Aq)
        M = mq_estimate(A, q, Aq=Aq).value
        cst = sect_constant("boldh", q, gamma, M, norm_A=linalg.operator_norm(A))
        hl = bold_h_eval(c, lam)
        for k, zk in enumerate(z):
            oracle = np.diag(1.0 / (zk + hl))
            rel = np.max(np.abs(res.values[k] - oracle)) / np.max(np.abs(oracle))
            worst_rel = max(worst_rel, float(rel))
            if linalg.operator_norm(res.values[k]) > cst / abs(zk) * (1 + 1e-12):
                violations += 1
            checked += 1
    secs = time.perf_counter() - t0
    ok = worst_rel < 1e-6 and violations == 0 and secs < 60
    report(4, ok, f"{checked} samples, worst rel err {worst_rel:.3g}, "
                  f"{violations} bound violations, {secs:.2f}s")
    assert ok


def test_criterion_5_subordination(report):
    rng = np.random.default_rng(5)
    cfg = VerifyConfig(tol=1e-6)
    series = [_random_convex(rng) for _ in range(10)]
    failed, total = [], 0
    for i in range(50):
        T = np.diag(sample_stolz(2.0, 8, rng))
        target = TargetSummary.of(T, cfg)
        for j, c in enumerate(series):
            rep = verify_subordination(T, c, cfg, target=target)
            total += 1
            if not rep.passed:
                failed.append((i, j, [cl.name for cl in rep.clauses if not cl.passed]))
    ok = not failed
    report(5, ok, f"{total - len(failed)}/{total} matrix-series pairs pass all clauses")
    assert ok, failed[:5]


def test_criterion_6_angle_growth(report):
    r = angle_growth_demo(math.pi / 6, 0.5, 256)
    tp = math.tan(math.pi / 6)
    g_err = abs(math.tan(r.gamma_hat) - 2 * tp) / (2 * tp)
    tb_ref = tp * max(1.0, float(v_phi(math.pi / 6, 0.5)))
    b_err = abs(math.tan(r.beta_hat) - tb_ref) / tb_ref
    sc = epsilon_scenario(0.2, 256)
    fine = angle_growth_demo(math.pi / 6, 0.5, 1024)
    d_beta, d_gamma = abs(fine.beta_hat - r.beta_hat), abs(fine.gamma_hat - r.gamma_hat)
    ok = g_err < 1e-3 and b_err < 1e-3 and sc.holds and d_beta < 1e-4 and d_gamma < 1e-4
    report(6, ok, f"gamma rel err {g_err:.3g}, beta rel err {b_err:.3g}, eps=0.2 "
                  f"tan beta {sc.tan_beta_hat:.4g} >= {sc.target:.4g}: {sc.holds}, "
                  f"refinement changes {d_beta:.2g}/{d_gamma:.2g}")
    assert ok


def test_criterion_7_appendix_suites(report):
    t0 = time.perf_counter()
    results = run_suite("appendix_a") + run_suite("appendix_b")
    secs = time.perf_counter() - t0
    checks = [c for r in results for c in r.checks]
    viol = sum(c.violations for c in checks)
    circle = next(c for c in checks if c.name == "circle_distance_min")
    sampled = [c for c in checks if c.name != "circle_distance_min"]
    ok = (all(c.passed for c in checks) and viol == 0 and circle.worst <= 1e-6
          and all(c.samples >= 10_000 for c in sampled) and secs < 30)
    report(7, ok, f"{len(checks)} checks, {viol} violations, {secs:.2f}s")
    assert ok, [c.to_json() for c in checks if not c.passed]


def test_criterion_8_calculus_identities(report):
    checks = [check_spectral_mapping(20), check_cbf_link_matrix(20), check_cayley_op_involution(20),
              check_cayley_shift(20)]
    ok = all(c.passed and c.samples == 20 and c.worst <= 1e-7 for c in checks)
    report(8, ok, ", ".join(f"{c.name} {c.worst:.2g}" for c in checks))
    assert ok
