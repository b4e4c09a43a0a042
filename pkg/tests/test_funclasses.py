import json
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rittcalc.funclasses.measures import (DiscreteMeasure, HausdorffSpec, NPPlusRep, StieltjesTriple,
                                          cbf_deriv, cbf_eval, cbf_to_hausdorff, hausdorff_coeffs,
                                          hausdorff_eval, hausdorff_one_minus, hausdorff_tail,
                                          hausdorff_to_cbf, np_eval)
from rittcalc.funclasses.named import NamedFunction, named_coeffs, reference_angle, reference_table
from rittcalc.funclasses.sectors import SamplingConfig, disc_samples, min_covering_sector
from rittcalc.funclasses.series import (ConvexSeries, FunctionSpecError, SignedSeries, bold_h_deriv,
                                        bold_h_eval, convex_eval, convex_one_minus)
from rittcalc.funclasses.spec import (disc_evaluator, half_plane_evaluator, is_disc_function,
                                      one_minus_evaluator, spec_from_json)


def _disc(rng, n, rmax=1.0):
    return rmax * np.sqrt(rng.random(n)) * np.exp(2j * math.pi * rng.random(n))


# ---------------------------------------------------------------------------
# series


def test_convex_series_validation():
    with pytest.raises(FunctionSpecError):
        ConvexSeries([0.5, 0.6])
    with pytest.raises(FunctionSpecError):
        ConvexSeries([-0.1, 1.1])
    c = ConvexSeries([0.2, 0.3], tail_mass=0.5)
    assert c.l1_tail() == 0.5 and c.l1_tail(0) == pytest.approx(0.8)


def test_convex_eval_examples(rng):
    z = _disc(rng, 50)
    np.testing.assert_allclose(convex_eval(ConvexSeries([1.0]), z), 1.0)
    np.testing.assert_allclose(convex_eval(ConvexSeries([0.0, 1.0]), z), z)
    r = 0.6
    geo = ConvexSeries.from_coeffs((1 - r) * r ** np.arange(200))
    np.testing.assert_allclose(convex_eval(geo, 0.9 * z), (1 - r) / (1 - r * 0.9 * z), atol=1e-12)
    with pytest.raises(FunctionSpecError):
        convex_eval(geo, 1.5)


def test_convex_one_minus_matches_direct(rng):
    c = ConvexSeries.from_coeffs(rng.random(20))
    z = _disc(rng, 100)
    np.testing.assert_allclose(convex_one_minus(c, z, exact=False), 1 - convex_eval(c, z), atol=1e-14)


def test_bold_h_examples(rng):
    c = ConvexSeries.from_coeffs(rng.random(8))
    assert bold_h_eval(c, 1.0) == pytest.approx(1 - c.coeffs[0])
    lam = np.exp(rng.uniform(-3, 3, 200)) * np.exp(1j * rng.uniform(-1.5, 1.5, 200))
    np.testing.assert_allclose(bold_h_eval(ConvexSeries([0.0, 1.0]), lam), 2 * lam / (1 + lam))
    assert np.all(np.asarray(bold_h_eval(c, lam)).real >= -1e-14)


def test_bold_h_deriv_matches_difference(rng):
    c = ConvexSeries.from_coeffs(rng.random(10))
    x = np.linspace(0.1, 3, 7)
    h = 1e-6
    fd = (bold_h_eval(c, x + h) - bold_h_eval(c, x - h)) / (2 * h)
    np.testing.assert_allclose(bold_h_deriv(c, x), fd, rtol=1e-7)


def test_signed_series_l1():
    s = SignedSeries([0.5, -0.25], l1_tail_mass=0.25)
    assert s.l1_norm() == 1.0 and s.l1_tail(0) == 0.5


# ---------------------------------------------------------------------------
# Hausdorff and Stieltjes representations


def test_hausdorff_coeffs_single_atom():
    h = HausdorffSpec(0.0, DiscreteMeasure.atoms((0.5, 0.5)))
    ser = hausdorff_coeffs(h, 30)
    n = np.arange(1, 31)
    np.testing.assert_allclose(ser.coeffs[1:], 0.5 * 0.5 ** (n - 1), rtol=1e-15)
    assert math.fsum(ser.coeffs) + ser.tail_mass == pytest.approx(1.0, abs=1e-15)
    assert hausdorff_tail(h, 30) == pytest.approx(0.5 ** 30, rel=1e-12)


def test_hausdorff_coeffs_atom_at_zero():
    h = HausdorffSpec(0.0, DiscreteMeasure.atoms((0.0, 1.0)))
    ser = hausdorff_coeffs(h, 5)
    np.testing.assert_allclose(ser.coeffs, [0, 1, 0, 0, 0, 0])


def test_hausdorff_eval_examples(rng):
    h = HausdorffSpec(0.0, DiscreteMeasure.atoms((0.5, 0.5)))
    assert hausdorff_eval(h, 0.0) == 0.0
    assert hausdorff_eval(h, 1.0) == pytest.approx(1.0)
    assert hausdorff_eval(h, -1.0) == pytest.approx(-1 / 3)
    z = _disc(rng, 200)
    np.testing.assert_allclose(hausdorff_one_minus(h, z), 1 - np.asarray(hausdorff_eval(h, z)), atol=1e-14)
    assert hausdorff_one_minus(h, 1.0) == 0


def test_hausdorff_regularity():
    h = HausdorffSpec(0.5, DiscreteMeasure.atoms((0.5, 0.25)))
    assert h.is_regular() and h.validate_regular() is h
    bad = HausdorffSpec(0.0, DiscreteMeasure.atoms((0.5, 0.25)))
    with pytest.raises(FunctionSpecError, match="not regular"):
        bad.validate_regular()
    with pytest.raises(FunctionSpecError):
        HausdorffSpec(0.0, DiscreteMeasure.atoms((1.0, 0.1)))
    with pytest.raises(FunctionSpecError):
        DiscreteMeasure([0.5], [-1.0])


def test_hausdorff_to_cbf_examples():
    w = 0.3
    psi = hausdorff_to_cbf(HausdorffSpec(0.0, DiscreteMeasure.atoms((0.5, w))))
    np.testing.assert_allclose(psi.mu.points, [1.0])
    np.testing.assert_allclose(psi.mu.weights, [4 * w])
    assert psi.b == 0
    psi = hausdorff_to_cbf(HausdorffSpec(0.0, DiscreteMeasure.atoms((0.0, 0.7))))
    assert psi.b == 0.7 and len(psi.mu) == 0
    h = cbf_to_hausdorff(StieltjesTriple(0, 0, DiscreteMeasure.atoms((1.0, 0.8))))
    np.testing.assert_allclose(h.nu.points, [0.5])
    np.testing.assert_allclose(h.nu.weights, [0.2])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(0.01, 0.99), st.floats(0.01, 1.0)), min_size=1, max_size=6))
def test_measure_roundtrip_exact(atoms):
    t = np.array([a for a, _ in atoms])
    w = np.array([b for _, b in atoms])
    w = w / math.fsum(w / (1 - t)) * 0.9  # keep the proper mass below 1
    h = HausdorffSpec(0.0, DiscreteMeasure(t, w))
    back = cbf_to_hausdorff(hausdorff_to_cbf(h))
    np.testing.assert_allclose(back.nu.points, t, atol=1e-12, rtol=0)
    np.testing.assert_allclose(back.nu.weights, w, atol=1e-12, rtol=0)
    assert back.c0 == pytest.approx(0.1, abs=1e-12)


def test_hausdorff_to_cbf_identity(rng):
    h = HausdorffSpec(0.1, DiscreteMeasure([0.0, 0.3, 0.8], [0.2, 0.21, 0.08]))
    assert h.is_regular()
    psi = hausdorff_to_cbf(h)
    lam = 1 + _disc(rng, 300)
    np.testing.assert_allclose(cbf_eval(psi, lam), 1 - np.asarray(hausdorff_eval(h, 1 - lam)), atol=1e-13)


def test_cbf_eval_examples():
    psi = StieltjesTriple(0.5, 2.0)
    assert cbf_eval(psi, 1 + 1j) == pytest.approx(0.5 + 2 * (1 + 1j))
    psi = StieltjesTriple(0, 0, DiscreteMeasure.atoms((1.0, 1.0)))
    assert cbf_eval(psi, 1.0) == pytest.approx(0.5)
    assert cbf_deriv(psi, 1.0) == pytest.approx(0.25)


def test_cbf_imag_part_bound(rng):
    psi = StieltjesTriple(0.3, 0.2, DiscreteMeasure([0.01, 1.0, 50.0], [0.5, 1.0, 20.0]))
    t = np.exp(rng.uniform(-5, 5, 5000))
    beta = rng.uniform(-math.pi, math.pi, 5000) * (1 - 1e-9)
    lhs = np.abs(np.asarray(cbf_eval(psi, t * np.exp(1j * beta))).imag)
    rhs = 2 * t * np.abs(np.tan(beta / 2)) * cbf_deriv(psi, t)
    assert np.all(lhs <= rhs * (1 + 1e-12) + 1e-300)


def test_np_eval_examples(rng):
    lam = np.exp(rng.uniform(-2, 2, 50)) * np.exp(1j * rng.uniform(-1.5, 1.5, 50))
    np.testing.assert_allclose(np_eval(NPPlusRep(1.0, 0.0), lam), lam)
    np.testing.assert_allclose(np_eval(NPPlusRep(0.0, 1.0), lam), 1 / lam)


def test_np_plus_real_part_bound(rng):
    F = NPPlusRep(0.3, 0.2, DiscreteMeasure([0.1, 1.0, 10.0], [1.0, 0.5, 0.2]))
    t = np.exp(rng.uniform(-4, 4, 4000))
    beta = rng.uniform(-0.5, 0.5, 4000) * math.pi * (1 - 1e-9)
    lhs = np.asarray(np_eval(F, t * np.exp(1j * beta))).real
    rhs = np.cos(beta) * np.asarray(np_eval(F, t)).real
    assert np.all(lhs >= rhs * (1 - 1e-12))


# ---------------------------------------------------------------------------
# named families


def test_named_coeffs_examples():
    c = named_coeffs(NamedFunction("h_alpha", alpha=0.5), 10).coeffs
    np.testing.assert_allclose(c[1:4], [0.5, 0.125, 0.0625], rtol=1e-15)
    z = named_coeffs(NamedFunction("zeta_L", alpha=0.3), 5).coeffs
    assert z[1] / z[2] == pytest.approx(2 ** 1.3, rel=1e-14)
    g = named_coeffs(NamedFunction("g_eps", eps=0.5), 200)
    assert g.l1_norm() == pytest.approx(1.0, abs=1e-12)


def test_quadratured_nu_half_moments():
    h = NamedFunction("h_alpha", alpha=0.5).hausdorff()
    assert h.is_regular(1e-10)
    c = hausdorff_coeffs(h, 50).coeffs
    ref = [abs(float(mp.binomial(0.5, n))) for n in range(51)]
    np.testing.assert_allclose(c[1:], ref[1:], atol=1e-8, rtol=0)


@pytest.mark.parametrize("nf", [NamedFunction("h_eps", eps=0.3), NamedFunction("h_one"),
                                NamedFunction("zeta_L", alpha=0.5), NamedFunction("h_alpha", alpha=0.25)])
def test_quadratured_measure_reproduces_closed_form(nf, rng):
    h = nf.hausdorff()
    z = _disc(rng, 300, 0.99)
    np.testing.assert_allclose(hausdorff_one_minus(h, z), nf.one_minus(z), atol=1e-9)


def _mp_h_eps_one_minus(z, eps):
    return mp.quad(lambda a: (1 - z) ** a, [0, eps]) / eps


@pytest.mark.parametrize("z", [0.3, -0.9, 0.5 + 0.5j, 0.999j, 0.99 + 0.1j, 1e-9])
def test_h_eps_closed_form_vs_mpmath(z):
    nf = NamedFunction("h_eps", eps=0.4)
    ref = complex(_mp_h_eps_one_minus(mp.mpc(z), 0.4))
    assert abs(nf.one_minus(z) - ref) < 1e-13


@pytest.mark.parametrize("z", [0.3, -0.9, 0.5 + 0.5j, 0.999j, 0.99 + 0.1j])
def test_h_one_closed_form_vs_mpmath(z):
    ref = complex(mp.quad(lambda a: (1 - mp.mpc(z)) ** a, [0, 1]))
    assert abs(NamedFunction("h_one").one_minus(z) - ref) < 1e-13


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("z", [0.3, -1.0, 0.5 + 0.5j, 1j, 0.999 + 0.01j, 0.6 - 0.8j, 0.2j])
def test_zeta_l_vs_mpmath_polylog(alpha, z):
    s = 1 + alpha
    ref = 1 - complex(mp.polylog(s, mp.mpc(z)) / mp.zeta(s))
    got = NamedFunction("zeta_L", alpha=alpha).one_minus(z)
    assert abs(got - ref) < 1e-11


def test_g_eps_closed_form_matches_series(rng):
    nf = NamedFunction("g_eps", eps=0.3)
    ser = named_coeffs(nf, 200)
    z = _disc(rng, 100)
    np.testing.assert_allclose(convex_eval(ser, z, exact=False), nf(z), atol=1e-13)
    np.testing.assert_allclose(nf.one_minus(z), 1 - nf(z), atol=1e-14)


def test_power_and_cbf_log_measures(rng):
    lam = np.exp(rng.uniform(-3, 3, 200)) * np.exp(1j * rng.uniform(-1.5, 1.5, 200))
    for nf in (NamedFunction("power", alpha=0.5), NamedFunction("cbf_log")):
        np.testing.assert_allclose(cbf_eval(nf.stieltjes(), lam), nf(lam), rtol=1e-7)


def test_named_validation():
    with pytest.raises(FunctionSpecError):
        NamedFunction("h_alpha")
    with pytest.raises(FunctionSpecError):
        NamedFunction("h_eps", eps=1.5)
    with pytest.raises(FunctionSpecError):
        NamedFunction("bogus")
    with pytest.raises(FunctionSpecError):
        NamedFunction("g_eps", eps=0.2).hausdorff()


def test_reference_angles():
    assert reference_angle(NamedFunction("h_alpha", alpha=0.5)) == pytest.approx(math.pi / 4)
    assert reference_angle(NamedFunction("h_eps", eps=0.3)) == pytest.approx(0.15 * math.pi)
    assert reference_angle(NamedFunction("h_one")) == pytest.approx(math.pi / 3)
    assert reference_angle(NamedFunction("power", alpha=0.5)) is None
    assert set(reference_table()) >= {"h_alpha", "h_eps", "h_one", "zeta_L"}


# ---------------------------------------------------------------------------
# sectors and specs


def test_min_covering_sector_identity_tends_to_half_pi():
    f = ConvexSeries([0.0, 1.0])
    coarse = min_covering_sector(f, config=SamplingConfig(depth=10, angles=64, cluster=8, interior=0))
    fine = min_covering_sector(f, config=SamplingConfig(depth=10, angles=64, cluster=8, interior=0).refine())
    assert coarse.gamma_hat <= fine.gamma_hat < math.pi / 2
    # depth 10 keeps samples at distance >= 2**-10 from 1
    assert fine.gamma_hat > math.pi / 2 - 3e-2


def test_min_covering_sector_h_one():
    est = min_covering_sector(NamedFunction("h_one"), 20_000)
    assert est.gamma_hat <= math.pi / 3 + 1e-6
    assert est.reference == pytest.approx(math.pi / 3)
    assert set(est.to_json()) >= {"gamma_hat", "n_samples", "max_radius", "argmax"}


def test_sampling_config_refine_is_superset():
    cfg = SamplingConfig(depth=5, angles=16, cluster=4, interior=10)
    a = disc_samples(cfg)
    b = disc_samples(cfg.refine())
    assert a.size == cfg.size
    assert np.all(np.min(np.abs(a[:, None] - b[None, :]), axis=1) < 1e-14)


def test_spec_from_json_kinds():
    assert isinstance(spec_from_json('{"kind": "named", "family": "h_one"}'), NamedFunction)
    c = spec_from_json({"kind": "convex", "coeffs": [0.5, 0.5]})
    assert isinstance(c, ConvexSeries) and is_disc_function(c)
    h = spec_from_json({"kind": "hausdorff", "c0": 0.5, "nu": {"points": [0.5], "weights": [0.25]}})
    assert hausdorff_eval(h, 1.0) == pytest.approx(1.0)
    s = spec_from_json({"kind": "stieltjes", "a": 1, "mu": {"points": [1], "weights": [1]}})
    assert half_plane_evaluator(s)(1.0) == pytest.approx(1.5)
    npp = spec_from_json({"kind": "np_plus", "a": 1, "rho": {"points": [], "weights": []}})
    assert half_plane_evaluator(npp)(2.0) == pytest.approx(2.0)
    sg = spec_from_json({"kind": "signed", "coeffs": [0.5, -0.5]})
    assert one_minus_evaluator(sg)(1.0) == pytest.approx(1.0)
    assert disc_evaluator(c)(1.0) == pytest.approx(1.0)
    for spec in (c, h, s):
        assert spec_from_json(json.loads(json.dumps(spec.to_json()))).to_json() == spec.to_json()


@pytest.mark.parametrize("payload", ['[1]', '{"kind": "nope"}', '{"kind": "convex"}',
                                     '{"kind": "convex", "coeffs": ["a"]}',
                                     '{"kind": "hausdorff", "nu": {"points": [0.5]}}'])
def test_spec_from_json_errors(payload):
    with pytest.raises(FunctionSpecError):
        spec_from_json(payload)
