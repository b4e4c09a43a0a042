import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rittcalc import regions
from rittcalc.regions import RegionError, RegionSpec


def test_stolz_index_examples():
    assert regions.stolz_index(0) == 1.0
    assert regions.stolz_index(0.37) == pytest.approx(1.0, abs=1e-15)
    assert regions.stolz_index(0.5j) == pytest.approx(2.2360679774997896, rel=1e-14)
    assert regions.stolz_index(1.0) == 1.0
    assert regions.stolz_index(1j) == math.inf


def test_contains_stolz():
    s2 = RegionSpec("stolz", 2.0)
    assert regions.contains(s2, 0.9)
    assert regions.contains(s2, 1.0)
    assert not regions.contains(s2, 0.9j)
    assert abs(1 - 0.9j) / 0.1 == pytest.approx(13.453624047073712, rel=1e-12)


def test_contains_other_kinds():
    assert regions.contains(RegionSpec("unit_disc"), 0.6 + 0.8j)
    assert not regions.contains(RegionSpec("unit_disc"), 0.6 + 0.8j, strict=True)
    assert regions.contains(RegionSpec("disc1"), 1.5)
    assert regions.contains(RegionSpec("sector", math.pi / 4), 1 + 0.9j)
    assert not regions.contains(RegionSpec("sector", math.pi / 4), 1 + 1.1j)
    assert regions.contains(RegionSpec("shifted_sector", math.pi / 4), 0.5 + 0.1j)
    assert regions.contains(RegionSpec("omega_q", 0.5), 0.0)
    assert not regions.contains(RegionSpec("omega_q", 0.6), 0.0)


def test_region_spec_validation_and_json():
    with pytest.raises(RegionError):
        RegionSpec("stolz", 0.5)
    with pytest.raises(RegionError):
        RegionSpec("sector", 4.0)
    with pytest.raises(RegionError):
        RegionSpec("omega_q", 0.0)
    with pytest.raises(RegionError):
        RegionSpec("blob")
    spec = RegionSpec("stolz", 3.0)
    assert RegionSpec.from_json(spec.to_json()) == spec
    with pytest.raises(RegionError):
        RegionSpec.from_json({"param": 1})


def test_stolz_one_degenerates_to_point():
    s1 = RegionSpec("stolz", 1.0)
    assert regions.contains(s1, 1.0)
    assert not regions.contains(s1, 0.5j)


def test_cayley_examples():
    assert regions.cayley(0) == 1
    assert regions.cayley(1) == 0
    assert regions.cayley(1j) == pytest.approx(-1j)
    with pytest.raises(RegionError):
        regions.cayley(-1.0)


@settings(max_examples=200, deadline=None)
@given(r=st.floats(0, 0.999), th=st.floats(-math.pi, math.pi))
def test_cayley_involution_and_half_plane(r, th):
    z = r * complex(math.cos(th), math.sin(th))
    w = regions.cayley(z)
    assert w.real > 0
    assert abs(regions.cayley_inv(w) - z) < 1e-12


def test_min_distance_ratio_examples():
    assert regions.min_distance_ratio(0) == 0.5
    assert regions.min_distance_ratio(0.3) == pytest.approx(0.65)
    assert regions.min_distance_ratio(-0.6) == pytest.approx(0.2)


def test_min_distance_ratio_brute_force(rng):
    phi = 2 * math.pi * (np.arange(100_000) + 0.5) / 100_000
    e = np.exp(1j * phi)
    for z in 0.9 * np.sqrt(rng.random(10)) * np.exp(2j * math.pi * rng.random(10)):
        brute = float(np.min(np.abs(z - e) / np.abs(1 - e)))
        assert brute == pytest.approx(regions.min_distance_ratio(z), rel=1e-6)


def test_stolz_to_sector_angle_examples():
    assert regions.stolz_to_sector_angle(1.0) == 0.0
    assert regions.stolz_to_sector_angle(2.0) == pytest.approx(math.pi / 3)
    assert regions.stolz_to_sector_angle(math.sqrt(2)) == pytest.approx(math.pi / 4)
    with pytest.raises(RegionError):
        regions.stolz_to_sector_angle(0.9)


@settings(max_examples=100, deadline=None)
@given(sigma=st.floats(1.05, 20.0), u=st.floats(-0.999, 0.999))
def test_stolz_boundary_radius_on_boundary(sigma, u):
    a = u * regions.stolz_to_sector_angle(sigma)
    rho = float(regions.stolz_boundary_radius(sigma, a))
    z = 1 - rho * complex(math.cos(a), math.sin(a))
    if rho > 1e-9:
        assert regions.stolz_index(z) == pytest.approx(sigma, rel=1e-8)


def test_stolz_inside_sector(rng):
    for sigma in (1.2, 2.0, 6.0):
        z = regions.sample_stolz(sigma, 2000, rng)
        assert np.all(np.asarray(regions.stolz_index(z)) < sigma)
        om = regions.stolz_to_sector_angle(sigma)
        assert np.all(np.asarray(regions.sector_angle(1 - z)) <= om + 1e-12)


def test_cbf_sector_geometry():
    g = regions.cbf_sector_geometry(math.pi / 4)
    assert g.omega0 == pytest.approx(2 * math.pi / 3, abs=1e-12)
    cot = 1 / math.tan(math.pi / 5)
    g = regions.cbf_sector_geometry(math.pi / 5)
    assert abs(math.cos(g.omega0)) == pytest.approx(cot / (cot + 1), abs=1e-12)
    near = regions.cbf_sector_geometry(math.pi / 4, math.pi / 2 + 1e-9)
    assert near.theta0 == pytest.approx(math.pi / 4, abs=1e-8)
    g = regions.cbf_sector_geometry(math.pi / 4, 0.55 * math.pi)
    # frozen from a direct evaluation of the defining cotangent relation
    cot0 = (1.0 - 2.0 * abs(math.cos(0.55 * math.pi))) / math.sin(0.55 * math.pi)
    assert 1 / math.tan(g.theta0) == pytest.approx(cot0, abs=1e-12)
    assert g.theta0 == pytest.approx(0.9629646323410211, abs=1e-12)
    with pytest.raises(RegionError):
        regions.cbf_sector_geometry(math.pi / 4, 0.7 * math.pi)
    with pytest.raises(RegionError):
        regions.cbf_sector_geometry(2.0)


def test_cbf_sector_geometry_inclusion_by_sampling(rng):
    # lam^(1/2) maps C+ onto the pi/4-sector, so omega = pi/4 applies to it
    from rittcalc.funclasses.named import NamedFunction
    omega, theta = math.pi / 4, 0.55 * math.pi
    g = regions.cbf_sector_geometry(omega, theta)
    psi = NamedFunction("power", alpha=0.5)
    z = np.exp(rng.uniform(-6, 6, 20000)) * np.exp(1j * rng.uniform(-theta, theta, 20000))
    w = np.asarray(psi(z))
    assert np.all(np.abs(np.angle(w)) <= g.theta0 + 1e-12)


def test_sum_lower_bound(rng):
    g, b = math.pi / 3, math.pi / 4
    f = regions.sum_lower_bound_factor(g, b)
    z = regions.sample_sector(g, 5000, rng)
    lam = regions.sample_sector(b, 5000, rng)
    assert np.all(np.abs(z + lam) >= f * (np.abs(z) + np.abs(lam)) * (1 - 1e-12))
