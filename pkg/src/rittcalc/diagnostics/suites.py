"""Property suites: sampled inequalities and identities with worst cases recorded.

Every check is deterministic (fixed seeds) and returns a ``CheckResult``;
``run_suite`` groups them by name.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List

import numpy as np
from scipy.optimize import linear_sum_assignment

from .. import linalg
from ..funclasses.measures import (DiscreteMeasure, HausdorffSpec, StieltjesTriple, cbf_deriv,
                                   cbf_eval, cbf_to_hausdorff, hausdorff_coeffs, hausdorff_eval,
                                   hausdorff_tail, hausdorff_to_cbf)
from ..funclasses.named import NamedFunction, named_coeffs
from ..funclasses.series import ConvexSeries, bold_h_eval, convex_eval
from ..opcalc import ContourSpec, cayley_op, riesz_dunford, wiener_apply
from ..regions import (cayley, min_distance_ratio, sample_sector, sample_stolz, stolz_index,
                       stolz_to_sector_angle)
from ..special import binom_abs, gauss_legendre_interval
from .estimates import angles_from_spectrum, finite_or_str, ritt_constant_estimate
from .verify import apply_function

ROUNDING = 1e-12  # relative slack granted to sampled inequalities for floating-point rounding


@dataclass
class CheckResult:
    name: str
    passed: bool
    samples: int
    violations: int
    worst: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "samples": self.samples,
                "violations": self.violations, "worst": finite_or_str(self.worst),
                "tolerance": self.tolerance, "detail": self.detail,
                "seconds": round(self.seconds, 6)}


@dataclass
class SuiteResult:
    name: str
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self, timings: bool = True) -> Dict[str, Any]:
        checks = [c.to_json() for c in self.checks]
        if not timings:
            for c in checks:
                c.pop("seconds")
        return {"suite": self.name, "passed": self.passed, "checks": checks}


def _inequality(name: str, lhs: np.ndarray, rhs: np.ndarray, detail: str,
                rel: float = ROUNDING) -> CheckResult:
    """lhs <= rhs elementwise, up to rounding; worst = max(lhs - rhs)."""
    lhs = np.asarray(lhs, dtype=float).ravel()
    rhs = np.asarray(rhs, dtype=float).ravel()
    slack = rel * (np.abs(lhs) + np.abs(rhs)) + 1e-300
    bad = ~(lhs <= rhs + slack)
    worst = float(np.max(lhs - rhs)) if lhs.size else 0.0
    return CheckResult(name, not bool(np.any(bad)), int(lhs.size), int(np.sum(bad)), worst, rel, detail)


def _closeness(name: str, err: np.ndarray, tol: float, detail: str) -> CheckResult:
    err = np.asarray(err, dtype=float).ravel()
    bad = ~(err <= tol)
    worst = float(np.max(err)) if err.size else 0.0
    return CheckResult(name, not bool(np.any(bad)), int(err.size), int(np.sum(bad)), worst, tol, detail)


def _in_sector(name: str, w: np.ndarray, angle: float, detail: str, slack: float = 1e-12) -> CheckResult:
    w = np.asarray(w, dtype=np.complex128).ravel()
    ang = np.where(w == 0, 0.0, np.abs(np.angle(w)))
    bad = ~(ang <= angle + slack)
    return CheckResult(name, not bool(np.any(bad)), int(w.size), int(np.sum(bad)),
                       float(np.max(ang) - angle) if w.size else 0.0, slack, detail)


def _disc(rng: np.random.Generator, n: int, rmax: float = 1.0) -> np.ndarray:
    return rmax * np.sqrt(rng.random(n)) * np.exp(2j * math.pi * rng.random(n))


def _random_convex(rng: np.random.Generator, max_degree: int = 30) -> ConvexSeries:
    deg = int(rng.integers(1, max_degree + 1))
    c = rng.dirichlet(np.full(deg + 1, 0.5))
    return ConvexSeries.from_coeffs(c)


def _random_regular_hausdorff(rng: np.random.Generator, atoms: int = 5,
                              tmax: float = 0.9) -> HausdorffSpec:
    t = rng.uniform(0.0, tmax, atoms)
    v = rng.dirichlet(np.ones(atoms + 1))
    # choose weights so that c0 + sum w/(1-t) = 1
    return HausdorffSpec(float(v[0]), DiscreteMeasure(t, v[1:] * (1.0 - t)))


def _random_cbf(rng: np.random.Generator, atoms: int = 6) -> StieltjesTriple:
    s = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), atoms))
    m = rng.exponential(1.0, atoms) * s
    return StieltjesTriple(float(rng.exponential(0.5)), float(rng.exponential(0.5)),
                           DiscreteMeasure(s, m))


def _match_error(a: np.ndarray, b: np.ndarray) -> float:
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    r, c = linear_sum_assignment(cost)
    return float(np.max(cost[r, c])) if len(r) else 0.0


def _random_diag_matrix(rng: np.random.Generator, ev: np.ndarray, cond: float = 10.0) -> np.ndarray:
    """V diag(ev) V^{-1} with V a random matrix of modest condition number."""
    n = len(ev)
    U = linalg.random_unitary(n, rng)
    W = linalg.random_unitary(n, rng)
    s = np.exp(np.linspace(0.0, math.log(cond), n))
    V = (U * s) @ W
    return V @ np.diag(ev) @ np.linalg.inv(V)


# ---------------------------------------------------------------------------
# suite appendix_a: scalar inequalities


def check_circle_distance(n_points: int = 40, grid: int = 100_000, seed: int = 11) -> CheckResult:
    """min over the unit circle of |z - e^{i phi}|/|1 - e^{i phi}| equals (1-|z|^2)/(2|1-z|)."""
    rng = np.random.default_rng(seed)
    z = _disc(rng, n_points, 0.9)
    phi = 2.0 * math.pi * (np.arange(grid) + 0.5) / grid
    e = np.exp(1j * phi)
    den = np.abs(1.0 - e)
    brute = np.array([float(np.min(np.abs(zz - e) / den)) for zz in z])
    closed = np.asarray(min_distance_ratio(z))
    return _closeness("circle_distance_min", np.abs(brute - closed) / closed, 1e-6,
                      f"{n_points} points |z| <= 0.9, {grid}-point angle grid, relative error")


def check_sector_sum(samples: int = 10_000, seed: int = 12) -> CheckResult:
    rng = np.random.default_rng(seed)
    lhs, rhs = [], []
    for g, b in ((math.pi / 4, math.pi / 4), (math.pi / 3, math.pi / 2 - 0.1), (0.1, 0.1)):
        z = sample_sector(g, samples, rng)
        lam = sample_sector(b, samples, rng)
        # include the extreme rays
        z[:samples // 10] = np.abs(z[:samples // 10]) * np.exp(1j * g)
        lam[:samples // 10] = np.abs(lam[:samples // 10]) * np.exp(-1j * b)
        lhs.append(-np.abs(z + lam))
        rhs.append(-math.cos(0.5 * (g + b)) * (np.abs(z) + np.abs(lam)))
    return _inequality("sector_sum_bound", np.concatenate(lhs), np.concatenate(rhs),
                       "cos((g+b)/2)(|z|+|lam|) <= |z+lam| on three sector pairs")


def check_cayley_modulus(samples: int = 10_000, seed: int = 13) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    est1_l, est1_r, c0_l, c0_r = [], [], [], []
    for R in (1.0, 5.0, 20.0):
        r = R * rng.random(samples)
        beta = 0.5 * math.pi * rng.random(samples)
        b = np.cos(beta) / (1.0 + R * R)
        w = r * np.exp(1j * beta)
        est1_l.append(np.abs((1.0 - w) / (1.0 + w)))
        est1_r.append((1.0 - b * r) / (1.0 + b * r))
        c0_l.append(1.0 / np.abs(1.0 + w) ** 2)
        c0_r.append(1.0 / (1.0 + b * r) ** 2)
    return [
        _inequality("cayley_modulus_bound", np.concatenate(est1_l), np.concatenate(est1_r),
                    "|(1-re^{ib})/(1+re^{ib})| <= (1-br)/(1+br), b = cos(beta)/(1+R^2)"),
        _inequality("cayley_denominator_bound", np.concatenate(c0_l), np.concatenate(c0_r),
                    "1/|1+re^{ib}|^2 <= 1/(1+br)^2"),
    ]


def _h_n(n: np.ndarray, lam: np.ndarray) -> np.ndarray:
    return ((1.0 - lam) / (1.0 + lam)) ** n


def check_monomial_imag(samples: int = 10_000, seed: int = 14) -> CheckResult:
    rng = np.random.default_rng(seed)
    n = rng.integers(1, 51, samples).astype(float)
    R = np.exp(rng.uniform(math.log(0.1), math.log(20.0), samples))
    r = R * rng.random(samples)
    beta = 0.5 * math.pi * rng.random(samples)
    b = np.cos(beta) / (1.0 + R * R)
    lhs = np.abs(_h_n(n, r * np.exp(1j * beta)).imag)
    x = b * r
    deriv = -2.0 * n * _h_n(n - 1.0, x) / (1.0 + x) ** 2
    rhs = 0.5 * math.pi * r * np.abs(deriv)
    return _inequality("monomial_imag_bound", lhs, rhs.real,
                       "|Im h_n(re^{ib})| <= (pi/2) r |h_n'(br)|, n <= 50")


def check_convex_imag(samples: int = 10_000, n_series: int = 10, seed: int = 15) -> CheckResult:
    rng = np.random.default_rng(seed)
    per = samples // (2 * n_series)
    lhs, rhs = [], []
    step = 1e-6
    for _ in range(n_series):
        c = _random_convex(rng)
        for R in (1.0, 10.0):
            r = R * rng.random(per)
            beta = 0.5 * math.pi * rng.random(per)
            b = np.cos(beta) / (1.0 + R * R)
            x = b * r
            d = (bold_h_eval(c, x + step, exact=False) - bold_h_eval(c, x - step, exact=False)) / (2 * step)
            lhs.append(np.abs(bold_h_eval(c, r * np.exp(1j * beta), exact=False).imag))
            rhs.append(0.5 * math.pi * r * np.real(d))
    # the central difference carries ~1e-10 relative error
    return _inequality("convex_imag_bound", np.concatenate(lhs), np.concatenate(rhs),
                       "|Im h(re^{ib})| <= (pi/2) r h'(br) for 1 - h(C(lam)), random convex series",
                       rel=1e-8)


def check_cbf_imag(samples: int = 10_000, n_cbf: int = 10, seed: int = 16) -> CheckResult:
    rng = np.random.default_rng(seed)
    per = samples // n_cbf
    lhs, rhs = [], []
    for _ in range(n_cbf):
        psi = _random_cbf(rng)
        t = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), per))
        beta = rng.uniform(-math.pi, math.pi, per) * (1 - 1e-9)
        lhs.append(np.abs(np.asarray(cbf_eval(psi, t * np.exp(1j * beta))).imag))
        rhs.append(2.0 * t * np.abs(np.tan(0.5 * beta)) * np.asarray(cbf_deriv(psi, t)))
    return _inequality("cbf_imag_bound", np.concatenate(lhs), np.concatenate(rhs),
                       "|Im psi(te^{ib})| <= 2t|tan(b/2)| psi'(t), random atom-built CBFs")


# ---------------------------------------------------------------------------
# suite appendix_b: sector inclusions on the disc


def _disc_with_boundary(rng: np.random.Generator, n: int) -> np.ndarray:
    k = n // 4
    inner = _disc(rng, n - 3 * k)
    circle = np.exp(1j * rng.uniform(-math.pi, math.pi, k))
    # approach 1 tangentially and radially
    th = rng.uniform(-1, 1, k) * math.pi / 2
    r = np.minimum(np.exp(rng.uniform(math.log(1e-8), 0.0, k)), 2.0 * np.cos(th))
    near = 1.0 - r * np.exp(1j * th)  # |1 - r e^{i th}| <= 1 iff r <= 2 cos(th)
    edge = (1 - np.exp(rng.uniform(math.log(1e-12), math.log(1e-2), k))) * np.exp(
        1j * rng.uniform(-math.pi, math.pi, k))
    return np.concatenate([inner, circle, near, edge])


def check_polylog_sector(alpha: float, samples: int = 10_000, seed: int = 21) -> CheckResult:
    rng = np.random.default_rng(seed)
    lam = _disc_with_boundary(rng, samples)
    w = NamedFunction("zeta_L", alpha=alpha).one_minus(lam)
    return _in_sector(f"polylog_sector_alpha_{alpha}", w, alpha * math.pi / 2,
                      "1 - L_{1+a}(lam) in the closed (a pi/2)-sector on the closed disc")


def log_quotient(lam: np.ndarray) -> np.ndarray:
    lam = np.asarray(lam, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (lam - 1.0) / np.log(lam)
    return np.where(lam == 1.0, 1.0 + 0j, out)


def check_log_quotient(samples: int = 10_000, seed: int = 22) -> CheckResult:
    rng = np.random.default_rng(seed)
    rho = 1.0 - np.exp(rng.uniform(math.log(1e-12), 0.0, samples))
    th = rng.uniform(-math.pi, math.pi, samples)
    lam = 1.0 + rho * np.exp(1j * th)
    return _in_sector("log_quotient_sector", log_quotient(lam), math.pi / 3,
                      "(lam-1)/log(lam) in the closed (pi/3)-sector on |lam - 1| < 1")


# ---------------------------------------------------------------------------
# measures


def check_measure_roundtrip(n_specs: int = 20, seed: int = 31) -> CheckResult:
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(n_specs):
        k = int(rng.integers(1, 8))
        t = rng.uniform(0.01, 0.99, k)
        w = rng.dirichlet(np.ones(k)) * (1.0 - t) * rng.uniform(0.5, 1.0)
        h = HausdorffSpec(0.0, DiscreteMeasure(t, w))
        back = cbf_to_hausdorff(hausdorff_to_cbf(h))
        order = np.argsort(back.nu.points)
        ref = np.argsort(t)
        errs.append(np.max(np.abs(back.nu.points[order] - t[ref])))
        errs.append(np.max(np.abs(back.nu.weights[order] - w[ref])))
        errs.append(abs(back.c0 - (1.0 - h.proper_mass())))
    return _closeness("measure_roundtrip", np.array(errs), 1e-12,
                      "atoms-only Hausdorff -> CBF -> Hausdorff, positions, weights and c0")


def check_nu_half_moments(n_max: int = 50) -> CheckResult:
    h = NamedFunction("h_alpha", alpha=0.5).hausdorff()
    c = hausdorff_coeffs(h, n_max).coeffs
    ref = binom_abs(0.5, n_max)  # |binom(1/2, n)| = coefficients of 1 - (1 - lam)^{1/2}
    err = np.abs(c[1:] - ref[1:])
    return _closeness("nu_half_moments", err, 1e-8,
                      "quadratured nu_{1/2} moments vs binomial coefficients, n <= 50")


def check_cbf_link_scalar(samples: int = 2_000, n_specs: int = 5, seed: int = 32) -> CheckResult:
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(n_specs):
        h = _random_regular_hausdorff(rng)
        psi = hausdorff_to_cbf(h)
        lam = 1.0 + _disc(rng, samples)  # D_1
        lhs = 1.0 - np.asarray(hausdorff_eval(h, 1.0 - lam))
        rhs = np.asarray(cbf_eval(psi, lam))
        errs.append(np.abs(lhs - rhs))
    return _closeness("cbf_link_scalar", np.concatenate(errs), 1e-10,
                      "1 - h(1 - lam) = psi(lam) on D_1 for regular atom-built h")


def check_h_eps_average(eps: float = 0.5, n_max: int = 40, nodes: int = 40) -> CheckResult:
    c = named_coeffs(NamedFunction("h_eps", eps=eps), n_max).coeffs
    a, wa = gauss_legendre_interval(nodes, 0.0, eps)
    avg = sum(w * binom_abs(float(al), n_max) for al, w in zip(a, wa)) / eps
    avg[0] = 0.0
    return _closeness("h_eps_average", np.abs(c - avg), 1e-8,
                      f"h_eps coefficients vs (1/eps) int_0^eps of h_alpha coefficients, eps={eps}")


def check_hausdorff_consistency(samples: int = 2_000, seed: int = 33) -> CheckResult:
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(5):
        h = _random_regular_hausdorff(rng, tmax=0.99)
        N = 200
        ser = hausdorff_coeffs(h, N)
        lam = _disc(rng, samples, 0.9)
        diff = np.abs(np.asarray(hausdorff_eval(h, lam)) - convex_eval(ser, lam, exact=False))
        errs.append(diff - hausdorff_tail(h, N))
    return _closeness("hausdorff_series_consistency", np.concatenate(errs), 1e-13,
                      "|h(lam) - sum_{n<=N} c_n lam^n| <= tail mass, |lam| <= 0.9")


def check_cbf_composition(samples: int = 4_000, seed: int = 34) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad, total, worst = 0, 0, 0.0
    for _ in range(5):
        psi, phi = _random_cbf(rng), _random_cbf(rng)
        lam = np.exp(rng.uniform(-5, 5, samples)) * np.exp(1j * rng.uniform(0, math.pi, samples))
        comp = np.asarray(cbf_eval(psi, np.asarray(cbf_eval(phi, lam))))
        x = np.exp(rng.uniform(-5, 5, samples))
        real = np.asarray(cbf_eval(psi, np.asarray(cbf_eval(phi, x))))
        b1 = comp.imag < -ROUNDING * np.abs(comp)
        b2 = (real.real < 0) | (np.abs(real.imag) > ROUNDING * np.abs(real))
        bad += int(np.sum(b1) + np.sum(b2))
        total += 2 * samples
        worst = max(worst, float(np.max(-comp.imag / np.abs(comp))))
    return CheckResult("cbf_composition", bad == 0, total, bad, worst, ROUNDING,
                       "psi(phi(C+)) in closed C+ and psi(phi((0,inf))) in [0,inf)")


# ---------------------------------------------------------------------------
# calculus


def check_spectral_mapping(instances: int = 20, seed: int = 41) -> CheckResult:
    rng = np.random.default_rng(seed)
    errs = []
    for k in range(instances):
        n = int(rng.integers(3, 9))
        ev = _disc(rng, n, 0.95)
        T = _random_diag_matrix(rng, ev)
        f = _random_convex(rng) if k % 2 == 0 else NamedFunction("h_alpha", alpha=float(rng.uniform(0.1, 0.9)))
        S = apply_function(f, T).matrix
        fe = convex_eval(f, ev, exact=False) if isinstance(f, ConvexSeries) else f(ev)
        errs.append(_match_error(linalg.eigenvalues(S), fe))
    return _closeness("spectral_mapping", np.array(errs), 1e-7,
                      "sigma(f(T)) = f(sigma(T)) as multisets, random diagonalizable T")


def check_cbf_link_matrix(instances: int = 20, seed: int = 42) -> CheckResult:
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(instances):
        n = int(rng.integers(2, 7))
        T = np.diag(_disc(rng, n, 0.8))
        h = _random_regular_hausdorff(rng)
        psi = hausdorff_to_cbf(h)
        ser = hausdorff_coeffs(h, 64)
        W = wiener_apply(ser, T, tol=1e-13).matrix
        A = np.eye(n) - T
        P = riesz_dunford(lambda x: cbf_eval(psi, x), A, ContourSpec("circle", 1.0 + 0j, 0.9, 256))
        errs.append(np.max(np.abs(np.eye(n) - W - P)))
    return _closeness("cbf_link_matrix", np.array(errs), 1e-7,
                      "I - h(T) = psi(I - T) with psi the CBF of h, contour integral on |xi - 1| = 0.9")


def check_cayley_op_involution(instances: int = 20, seed: int = 43) -> CheckResult:
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(instances):
        n = int(rng.integers(2, 9))
        T = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        T *= 0.9 / linalg.operator_norm(T)
        errs.append(np.max(np.abs(cayley_op(cayley_op(T)) - T)))
    return _closeness("cayley_op_involution", np.array(errs), 1e-7, "C(C(T)) = T, ||T|| = 0.9")


def check_cayley_shift(instances: int = 20, seed: int = 44) -> CheckResult:
    rng = np.random.default_rng(seed)
    errs = []
    for k in range(instances):
        n = int(rng.integers(2, 9))
        eps = (0.1, 0.01, 0.5, 0.9)[k % 4]
        T = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        T *= 0.9 / linalg.operator_norm(T)
        Te = wiener_apply(NamedFunction("g_eps", eps=eps), T, tol=1e-14).matrix
        errs.append(np.max(np.abs(cayley_op(Te) - cayley_op(T) - eps * np.eye(n))))
    return _closeness("cayley_shift", np.array(errs), 1e-7, "C(g_eps(T)) = C(T) + eps I")


def check_homomorphism(instances: int = 10, seed: int = 45) -> CheckResult:
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(instances):
        n = int(rng.integers(2, 7))
        T = np.diag(_disc(rng, n, 1.0))
        f, g = _random_convex(rng), _random_convex(rng)
        fg = ConvexSeries.from_coeffs(np.convolve(f.coeffs, g.coeffs), normalize=False)
        lhs = wiener_apply(fg, T).matrix
        rhs = wiener_apply(f, T).matrix @ wiener_apply(g, T).matrix
        errs.append(np.max(np.abs(lhs - rhs)))
    return _closeness("homomorphism", np.array(errs), 1e-10, "(fg)(T) = f(T) g(T), Cauchy product")


def check_kato(instances: int = 20, seed: int = 46) -> CheckResult:
    rng = np.random.default_rng(seed)
    lhs, rhs = [], []
    for _ in range(instances):
        n = int(rng.integers(2, 9))
        T = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        p = rng.standard_normal(4) * 0.3
        T2 = sum(pk * np.linalg.matrix_power(T, k) for k, pk in enumerate(p))
        a, b = linalg.eigenvalues(T), linalg.eigenvalues(T2)
        # pair eigenvalues through the common eigenbasis: p(lam) for lam in sigma(T)
        pa = np.polyval(p[::-1], a)
        cost = np.abs(pa[:, None] - b[None, :])
        r, c = linear_sum_assignment(cost)
        lhs.append(float(np.max(np.abs(a[r] - b[c]))))
        rhs.append(linalg.operator_norm(T - T2) + 1e-7)
    return _inequality("kato_perturbation", np.array(lhs), np.array(rhs),
                       "dist(sigma(T), sigma(p(T))) <= ||T - p(T)||, tolerance 1e-7")


def check_cayley_series_identity(instances: int = 20, seed: int = 47) -> CheckResult:
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(instances):
        n = int(rng.integers(2, 9))
        ev = sample_stolz(2.0, n, rng)
        T = np.diag(ev)
        c = _random_convex(rng)
        lhs = np.diag(np.eye(n) - wiener_apply(c, T).matrix)
        rhs = bold_h_eval(c, np.asarray(cayley(ev)), exact=False)
        errs.append(np.max(np.abs(lhs - rhs)))
    return _closeness("cayley_series_identity", np.array(errs), 1e-8,
                      "I - h(T) = bold h(C(T)) on diagonal Ritt T")


# ---------------------------------------------------------------------------
# geometry


def check_cayley_involution(samples: int = 10_000, seed: int = 51) -> CheckResult:
    rng = np.random.default_rng(seed)
    z = _disc(rng, samples)
    back = np.asarray(cayley(np.asarray(cayley(z))))
    return _closeness("cayley_involution", np.abs(back - z), 1e-12, "C(C(z)) = z on the disc")


def check_stolz_inclusions(samples: int = 10_000, seed: int = 52) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []
    for sigma in (1.5, 2.0, 5.0):
        z = sample_stolz(sigma, samples, rng)
        om = stolz_to_sector_angle(sigma)
        out.append(_in_sector(f"stolz_sector_{sigma}", 1.0 - z, om, "1 - S_sigma in Sigma_omega"))
        out.append(_in_sector(f"stolz_cayley_{sigma}", np.asarray(cayley(z)), om,
                              "C(S_sigma) in Sigma_omega"))
    return out


def check_omega_q(samples: int = 10_000, seed: int = 53) -> CheckResult:
    rng = np.random.default_rng(seed)
    lhs, rhs = [], []
    for q in (0.2, 0.5, 0.8):
        z = _disc(rng, 20 * samples)
        keep = np.asarray(min_distance_ratio(z)) >= q
        z = z[keep][:samples]
        lhs.append(np.asarray(stolz_index(z)))
        rhs.append(np.full(z.size, 1.0 / q))
    return _inequality("omega_q_in_stolz", np.concatenate(lhs), np.concatenate(rhs),
                       "min distance ratio >= q implies stolz index <= 1/q")


def _ritt_test_matrices(rng: np.random.Generator, count: int) -> List[np.ndarray]:
    mats = []
    for k in range(count):
        n = int(rng.integers(2, 9))
        ev = sample_stolz(float(rng.uniform(1.2, 5.0)), n, rng)
        if k % 3 == 2:
            mats.append(_random_diag_matrix(rng, ev, cond=3.0))
        else:
            mats.append(np.diag(ev))
    return mats


def check_spectral_stolz_bound(count: int = 12, seed: int = 54) -> CheckResult:
    rng = np.random.default_rng(seed)
    lhs, rhs = [], []
    for T in _ritt_test_matrices(rng, count):
        ev = linalg.eigenvalues(T)
        lhs.append(float(np.max(np.asarray(stolz_index(ev)))))
        rhs.append(ritt_constant_estimate(T).value + 1e-6)
    return _inequality("spectral_stolz_bound", np.array(lhs), np.array(rhs),
                       "max stolz_index over sigma(T) <= Ritt constant estimate + 1e-6")


def check_stolz_resolvent_bound(count: int = 8, samples: int = 2_000, seed: int = 55) -> CheckResult:
    rng = np.random.default_rng(seed)
    lhs, rhs = [], []
    for _ in range(count):
        n = int(rng.integers(2, 7))
        T = np.diag(sample_stolz(float(rng.uniform(1.2, 3.0)), n, rng))
        C = ritt_constant_estimate(T).value
        lo = math.acos(min(1.0, 1.0 / C))
        for delta in lo + (0.5 * math.pi - lo) * np.array([0.25, 0.5, 0.9]):
            if not C * abs(math.cos(delta)) < 1.0:
                continue
            th = rng.uniform(delta, math.pi, samples) * rng.choice([-1.0, 1.0], samples)
            r = np.exp(rng.uniform(math.log(1e-4), math.log(10.0), samples))
            z = 1.0 - r * np.exp(1j * th)
            v = np.abs(z - 1.0) * linalg.resolvent_norms(T, z)
            lhs.append(float(np.max(v)))
            rhs.append(1.05 * C / (1.0 - C * abs(math.cos(delta))))
    return _inequality("stolz_resolvent_bound", np.array(lhs), np.array(rhs),
                       "sup |z-1| ||(z-T)^-1|| outside 1 - Sigma_delta <= C/(1 - C cos delta), 5% tolerance")


def check_cayley_sectorial(count: int = 10, samples: int = 2_000, seed: int = 56) -> CheckResult:
    rng = np.random.default_rng(seed)
    lhs, rhs = [], []
    for _ in range(count):
        n = int(rng.integers(2, 9))
        ev = _disc(rng, n)
        ev = np.where(np.abs(ev + 1.0) < 1e-3, 0.0, ev)
        T = np.diag(ev)
        CT = cayley_op(T)
        M = 1.0
        nt = linalg.operator_norm(T)
        for beta in (0.6 * math.pi, 0.75 * math.pi):
            th = rng.uniform(beta, math.pi, samples) * rng.choice([-1.0, 1.0], samples)
            z = np.exp(rng.uniform(-6, 6, samples)) * np.exp(1j * th)
            lhs.append(linalg.resolvent_norms(CT, z))
            rhs.append(3 * M * (1 + nt) / np.abs(z * math.cos(beta)))
    return _inequality("cayley_sectorial", np.concatenate(lhs), np.concatenate(rhs),
                       "||(C(T) - z)^-1|| <= 3M(1+||T||)/|z cos beta| off Sigma_beta")


def check_stolz_cayley_angle(count: int = 20, seed: int = 57) -> CheckResult:
    rng = np.random.default_rng(seed)
    lhs, rhs = [], []
    for _ in range(count):
        sigma = float(rng.uniform(1.1, 5.0))
        T = np.diag(sample_stolz(sigma, int(rng.integers(2, 17)), rng))
        lhs.append(angles_from_spectrum(np.diag(T)).omega_hat)
        rhs.append(stolz_to_sector_angle(sigma) + 1e-6)
    return _inequality("stolz_cayley_angle", np.array(lhs), np.array(rhs),
                       "omega_hat(T) <= arccos(1/sigma) for spectrum in S_sigma")


def check_t_eps_family(count: int = 10, seed: int = 58) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad, worst = 0, 0.0
    for _ in range(count):
        n = int(rng.integers(2, 9))
        ev = np.concatenate([[1.0], sample_stolz(2.0, n - 1, rng)])
        T = np.diag(ev)
        dists = []
        for eps in (0.1, 0.01, 0.001):
            Te = wiener_apply(NamedFunction("g_eps", eps=eps), T, tol=1e-14).matrix
            rad = float(np.max(np.abs(linalg.eigenvalues(Te))))
            worst = max(worst, rad)
            if not rad < 1.0:
                bad += 1
            dists.append(linalg.operator_norm(T - Te))
        if not (dists[0] > dists[1] > dists[2] and dists[2] < 1e-2):
            bad += 1
    return CheckResult("t_eps_family", bad == 0, 3 * count, bad, worst, 0.0,
                       "spectral radius of g_eps(T) < 1 and ||T - g_eps(T)|| decreasing to 0")


def check_angle_necessity(n: int = 128, seed: int = 59, tol: float = 1e-6) -> CheckResult:
    """Diagonal multiplication-operator surrogate with spectrum sampled densely in the disc.

    With gamma = a pi/2, whenever the measured angle of h_a(T) stays within gamma
    every sampled 1 - h_a(lam) must lie in the closed (gamma + tol)-sector.
    """
    rng = np.random.default_rng(seed)
    lam = _disc(rng, n, 0.999)
    bad, total, worst = 0, 0, -math.inf
    premises = []
    for a in (0.25, 0.5, 0.75):
        f = NamedFunction("h_alpha", alpha=a)
        gamma = 0.5 * a * math.pi
        S = apply_function(f, np.diag(lam)).matrix
        alpha_s = angles_from_spectrum(linalg.eigenvalues(S)).alpha_hat
        premise = alpha_s <= gamma + tol
        premises.append(premise)
        if not premise:
            continue
        ang = np.abs(np.angle(f.one_minus(lam)))
        bad += int(np.sum(ang > gamma + tol))
        total += n
        worst = max(worst, float(np.max(ang - gamma)))
    detail = ("alpha_hat(h(T)) <= a pi/2 implies 1 - h(lam) in the (a pi/2 + tol)-sector, "
              f"premise held for {sum(premises)}/3 values of a")
    return CheckResult("angle_necessity", bad == 0 and all(premises), total, bad, worst, tol, detail)


# ---------------------------------------------------------------------------
# registry


def _flatten(items) -> List[CheckResult]:
    out = []
    for it in items:
        out.extend(it if isinstance(it, list) else [it])
    return out


SUITES: Dict[str, List[Callable[[], Any]]] = {
    "appendix_a": [check_circle_distance, check_sector_sum, check_cayley_modulus,
                   check_monomial_imag, check_convex_imag, check_cbf_imag],
    "appendix_b": [lambda: check_polylog_sector(0.25), lambda: check_polylog_sector(0.5),
                   lambda: check_polylog_sector(0.75), check_log_quotient],
    "measures": [check_measure_roundtrip, check_nu_half_moments, check_cbf_link_scalar,
                 check_h_eps_average, check_hausdorff_consistency, check_cbf_composition],
    "calculus": [check_spectral_mapping, check_cbf_link_matrix, check_cayley_op_involution,
                 check_cayley_shift, check_homomorphism, check_kato, check_cayley_series_identity],
    "geometry": [check_cayley_involution, check_stolz_inclusions, check_omega_q,
                 check_spectral_stolz_bound, check_stolz_resolvent_bound, check_cayley_sectorial,
                 check_stolz_cayley_angle, check_t_eps_family, check_angle_necessity],
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(name: str) -> List[SuiteResult]:
    """Run one suite (or all of them); returns one SuiteResult per suite."""
    if name not in SUITE_NAMES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    names = list(SUITES) if name == "all" else [name]
    results = []
    for nm in names:
        checks = []
        for fn in SUITES[nm]:
            t0 = time.perf_counter()
            got = _flatten([fn()])
            dt = (time.perf_counter() - t0) / len(got)
            for c in got:
                c.seconds = dt
            checks.extend(got)
        results.append(SuiteResult(nm, checks))
    return results


__all__ = ["CheckResult", "SuiteResult", "SUITES", "SUITE_NAMES", "run_suite", "log_quotient"] + [
    n for n in dir() if n.startswith("check_")]
