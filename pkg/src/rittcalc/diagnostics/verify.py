"""Checks that a function of a matrix keeps (or improves) its Ritt geometry,
and the diagonal example where squaring enlarges the minimal angle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from .. import linalg
from ..funclasses.measures import HausdorffSpec
from ..funclasses.named import HAUSDORFF_FAMILIES, NamedFunction
from ..funclasses.sectors import SectorEstimate, min_covering_sector
from ..funclasses.series import ConvexSeries, FunctionSpecError, SignedSeries
from ..linalg import as_cmatrix
from ..opcalc import PrecisionError, hausdorff_apply, power_bound_proxy, wiener_apply
from .estimates import (ONE_TOL, AngleEstimates, StolzTypeEstimate, angles_from_spectrum,
                        finite_or_str, ritt_constant_estimate, spectral_stolz_index,
                        stolz_type_estimate)


@dataclass
class VerifyConfig:
    tol: float = 1e-6
    wiener_tol: float = 1e-10
    radii: Optional[List[float]] = None
    angular_nodes: int = 128
    rounds: int = 3
    samples: int = 100_000
    one_tol: float = ONE_TOL

    def to_json(self) -> Dict[str, Any]:
        return {"tol": self.tol, "wiener_tol": self.wiener_tol, "radii": self.radii,
                "angular_nodes": self.angular_nodes, "rounds": self.rounds,
                "samples": self.samples, "one_tol": self.one_tol}


@dataclass
class Clause:
    name: str
    passed: bool
    lhs: float
    rhs: float
    detail: str = ""

    def to_json(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "lhs": finite_or_str(self.lhs),
                "rhs": finite_or_str(self.rhs), "detail": self.detail}


@dataclass
class AppliedFunction:
    matrix: np.ndarray
    method: str
    n_terms: int
    error_bound: float

    def to_json(self) -> Dict[str, Any]:
        return {"method": self.method, "n_terms": self.n_terms,
                "error_bound": finite_or_str(self.error_bound),
                "matrix": linalg.matrix_to_json(self.matrix)}


def as_hausdorff(f: Any) -> Optional[HausdorffSpec]:
    if isinstance(f, HausdorffSpec):
        return f
    if isinstance(f, NamedFunction) and f.family in HAUSDORFF_FAMILIES:
        return f.hausdorff()
    return None


def apply_function(f: Any, T: Any, tol: float = 1e-10) -> AppliedFunction:
    """h(T) by the Wiener series, or by the Hausdorff resolvent sum when the
    series would need more terms than the cap allows (slowly decaying tails)."""
    T = as_cmatrix(T)
    if isinstance(f, HausdorffSpec):
        return AppliedFunction(hausdorff_apply(f, T), "hausdorff", len(f.nu), 0.0)
    try:
        res = wiener_apply(f, T, tol=tol)
        return AppliedFunction(res.matrix, "wiener", res.n_terms, res.error_bound)
    except PrecisionError:
        h = as_hausdorff(f)
        if h is None:
            raise
        return AppliedFunction(hausdorff_apply(h, T), "hausdorff", len(h.nu), math.nan)


# ---------------------------------------------------------------------------
# subordination


@dataclass
class SubordinationReport:
    clauses: List[Clause]
    applied: AppliedFunction
    sigma_hat: float
    omega_hat: float
    config: VerifyConfig

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def to_json(self, with_matrix: bool = False) -> Dict[str, Any]:
        ap = self.applied.to_json()
        if not with_matrix:
            ap.pop("matrix")
        return {"kind": "subordination", "passed": self.passed,
                "clauses": [c.to_json() for c in self.clauses], "applied": ap,
                "sigma_hat": finite_or_str(self.sigma_hat),
                "omega_hat": finite_or_str(self.omega_hat), "config": self.config.to_json()}


@dataclass
class TargetSummary:
    """The quantities of T that the subordination clauses compare against."""

    stolz: StolzTypeEstimate
    angles: AngleEstimates

    @classmethod
    def of(cls, T: Any, cfg: VerifyConfig) -> "TargetSummary":
        T = as_cmatrix(T)
        ev = linalg.eigenvalues(T)
        return cls(stolz_type_estimate(T, rounds=cfg.rounds, one_tol=cfg.one_tol),
                   angles_from_spectrum(ev, cfg.one_tol))


def verify_subordination(T: Any, c: Union[ConvexSeries, NamedFunction], cfg: Optional[VerifyConfig] = None,
                         target: Optional[TargetSummary] = None) -> SubordinationReport:
    """Clauses for S = h(T) with h a convex series and T Ritt:
    (a) Stolz index of sigma(S) <= sigma_hat(T); (b) alpha_hat(S) <= omega_hat(T);
    (c) the sampled Ritt constant of S stays finite under refinement."""
    cfg = cfg or VerifyConfig()
    T = as_cmatrix(T)
    if isinstance(c, SignedSeries):
        raise FunctionSpecError("subordination needs a convex series (non-negative coefficients)")
    if isinstance(c, NamedFunction) and c.family == "g_eps":
        raise FunctionSpecError("g_eps is not a convex series")
    if target is None:
        target = TargetSummary.of(T, cfg)
    applied = apply_function(c, T, cfg.wiener_tol)
    S = applied.matrix
    ev_s = linalg.eigenvalues(S)
    clauses = []
    idx_s = spectral_stolz_index(ev_s, cfg.one_tol)
    sig = target.stolz.sigma_hat
    clauses.append(Clause("stolz_spectral", bool(idx_s <= sig + cfg.tol), idx_s, sig,
                          "max stolz_index over sigma(h(T)) <= sigma_hat(T)"))
    ang_s = angles_from_spectrum(ev_s, cfg.one_tol)
    om = target.angles.omega_hat if target.angles.omega_defined else math.inf
    clauses.append(Clause("angle", bool(ang_s.alpha_hat <= om + cfg.tol), ang_s.alpha_hat, om,
                          "alpha_hat(h(T)) <= omega_hat(T)"))
    rc = ritt_constant_estimate(S, cfg.radii, cfg.angular_nodes, cfg.rounds)
    clauses.append(Clause("ritt_constant_finite", rc.finite, rc.value,
                          max(rc.refine_growth, rc.radius_growth),
                          "sampled sup grows < 5% under refinement (rhs: worst growth)"))
    return SubordinationReport(clauses, applied, sig, om, cfg)


# ---------------------------------------------------------------------------
# improving functions


@dataclass
class ImprovingReport:
    clauses: List[Clause]
    applied: AppliedFunction
    gamma_hat: SectorEstimate
    power_bound: float
    config: VerifyConfig

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def to_json(self, with_matrix: bool = False) -> Dict[str, Any]:
        ap = self.applied.to_json()
        if not with_matrix:
            ap.pop("matrix")
        return {"kind": "improving", "passed": self.passed,
                "clauses": [c.to_json() for c in self.clauses], "applied": ap,
                "gamma_hat": self.gamma_hat.to_json(), "power_bound": self.power_bound,
                "config": self.config.to_json()}


def verify_improving(f: Any, T: Any, cfg: Optional[VerifyConfig] = None,
                     gamma: Optional[SectorEstimate] = None) -> ImprovingReport:
    """For a regular Hausdorff f and power-bounded T: alpha_hat(f(T)) <= gamma_hat(f)
    and f(T) has a finite sampled Ritt constant."""
    cfg = cfg or VerifyConfig()
    T = as_cmatrix(T)
    h = as_hausdorff(f)
    if h is None:
        raise FunctionSpecError(f"{type(f).__name__} is not a Hausdorff function")
    h.validate_regular()
    M = power_bound_proxy(T, 4096)
    if gamma is None:
        gamma = min_covering_sector(f, cfg.samples)
    applied = apply_function(f, T, cfg.wiener_tol)
    S = applied.matrix
    ang = angles_from_spectrum(linalg.eigenvalues(S), cfg.one_tol)
    clauses = [Clause("angle", bool(ang.alpha_hat <= gamma.gamma_hat + cfg.tol), ang.alpha_hat,
                      gamma.gamma_hat, "alpha_hat(h(T)) <= gamma_hat(h)")]
    rc = ritt_constant_estimate(S, cfg.radii, cfg.angular_nodes, cfg.rounds)
    clauses.append(Clause("ritt_constant_finite", rc.finite, rc.value,
                          max(rc.refine_growth, rc.radius_growth),
                          "sampled sup grows < 5% under refinement (rhs: worst growth)"))
    return ImprovingReport(clauses, applied, gamma, M, cfg)


# ---------------------------------------------------------------------------
# angle growth under squaring


def chebyshev_midpoints(n: int) -> np.ndarray:
    """(1 - cos(pi (i + 1/2)/n))/2, i = 0..n-1: open grid on (0, 1) dense at both ends."""
    return 0.5 * (1.0 - np.cos(math.pi * (np.arange(n) + 0.5) / n))


def v_phi(phi: float, t: Any) -> np.ndarray:
    """|1 - 2t cos^2 phi| / (1 - t cos 2 phi)."""
    t = np.asarray(t, dtype=float)
    return np.abs(1.0 - 2.0 * t * math.cos(phi) ** 2) / (1.0 - t * math.cos(2.0 * phi))


def growth_diagonal(phi: float, delta: float, n_grid: int) -> np.ndarray:
    """Diagonal entries 1 - 2 t_i delta cos(phi) e^{i phi} of the discretized example."""
    t = chebyshev_midpoints(n_grid)
    return 1.0 - 2.0 * t * delta * math.cos(phi) * np.exp(1j * phi)


@dataclass
class AngleGrowthResult:
    phi: float
    delta: float
    n_grid: int
    alpha_hat: float
    beta_hat: float
    gamma_hat: float
    tan_gamma_formula: float
    tan_beta_formula: float
    tan_beta_grid: float
    gamma_rel_err: float
    beta_rel_err: float
    grid: str = "chebyshev"
    tolerance: float = 1e-3

    @property
    def formulas_agree(self) -> bool:
        return self.gamma_rel_err < self.tolerance and self.beta_rel_err < self.tolerance

    @property
    def beta_not_below_alpha(self) -> bool:
        return self.beta_hat >= self.alpha_hat * (1.0 - self.tolerance)

    def to_json(self) -> Dict[str, Any]:
        return {"phi": self.phi, "delta": self.delta, "n_grid": self.n_grid, "grid": self.grid,
                "alpha_hat": self.alpha_hat, "beta_hat": self.beta_hat, "gamma_hat": self.gamma_hat,
                "tan_gamma_formula": self.tan_gamma_formula,
                "tan_beta_formula": self.tan_beta_formula, "tan_beta_grid": self.tan_beta_grid,
                "gamma_rel_err": self.gamma_rel_err, "beta_rel_err": self.beta_rel_err,
                "tolerance": self.tolerance, "formulas_agree": self.formulas_agree,
                "beta_not_below_alpha": self.beta_not_below_alpha}


def angle_growth_demo(phi: float, delta: float, n_grid: int = 256,
                      tolerance: float = 1e-3) -> AngleGrowthResult:
    """Measured angles of T, T^2 and C(T) for the diagonal example against the
    closed forms tan(gamma) = tan(phi)/(1 - delta) and
    tan(beta) = tan(phi) sup_{0<t<1} v_phi(delta t)."""
    if not 0.0 < phi < math.pi / 2:
        raise ValueError("phi must lie in (0, pi/2)")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if n_grid < 16:
        raise ValueError("n_grid must be at least 16")
    d = growth_diagonal(phi, delta, n_grid)
    a1 = angles_from_spectrum(d)
    a2 = angles_from_spectrum(d * d)
    tp = math.tan(phi)
    tg = tp / (1.0 - delta)
    # v_phi(delta t) is a ratio of affine functions on each side of its zero,
    # so its sup over (0, 1) is at an endpoint
    tb = tp * max(1.0, float(v_phi(phi, delta)))
    tb_grid = tp * float(np.max(v_phi(phi, delta * chebyshev_midpoints(n_grid))))
    g_err = abs(math.tan(a1.omega_hat) - tg) / tg
    b_err = abs(math.tan(a2.alpha_hat) - tb) / tb
    return AngleGrowthResult(phi, delta, n_grid, a1.alpha_hat, a2.alpha_hat, a1.omega_hat,
                             tg, tb, tb_grid, g_err, b_err, tolerance=tolerance)


@dataclass
class EpsilonScenario:
    eps: float
    delta: float
    phi: float
    tan_beta_hat: float
    tan_gamma_hat: float
    target: float
    conditions_met: bool
    holds: bool
    scanned: int

    def to_json(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def epsilon_phi(eps: float, delta: float) -> float:
    """phi = arccos(delta^(eps/2)) / 2."""
    return 0.5 * math.acos(delta ** (0.5 * eps))


def epsilon_scenario(eps: float = 0.2, n_grid: int = 256,
                     deltas: Optional[Sequence[float]] = None) -> EpsilonScenario:
    """Scan delta towards 1 until tan(beta)/tan(gamma) > 1 - eps and
    1 - delta < (1 - eps) eps, then test tan(beta) >= tan(phi)/eps."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if deltas is None:
        deltas = 1.0 - np.geomspace(0.1, 1e-4, 61)
    last = None
    for k, delta in enumerate(deltas, start=1):
        phi = epsilon_phi(eps, float(delta))
        d = growth_diagonal(phi, float(delta), n_grid)
        tb = math.tan(angles_from_spectrum(d * d).alpha_hat)
        tg = math.tan(angles_from_spectrum(d).omega_hat)
        target = math.tan(phi) / eps
        cond = tb / tg > 1.0 - eps and 1.0 - delta < (1.0 - eps) * eps
        last = EpsilonScenario(eps, float(delta), phi, tb, tg, target, bool(cond),
                               bool(cond and tb >= target), k)
        if cond:
            return last
    return last


__all__ = [
    "VerifyConfig", "Clause", "AppliedFunction", "as_hausdorff", "apply_function", "SubordinationReport",
    "TargetSummary", "verify_subordination", "ImprovingReport", "verify_improving",
    "chebyshev_midpoints", "v_phi", "growth_diagonal", "AngleGrowthResult", "angle_growth_demo",
    "EpsilonScenario", "epsilon_phi", "epsilon_scenario",
]
