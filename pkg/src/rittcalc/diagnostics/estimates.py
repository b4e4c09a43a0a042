"""Numerical estimates of Ritt, Stolz-type and angle quantities of a matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .. import linalg
from ..linalg import PowerOverflowError, as_cmatrix
from ..opcalc import NotPowerBoundedError
from ..regions import cayley, stolz_boundary_radius, stolz_index, stolz_to_sector_angle

GROWTH_LIMIT = 0.05  # relative growth of a sampled sup that still counts as "bounded"
ONE_TOL = 1e-9  # eigenvalues this close to 1 are treated as the point 1
DEFAULT_RADII = tuple(1.0 + 10.0 ** (-k) for k in range(1, 7))


def default_delta_list() -> List[float]:
    return [1.0] + [float(d) for d in 1.0 + np.geomspace(1e-3, 1e3, 73)]


def finite_or_str(x: float) -> Any:
    """JSON-safe float: non-finite values become strings."""
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _growth(new: float, old: float) -> float:
    if not math.isfinite(new):
        return math.inf
    if old <= 0:
        return 0.0 if new <= 0 else math.inf
    return new / old - 1.0


# ---------------------------------------------------------------------------
# powers


@dataclass
class PowerDiagnostics:
    M_N: float
    ritt_ratio: float
    argmax_n: int
    N: int
    trend_ratio: float
    divergence_flag: bool

    def to_json(self) -> Dict[str, Any]:
        return {"M_N": finite_or_str(self.M_N), "ritt_ratio": finite_or_str(self.ritt_ratio),
                "argmax_n": self.argmax_n, "N": self.N,
                "trend_ratio": finite_or_str(self.trend_ratio),
                "divergence_flag": self.divergence_flag}


def power_diagnostics(T: Any, N: int = 256, trend_limit: float = 1.5) -> PowerDiagnostics:
    """M_N = max_{n<=N} ||T^n|| and max_{1<=n<=N} n ||T^n - T^{n+1}||.

    The trend flag compares the running maximum of the Ritt ratio at N with
    the one at N/2; growth by more than 50% suggests divergence.
    """
    T = as_cmatrix(T)
    N = int(N)
    if N < 1:
        raise ValueError("N must be at least 1")
    n = T.shape[0]
    P = np.eye(n, dtype=np.complex128)
    norms = np.empty(N + 1)
    ratios = np.zeros(N + 1)
    norms[0] = 1.0 if n else 0.0
    block = 64
    k = 0
    while k < N:
        m = min(block, N - k)
        pw = np.empty((m + 1, n, n), dtype=np.complex128)
        pw[0] = P
        for j in range(1, m + 1):
            pw[j] = pw[j - 1] @ T
            if not np.all(np.isfinite(pw[j])):
                raise PowerOverflowError(k + j)
        norms[k + 1:k + m + 1] = linalg.batched_norms(pw[1:])
        # n ||T^n - T^{n+1}|| for n = k+1..k+m needs T^{k+m+1}
        nxt = pw[m] @ T
        diffs = np.concatenate([pw[2:] if m > 1 else np.empty((0, n, n)), nxt[None]])
        idx = np.arange(k + 1, k + m + 1, dtype=float)
        ratios[k + 1:k + m + 1] = idx * linalg.batched_norms(pw[1:] - diffs)
        P = pw[m]
        k += m
    M = float(np.max(norms))
    i = int(np.argmax(ratios[1:])) + 1
    best = float(ratios[i])
    half = max(1, N // 2)
    early = float(np.max(ratios[1:half + 1]))
    trend = best / early if early > 0 else (1.0 if best == 0 else math.inf)
    return PowerDiagnostics(M, best, i, N, trend, bool(trend > trend_limit))


# ---------------------------------------------------------------------------
# resolvent sups


def _spectral_radius_check(ev: np.ndarray, tol: float) -> None:
    rad = float(np.max(np.abs(ev))) if len(ev) else 0.0
    if rad > 1.0 + tol:
        raise NotPowerBoundedError(f"spectral radius {rad:.6g} exceeds 1")


@dataclass
class RittConstantEstimate:
    value: float
    by_radius: List[float]
    radii: List[float]
    angular_nodes: int
    rounds: int
    refine_growth: float
    radius_growth: float
    finite: bool
    argmax: complex
    samples: Optional[np.ndarray] = field(default=None, repr=False)
    values: Optional[np.ndarray] = field(default=None, repr=False)

    def to_json(self) -> Dict[str, Any]:
        return {"value": finite_or_str(self.value),
                "by_radius": [finite_or_str(v) for v in self.by_radius],
                "radii": self.radii, "angular_nodes": self.angular_nodes, "rounds": self.rounds,
                "refine_growth": finite_or_str(self.refine_growth),
                "radius_growth": finite_or_str(self.radius_growth), "finite": self.finite,
                "argmax": {"re": self.argmax.real, "im": self.argmax.imag}}


def _circle_angles(nodes: int, cluster: int) -> np.ndarray:
    grid = -math.pi + 2.0 * math.pi * (np.arange(nodes) + 0.5) / nodes
    near = math.pi * 2.0 ** (-np.arange(1, cluster + 1) / 2.0)
    return np.concatenate([grid, near, -near])


def ritt_constant_estimate(T: Any, radii: Optional[Sequence[float]] = None,
                           angular_nodes: int = 256, rounds: int = 3, tol: float = 1e-9,
                           keep_samples: bool = False) -> RittConstantEstimate:
    """max over circles |z| = r of |z - 1| ||(z - T)^{-1}||.

    Each circle gets a uniform angle grid plus points clustering at z = 1,
    then ``rounds`` local refinements around the running argmax.  The
    estimate counts as finite when neither the last refinement nor the step
    to the innermost radius raises the sup by 5% or more.
    """
    T = as_cmatrix(T)
    radii = sorted((float(r) for r in (radii or DEFAULT_RADII)), reverse=True)
    if not radii or min(radii) <= 1.0:
        raise ValueError("radii must exceed 1")
    ev = linalg.eigenvalues(T)
    _spectral_radius_check(ev, tol)
    base = _circle_angles(angular_nodes, 40)
    by_radius, all_z, all_v = [], [], []
    refine_growth = 0.0
    best_z = complex(radii[0])
    for r in radii:
        ang = base.copy()
        z = r * np.exp(1j * ang)
        v = np.abs(z - 1.0) * linalg.resolvent_norms(T, z)
        cur = float(np.max(v))
        width = 2.0 * math.pi / angular_nodes
        for _ in range(rounds):
            a0 = float(ang[int(np.argmax(v))])
            extra = a0 + width * np.linspace(-1.0, 1.0, 33)
            ze = r * np.exp(1j * extra)
            ve = np.abs(ze - 1.0) * linalg.resolvent_norms(T, ze)
            ang = np.concatenate([ang, extra])
            z = np.concatenate([z, ze])
            v = np.concatenate([v, ve])
            new = float(np.max(v))
            if r == radii[-1]:
                refine_growth = _growth(new, cur)
            cur = new
            width /= 16.0
        by_radius.append(cur)
        if cur >= max(by_radius):
            best_z = complex(z[int(np.argmax(v))])
        if keep_samples:
            all_z.append(z)
            all_v.append(v)
    value = float(max(by_radius))
    rg = _growth(by_radius[-1], by_radius[-2]) if len(by_radius) > 1 else 0.0
    finite = bool(math.isfinite(value) and refine_growth < GROWTH_LIMIT and rg < GROWTH_LIMIT)
    return RittConstantEstimate(value, by_radius, radii, int(angular_nodes), int(rounds),
                                refine_growth, rg, finite, best_z,
                                np.concatenate(all_z) if keep_samples else None,
                                np.concatenate(all_v) if keep_samples else None)


def spectral_stolz_index(ev: np.ndarray, one_tol: float = ONE_TOL) -> float:
    ev = np.asarray(ev, dtype=np.complex128)
    if not len(ev):
        return 1.0
    near_one = np.abs(ev - 1.0) <= one_tol
    idx = np.where(near_one, 1.0, np.asarray(stolz_index(np.where(near_one, 0.0, ev))))
    return float(np.max(idx))


@dataclass
class DeltaProbe:
    delta: float
    sup: float
    growth: List[float]
    bounded: bool
    points: int

    def to_json(self) -> Dict[str, Any]:
        return {"delta": self.delta, "sup": finite_or_str(self.sup),
                "growth": [finite_or_str(g) for g in self.growth], "bounded": self.bounded,
                "points": self.points}


@dataclass
class StolzTypeEstimate:
    sigma_hat: float
    spectral: float
    resolvent_delta: Optional[float]
    probes: List[DeltaProbe]

    def to_json(self) -> Dict[str, Any]:
        return {"sigma_hat": finite_or_str(self.sigma_hat), "spectral": finite_or_str(self.spectral),
                "resolvent_delta": self.resolvent_delta,
                "probes": [p.to_json() for p in self.probes]}


def _stolz_boundary_points(delta: float, nodes: int, cluster: int) -> np.ndarray:
    om = stolz_to_sector_angle(delta)
    a = om * (-1.0 + 2.0 * (np.arange(nodes) + 0.5) / nodes)
    near = om * (1.0 - 2.0 ** (-np.arange(1, cluster + 1) / 2.0))
    a = np.concatenate([a, near, -near])
    rho = stolz_boundary_radius(delta, a)
    return 1.0 - rho * np.exp(1j * a)


def _probe_delta(T: np.ndarray, delta: float, rounds: int, nodes: int) -> DeltaProbe:
    # exterior circles are included although the sup over the complement of
    # S_delta is attained on its boundary (the map is analytic at infinity)
    ext = np.concatenate([(1.0 + 10.0 ** (-k)) * np.exp(1j * _circle_angles(128, 0))
                          for k in (1, 2, 3)])
    sups, growth, pts = [], [], 0
    zs = np.zeros(0, dtype=np.complex128)
    vs = np.zeros(0)
    for r in range(rounds):
        z = _stolz_boundary_points(delta, nodes * 2 ** r, 24 + 12 * r)
        if r == 0:
            z = np.concatenate([z, ext])
        v = np.abs(1.0 - z) * linalg.resolvent_norms(T, z)
        zs = np.concatenate([zs, z])
        vs = np.concatenate([vs, v])
        # local refinement along the boundary curve around the argmax
        zb = zs[int(np.argmax(vs))]
        om = stolz_to_sector_angle(delta)
        if abs(zb) <= 1.0 and zb != 1.0:
            a0 = float(np.angle(1.0 - zb))
            h = 2.0 * om / (nodes * 2 ** r)
            a = np.clip(a0 + h * np.linspace(-1, 1, 33), -om * (1 - 1e-15), om * (1 - 1e-15))
            zl = 1.0 - stolz_boundary_radius(delta, a) * np.exp(1j * a)
            vl = np.abs(1.0 - zl) * linalg.resolvent_norms(T, zl)
            zs = np.concatenate([zs, zl])
            vs = np.concatenate([vs, vl])
        sups.append(float(np.max(vs)))
        if r:
            growth.append(_growth(sups[-1], sups[-2]))
    pts = int(zs.size)
    bounded = bool(math.isfinite(sups[-1]) and (not growth or growth[-1] < GROWTH_LIMIT))
    return DeltaProbe(delta, sups[-1], growth, bounded, pts)


def stolz_type_estimate(T: Any, delta_list: Optional[Sequence[float]] = None, rounds: int = 3,
                        nodes: int = 64, tol: float = 1e-9,
                        one_tol: float = ONE_TOL) -> StolzTypeEstimate:
    """sigma_hat = max(spectral Stolz index, least delta with a bounded sampled
    sup of ||(1 - z)(z - T)^{-1}|| outside S_delta)."""
    T = as_cmatrix(T)
    ev = linalg.eigenvalues(T)
    _spectral_radius_check(ev, tol)
    spectral = spectral_stolz_index(ev, one_tol)
    deltas = sorted(float(d) for d in (delta_list or default_delta_list()))
    probes: List[DeltaProbe] = []
    found = None
    if math.isfinite(spectral):
        eye = np.eye(T.shape[0])
        for d in deltas:
            if d < 1.0:
                continue
            if d == 1.0:
                # S_1 = {1}: bounded only when T = I
                ok = linalg.operator_norm(T - eye) <= one_tol
                probes.append(DeltaProbe(1.0, 1.0 if ok else math.inf, [], bool(ok), 0))
                if ok:
                    found = 1.0
                    break
                continue
            if d <= spectral * (1.0 + 1e-12):
                continue
            p = _probe_delta(T, d, rounds, nodes)
            probes.append(p)
            if p.bounded:
                found = d
                break
    sigma = max(spectral, found) if found is not None else math.inf
    return StolzTypeEstimate(sigma, spectral, found, probes)


# ---------------------------------------------------------------------------
# angles


@dataclass
class AngleEstimates:
    alpha_hat: float
    omega_hat: float
    omega_defined: bool
    n_used: int
    method: str = "spectral"

    def to_json(self) -> Dict[str, Any]:
        return {"alpha_hat": finite_or_str(self.alpha_hat),
                "omega_hat": finite_or_str(self.omega_hat) if self.omega_defined else "undefined",
                "omega_defined": self.omega_defined, "n_used": self.n_used, "method": self.method}


def angles_from_spectrum(ev: np.ndarray, one_tol: float = ONE_TOL) -> AngleEstimates:
    """alpha = max |arg(1 - z)|, omega = max |arg C(z)| over the spectrum minus {1}."""
    ev = np.asarray(ev, dtype=np.complex128).ravel()
    ev = ev[np.abs(ev - 1.0) > one_tol]
    if not ev.size:
        return AngleEstimates(0.0, 0.0, True, 0)
    alpha = float(np.max(np.abs(np.angle(1.0 - ev))))
    if np.any(np.abs(ev + 1.0) <= one_tol):
        return AngleEstimates(alpha, math.nan, False, int(ev.size))
    omega = float(np.max(np.abs(np.angle(np.asarray(cayley(ev))))))
    return AngleEstimates(alpha, omega, True, int(ev.size))


def angle_estimates(T: Any, one_tol: float = ONE_TOL) -> AngleEstimates:
    """Spectral minimal-angle and Cayley-angle estimates of T."""
    return angles_from_spectrum(linalg.eigenvalues(as_cmatrix(T)), one_tol)


# ---------------------------------------------------------------------------
# full report


@dataclass
class AnalyzeConfig:
    N: int = 256
    radii: Optional[List[float]] = None
    angular_nodes: int = 256
    rounds: int = 3
    delta_list: Optional[List[float]] = None
    tol: float = 1e-6
    one_tol: float = ONE_TOL

    def to_json(self) -> Dict[str, Any]:
        return {"N": self.N, "radii": list(self.radii or DEFAULT_RADII),
                "angular_nodes": self.angular_nodes, "rounds": self.rounds,
                "delta_list": list(self.delta_list or default_delta_list()),
                "tol": self.tol, "one_tol": self.one_tol}


@dataclass
class RittReport:
    power_bound: float
    ritt_ratio: float
    ritt_ratio_argmax: int
    divergence_flag: bool
    ritt_constant: float
    ritt_constant_finite: bool
    stolz_type: float
    minimal_angle: float
    cayley_angle: float
    spectral_flags: Dict[str, bool]
    consistent: bool
    grids_used: Dict[str, Any]
    details: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        undefined = not self.spectral_flags.get("cayley_defined", True)
        return {
            "power_bound": finite_or_str(self.power_bound),
            "ritt_ratio": finite_or_str(self.ritt_ratio),
            "ritt_ratio_argmax": self.ritt_ratio_argmax,
            "divergence_flag": self.divergence_flag,
            "ritt_constant": finite_or_str(self.ritt_constant),
            "ritt_constant_finite": self.ritt_constant_finite,
            "stolz_type": finite_or_str(self.stolz_type),
            "minimal_angle": finite_or_str(self.minimal_angle),
            "cayley_angle": "undefined" if undefined else finite_or_str(self.cayley_angle),
            "spectral_flags": dict(self.spectral_flags),
            "consistent": self.consistent,
            "grids_used": self.grids_used,
            "details": self.details,
        }


def analyze(T: Any, cfg: Optional[AnalyzeConfig] = None) -> RittReport:
    """Power, resolvent, Stolz-type and angle diagnostics of one matrix.

    Matrices with spectral radius above 1 get a report with infinite
    resolvent quantities instead of an error.
    """
    cfg = cfg or AnalyzeConfig()
    T = as_cmatrix(T)
    ev = linalg.eigenvalues(T)
    flags = {
        "unit_circle_contact": bool(np.any((np.abs(np.abs(ev) - 1.0) <= cfg.one_tol)
                                           & (np.abs(ev - 1.0) > cfg.one_tol))),
        "one_in_spectrum": bool(np.any(np.abs(ev - 1.0) <= cfg.one_tol)),
        "minus_one_in_spectrum": bool(np.any(np.abs(ev + 1.0) <= cfg.one_tol)),
        "outside_disc": bool(np.any(np.abs(ev) > 1.0 + cfg.one_tol)),
    }
    try:
        pw = power_diagnostics(T, cfg.N)
    except PowerOverflowError:
        pw = PowerDiagnostics(math.inf, math.inf, -1, cfg.N, math.inf, True)
    ang = angles_from_spectrum(ev, cfg.one_tol)
    flags["cayley_defined"] = ang.omega_defined
    if flags["outside_disc"]:
        rc = None
        st = StolzTypeEstimate(math.inf, math.inf, None, [])
    else:
        rc = ritt_constant_estimate(T, cfg.radii, cfg.angular_nodes, cfg.rounds, tol=cfg.one_tol)
        st = stolz_type_estimate(T, cfg.delta_list, cfg.rounds, tol=cfg.one_tol, one_tol=cfg.one_tol)
    sigma = st.sigma_hat
    consistent = True
    if math.isfinite(sigma):
        consistent = bool(ang.alpha_hat <= stolz_to_sector_angle(sigma) + cfg.tol)
    grids = {"analyze": cfg.to_json()}
    if rc is not None:
        grids["ritt_constant"] = {k: v for k, v in rc.to_json().items()
                                  if k in ("radii", "angular_nodes", "rounds")}
    details = {"power": pw.to_json(), "angles": ang.to_json(), "stolz": st.to_json(),
               "ritt_constant": rc.to_json() if rc is not None else None,
               "eigenvalues": [[float(e.real), float(e.imag)] for e in ev]}
    return RittReport(
        power_bound=pw.M_N, ritt_ratio=pw.ritt_ratio, ritt_ratio_argmax=pw.argmax_n,
        divergence_flag=pw.divergence_flag,
        ritt_constant=rc.value if rc is not None else math.inf,
        ritt_constant_finite=rc.finite if rc is not None else False,
        stolz_type=sigma, minimal_angle=ang.alpha_hat, cayley_angle=ang.omega_hat,
        spectral_flags=flags, consistent=consistent, grids_used=grids, details=details)


__all__ = [
    "GROWTH_LIMIT", "ONE_TOL", "DEFAULT_RADII", "default_delta_list", "finite_or_str",
    "PowerDiagnostics", "power_diagnostics", "RittConstantEstimate", "ritt_constant_estimate",
    "spectral_stolz_index", "DeltaProbe", "StolzTypeEstimate", "stolz_type_estimate",
    "AngleEstimates", "angles_from_spectrum", "angle_estimates", "AnalyzeConfig", "RittReport",
    "analyze",
]
