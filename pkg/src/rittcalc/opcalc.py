"""Functional calculi for matrices: Wiener series, Cauchy integrals, Cayley map,
fractional powers and the half-line/circle resolvent representation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from . import linalg
from .funclasses.measures import HausdorffSpec, NPPlusRep, StieltjesTriple, cbf_eval, np_eval
from .funclasses.named import NamedFunction
from .funclasses.series import ConvexSeries, FunctionSpecError, SignedSeries, bold_h_eval
from .linalg import NumericalFailure, SingularResolventError, as_cmatrix
from .special import gauss_legendre_interval

HARD_TERM_CAP = 1_000_000
POWER_SCAN = 2000


class PrecisionError(NumericalFailure):
    def __init__(self, msg: str, achieved: float):
        self.achieved = float(achieved)
        super().__init__(f"{msg} (achieved bound {achieved:.3e})")


class NotPowerBoundedError(NumericalFailure):
    pass


class ContourError(ValueError):
    pass


class AdmissibilityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Wiener (absolutely convergent power series) calculus


@dataclass
class WienerResult:
    matrix: np.ndarray
    n_terms: int
    error_bound: float
    power_bound: float
    l1_tail: float

    def to_json(self) -> Dict[str, Any]:
        return {"n_terms": self.n_terms, "error_bound": self.error_bound,
                "power_bound": self.power_bound, "l1_tail": self.l1_tail,
                "matrix": linalg.matrix_to_json(self.matrix)}


def power_bound_proxy(T: np.ndarray, n: int, blowup: float = 1e8) -> float:
    """max ||T^k|| over k <= min(n, 2000), plus T^(2^j) up to n by squaring."""
    T = as_cmatrix(T)
    m = min(n, POWER_SCAN)
    best = 1.0
    P = np.eye(T.shape[0], dtype=np.complex128)
    block = 64
    k = 0
    while k < m:
        stack = []
        for _ in range(min(block, m - k)):
            P = P @ T
            stack.append(P)
            k += 1
        norms = linalg.batched_norms(np.asarray(stack))
        top = float(np.max(norms))
        if not np.isfinite(top) or top > blowup:
            raise NotPowerBoundedError(f"||T^k|| exceeds {blowup:g} by k={k}")
        best = max(best, top)
    Q = T.copy()
    j = 1
    while 2 ** j <= n:
        Q = Q @ Q
        if 2 ** j > m:
            v = linalg.operator_norm(Q) if np.all(np.isfinite(Q)) else np.inf
            if not np.isfinite(v) or v > blowup:
                raise NotPowerBoundedError(f"||T^{2 ** j}|| exceeds {blowup:g}")
            best = max(best, v)
        j += 1
    return best


def _series_sum(coeffs: np.ndarray, T: np.ndarray) -> np.ndarray:
    n = T.shape[0]
    N = len(coeffs)
    B = int(max(1, min(512, N, 2 ** 21 // (n * n))))
    pw = np.empty((B, n, n), dtype=np.complex128)
    pw[0] = np.eye(n)
    for j in range(1, B):
        pw[j] = pw[j - 1] @ T
    TB = pw[B - 1] @ T
    nblocks = (N + B - 1) // B
    S = np.zeros((n, n), dtype=np.complex128)
    for k in range(nblocks - 1, -1, -1):
        cb = coeffs[k * B:(k + 1) * B]
        Q = np.tensordot(cb, pw[:len(cb)], axes=(0, 0))
        S = Q + TB @ S if k < nblocks - 1 else Q
    return S


def wiener_apply(f: Union[ConvexSeries, SignedSeries, NamedFunction], T: Any, tol: float = 1e-10,
                 max_terms: int = HARD_TERM_CAP) -> WienerResult:
    """sum c_n T^n truncated where power_bound * l1_tail <= tol.

    N comes from bisection on ``tail_at`` when the series predicts its tail,
    otherwise from doubling through ``generator``; the power bound is the
    proxy from ``power_bound_proxy``.  Raises ``PrecisionError`` when the
    cap is reached first.
    """
    T = as_cmatrix(T)
    if isinstance(f, NamedFunction):
        f = f.series(64)
    if not isinstance(f, (ConvexSeries, SignedSeries)):
        raise FunctionSpecError("wiener_apply needs a power series")
    max_terms = min(int(max_terms), HARD_TERM_CAP)
    ser = f
    tail = ser.l1_tail()
    if tail == 0.0:
        M = power_bound_proxy(T, ser.degree) if ser.degree > 0 else 1.0
        return WienerResult(_series_sum(ser.coeffs, T), len(ser.coeffs), 0.0, M, 0.0)
    if ser.tail_at is not None:
        M = power_bound_proxy(T, max_terms)
        if M * ser.tail_at(max_terms) > tol:
            raise PrecisionError(f"series needs more than {max_terms} terms for tol={tol:g}",
                                 M * ser.tail_at(max_terms))
        lo, hi = max(ser.degree, 1), max_terms
        if M * ser.tail_at(lo) <= tol:
            hi = lo
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if M * ser.tail_at(mid) <= tol:
                hi = mid
            else:
                lo = mid
        ser = ser.extend(hi)
        tail = ser.l1_tail()
    else:
        N = max(ser.degree, 64)
        while True:
            ser = ser.extend(N)
            tail = ser.l1_tail()
            M = power_bound_proxy(T, ser.degree)
            if M * tail <= tol:
                break
            if ser.generator is None or ser.degree >= max_terms:
                raise PrecisionError(f"series needs more than {ser.degree} terms for tol={tol:g}",
                                     M * tail)
            N = min(2 * ser.degree, max_terms)
    # trim to the shortest prefix that still meets the tolerance
    tails = np.cumsum(np.abs(ser.coeffs)[::-1])[::-1] + tail  # tails[k] = mass from k on
    ok = np.nonzero(M * tails <= tol)[0]
    keep = int(ok[0]) if ok.size else len(ser.coeffs)
    keep = max(keep, 1)
    coeffs = ser.coeffs[:keep]
    l1 = float(tails[keep]) if keep < len(tails) else tail
    return WienerResult(_series_sum(coeffs, T), keep, M * l1, M, l1)


def _riesz_projection_at_one(T: np.ndarray, ev: np.ndarray, tol: float) -> Optional[np.ndarray]:
    """Spectral projection of T for the eigenvalue 1 (None when 1 is not an eigenvalue)."""
    d = np.abs(ev - 1.0)
    if not np.any(d <= tol):
        return None
    others = d[d > tol]
    r = 0.5 * float(np.min(others)) if others.size else 0.5
    circle = ContourSpec("circle", center=1.0 + 0j, radius=min(r, 0.5), nodes=64)
    xi, w = circle.quadrature()
    return np.tensordot(w, _resolvent_stack(T, xi), axes=(0, 0)) / (2j * math.pi)


def hausdorff_apply(h: HausdorffSpec, T: Any, one_tol: float = 1e-8) -> np.ndarray:
    """c0 I + sum_i w_i T (I - t_i T)^{-1} for a discrete Hausdorff measure.

    I - tT is formed as (1 - t) I + t (I - T).  When 1 is an eigenvalue
    (assumed semisimple, as for power-bounded T) its spectral projection P is
    split off: T (I - tT)^{-1} = P/(1 - t) + T ((1 - t) I + t(I - T) + P)^{-1} (I - P),
    so nodes with t next to 1 stay well conditioned.
    """
    T = as_cmatrix(T)
    n = T.shape[0]
    eye = np.eye(n)
    out = h.c0 * eye.astype(np.complex128)
    t, w, comp = h.nu.points, h.nu.weights, h.nu.one_minus
    if not len(t):
        return out
    A = eye - T
    P = _riesz_projection_at_one(T, linalg.eigenvalues(T), one_tol)
    mats = comp[:, None, None] * eye[None] + t[:, None, None] * A[None]
    if P is None:
        sol = np.linalg.solve(mats, np.broadcast_to(T, mats.shape))
        return out + np.tensordot(w, sol, axes=(0, 0))
    Q = eye - P
    sol = np.linalg.solve(mats + P[None], np.broadcast_to(Q, mats.shape))
    sol = T[None] @ sol
    return out + math.fsum(w / comp) * P + np.tensordot(w, sol, axes=(0, 0))


# ---------------------------------------------------------------------------
# Cayley transform


def cayley_op(T: Any, rcond: float = 1e-14) -> np.ndarray:
    """(I - T)(I + T)^{-1}; raises when -1 is (numerically) in the spectrum."""
    T = as_cmatrix(T)
    n = T.shape[0]
    eye = np.eye(n)
    ip = eye + T
    try:
        out = np.linalg.solve(ip, eye - T)
    except np.linalg.LinAlgError:
        raise SingularResolventError(-1.0, "-1 is in the spectrum") from None
    if np.linalg.cond(ip, 1) * rcond > 1.0:
        raise SingularResolventError(-1.0, "I + T is numerically singular")
    return out


# ---------------------------------------------------------------------------
# Cauchy (Riesz-Dunford) integrals


@dataclass(frozen=True)
class ContourSpec:
    """Circle (trapezoidal rule) or boundary of {r_in < |l| < r_out, |arg l| < angle}
    (Gauss-Legendre panels on arcs and rays)."""

    kind: str = "circle"
    center: complex = 0j
    radius: float = 1.0
    nodes: int = 256
    angle: float = math.pi / 2
    r_in: float = 0.5
    r_out: float = 2.0
    panel_nodes: int = 32

    def __post_init__(self):
        if self.kind not in ("circle", "sector_boundary"):
            raise ContourError(f"unknown contour kind {self.kind!r}")
        if self.kind == "circle" and not self.radius > 0:
            raise ContourError("circle radius must be positive")
        if self.kind == "sector_boundary":
            if not (0 < self.angle < math.pi and 0 < self.r_in < self.r_out):
                raise ContourError("sector boundary needs 0 < angle < pi and 0 < r_in < r_out")

    def quadrature(self) -> Tuple[np.ndarray, np.ndarray]:
        """(xi_k, w_k) with int g(xi) dxi ~ sum w_k g(xi_k), counterclockwise."""
        if self.kind == "circle":
            th = 2 * math.pi * np.arange(self.nodes) / self.nodes
            e = np.exp(1j * th)
            xi = self.center + self.radius * e
            w = 2j * math.pi * self.radius * e / self.nodes
            return xi, w
        a, r0, r1, m = self.angle, self.r_in, self.r_out, self.panel_nodes
        pts, wts = [], []
        for rad, lo, hi in ((r1, -a, a), (r0, a, -a)):
            th, wt = gauss_legendre_interval(max(m, int(self.nodes) // 4), lo, hi)
            e = np.exp(1j * th)
            pts.append(rad * e)
            wts.append(1j * rad * e * wt)
        # rays split geometrically so the algebraic point at 0 stays resolved
        edges = [r0]
        while edges[-1] * 2.0 < r1:
            edges.append(edges[-1] * 2.0)
        edges.append(r1)
        for sgn in (1.0, -1.0):
            d = np.exp(1j * sgn * a)
            for lo, hi in zip(edges[:-1], edges[1:]):
                r, wr = gauss_legendre_interval(m, lo, hi)
                pts.append(r * d)
                # upper ray runs inward, lower ray outward
                wts.append(-sgn * d * wr)
        return np.concatenate(pts), np.concatenate(wts)

    def winds_around(self, z: np.ndarray, margin: float = 0.0) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "circle":
            return np.abs(z - self.center) < self.radius - margin
        r = np.abs(z)
        return (r > self.r_in + margin) & (r < self.r_out - margin) & (np.abs(np.angle(z)) < self.angle)

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "center": [self.center.real, self.center.imag],
                "radius": self.radius, "nodes": self.nodes, "angle": self.angle,
                "r_in": self.r_in, "r_out": self.r_out, "panel_nodes": self.panel_nodes}


def _resolvent_stack(A: np.ndarray, xi: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    eye = np.eye(n)
    mats = xi[:, None, None] * eye[None] - A[None]
    try:
        out = np.linalg.solve(mats, np.broadcast_to(eye, mats.shape).astype(np.complex128))
    except np.linalg.LinAlgError:
        raise ContourError("contour passes through the spectrum") from None
    return out


def riesz_dunford(f: Callable[[np.ndarray], np.ndarray], A: Any, contour: ContourSpec) -> np.ndarray:
    """(1/2 pi i) int f(xi) (xi - A)^{-1} dxi over ``contour``."""
    A = as_cmatrix(A)
    ev = linalg.eigenvalues(A)
    scale = max(1.0, float(np.max(np.abs(ev))))
    if not np.all(contour.winds_around(ev, margin=1e-9 * scale)):
        raise ContourError("contour does not enclose the spectrum")
    xi, w = contour.quadrature()
    fx = np.asarray(f(xi), dtype=np.complex128)
    if not np.all(np.isfinite(fx)):
        raise ContourError("function is not finite on the contour")
    R = _resolvent_stack(A, xi)
    return np.tensordot(w * fx, R, axes=(0, 0)) / (2j * math.pi)


def principal_sector_contour(ev: np.ndarray, norm: float, panel_nodes: int = 32) -> ContourSpec:
    r = np.abs(ev)
    if np.any(r == 0) or np.any((np.abs(np.angle(ev)) >= math.pi - 1e-12)):
        raise ContourError("spectrum meets the branch cut (-inf, 0]")
    amax = float(np.max(np.abs(np.angle(ev))))
    angle = 0.5 * (amax + math.pi)
    r_in = 0.5 * float(np.min(r))
    r_out = 2.0 * max(float(np.max(r)), norm)
    return ContourSpec("sector_boundary", angle=angle, r_in=r_in, r_out=r_out,
                       nodes=4 * panel_nodes, panel_nodes=panel_nodes)


def frac_power(A: Any, q: float, contour: Optional[ContourSpec] = None) -> np.ndarray:
    """Principal A^q by a Cauchy integral over a contour that avoids (-inf, 0]."""
    A = as_cmatrix(A)
    if q == 1.0:
        return A.copy()
    if q == int(q) and q >= 0:
        return np.linalg.matrix_power(A, int(q))
    ev = linalg.eigenvalues(A)
    if contour is None:
        contour = principal_sector_contour(ev, linalg.operator_norm(A))
    return riesz_dunford(lambda x: x ** q, A, contour)


# ---------------------------------------------------------------------------
# resolvent of f(A) through the half-line and circle integrals


@dataclass(frozen=True)
class RqConfig:
    q: float
    gamma: float
    seg_nodes: int = 200
    circ_nodes: int = 256

    def to_json(self) -> Dict[str, Any]:
        return {"q": self.q, "gamma": self.gamma, "seg_nodes": self.seg_nodes,
                "circ_nodes": self.circ_nodes}


@dataclass
class HalfPlaneFunction:
    """Evaluator of an NP+(theta1, theta2) function with its angles."""

    fn: Callable[[np.ndarray], np.ndarray]
    theta1: float = math.pi / 2
    theta2: float = math.pi / 2
    label: str = ""

    def __call__(self, lam):
        return self.fn(np.asarray(lam, dtype=np.complex128))


def as_half_plane_function(f: Any, theta: Optional[float] = None) -> HalfPlaneFunction:
    """Wrap a FunctionSpec for the sector calculus.

    Disc functions h become 1 - h((1 - lam)/(1 + lam)) (angles pi/2, pi/2);
    complete Bernstein functions keep every sector, so they get
    theta1 = theta2 = ``theta`` (default 0.99 pi).
    """
    if isinstance(f, HalfPlaneFunction):
        return f
    if isinstance(f, ConvexSeries):
        return HalfPlaneFunction(lambda z: bold_h_eval(f, z), label=f.label or "bold_h")
    if isinstance(f, NamedFunction) and f.is_disc and f.family != "g_eps":
        return HalfPlaneFunction(lambda z: f.one_minus((1 - z) / (1 + z)), label=f"bold_{f.family}")
    if isinstance(f, HausdorffSpec):
        from .funclasses.measures import hausdorff_one_minus
        return HalfPlaneFunction(lambda z: hausdorff_one_minus(f, (1 - z) / (1 + z)), label="bold_h")
    th = 0.99 * math.pi if theta is None else theta
    if isinstance(f, StieltjesTriple):
        return HalfPlaneFunction(lambda z: cbf_eval(f, z), th, th, label="cbf")
    if isinstance(f, NamedFunction) and not f.is_disc:
        return HalfPlaneFunction(f, th, th, label=f.family)
    if isinstance(f, NPPlusRep):
        return HalfPlaneFunction(lambda z: np_eval(f, z), f.theta1, f.theta2, label="np_plus")
    if callable(f):
        return HalfPlaneFunction(f)
    raise FunctionSpecError(f"cannot use {type(f).__name__} as a sector function")


@dataclass
class RqResult:
    values: np.ndarray  # shape (len(z), n, n)
    z: np.ndarray
    R: float
    q: float
    admissible_q: Tuple[float, float]
    gamma_max: float

    def __getitem__(self, i):
        return self.values[i]


def spectral_sector_angle(ev: np.ndarray) -> float:
    return float(np.max(np.abs(np.angle(ev)))) if len(ev) else 0.0


def rq_resolvent(f: Any, A: Any, z: Union[complex, Sequence[complex]], cfg: RqConfig,
                 Aq: Optional[np.ndarray] = None) -> RqResult:
    """(z + f(A))^{-1} from the integral over (0, R^{1/q}) along arg = pi/q plus
    the circle |xi| = R, R = 2^q ||A^q||.

    Gauss-Legendre in t = R^{1/q} u on the segment and in the angle on the
    circle (the integrand jumps across the cut of xi^{1/q}).
    """
    A = as_cmatrix(A)
    F = as_half_plane_function(f)
    zs = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    ev = linalg.eigenvalues(A)
    scale = max(1.0, linalg.operator_norm(A))
    if np.any(np.abs(ev) <= 1e-12 * scale):
        raise AdmissibilityError("0 is an eigenvalue; the sector calculus needs ker A = {0}")
    alpha = spectral_sector_angle(ev)
    q_lo = math.pi / F.theta1
    q_hi = math.pi / alpha if alpha > 0 else math.inf
    q = float(cfg.q)
    if not q_lo < q < q_hi:
        raise AdmissibilityError(f"q={q} outside the admissible interval ({q_lo}, {q_hi})")
    gmax = math.pi * (1.0 - F.theta2 / (q * F.theta1))
    if not 0 < cfg.gamma <= gmax:
        raise AdmissibilityError(f"gamma={cfg.gamma} outside (0, {gmax}]")
    if np.any(np.abs(np.angle(zs)) >= cfg.gamma) or np.any(zs == 0):
        raise AdmissibilityError("z must lie in the open gamma-sector")
    if Aq is None:
        Aq = frac_power(A, q)
    n = A.shape[0]
    eye = np.eye(n)
    R = 2.0 ** q * linalg.operator_norm(Aq)
    rho = R ** (1.0 / q)

    t, wt = gauss_legendre_interval(cfg.seg_nodes, 0.0, rho)
    e = np.exp(1j * math.pi / q)
    fp = np.asarray(F(t * e))
    fm = np.asarray(F(t / e))
    segmats = np.linalg.solve(Aq[None] + (t ** q)[:, None, None] * eye[None],
                              np.broadcast_to(eye, (len(t), n, n)).astype(np.complex128))

    th, wth = gauss_legendre_interval(cfg.circ_nodes, -math.pi, math.pi)
    xi = R * np.exp(1j * th)
    fc = np.asarray(F(rho * np.exp(1j * th / q)))
    circmats = _resolvent_stack(Aq, xi)

    out = np.empty((len(zs), n, n), dtype=np.complex128)
    base = (q / math.pi) * fp.imag * t ** (q - 1.0) * wt
    for k, zk in enumerate(zs):
        ws = base / ((zk + fp) * (zk + fm))
        wc = wth * xi / (zk + fc) / (2.0 * math.pi)
        out[k] = np.tensordot(ws, segmats, axes=(0, 0)) + np.tensordot(wc, circmats, axes=(0, 0))
    return RqResult(out, zs, R, q, (q_lo, q_hi), gmax)


# ---------------------------------------------------------------------------
# constants


def sect_constant(kind: str, q: float, gamma: float, M: float, *, m: Optional[float] = None,
                  b: Optional[float] = None, C: Optional[float] = None,
                  norm_A: Optional[float] = None, theta: Optional[float] = None,
                  theta0: Optional[float] = None) -> float:
    """Sectoriality constant c_{q,gamma} with ||(z + f(A))^{-1}|| <= c/|z|.

    kind "general" takes m, b, C directly; "boldh" is the disc-series case
    (b = cos(pi/q)/(1 + 4||A||^2)); "cbf" uses theta and theta0 from the
    sector geometry of the complete Bernstein function.
    """
    if not math.pi / q + gamma < math.pi:
        raise AdmissibilityError("cos((pi/q + gamma)/2) must be positive")
    ch = math.cos(0.5 * (math.pi / q + gamma))
    if not ch > 0:
        raise AdmissibilityError("cos((pi/q + gamma)/2) must be positive")
    if kind == "general":
        if None in (m, b, C):
            raise ValueError("general constant needs m, b and C")
        return q * M * m / (C * b * math.pi * ch * ch) + 2.0 / ch
    if kind == "boldh":
        if norm_A is None:
            raise ValueError("boldh constant needs norm_A")
        if not q > 2:
            raise AdmissibilityError("boldh constant needs q > 2")
        cq = math.cos(math.pi / q)
        bb = cq / (1.0 + 4.0 * norm_A ** 2)
        return q * M / (2.0 * bb * bb * cq * ch * ch) + 2.0 / ch
    if kind == "cbf":
        if theta is None or theta0 is None:
            raise ValueError("cbf constant needs theta and theta0")
        if not q > math.pi / theta:
            raise AdmissibilityError("cbf constant needs q > pi/theta")
        base = math.cos(math.pi ** 2 / (2.0 * theta * q))
        Cc = base ** (2.0 * theta0 / math.pi)
        return 2.0 * q * M * math.tan(math.pi / (2.0 * q)) / (Cc * math.pi * ch * ch) + 2.0 / ch
    raise ValueError(f"unknown constant kind {kind!r}")


@dataclass
class MqEstimate:
    value: float
    argmax: float
    grid_min: float
    grid_max: float
    points: int


def mq_estimate(A: Any, q: float, eps: float = 0.0, grid: Optional[np.ndarray] = None,
                Aq: Optional[np.ndarray] = None) -> MqEstimate:
    """max over a log grid of ||lam (lam + (A + eps)^q)^{-1}||, lam > 0."""
    A = as_cmatrix(A)
    n = A.shape[0]
    if grid is None:
        grid = np.logspace(-6, 6, 200)
    if Aq is None:
        Aq = frac_power(A + eps * np.eye(n), q)
    mats = grid[:, None, None] * np.eye(n)[None] + Aq[None]
    inv_norm = linalg.batched_norms(np.linalg.inv(mats))
    vals = grid * inv_norm
    i = int(np.argmax(vals))
    return MqEstimate(float(vals[i]), float(grid[i]), float(grid[0]), float(grid[-1]), len(grid))
