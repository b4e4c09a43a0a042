"""Discrete measures and the Hausdorff / Stieltjes / Nevanlinna representations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from .series import ConvexSeries, FunctionSpecError


@dataclass
class DiscreteMeasure:
    """Finite sum of point masses.

    ``complement`` optionally carries 1 - points computed without
    cancellation; quadrature rules for measures on (0, 1) place atoms
    within 1e-200 of 1 and need it.
    """

    points: np.ndarray
    weights: np.ndarray
    complement: Optional[np.ndarray] = None

    def __post_init__(self):
        self.points = np.atleast_1d(np.asarray(self.points, dtype=float))
        self.weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if self.points.shape != self.weights.shape or self.points.ndim != 1:
            raise FunctionSpecError("measure points and weights must be equal-length vectors")
        if not (np.all(np.isfinite(self.points)) and np.all(np.isfinite(self.weights))):
            raise FunctionSpecError("measure has non-finite entries")
        if np.any(self.weights < 0):
            raise FunctionSpecError("measure weights must be non-negative")
        if self.complement is not None:
            self.complement = np.asarray(self.complement, dtype=float)
            if self.complement.shape != self.points.shape:
                raise FunctionSpecError("complement must match points")

    @property
    def one_minus(self) -> np.ndarray:
        if self.complement is not None:
            return self.complement
        return 1.0 - self.points

    @property
    def mass(self) -> float:
        return math.fsum(self.weights)

    def __len__(self) -> int:
        return int(self.points.size)

    def to_json(self) -> Dict[str, Any]:
        return {"points": [float(p) for p in self.points],
                "weights": [float(w) for w in self.weights]}

    @classmethod
    def from_json(cls, payload: Any) -> "DiscreteMeasure":
        try:
            return cls(np.asarray(payload["points"], dtype=float),
                       np.asarray(payload["weights"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            raise FunctionSpecError(f"bad measure payload: {exc}") from None

    @classmethod
    def atoms(cls, *pairs) -> "DiscreteMeasure":
        pts = [p for p, _ in pairs]
        wts = [w for _, w in pairs]
        return cls(np.array(pts, dtype=float), np.array(wts, dtype=float))


def _empty() -> DiscreteMeasure:
    return DiscreteMeasure(np.zeros(0), np.zeros(0))


# ---------------------------------------------------------------------------
# Hausdorff representation on the disc


@dataclass
class HausdorffSpec:
    """h(lam) = c0 + int_[0,1) lam nu(dt) / (1 - t lam)."""

    c0: float = 0.0
    nu: DiscreteMeasure = field(default_factory=_empty)
    label: str = ""

    def __post_init__(self):
        self.c0 = float(self.c0)
        if not self.c0 >= 0.0:
            raise FunctionSpecError("c0 must be non-negative")
        if len(self.nu) and (np.any(self.nu.points < 0) or np.any(self.nu.one_minus <= 0)):
            raise FunctionSpecError("Hausdorff measure must live on [0, 1)")

    def proper_mass(self) -> float:
        """c0 + int nu(dt)/(1 - t); equals h(1) and must be 1 for a regular h."""
        return self.c0 + math.fsum(self.nu.weights / self.nu.one_minus)

    def regularity_defect(self) -> float:
        return abs(self.proper_mass() - 1.0)

    def is_regular(self, tol: float = 1e-10) -> bool:
        return self.regularity_defect() <= tol

    def validate_regular(self, tol: float = 1e-10) -> "HausdorffSpec":
        d = self.regularity_defect()
        if d > tol:
            raise FunctionSpecError(
                f"Hausdorff function is not regular: c0 + int nu/(1-t) = {self.proper_mass()!r}")
        return self

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "hausdorff", "c0": self.c0, "nu": self.nu.to_json()}


def hausdorff_coeffs(h: HausdorffSpec, n_max: int) -> ConvexSeries:
    """Moments c_0 = c0, c_n = int t^{n-1} nu(dt), with the exact remaining mass."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    t = h.nu.points
    w = h.nu.weights
    c = np.empty(n_max + 1)
    c[0] = h.c0
    p = np.ones_like(t)
    direct = min(n_max, 1024)
    for n in range(1, direct + 1):
        c[n] = math.fsum(w * p)
        p = p * t
    if n_max > direct:
        # long tails: t^(n-1) = exp((n-1) log t), in chunks
        with np.errstate(divide="ignore"):
            lt = np.log(t)
        for lo in range(direct + 1, n_max + 1, 4096):
            ns = np.arange(lo, min(lo + 4096, n_max + 1), dtype=float)
            c[lo:lo + len(ns)] = np.exp(np.outer(ns - 1.0, lt)) @ w
    return ConvexSeries(c, tail_mass=hausdorff_tail(h, n_max), label=h.label, check=False,
                        generator=lambda m: hausdorff_coeffs(h, m),
                        tail_at=lambda m: hausdorff_tail(h, m))


def hausdorff_tail(h: HausdorffSpec, n: int) -> float:
    """Coefficient mass beyond index n: int t^n nu(dt) / (1 - t)."""
    if not len(h.nu):
        return 0.0
    t = h.nu.points
    with np.errstate(divide="ignore", under="ignore"):
        tn = np.where(t > 0, np.exp(n * np.log(np.where(t > 0, t, 1.0))), 0.0 if n > 0 else 1.0)
    return max(math.fsum(h.nu.weights * tn / h.nu.one_minus), 0.0)


def hausdorff_eval(h: HausdorffSpec, lam) -> np.ndarray:
    """c0 + sum_i w_i lam / (1 - t_i lam) on the closed disc."""
    z = np.asarray(lam, dtype=np.complex128)
    flat = z.reshape(-1)
    out = np.full(flat.shape, h.c0, dtype=np.complex128)
    t, w, comp = h.nu.points, h.nu.weights, h.nu.one_minus
    if len(t):
        chunk = max(1, 2 ** 22 // max(len(t), 1))
        for i in range(0, flat.size, chunk):
            zz = flat[i:i + chunk, None]
            # 1 - t lam = (1 - t) + t (1 - lam) keeps nodes with t ~ 1 exact at lam = 1
            den = comp[None, :] + t[None, :] * (1.0 - zz)
            out[i:i + chunk] += np.sum(w[None, :] * zz / den, axis=1)
    out = out.reshape(z.shape)
    return complex(out) if out.ndim == 0 else out


def hausdorff_one_minus(h: HausdorffSpec, lam) -> np.ndarray:
    """1 - h(lam) for a regular h, written as sum w (1-lam) / ((1-t)(1-t lam))."""
    z = np.asarray(lam, dtype=np.complex128)
    flat = z.reshape(-1)
    out = np.full(flat.shape, 1.0 - h.proper_mass(), dtype=np.complex128)
    t, w, comp = h.nu.points, h.nu.weights, h.nu.one_minus
    if len(t):
        chunk = max(1, 2 ** 22 // max(len(t), 1))
        for i in range(0, flat.size, chunk):
            zz = flat[i:i + chunk, None]
            den = comp[None, :] + t[None, :] * (1.0 - zz)
            with np.errstate(invalid="ignore"):
                term = np.where(zz == 1.0, 0.0, (w / comp)[None, :] * (1.0 - zz) / den)
            out[i:i + chunk] += np.sum(term, axis=1)
    out = out.reshape(z.shape)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# complete Bernstein functions


@dataclass
class StieltjesTriple:
    """psi(lam) = a + b lam + int_(0,inf) lam mu(ds) / (lam + s)."""

    a: float = 0.0
    b: float = 0.0
    mu: DiscreteMeasure = field(default_factory=_empty)
    label: str = ""

    def __post_init__(self):
        self.a, self.b = float(self.a), float(self.b)
        if self.a < 0 or self.b < 0:
            raise FunctionSpecError("Stieltjes triple needs a, b >= 0")
        if len(self.mu) and np.any(self.mu.points <= 0):
            raise FunctionSpecError("Stieltjes measure must live on (0, inf)")

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "stieltjes", "a": self.a, "b": self.b, "mu": self.mu.to_json()}


def cbf_eval(psi: StieltjesTriple, lam) -> np.ndarray:
    z = np.asarray(lam, dtype=np.complex128)
    flat = z.reshape(-1)
    out = psi.a + psi.b * flat
    s, m = psi.mu.points, psi.mu.weights
    if len(s):
        chunk = max(1, 2 ** 22 // len(s))
        for i in range(0, flat.size, chunk):
            zz = flat[i:i + chunk, None]
            out[i:i + chunk] += np.sum(m[None, :] * zz / (zz + s[None, :]), axis=1)
    out = out.reshape(z.shape)
    return complex(out) if out.ndim == 0 else out


def cbf_deriv(psi: StieltjesTriple, t) -> np.ndarray:
    """psi'(t) = b + int s mu(ds) / (t + s)^2."""
    x = np.asarray(t, dtype=np.complex128)
    flat = x.reshape(-1)
    out = np.full(flat.shape, psi.b, dtype=np.complex128)
    s, m = psi.mu.points, psi.mu.weights
    if len(s):
        out += np.sum(m[None, :] * s[None, :] / (flat[:, None] + s[None, :]) ** 2, axis=1)
    out = out.reshape(x.shape)
    if np.all(out.imag == 0):
        out = out.real
    return out.item() if out.ndim == 0 else out


def hausdorff_to_cbf(h: HausdorffSpec) -> StieltjesTriple:
    """psi(lam) = 1 - h(1 - lam) for regular h.

    The atom of nu at 0 becomes the linear coefficient b; an atom at s in
    (0, 1) with weight w becomes an atom at (1-s)/s with weight w/(s(1-s)).
    """
    t, w, comp = h.nu.points, h.nu.weights, h.nu.one_minus
    zero = t == 0.0
    b = math.fsum(w[zero])
    s, ws, cs = t[~zero], w[~zero], comp[~zero]
    mu = DiscreteMeasure(cs / s, ws / (s * cs))
    return StieltjesTriple(0.0, b, mu, label=h.label)


def cbf_to_hausdorff(psi: StieltjesTriple, normalize: bool = False) -> HausdorffSpec:
    """h(lam) = psi(1) - psi(1 - lam), made regular through c0 when possible.

    An atom at t with weight m goes to s = 1/(1+t) with weight t m/(1+t)^2;
    b becomes an atom at 0.  The constant c0 is set to 1 - (psi(1) - a) when
    that is non-negative.  Otherwise, with ``normalize``, the weights are
    scaled by 1/(psi(1) - a) and c0 = 0.
    """
    t, m = psi.mu.points, psi.mu.weights
    pts = 1.0 / (1.0 + t)
    comp = t / (1.0 + t)
    wts = t * m / (1.0 + t) ** 2
    if psi.b > 0:
        pts = np.concatenate([[0.0], pts])
        comp = np.concatenate([[1.0], comp])
        wts = np.concatenate([[psi.b], wts])
    mass = psi.b + math.fsum(m / (1.0 + t))
    c0 = 0.0
    if mass <= 1.0:
        c0 = 1.0 - mass
    elif normalize:
        wts = wts / mass
    return HausdorffSpec(c0, DiscreteMeasure(pts, wts, complement=comp), label=psi.label)


# ---------------------------------------------------------------------------
# Nevanlinna-Pick functions on the right half-plane


@dataclass
class NPPlusRep:
    """F(lam) = a lam + b/lam + 2 lam int (1 + t^2) rho(dt) / (lam^2 + t^2)."""

    a: float = 0.0
    b: float = 0.0
    rho: DiscreteMeasure = field(default_factory=_empty)
    theta1: float = math.pi / 2
    theta2: float = math.pi / 2
    label: str = ""

    def __post_init__(self):
        self.a, self.b = float(self.a), float(self.b)
        if self.a < 0 or self.b < 0:
            raise FunctionSpecError("NP+ representation needs a, b >= 0")
        if len(self.rho) and np.any(self.rho.points <= 0):
            raise FunctionSpecError("NP+ measure must live on (0, inf)")

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "np_plus", "a": self.a, "b": self.b, "rho": self.rho.to_json(),
                "theta1": self.theta1, "theta2": self.theta2}


def np_eval(F: NPPlusRep, lam) -> np.ndarray:
    z = np.asarray(lam, dtype=np.complex128)
    flat = z.reshape(-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = F.a * flat + (F.b / flat if F.b else 0.0)
    t, w = F.rho.points, F.rho.weights
    if len(t):
        k = (1.0 + t * t) * w
        out = out + 2.0 * flat * np.sum(k[None, :] / (flat[:, None] ** 2 + (t * t)[None, :]), axis=1)
    out = np.asarray(out).reshape(z.shape)
    return complex(out) if out.ndim == 0 else out
