"""Named function families with closed forms, coefficients and measures.

Disc families (functions on the closed unit disc):
    h_alpha   1 - (1 - lam)^alpha
    h_eps     1 - ((1 - lam)^eps - 1) / (eps log(1 - lam))
    h_one     1 + lam / log(1 - lam)
    zeta_L    Li_{1+alpha}(lam) / zeta(1 + alpha)
    g_eps     ((2 - eps) lam - eps) / (2 + eps + eps lam)   (signed coefficients)
Half-plane families (complete Bernstein functions):
    cbf_log   (lam - 1) / log(lam)
    power     lam^alpha
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .. import special
from .measures import DiscreteMeasure, HausdorffSpec, StieltjesTriple, hausdorff_coeffs
from .series import ConvexSeries, FunctionSpecError, SignedSeries

DISC_FAMILIES = ("h_alpha", "h_eps", "h_one", "zeta_L", "g_eps")
CBF_FAMILIES = ("cbf_log", "power")
FAMILIES = DISC_FAMILIES + CBF_FAMILIES
HAUSDORFF_FAMILIES = ("h_alpha", "h_eps", "h_one", "zeta_L")

DEFAULT_MEASURE_NODES = 200


@dataclass(frozen=True)
class NamedFunction:
    family: str
    alpha: Optional[float] = None
    eps: Optional[float] = None

    def __post_init__(self):
        f = self.family
        if f not in FAMILIES:
            raise FunctionSpecError(f"unknown function family {f!r}")
        if f in ("h_alpha", "zeta_L", "power"):
            if self.alpha is None or not 0.0 < self.alpha < 1.0:
                raise FunctionSpecError(f"{f} needs alpha in (0, 1)")
        if f in ("h_eps", "g_eps"):
            if self.eps is None or not 0.0 < self.eps < 1.0:
                raise FunctionSpecError(f"{f} needs eps in (0, 1)")

    # -- description ------------------------------------------------------

    @property
    def param(self) -> Optional[float]:
        return self.alpha if self.alpha is not None else self.eps

    @property
    def is_disc(self) -> bool:
        return self.family in DISC_FAMILIES

    @property
    def is_hausdorff(self) -> bool:
        return self.family in HAUSDORFF_FAMILIES

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": "named", "family": self.family}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.eps is not None:
            out["eps"] = self.eps
        return out

    def reference_angle(self) -> Optional[float]:
        return reference_angle(self)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, lam):
        z = np.asarray(lam, dtype=np.complex128)
        if self.family in CBF_FAMILIES:
            out = _cbf_closed(self, z)
        elif self.family == "g_eps":
            e = self.eps
            out = ((2 - e) * z - e) / (2 + e + e * z)
        else:
            out = 1.0 - self.one_minus(z)
        return complex(out) if np.ndim(out) == 0 else out

    def one_minus(self, lam):
        """1 - h(lam) evaluated without cancellation near lam = 0 or 1."""
        z = np.asarray(lam, dtype=np.complex128)
        f = self.family
        if f == "h_alpha":
            out = (1.0 - z) ** self.alpha
        elif f == "h_eps":
            out = _h_eps_one_minus(z, self.eps)
        elif f == "h_one":
            out = _h_one_one_minus(z)
        elif f == "zeta_L":
            out = _zeta_l_one_minus(z, self.alpha)
        elif f == "g_eps":
            e = self.eps
            out = 2.0 * ((1.0 + e) - (1.0 - e) * z) / (2 + e + e * z)
        else:
            raise FunctionSpecError(f"{f} is not a disc family")
        return complex(out) if np.ndim(out) == 0 else out

    # -- coefficients and measures -----------------------------------------

    def series(self, n_max: int):
        return named_coeffs(self, n_max)

    def hausdorff(self, n_nodes: int = DEFAULT_MEASURE_NODES) -> HausdorffSpec:
        if not self.is_hausdorff:
            raise FunctionSpecError(f"{self.family} has no Hausdorff measure")
        return _hausdorff_measure(self.family, self.param, n_nodes)

    def stieltjes(self, n_nodes: int = DEFAULT_MEASURE_NODES) -> StieltjesTriple:
        if self.family not in CBF_FAMILIES:
            raise FunctionSpecError(f"{self.family} is not a complete Bernstein function")
        return _stieltjes_measure(self.family, self.alpha, n_nodes)


# ---------------------------------------------------------------------------
# closed forms


def _safe_log1m(z: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log1p(-z)


def _h_eps_one_minus(z: np.ndarray, eps: float) -> np.ndarray:
    # (1/eps) int_0^eps (1 - z)^a da = expm1(eps L) / (eps L), L = log(1 - z)
    L = _safe_log1m(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.expm1(eps * L) / (eps * L)
    out = np.where(L == 0, 1.0 + 0j, out)
    return np.where(z == 1.0, 0j, out)


def _h_one_one_minus(z: np.ndarray) -> np.ndarray:
    L = _safe_log1m(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -z / L
    out = np.where(z == 0, 1.0 + 0j, out)
    return np.where(z == 1.0, 0j, out)


@lru_cache(maxsize=32)
def _lerch_coeffs(s: float, k_max: int = 90) -> Tuple[complex, np.ndarray]:
    # Li_s(e^mu) = Gamma(1-s) (-mu)^(s-1) + sum_k zeta(s-k) mu^k / k!
    g = special.gamma(1.0 - s)
    ks = np.arange(k_max + 1)
    co = np.array([special.zeta(s - k) / math.factorial(k) if k < 170 else 0.0 for k in ks])
    return g, co


def polylog_minus_zeta(z: np.ndarray, s: float) -> np.ndarray:
    """Li_s(z) - zeta(s) on the closed unit disc, for real s in (1, 2)."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty(z.shape, dtype=np.complex128)
    r = np.abs(z)
    small = r <= 0.5
    if np.any(small):
        zs = z[small]
        n = np.arange(1, 64, dtype=float)
        out[small] = _horner_poly(np.concatenate([[0.0], n ** (-s)]), zs) - special.zeta(s)
    big = ~small
    if np.any(big):
        zb = z[big]
        g, co = _lerch_coeffs(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            mu = np.log(zb)
            lead = np.where(zb == 1.0, 0j, g * (-mu) ** (s - 1.0))
        rest = _horner_poly(co, mu) - co[0]
        out[big] = lead + rest
    return out


def _horner_poly(co: np.ndarray, x: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(x, dtype=np.complex128)
    for c in co[::-1]:
        acc = acc * x + c
    return acc


def _zeta_l_one_minus(z: np.ndarray, alpha: float) -> np.ndarray:
    s = 1.0 + alpha
    return -polylog_minus_zeta(z, s) / special.zeta(s)


def _cbf_closed(nf: NamedFunction, z: np.ndarray) -> np.ndarray:
    if nf.family == "power":
        return z ** nf.alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        w = z - 1.0
        L = np.log1p(w)
        out = w / L
    return np.where(w == 0, 1.0 + 0j, out)


# ---------------------------------------------------------------------------
# coefficients


def _binomial_series(alpha: float, n_max: int) -> ConvexSeries:
    c = special.binom_abs(alpha, n_max)
    c[0] = 0.0
    tail = max(0.0, 1.0 - math.fsum(c))
    nf = NamedFunction("h_alpha", alpha=alpha)
    return ConvexSeries(c, tail, generator=lambda n: _binomial_series(alpha, n),
                        one_minus=nf.one_minus, label=f"h_alpha({alpha})", check=False,
                        tail_at=lambda n: _binomial_tail(alpha, n))


def _binomial_tail(alpha: float, n: int) -> float:
    # 1 - sum_{k<=n} |binom(alpha, k)| = |binom(alpha - 1, n)| for the sequence with c_0 = 0
    return float(special.binom_abs(alpha - 1.0, n)[-1])


def _zeta_series(alpha: float, n_max: int) -> ConvexSeries:
    c = np.zeros(n_max + 1)
    n = np.arange(1, n_max + 1, dtype=float)
    c[1:] = n ** (-(1.0 + alpha)) / special.zeta(1.0 + alpha)
    tail = max(0.0, 1.0 - math.fsum(c))
    nf = NamedFunction("zeta_L", alpha=alpha)
    return ConvexSeries(c, tail, generator=lambda m: _zeta_series(alpha, m),
                        one_minus=nf.one_minus, label=f"zeta_L({alpha})", check=False,
                        tail_at=lambda m: _zeta_tail(alpha, m))


def _zeta_tail(alpha: float, n: int) -> float:
    # sum_{k>n} k^-s / zeta(s) via the Euler-Maclaurin tail of the zeta sum
    s = 1.0 + alpha
    N = n + 1
    k = np.arange(N, N + 20, dtype=float)
    head = math.fsum(k ** (-s))
    M = N + 20
    rest = M ** (1 - s) / (s - 1) + 0.5 * M ** (-s) + s * M ** (-s - 1) / 12.0
    return (head + rest) / special.zeta(s)


def _g_eps_series(eps: float, n_max: int) -> SignedSeries:
    r = -eps / (2.0 + eps)
    c = np.empty(n_max + 1)
    c[0] = r
    if n_max >= 1:
        c[1:] = 4.0 / (2.0 + eps) ** 2 * r ** np.arange(n_max)
    # l1 mass beyond n_max: 4/(2+eps)^2 |r|^n_max / (1 - |r|)
    tail = 4.0 / (2.0 + eps) ** 2 * abs(r) ** n_max / (1.0 - abs(r))
    nf = NamedFunction("g_eps", eps=eps)
    return SignedSeries(c, tail, generator=lambda m: _g_eps_series(eps, m),
                        closed_form=nf.__call__, label=f"g_eps({eps})",
                        tail_at=lambda m: 4.0 / (2.0 + eps) ** 2 * abs(r) ** m / (1.0 - abs(r)))


def named_coeffs(nf: NamedFunction, n_max: int, n_nodes: int = DEFAULT_MEASURE_NODES):
    """Coefficients c_0..c_N of a disc family with the exact remaining mass."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    f = nf.family
    if f == "h_alpha":
        return _binomial_series(nf.alpha, n_max)
    if f == "zeta_L":
        return _zeta_series(nf.alpha, n_max)
    if f == "g_eps":
        return _g_eps_series(nf.eps, n_max)
    if f in ("h_eps", "h_one"):
        ser = hausdorff_coeffs(nf.hausdorff(n_nodes), n_max)
        ser.generator = lambda m: named_coeffs(nf, m, n_nodes)
        ser.one_minus = nf.one_minus
        ser.label = f if nf.param is None else f"{f}({nf.param})"
        return ser
    raise FunctionSpecError(f"{f} is not a disc family")


# ---------------------------------------------------------------------------
# measures by quadrature in the logit variable x = log((1 - s)/s)


def _log_sc(x: np.ndarray) -> np.ndarray:
    # log(s (1 - s)) with s = 1/(1 + e^x)
    return -np.logaddexp(0.0, x) - np.logaddexp(0.0, -x)


def _nu_density(family: str, param: Optional[float], x: np.ndarray) -> np.ndarray:
    """Density of nu with respect to dx (ds = s(1-s) dx already folded in)."""
    lsc = _log_sc(x)
    if family == "h_alpha":
        a = param
        return math.sin(math.pi * a) / math.pi * np.exp(a * x + lsc)
    if family == "h_eps":
        e = param
        num = np.exp(e * x + lsc) * (x * math.sin(math.pi * e) - math.pi * math.cos(math.pi * e))
        num = num + math.pi * np.exp(lsc)
        return num / (math.pi * e * (x * x + math.pi ** 2))
    if family == "h_one":
        comp = 1.0 / (1.0 + np.exp(-x))
        return comp / (x * x + math.pi ** 2)
    if family == "zeta_L":
        a = param
        norm = special.gamma(1.0 + a) * special.zeta(1.0 + a)
        return np.exp(a * np.log(np.logaddexp(0.0, x)) + lsc) / norm
    raise FunctionSpecError(f"no Hausdorff density for {family}")


@lru_cache(maxsize=64)
def _hausdorff_measure_cached(family: str, param: Optional[float], n_nodes: int):
    x, s, comp, w = special.logit_tan_rule(n_nodes)
    wt = w * _nu_density(family, param, x)
    keep = wt > 0
    return s[keep], wt[keep], comp[keep]


def _hausdorff_measure(family: str, param: Optional[float], n_nodes: int) -> HausdorffSpec:
    s, wt, comp = _hausdorff_measure_cached(family, param, int(n_nodes))
    label = family if param is None else f"{family}({param})"
    return HausdorffSpec(0.0, DiscreteMeasure(s.copy(), wt.copy(), complement=comp.copy()), label=label)


def _stieltjes_measure(family: str, alpha: Optional[float], n_nodes: int) -> StieltjesTriple:
    x, _, _, w = special.logit_tan_rule(n_nodes)
    t = np.exp(x)
    if family == "power":
        dens = math.sin(math.pi * alpha) / math.pi * np.exp(alpha * x)
    else:
        dens = (np.exp(x) + 1.0) / (x * x + math.pi ** 2)
    m = w * dens
    keep = m > 0
    label = family if alpha is None else f"{family}({alpha})"
    return StieltjesTriple(0.0, 0.0, DiscreteMeasure(t[keep], m[keep]), label=label)


# ---------------------------------------------------------------------------
# reference angles: half-angle of a sector at 0 known to contain 1 - h(D)

_REFERENCE = {
    "h_alpha": ("alpha*pi/2", "1 - h = (1 - lam)^alpha maps the disc into the alpha*pi/2 sector"),
    "zeta_L": ("alpha*pi/2", "sector bound for the normalized polylogarithm on the disc"),
    "h_eps": ("eps*pi/2", "average over a in (0, eps) of (1 - lam)^a"),
    "h_one": ("pi/3", "(lam - 1)/log(lam) maps the disc centred at 1 into the pi/3 sector"),
    "g_eps": ("pi/2", "1 - g_eps maps the disc into the right half-plane"),
}


def reference_angle(nf: NamedFunction) -> Optional[float]:
    f = nf.family
    if f in ("h_alpha", "zeta_L"):
        return nf.alpha * math.pi / 2
    if f == "h_eps":
        return nf.eps * math.pi / 2
    if f == "h_one":
        return math.pi / 3
    if f == "g_eps":
        return math.pi / 2
    return None


def reference_table() -> Dict[str, Dict[str, str]]:
    return {k: {"angle": v[0], "basis": v[1]} for k, v in sorted(_REFERENCE.items())}
