"""Planar regions around the point 1: Stolz domains, sectors, discs, Cayley map."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

ArrayLike = Union[complex, float, np.ndarray]

KINDS = ("stolz", "sector", "shifted_sector", "unit_disc", "disc1", "omega_q")


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class RegionSpec:
    """kind in KINDS; param is sigma (stolz), the half-angle (sectors) or q (omega_q)."""

    kind: str
    param: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RegionError(f"unknown region kind {self.kind!r}")
        p = self.param
        if self.kind == "stolz":
            if p is None or not p >= 1.0:
                raise RegionError("stolz parameter sigma must be >= 1")
        elif self.kind in ("sector", "shifted_sector"):
            if p is None or not 0.0 <= p <= math.pi:
                raise RegionError("sector half-angle must lie in [0, pi]")
        elif self.kind == "omega_q":
            if p is None or not 0.0 < p <= 1.0:
                raise RegionError("omega_q parameter must lie in (0, 1]")

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "param": self.param}

    @classmethod
    def from_json(cls, payload: Any) -> "RegionSpec":
        if isinstance(payload, (str, bytes)):
            payload = json.loads(payload)
        try:
            kind = payload["kind"]
        except (KeyError, TypeError):
            raise RegionError("region payload needs a 'kind'") from None
        param = payload.get("param")
        return cls(kind, None if param is None else float(param))


def stolz_index(z: ArrayLike) -> ArrayLike:
    """|1 - z| / (1 - |z|); 1 at z = 1 and +inf for |z| >= 1, z != 1."""
    zz = np.asarray(z, dtype=np.complex128)
    d = np.abs(1.0 - zz)
    gap = 1.0 - np.abs(zz)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(gap > 0, d / np.where(gap > 0, gap, 1.0), np.inf)
    out = np.where(zz == 1.0, 1.0, out)
    return float(out) if out.ndim == 0 else out


def min_distance_ratio(z: ArrayLike) -> ArrayLike:
    """min over the unit circle of |z - e^{i phi}| / |1 - e^{i phi}|."""
    zz = np.asarray(z, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (1.0 - np.abs(zz) ** 2) / (2.0 * np.abs(1.0 - zz))
    return float(out) if out.ndim == 0 else out


def cayley(z: ArrayLike) -> ArrayLike:
    """(1 - z) / (1 + z); an involution of the Riemann sphere."""
    zz = np.asarray(z, dtype=np.complex128)
    if np.any(zz == -1.0):
        raise RegionError("Cayley transform is undefined at -1")
    out = (1.0 - zz) / (1.0 + zz)
    return complex(out) if out.ndim == 0 else out


cayley_inv = cayley


def sector_angle(z: ArrayLike) -> ArrayLike:
    """|arg z|, with 0 at z = 0."""
    zz = np.asarray(z, dtype=np.complex128)
    out = np.abs(np.angle(zz))
    return float(out) if out.ndim == 0 else out


def contains(region: RegionSpec, z: ArrayLike, strict: bool = False,
             tol: float = 0.0) -> Union[bool, np.ndarray]:
    """Membership in the closure of ``region`` (interior when ``strict``)."""
    zz = np.asarray(z, dtype=np.complex128)
    k, p = region.kind, region.param
    if k == "unit_disc":
        r = np.abs(zz)
        out = r < 1.0 + tol if strict else r <= 1.0 + tol
    elif k == "disc1":
        r = np.abs(zz - 1.0)
        out = r < 1.0 + tol if strict else r <= 1.0 + tol
    elif k in ("sector", "shifted_sector"):
        w = zz if k == "sector" else 1.0 - zz
        ang = np.abs(np.angle(w))
        if strict:
            out = (ang < p + tol) & (w != 0)
        else:
            out = (ang <= p + tol) | (w == 0)
    elif k == "stolz":
        idx = stolz_index(zz)
        if strict:
            out = (np.asarray(idx) < p + tol) & (np.abs(zz) < 1.0)
        else:
            out = np.asarray(idx) <= p + tol
        out = out | (zz == 1.0)
    else:  # omega_q
        inside = np.abs(zz) < 1.0
        ratio = np.asarray(min_distance_ratio(zz))
        out = inside & ((ratio > p - tol) if strict else (ratio >= p - tol))
    out = np.asarray(out)
    return bool(out) if out.ndim == 0 else out


def stolz_to_sector_angle(sigma: float) -> float:
    """Half-angle omega = arccos(1/sigma) of the sector at 1 enclosing S_sigma."""
    if not sigma >= 1.0:
        raise RegionError("sigma must be >= 1")
    return math.acos(1.0 / sigma)


def stolz_boundary_radius(sigma: float, alpha: ArrayLike) -> ArrayLike:
    """rho with 1 - rho e^{i alpha} on the boundary of S_sigma (|alpha| < arccos(1/sigma))."""
    a = np.asarray(alpha, dtype=float)
    rho = 2.0 * sigma * (sigma * np.cos(a) - 1.0) / (sigma * sigma - 1.0)
    return np.maximum(rho, 0.0)


@dataclass(frozen=True)
class SectorGeometry:
    omega: float
    omega0: float
    theta: Optional[float] = None
    theta0: Optional[float] = None

    def to_json(self) -> Dict[str, Any]:
        return {"omega": self.omega, "omega0": self.omega0,
                "theta": self.theta, "theta0": self.theta0}


def cbf_sector_geometry(omega: float, theta: Optional[float] = None) -> SectorGeometry:
    """Extension angles for a CBF with psi(C_+) inside the closed sector of angle omega.

    omega0 in (pi/2, pi) solves |cos omega0| = cot(omega) / (cot(omega) + 1);
    for theta in (pi/2, omega0) the image of the theta-sector lies in the
    theta0-sector with cot(theta0) = (cot omega - (cot omega + 1)|cos theta|) / sin theta.
    """
    if not 0.0 < omega < math.pi / 2:
        raise RegionError("omega must lie in (0, pi/2)")
    cot = 1.0 / math.tan(omega)
    omega0 = math.pi - math.acos(cot / (cot + 1.0))
    if theta is None:
        return SectorGeometry(omega, omega0)
    if not math.pi / 2 < theta < omega0:
        raise RegionError(f"theta must lie in (pi/2, {omega0})")
    cot0 = (cot - (cot + 1.0) * abs(math.cos(theta))) / math.sin(theta)
    theta0 = math.atan2(1.0, cot0)
    return SectorGeometry(omega, omega0, theta, theta0)


def sum_lower_bound_factor(gamma: float, beta: float) -> float:
    """cos((gamma + beta)/2): |z + lam| >= factor (|z| + |lam|) on two sectors."""
    return math.cos(0.5 * (gamma + beta))


def sample_stolz(sigma: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples from S_sigma by rejection from the unit disc."""
    out = []
    need = n
    while need > 0:
        m = max(4 * need, 64)
        r = np.sqrt(rng.random(m))
        z = r * np.exp(2j * math.pi * rng.random(m))
        keep = z[np.asarray(stolz_index(z)) < sigma]
        out.append(keep[:need])
        need -= len(keep[:need])
    return np.concatenate(out)


def sample_sector(half_angle: float, n: int, rng: np.random.Generator,
                  rmin: float = 1e-3, rmax: float = 1e3) -> np.ndarray:
    """Points of the closed sector with log-uniform moduli."""
    r = np.exp(rng.uniform(math.log(rmin), math.log(rmax), n))
    a = rng.uniform(-half_angle, half_angle, n)
    return r * np.exp(1j * a)


def unit_disc_points(r: ArrayLike, theta: ArrayLike) -> np.ndarray:
    return np.asarray(r) * np.exp(1j * np.asarray(theta))


def disc_polar(z: complex) -> Tuple[float, float]:
    return abs(z), math.atan2(z.imag, z.real)
