"""Dense complex matrix kernels: eigenvalues, operator norms, resolvents, powers.

Matrices are plain ``numpy`` complex arrays.  ``as_cmatrix`` is the single
gate that validates shape, size and finiteness; every public routine here
passes its input through it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

MAX_DIM = 256
_EPS = np.finfo(float).eps


class MatrixInputError(ValueError):
    """Malformed matrix payload (shape, size, non-finite entries)."""


class NumericalFailure(ArithmeticError):
    """An iteration or factorization could not deliver a trustworthy result."""


class ConvergenceError(NumericalFailure):
    pass


class SingularResolventError(NumericalFailure):
    def __init__(self, z: complex, detail: str = ""):
        self.z = complex(z)
        msg = f"zI - T is numerically singular at z={self.z!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PowerOverflowError(NumericalFailure):
    def __init__(self, power: int):
        self.power = int(power)
        super().__init__(f"matrix power T^{power} overflowed")


def as_cmatrix(a: Any, max_dim: int = MAX_DIM) -> np.ndarray:
    """Validate and convert to a square complex128 array."""
    arr = np.asarray(a)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise MatrixInputError(f"matrix must be square, got shape {arr.shape}")
    n = arr.shape[0]
    if n < 1 or n > max_dim:
        raise MatrixInputError(f"matrix dimension {n} outside 1..{max_dim}")
    arr = arr.astype(np.complex128)
    if not np.all(np.isfinite(arr)):
        raise MatrixInputError("matrix has non-finite entries")
    return arr


# ---------------------------------------------------------------------------
# eigenvalues


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    residual: float
    iterations: int
    method: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "re": [float(v) for v in self.eigenvalues.real],
            "im": [float(v) for v in self.eigenvalues.imag],
            "residual": float(self.residual),
            "iterations": int(self.iterations),
            "method": self.method,
        }


def hessenberg(a: np.ndarray) -> np.ndarray:
    """Householder reduction to upper Hessenberg form (similarity)."""
    h = np.array(a, dtype=np.complex128, copy=True)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        vn = np.linalg.norm(v)
        if vn == 0.0:
            continue
        v /= vn
        # H <- P H P with P = I - 2 v v^H acting on rows/cols k+1:
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _givens(a: complex, b: complex):
    """Return (c, s, r) with [[c, s], [-conj(s), c]] @ [a, b] = [r, 0], c real."""
    if b == 0:
        return 1.0, 0j, a
    if a == 0:
        return 0.0, complex(np.conj(b) / abs(b)), abs(b)
    na = abs(a)
    nrm = math.hypot(na, abs(b))
    c = na / nrm
    ph = a / na
    s = ph * np.conj(b) / nrm
    return c, s, ph * nrm


def _wilkinson_shift(h: np.ndarray, m: int) -> complex:
    a, b = h[m - 1, m - 1], h[m - 1, m]
    c, d = h[m, m - 1], h[m, m]
    tr = a + d
    det = a * d - b * c
    disc = np.sqrt(tr * tr / 4 - det)
    l1, l2 = tr / 2 + disc, tr / 2 - disc
    return l1 if abs(l1 - d) < abs(l2 - d) else l2


def _hqr_eigenvalues(h: np.ndarray, max_iter: int):
    n = h.shape[0]
    eig = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    total = 0
    since_deflation = 0
    while hi >= 0:
        if hi == 0:
            eig[0] = h[0, 0]
            break
        # locate the start of the trailing unreduced block
        lo = hi
        while lo > 0:
            sub = abs(h[lo, lo - 1])
            scale = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            if scale == 0.0:
                scale = np.linalg.norm(h[: hi + 1, : hi + 1], 1)
            if sub <= _EPS * scale:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eig[hi] = h[hi, hi]
            hi -= 1
            since_deflation = 0
            continue
        if total >= max_iter:
            raise ConvergenceError(
                f"shifted QR did not converge within {max_iter} iterations "
                f"({hi + 1} eigenvalues unresolved)"
            )
        total += 1
        since_deflation += 1
        if since_deflation % 11 == 0:
            # exceptional shift to break cycles
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1]) * np.exp(0.5j * since_deflation)
        else:
            mu = _wilkinson_shift(h, hi)
        blk = h[lo: hi + 1, lo: hi + 1]
        m = blk.shape[0]
        blk[np.diag_indices(m)] -= mu
        rots = []
        for k in range(m - 1):
            c, s, r = _givens(blk[k, k], blk[k + 1, k])
            rk = blk[k, k:].copy()
            rk1 = blk[k + 1, k:].copy()
            blk[k, k:] = c * rk + s * rk1
            blk[k + 1, k:] = -np.conj(s) * rk + c * rk1
            blk[k + 1, k] = 0.0
            rots.append((c, s))
        for k, (c, s) in enumerate(rots):
            top = min(k + 2, m - 1)
            ck = blk[: top + 1, k].copy()
            ck1 = blk[: top + 1, k + 1].copy()
            blk[: top + 1, k] = c * ck + np.conj(s) * ck1
            blk[: top + 1, k + 1] = -s * ck + c * ck1
        blk[np.diag_indices(m)] += mu
        h[lo: hi + 1, lo: hi + 1] = blk
    return eig, total


def _eig_residual(a: np.ndarray, eig: np.ndarray) -> float:
    """max ||A v - lam v|| / ||v|| with v from two steps of inverse iteration."""
    n = a.shape[0]
    scale = max(np.linalg.norm(a, 1), 1.0)
    rng = np.random.default_rng(12345)
    b0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    worst = 0.0
    eye = np.eye(n)
    for lam in eig:
        shifted = a - lam * eye + (1e3 * _EPS * scale) * eye
        try:
            v = np.linalg.solve(shifted, b0)
            v /= np.linalg.norm(v)
            v = np.linalg.solve(shifted, v)
        except np.linalg.LinAlgError:
            continue  # exactly singular: lam is an exact eigenvalue
        nv = np.linalg.norm(v)
        if not np.isfinite(nv) or nv == 0.0:
            continue
        v /= nv
        worst = max(worst, float(np.linalg.norm(a @ v - lam * v)))
    return worst


def spectrum(a: Any, tol: float = 1e-10, max_iter: Optional[int] = None,
             with_residual: bool = True) -> Spectrum:
    """Eigenvalues by Hessenberg reduction and Wilkinson-shifted complex QR.

    Triangular inputs short-circuit to their diagonal.  Raises
    ``ConvergenceError`` when the iteration cap is hit.
    """
    a = as_cmatrix(a)
    n = a.shape[0]
    if not np.any(np.tril(a, -1)) or not np.any(np.triu(a, 1)):
        eig = np.diag(a).copy()
        return Spectrum(eig, 0.0, 0, "triangular")
    if max_iter is None:
        max_iter = 60 * n
    h = hessenberg(a)
    eig, its = _hqr_eigenvalues(h, max_iter)
    res = _eig_residual(a, eig) if with_residual else float("nan")
    return Spectrum(eig, res, its, "hessenberg-qr")


def eigenvalues(a: Any) -> np.ndarray:
    return spectrum(a, with_residual=False).eigenvalues


# ---------------------------------------------------------------------------
# norms, resolvents, powers


def operator_norm(a: Any, tol: float = 1e-12, method: str = "svd") -> float:
    """Spectral norm ||A||_2.

    ``method="power"`` runs power iteration on A^H A from the normalized
    all-ones vector, capped at ``10 n log(1/tol)`` steps; ``"svd"`` uses the
    LAPACK singular values.
    """
    a = as_cmatrix(a)
    if method == "svd":
        return float(np.linalg.norm(a, 2))
    if method != "power":
        raise ValueError(f"unknown norm method {method!r}")
    n = a.shape[0]
    ah = a.conj().T
    x = np.ones(n, dtype=np.complex128) / math.sqrt(n)
    cap = max(10, int(math.ceil(10 * n * math.log(1.0 / tol))))
    est = 0.0
    for _ in range(cap):
        y = ah @ (a @ x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            # ones vector in the kernel; restart from a fixed generic vector
            x = np.exp(1j * np.arange(n)) / math.sqrt(n)
            y = ah @ (a @ x)
            ny = np.linalg.norm(y)
            if ny == 0.0:
                return 0.0
        new = math.sqrt(ny)
        x = y / ny
        if abs(new - est) <= tol * new:
            return float(new)
        est = new
    return float(est)


def batched_norms(mats: np.ndarray) -> np.ndarray:
    """Spectral norms of a stack of matrices of shape (k, n, n)."""
    if mats.shape[-1] == 1:
        return np.abs(mats[:, 0, 0])
    return np.linalg.norm(mats, 2, axis=(-2, -1))


def resolvent(a: Any, z: complex, rcond: float = 1e-14) -> np.ndarray:
    """(zI - A)^{-1} by LU solve; singular z raises ``SingularResolventError``."""
    a = as_cmatrix(a)
    n = a.shape[0]
    m = complex(z) * np.eye(n) - a
    try:
        r = np.linalg.solve(m, np.eye(n, dtype=np.complex128))
    except np.linalg.LinAlgError as exc:
        raise SingularResolventError(z, str(exc)) from None
    if not np.all(np.isfinite(r)):
        raise SingularResolventError(z, "non-finite solve")
    if np.linalg.norm(m, 1) * np.linalg.norm(r, 1) * rcond > 1.0:
        raise SingularResolventError(z, "condition number exceeds 1/rcond")
    return r


def resolvent_norms(a: Any, zs: Sequence[complex]) -> np.ndarray:
    """||(zI - A)^{-1}|| for many z at once; +inf where singular."""
    a = as_cmatrix(a)
    zs = np.asarray(zs, dtype=np.complex128).ravel()
    n = a.shape[0]
    if zs.size == 0:
        return np.zeros(0)
    diag = not np.any(a - np.diag(np.diag(a)))
    if diag:
        d = np.diag(a)
        with np.errstate(divide="ignore"):
            return 1.0 / np.min(np.abs(zs[:, None] - d[None, :]), axis=1)
    out = np.empty(zs.size)
    eye = np.eye(n)
    chunk = max(1, 2 ** 20 // (n * n))
    for i in range(0, zs.size, chunk):
        zz = zs[i: i + chunk]
        m = zz[:, None, None] * eye[None] - a[None]
        # smallest singular value of zI - A gives the resolvent norm
        sv = np.linalg.svd(m, compute_uv=False)
        smin = sv[:, -1]
        with np.errstate(divide="ignore"):
            out[i: i + chunk] = np.where(smin > 0, 1.0 / smin, np.inf)
    return out


def mat_power_seq(a: Any, n_max: int) -> np.ndarray:
    """Stack [A^0, ..., A^N]; raises ``PowerOverflowError`` at the first bad power."""
    a = as_cmatrix(a)
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    n = a.shape[0]
    out = np.empty((n_max + 1, n, n), dtype=np.complex128)
    out[0] = np.eye(n)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n_max + 1):
            out[k] = out[k - 1] @ a
            if not np.all(np.isfinite(out[k])):
                raise PowerOverflowError(k)
    return out


# ---------------------------------------------------------------------------
# JSON


def matrix_to_json(a: Any) -> Dict[str, Any]:
    a = as_cmatrix(a)
    return {
        "n": int(a.shape[0]),
        "re": [[float(v) for v in row] for row in a.real],
        "im": [[float(v) for v in row] for row in a.imag],
    }


def matrix_from_json(payload: Any) -> np.ndarray:
    if isinstance(payload, (str, bytes)):
        payload = json.loads(payload)
    if not isinstance(payload, dict) or "re" not in payload:
        raise MatrixInputError("matrix payload needs keys 'n', 're' and optionally 'im'")
    try:
        re = np.asarray(payload["re"], dtype=float)
        im = np.asarray(payload.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise MatrixInputError(f"matrix entries are not numeric: {exc}") from None
    if re.shape != im.shape:
        raise MatrixInputError("'re' and 'im' shapes differ")
    n = payload.get("n", re.shape[0] if re.ndim else 0)
    if re.ndim != 2 or re.shape != (n, n):
        raise MatrixInputError(f"expected an {n}x{n} matrix, got shape {re.shape}")
    return as_cmatrix(re + 1j * im)


def cyclic_shift(n: int) -> np.ndarray:
    """Permutation matrix sending e_k to e_{k+1 mod n}."""
    return np.roll(np.eye(n, dtype=np.complex128), 1, axis=0)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


__all__: List[str] = [
    "MAX_DIM", "MatrixInputError", "NumericalFailure", "ConvergenceError",
    "SingularResolventError", "PowerOverflowError", "as_cmatrix", "Spectrum",
    "hessenberg", "spectrum", "eigenvalues", "operator_norm", "batched_norms",
    "resolvent", "resolvent_norms", "mat_power_seq", "matrix_to_json",
    "matrix_from_json", "cyclic_shift", "random_unitary",
]
