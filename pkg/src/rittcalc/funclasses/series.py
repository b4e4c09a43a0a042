"""Power series on the closed unit disc with summable coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional

import numpy as np


class FunctionSpecError(ValueError):
    """Malformed or inconsistent function description."""


Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass
class ConvexSeries:
    """h(lam) = sum c_n lam^n with c_n >= 0 and sum c_n = 1.

    ``coeffs`` holds c_0..c_N; ``tail_mass`` is the coefficient mass beyond
    N.  ``generator(N)`` (optional) returns the same function truncated at
    a longer N, ``tail_at(N)`` (optional) predicts the mass beyond N without
    building coefficients, and ``one_minus`` (optional) evaluates 1 - h
    exactly.
    """

    coeffs: np.ndarray
    tail_mass: float = 0.0
    generator: Optional[Callable[[int], "ConvexSeries"]] = None
    one_minus: Optional[Evaluator] = None
    label: str = ""
    check: bool = True
    tail_at: Optional[Callable[[int], float]] = None

    def __post_init__(self):
        self.coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        self.tail_mass = float(self.tail_mass)
        if not np.all(np.isfinite(self.coeffs)):
            raise FunctionSpecError("series coefficients must be finite")
        if self.check:
            if np.any(self.coeffs < 0) or self.tail_mass < 0:
                raise FunctionSpecError("convex series coefficients must be non-negative")
            total = math.fsum(self.coeffs) + self.tail_mass
            if abs(total - 1.0) > 1e-12 * max(1.0, len(self.coeffs) ** 0.5):
                raise FunctionSpecError(f"convex series coefficients sum to {total!r}, not 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def l1_tail(self, n: Optional[int] = None) -> float:
        """l1 mass of coefficients with index > n (default: stored truncation)."""
        if n is None or n >= self.degree:
            return self.tail_mass
        return math.fsum(self.coeffs[n + 1:]) + self.tail_mass

    def extend(self, n: int) -> "ConvexSeries":
        if n <= self.degree or self.generator is None:
            return self
        return self.generator(n)

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "convex", "coeffs": [float(c) for c in self.coeffs],
                "tail_mass": self.tail_mass}

    @classmethod
    def from_coeffs(cls, coeffs, normalize: bool = True, label: str = "") -> "ConvexSeries":
        c = np.asarray(coeffs, dtype=float)
        if normalize:
            c = c / math.fsum(c)
        return cls(c, 0.0, label=label)


@dataclass
class SignedSeries:
    """sum c_n lam^n with real coefficients of finite l1 norm."""

    coeffs: np.ndarray
    l1_tail_mass: float = 0.0
    generator: Optional[Callable[[int], "SignedSeries"]] = None
    closed_form: Optional[Evaluator] = None
    label: str = ""
    tail_at: Optional[Callable[[int], float]] = None

    def __post_init__(self):
        self.coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if not np.all(np.isfinite(self.coeffs)):
            raise FunctionSpecError("series coefficients must be finite")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def l1_norm(self) -> float:
        return math.fsum(np.abs(self.coeffs)) + self.l1_tail_mass

    def l1_tail(self, n: Optional[int] = None) -> float:
        if n is None or n >= self.degree:
            return self.l1_tail_mass
        return math.fsum(np.abs(self.coeffs[n + 1:])) + self.l1_tail_mass

    def extend(self, n: int) -> "SignedSeries":
        if n <= self.degree or self.generator is None:
            return self
        return self.generator(n)

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "signed", "coeffs": [float(c) for c in self.coeffs],
                "l1_tail": self.l1_tail_mass}


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def convex_eval(c, lam, tol: float = 1e-12, exact: bool = True):
    """sum c_n lam^n on the closed disc (Horner on the stored coefficients).

    With ``exact`` and an attached closed form the closed form is used, so
    the truncated tail does not bias the value.
    """
    z = np.asarray(lam, dtype=np.complex128)
    if np.any(np.abs(z) > 1.0 + tol):
        raise FunctionSpecError("series evaluated outside the closed unit disc")
    if exact and isinstance(c, ConvexSeries) and c.one_minus is not None:
        out = 1.0 - c.one_minus(z)
    elif exact and isinstance(c, SignedSeries) and c.closed_form is not None:
        out = c.closed_form(z)
    else:
        out = _horner(c.coeffs, z)
    return complex(out) if np.ndim(out) == 0 else out


def convex_one_minus(c: ConvexSeries, lam, exact: bool = True):
    """1 - h(lam) without the cancellation of forming h first.

    For the stored polynomial: 1 - h_N(w) = tail + (1 - w) sum_k d_k w^k with
    d_k = sum_{n > k} c_n.
    """
    z = np.asarray(lam, dtype=np.complex128)
    if exact and c.one_minus is not None:
        out = c.one_minus(z)
    else:
        d = np.cumsum(c.coeffs[::-1])[::-1][1:]  # d_k for k = 0..N-1
        out = c.tail_mass + (1.0 - z) * _horner(d, z) if len(d) else c.tail_mass + 0 * z
    return complex(out) if np.ndim(out) == 0 else out


def bold_h_eval(c: ConvexSeries, lam, exact: bool = True):
    """1 - h((1 - lam)/(1 + lam)) on the closed right half-plane."""
    z = np.asarray(lam, dtype=np.complex128)
    w = (1.0 - z) / (1.0 + z)
    if exact and c.one_minus is not None:
        out = c.one_minus(w)
    else:
        d = np.cumsum(c.coeffs[::-1])[::-1][1:]
        one_minus_w = 2.0 * z / (1.0 + z)
        out = c.tail_mass + one_minus_w * (_horner(d, w) if len(d) else 0.0)
    return complex(out) if np.ndim(out) == 0 else out


def bold_h_deriv(c: ConvexSeries, lam):
    """Derivative 2 h'((1-lam)/(1+lam)) / (1+lam)^2 of the stored polynomial."""
    z = np.asarray(lam, dtype=np.complex128)
    w = (1.0 - z) / (1.0 + z)
    n = np.arange(1, len(c.coeffs))
    dc = c.coeffs[1:] * n
    out = 2.0 * _horner(dc, w) / (1.0 + z) ** 2 if len(dc) else 0 * z
    return complex(out) if np.ndim(out) == 0 else out
