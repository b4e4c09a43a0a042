"""Gamma, Riemann zeta and Gauss-Legendre helpers used by the function classes."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Tuple

import numpy as np

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients)
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Gamma function for real x (poles at non-positive integers raise)."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError(f"gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def log_gamma(x: float) -> float:
    """log|Gamma(x)| for real x."""
    x = float(x)
    if x < 0.5:
        return math.log(math.pi / abs(math.sin(math.pi * x))) - log_gamma(1.0 - x)
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (x + 0.5) * math.log(t) - t + math.log(acc)


# Bernoulli numbers B_2, B_4, ..., B_24
_B2K = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
    -3617 / 510, 43867 / 798, -174611 / 330, 854513 / 138, -236364091 / 2730,
)


def _zeta_em(s: float, n_terms: int = 20) -> float:
    # Euler-Maclaurin: sum_{k<N} k^-s + N^{1-s}/(s-1) + N^-s/2 + Bernoulli corrections
    N = n_terms
    k = np.arange(1, N, dtype=float)
    total = math.fsum(k ** (-s))
    total += N ** (1.0 - s) / (s - 1.0) + 0.5 * N ** (-s)
    rising = s  # s (s+1) ... (s+2j-2)
    power = N ** (-s - 1.0)
    fact = 2.0
    for j, b in enumerate(_B2K, start=1):
        term = b / fact * rising * power
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= N * N
        fact *= (2 * j + 1) * (2 * j + 2)
    return total


def zeta(s: float) -> float:
    """Riemann zeta for real s != 1 (Euler-Maclaurin, reflection for s < 0)."""
    s = float(s)
    if s == 1.0:
        raise ValueError("zeta has a pole at s=1")
    if s < 0.0:
        if s == math.floor(s) and int(s) % 2 == 0:
            return 0.0
        # zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
        lg = log_gamma(1.0 - s)
        mag = s * math.log(2.0) + (s - 1.0) * math.log(math.pi) + lg
        sign = math.copysign(1.0, math.sin(math.pi * s / 2.0))
        if gamma_sign(1.0 - s) < 0:
            sign = -sign
        return sign * abs(math.sin(math.pi * s / 2.0)) * math.exp(mag) * zeta(1.0 - s)
    return _zeta_em(s)


def gamma_sign(x: float) -> float:
    if x > 0:
        return 1.0
    return -1.0 if int(math.floor(x)) % 2 else 1.0


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_interval(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def binom_abs(alpha: float, n_max: int) -> np.ndarray:
    """|binom(alpha, n)| for n = 0..n_max via the ratio recurrence."""
    n = np.arange(n_max, dtype=float)
    ratios = np.abs((alpha - n) / (n + 1.0))
    out = np.empty(n_max + 1)
    out[0] = 1.0
    out[1:] = np.cumprod(ratios)
    return out


def logit_tan_rule(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Quadrature for measures on (0, 1) expressed in x = log((1-s)/s).

    Uses x = pi tan(phi) on Gauss-Legendre nodes in phi, which turns the
    algebraic and logarithmic endpoint behaviour of the named densities into
    smooth integrands.  Returns (x, s, 1-s, w) with sum w g(x) ~ int g dx.
    """
    u, wu = gauss_legendre(n)
    phi = 0.5 * math.pi * u
    x = np.clip(math.pi * np.tan(phi), -600.0, 600.0)
    w = 0.5 * math.pi * wu * (math.pi + x * x / math.pi)
    s = 1.0 / (1.0 + np.exp(x))
    comp = 1.0 / (1.0 + np.exp(-x))
    return x, s, comp, w
