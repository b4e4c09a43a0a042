"""Smallest sector at 0 containing 1 - h(D), estimated by deterministic sampling."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.stats import qmc

from .spec import FunctionSpec, one_minus_evaluator


@dataclass(frozen=True)
class SamplingConfig:
    """Disc sample layout.

    Circles at radii 1 - 2^-k (k = 1..depth) each carry a uniform grid of
    ``angles`` points plus +-pi 2^(-j/4) for j = 1..cluster (points hugging
    lam = 1); ``interior`` Halton points fill the disc.  ``refine`` returns a
    superset layout.
    """

    depth: int = 30
    angles: int = 2048
    cluster: int = 120
    interior: int = 25000

    @classmethod
    def with_total(cls, n: int) -> "SamplingConfig":
        depth, cluster = 30, 120
        per_circle_target = max(8, int(0.7 * n) // depth - 2 * cluster)
        angles = max(8, per_circle_target)
        interior = max(0, n - depth * (angles + 2 * cluster))
        return cls(depth, angles, cluster, interior)

    def refine(self) -> "SamplingConfig":
        return SamplingConfig(self.depth + 4, 2 * self.angles, self.cluster + 8, 2 * self.interior)

    @property
    def size(self) -> int:
        return self.depth * (self.angles + 2 * self.cluster) + self.interior

    @property
    def max_radius(self) -> float:
        return 1.0 - 2.0 ** (-self.depth)


def disc_samples(cfg: SamplingConfig) -> np.ndarray:
    radii = 1.0 - 2.0 ** (-np.arange(1, cfg.depth + 1, dtype=float))
    grid = 2.0 * math.pi * np.arange(cfg.angles) / cfg.angles
    near = math.pi * 2.0 ** (-np.arange(1, cfg.cluster + 1) / 4.0)
    ang = np.concatenate([grid, near, -near])
    circ = (radii[:, None] * np.exp(1j * ang)[None, :]).ravel()
    if cfg.interior:
        h = qmc.Halton(d=2, scramble=False).random(cfg.interior + 1)[1:]
        inner = np.sqrt(h[:, 0]) * np.exp(2j * math.pi * h[:, 1])
        return np.concatenate([circ, inner])
    return circ


@dataclass
class SectorEstimate:
    gamma_hat: float
    n_samples: int
    max_radius: float
    argmax: complex
    seconds: float
    reference: Optional[float] = None

    def to_json(self) -> Dict[str, Any]:
        out = asdict(self)
        out["argmax"] = {"re": self.argmax.real, "im": self.argmax.imag}
        return out


def min_covering_sector(f: FunctionSpec, samples: int = 100_000,
                        config: Optional[SamplingConfig] = None) -> SectorEstimate:
    """gamma_hat = max |arg(1 - f(lam))| over a deterministic disc sample.

    A lower estimate of the least gamma with 1 - f(D) in the closed
    gamma-sector; it is nondecreasing under ``SamplingConfig.refine``.
    """
    t0 = time.perf_counter()
    cfg = config or SamplingConfig.with_total(samples)
    z = disc_samples(cfg)
    g = one_minus_evaluator(f)
    w = np.asarray(g(z))
    ang = np.where(w == 0, 0.0, np.abs(np.angle(w)))
    ang = np.where(np.isfinite(ang), ang, 0.0)
    i = int(np.argmax(ang))
    ref = None
    if hasattr(f, "reference_angle"):
        ref = f.reference_angle()
    return SectorEstimate(float(ang[i]), int(z.size), cfg.max_radius, complex(z[i]),
                          time.perf_counter() - t0, ref)
