"""FunctionSpec: JSON parsing and uniform evaluation over the function kinds."""

from __future__ import annotations

import json
from typing import Any, Callable, Union

import numpy as np

from .measures import (DiscreteMeasure, HausdorffSpec, NPPlusRep, StieltjesTriple,
                       cbf_eval, hausdorff_eval, hausdorff_one_minus, np_eval)
from .named import NamedFunction
from .series import ConvexSeries, FunctionSpecError, SignedSeries, convex_eval, convex_one_minus

FunctionSpec = Union[ConvexSeries, SignedSeries, HausdorffSpec, StieltjesTriple, NPPlusRep, NamedFunction]


def spec_from_json(payload: Any) -> FunctionSpec:
    if isinstance(payload, (str, bytes)):
        payload = json.loads(payload)
    if not isinstance(payload, dict):
        raise FunctionSpecError("function spec must be a JSON object")
    kind = payload.get("kind")
    try:
        if kind == "named":
            return NamedFunction(payload["family"], alpha=_opt(payload, "alpha"), eps=_opt(payload, "eps"))
        if kind == "convex":
            return ConvexSeries(np.asarray(payload["coeffs"], dtype=float),
                                float(payload.get("tail_mass", 0.0)))
        if kind == "signed":
            return SignedSeries(np.asarray(payload["coeffs"], dtype=float),
                                float(payload.get("l1_tail", 0.0)))
        if kind == "hausdorff":
            return HausdorffSpec(float(payload.get("c0", 0.0)), DiscreteMeasure.from_json(payload["nu"]))
        if kind == "stieltjes":
            return StieltjesTriple(float(payload.get("a", 0.0)), float(payload.get("b", 0.0)),
                                   DiscreteMeasure.from_json(payload["mu"]))
        if kind == "np_plus":
            return NPPlusRep(float(payload.get("a", 0.0)), float(payload.get("b", 0.0)),
                             DiscreteMeasure.from_json(payload["rho"]),
                             float(payload.get("theta1", np.pi / 2)),
                             float(payload.get("theta2", np.pi / 2)))
    except KeyError as exc:
        raise FunctionSpecError(f"function spec of kind {kind!r} is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, FunctionSpecError):
            raise
        raise FunctionSpecError(f"bad function spec: {exc}") from None
    raise FunctionSpecError(f"unknown function spec kind {kind!r}")


def _opt(p, key):
    v = p.get(key)
    return None if v is None else float(v)


def spec_to_json(spec: FunctionSpec) -> Any:
    return spec.to_json()


def is_disc_function(spec: FunctionSpec) -> bool:
    if isinstance(spec, NamedFunction):
        return spec.is_disc
    return isinstance(spec, (ConvexSeries, SignedSeries, HausdorffSpec))


def disc_evaluator(spec: FunctionSpec) -> Callable[[np.ndarray], np.ndarray]:
    """lam -> h(lam) on the closed disc."""
    if isinstance(spec, NamedFunction) and spec.is_disc:
        return spec
    if isinstance(spec, (ConvexSeries, SignedSeries)):
        return lambda z: convex_eval(spec, z)
    if isinstance(spec, HausdorffSpec):
        return lambda z: hausdorff_eval(spec, z)
    raise FunctionSpecError(f"{type(spec).__name__} is not a function on the disc")


def one_minus_evaluator(spec: FunctionSpec) -> Callable[[np.ndarray], np.ndarray]:
    """lam -> 1 - h(lam), computed stably where the representation allows."""
    if isinstance(spec, NamedFunction) and spec.is_disc:
        return spec.one_minus
    if isinstance(spec, ConvexSeries):
        return lambda z: convex_one_minus(spec, z)
    if isinstance(spec, HausdorffSpec):
        return lambda z: hausdorff_one_minus(spec, z)
    if isinstance(spec, SignedSeries):
        return lambda z: 1.0 - convex_eval(spec, z)
    raise FunctionSpecError(f"{type(spec).__name__} is not a function on the disc")


def half_plane_evaluator(spec: FunctionSpec) -> Callable[[np.ndarray], np.ndarray]:
    """lam -> F(lam) for functions on the right half-plane (or a larger sector)."""
    if isinstance(spec, NamedFunction) and not spec.is_disc:
        return spec
    if isinstance(spec, StieltjesTriple):
        return lambda z: cbf_eval(spec, z)
    if isinstance(spec, NPPlusRep):
        return lambda z: np_eval(spec, z)
    raise FunctionSpecError(f"{type(spec).__name__} is not a half-plane function")
