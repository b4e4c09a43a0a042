"""Command-line front end.

  rittcalc analyze T.json
  rittcalc apply T.json f.json
  rittcalc improve-check f.json
  rittcalc demo-angle-growth --phi 0.5236 --delta 0.5
  rittcalc verify all

Matrices are JSON objects {"n": n, "re": [[...]], "im": [[...]]}; function
specs are JSON objects with a "kind" key (see README).  Exit codes: 0 ok,
2 bad input, 3 numerical failure, 4 a verification clause failed.
"""

from __future__ import annotations

import os
import sys

# the thread cap has to be in the environment before numpy loads its BLAS
_THREADS = os.environ.get("RITT_CALC_THREADS")
if _THREADS and _THREADS.isdigit() and int(_THREADS) > 0:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _THREADS)

import argparse  # noqa: E402
import csv  # noqa: E402
import io  # noqa: E402
import json  # noqa: E402
import math  # noqa: E402
from typing import Any, Dict, List, Optional  # noqa: E402

import numpy as np  # noqa: E402

from . import linalg  # noqa: E402
from .diagnostics.estimates import (AnalyzeConfig, analyze, finite_or_str,  # noqa: E402
                                    ritt_constant_estimate)
from .diagnostics.suites import SUITE_NAMES, run_suite  # noqa: E402
from .diagnostics.verify import (VerifyConfig, as_hausdorff, angle_growth_demo,  # noqa: E402
                                 apply_function, epsilon_scenario, growth_diagonal,
                                 verify_improving, verify_subordination)
from .funclasses.named import reference_table  # noqa: E402
from .funclasses.sectors import min_covering_sector  # noqa: E402
from .funclasses.series import ConvexSeries, FunctionSpecError  # noqa: E402
from .funclasses.spec import is_disc_function, spec_from_json  # noqa: E402
from .linalg import MatrixInputError, NumericalFailure  # noqa: E402
from .opcalc import AdmissibilityError, ContourError, power_bound_proxy  # noqa: E402
from .regions import RegionError  # noqa: E402

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_VERIFY = 0, 2, 3, 4


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# I/O


def _read_json(path: str, what: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        ctx = lines[exc.lineno - 1] if 0 < exc.lineno <= len(lines) else ""
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {ctx}") from None


def load_matrix(path: str) -> np.ndarray:
    payload = _read_json(path, "matrix")
    try:
        return linalg.matrix_from_json(payload)
    except MatrixInputError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_function(path: str):
    payload = _read_json(path, "function spec")
    try:
        return spec_from_json(payload)
    except FunctionSpecError as exc:
        raise InputError(f"{path}: {exc}") from None


def dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _samples_csv(z: np.ndarray, v: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["z_re", "z_im", "abs_z_minus_1", "scaled_resolvent_norm"])
    for zz, vv in zip(z, v):
        w.writerow([repr(float(zz.real)), repr(float(zz.imag)), repr(float(abs(zz - 1.0))),
                    repr(float(vv))])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# config from flags


def _parse_radii(text: Optional[str]) -> Optional[List[float]]:
    if not text:
        return None
    try:
        radii = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--radii expects comma-separated numbers, got {text!r}") from None
    if not radii or any(not r > 1.0 for r in radii):
        raise InputError("--radii values must all exceed 1")
    return radii


def _check_positive(args: argparse.Namespace) -> None:
    for name in ("tol", "grid_nodes", "samples", "n_grid", "N"):
        v = getattr(args, name, None)
        if v is not None and not v > 0:
            raise InputError(f"--{name.replace('_', '-')} must be positive")


def analyze_config(args: argparse.Namespace) -> AnalyzeConfig:
    return AnalyzeConfig(N=args.N, radii=_parse_radii(args.radii),
                         angular_nodes=args.grid_nodes or 256, tol=args.tol)


def verify_config(args: argparse.Namespace) -> VerifyConfig:
    return VerifyConfig(tol=args.tol, radii=_parse_radii(args.radii),
                        angular_nodes=args.grid_nodes or 128,
                        samples=getattr(args, "samples", None) or 100_000)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args: argparse.Namespace) -> int:
    T = load_matrix(args.matrix)
    cfg = analyze_config(args)
    if args.format == "csv":
        rc = ritt_constant_estimate(T, cfg.radii, cfg.angular_nodes, cfg.rounds, keep_samples=True)
        _emit(_samples_csv(rc.samples, rc.values), args.out)
        return EXIT_OK
    report = analyze(T, cfg)
    _emit(dump_json({"command": "analyze", "input": args.matrix, "report": report.to_json()}), args.out)
    return EXIT_OK


def _is_ritt_candidate(T: np.ndarray, one_tol: float) -> bool:
    """Spectrum in the closed disc touching the circle only at 1."""
    ev = linalg.eigenvalues(T)
    r = np.abs(ev)
    if np.any(r > 1.0 + one_tol):
        return False
    contact = (np.abs(r - 1.0) <= one_tol) & (np.abs(ev - 1.0) > one_tol)
    return not bool(np.any(contact))


def cmd_apply(args: argparse.Namespace) -> int:
    T = load_matrix(args.matrix)
    f = load_function(args.function)
    if not is_disc_function(f):
        raise InputError(f"{args.function}: apply needs a function on the disc, got {type(f).__name__}")
    vcfg = verify_config(args)
    acfg = analyze_config(args)
    out: Dict[str, Any] = {"command": "apply", "input": {"matrix": args.matrix, "function": args.function},
                           "function": f.to_json()}
    verifications = []
    is_hausdorff = as_hausdorff(f) is not None
    # regular Hausdorff coefficients are non-negative and sum to 1, so they are convex too
    is_convex = isinstance(f, ConvexSeries) or is_hausdorff
    if not (is_convex or is_hausdorff):
        raise InputError(f"{args.function}: apply needs a convex series or a regular Hausdorff function")
    power_bound = power_bound_proxy(T, 4096)  # raises NotPowerBoundedError (exit 3)
    if is_hausdorff:
        try:
            verifications.append(verify_improving(f, T, vcfg))
        except FunctionSpecError as exc:
            raise InputError(f"{args.function}: {exc}") from None
    ritt_candidate = _is_ritt_candidate(T, vcfg.one_tol)
    if is_convex and ritt_candidate:
        verifications.append(verify_subordination(T, f, vcfg))
    out["power_bound_proxy"] = power_bound
    out["ritt_candidate"] = ritt_candidate
    if verifications:
        applied = verifications[0].applied
    else:
        # convex series on a power-bounded T that is not Ritt: nothing to compare against
        applied = apply_function(f, T, vcfg.wiener_tol)
        out["note"] = "no clauses apply: subordination needs a Ritt T and f is not Hausdorff"
    out["applied"] = {k: v for k, v in applied.to_json().items() if k != "matrix"}
    out["result_matrix"] = linalg.matrix_to_json(applied.matrix)
    out["before"] = analyze(T, acfg).to_json()
    out["after"] = analyze(applied.matrix, acfg).to_json()
    out["verifications"] = [v.to_json() for v in verifications]
    passed = all(v.passed for v in verifications)
    out["passed"] = passed
    _emit(dump_json(out), args.out)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_improve_check(args: argparse.Namespace) -> int:
    f = load_function(args.function)
    if not is_disc_function(f):
        raise InputError(f"{args.function}: improve-check needs a function on the disc")
    est = min_covering_sector(f, args.samples or 100_000)
    body = est.to_json()
    if not args.timings:
        body.pop("seconds")
    out: Dict[str, Any] = {"command": "improve-check", "input": args.function,
                           "function": f.to_json(), "estimate": body}
    ref = est.reference
    if ref is not None:
        table = reference_table().get(f.family, {})
        out["reference"] = {"angle": ref, "formula": table.get("angle"), "basis": table.get("basis"),
                            "gamma_hat_minus_reference": est.gamma_hat - ref}
    _emit(dump_json(out), args.out)
    return EXIT_OK


def cmd_demo(args: argparse.Namespace) -> int:
    if args.write_matrix:
        d = growth_diagonal(args.phi, args.delta, args.n_grid)
        with open(args.write_matrix, "w", encoding="utf-8") as fh:
            fh.write(dump_json(linalg.matrix_to_json(np.diag(d))))
    res = angle_growth_demo(args.phi, args.delta, args.n_grid)
    fine = angle_growth_demo(args.phi, args.delta, 4 * args.n_grid)
    out: Dict[str, Any] = {
        "command": "demo-angle-growth", "result": res.to_json(),
        "refinement": {"n_grid": fine.n_grid, "beta_change": abs(fine.beta_hat - res.beta_hat),
                       "gamma_change": abs(fine.gamma_hat - res.gamma_hat)},
    }
    passed = res.formulas_agree and res.beta_not_below_alpha
    if args.eps is not None:
        sc = epsilon_scenario(args.eps, args.n_grid)
        out["epsilon_scenario"] = sc.to_json()
        passed = passed and sc.holds
    out["passed"] = passed
    _emit(dump_json(out), args.out)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_suite(args.suite)
    passed = all(r.passed for r in results)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "passed", "samples", "violations", "worst", "tolerance"])
        for r in results:
            for c in r.checks:
                w.writerow([r.name, c.name, c.passed, c.samples, c.violations,
                            finite_or_str(c.worst), c.tolerance])
        _emit(buf.getvalue(), args.out)
    else:
        out = {"command": "verify", "suite": args.suite, "passed": passed,
               "suites": [r.to_json(timings=args.timings) for r in results]}
        _emit(dump_json(out), args.out)
    for r in results:
        for c in r.checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {r.name}/{c.name}: "
                  f"{c.violations}/{c.samples} violations, worst {c.worst:.3g}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-6, help="comparison tolerance")
    common.add_argument("--grid-nodes", type=int, default=None,
                        help="angular nodes per resolvent circle")
    common.add_argument("--radii", type=str, default=None,
                        help="comma-separated circle radii > 1 for the Ritt constant sup")
    common.add_argument("--out", type=str, default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock timings (makes output non-reproducible)")

    p = argparse.ArgumentParser(prog="rittcalc", description="Ritt operator diagnostics and functional calculus")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="Ritt report for one matrix")
    a.add_argument("matrix")
    a.add_argument("--N", type=int, default=256, help="largest power inspected")
    a.set_defaults(func=cmd_analyze)

    ap = sub.add_parser("apply", parents=[common], help="form h(T) and check what it preserves")
    ap.add_argument("matrix")
    ap.add_argument("function")
    ap.add_argument("--N", type=int, default=256)
    ap.set_defaults(func=cmd_apply)

    ic = sub.add_parser("improve-check", parents=[common], help="sector containing 1 - h(D)")
    ic.add_argument("function")
    ic.add_argument("--samples", type=int, default=100_000)
    ic.set_defaults(func=cmd_improve_check)

    d = sub.add_parser("demo-angle-growth", parents=[common],
                       help="angle of T^2 vs T for the diagonal example")
    d.add_argument("--phi", type=float, default=math.pi / 6)
    d.add_argument("--delta", type=float, default=0.5)
    d.add_argument("--n-grid", type=int, default=256)
    d.add_argument("--eps", type=float, default=None, help="also run the epsilon scenario")
    d.add_argument("--write-matrix", type=str, default=None,
                   help="save the diagonal matrix as JSON")
    d.set_defaults(func=cmd_demo)

    v = sub.add_parser("verify", parents=[common], help="run property suites")
    v.add_argument("suite", choices=SUITE_NAMES)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if _THREADS and not (_THREADS.isdigit() and int(_THREADS) > 0):
        print(f"rittcalc: RITT_CALC_THREADS must be a positive integer, got {_THREADS!r}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "csv" and args.command not in ("analyze", "verify"):
        print(f"rittcalc {args.command}: csv output is only available for analyze and verify",
              file=sys.stderr)
        return EXIT_INPUT
    try:
        _check_positive(args)
        return args.func(args)
    except (InputError, MatrixInputError, FunctionSpecError, RegionError, ContourError,
            AdmissibilityError, ValueError) as exc:
        print(f"rittcalc {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        sys.stderr.close()
        return EXIT_OK
    except (NumericalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"rittcalc {args.command}: numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
