"""Command line interface: ``hcprony gen|decompose|recover|sparsepoly|verify``.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 algorithmic failure.  ``PRONY_LOG`` sets the log level.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Any, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .ideal import IncompleteDecompositionError
from .instances import (
    InstanceError,
    dump_json,
    expsum_from_json,
    expsum_to_json,
    load_json,
    oracle_for_instance,
    random_expsum_spec,
    random_rational_spec,
    sparsepoly_from_json,
    sparsepoly_to_json,
)
from .multiindex import total_degree_simplex
from .prony import DEGREEWISE, SMILE, DecompositionError, decompose
from .recovery import EigenError, RecoveryConfig, RecoveryError, reconstruct, vandermonde
from .scalars import make_field
from .sparsepoly import (
    RoundingError,
    SparseIntPolynomial,
    geometric_oracle,
    identity_theta,
    random_sparse_polynomial,
    recover_sparse_polynomial,
    shear_theta,
)

log = logging.getLogger("hcprony")

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_ALGO = 0, 1, 2, 3
ALGORITHMIC_ERRORS = (DecompositionError, RecoveryError, RoundingError, EigenError, IncompleteDecompositionError)


class InputError(Exception):
    pass


def _theta_for(name: str, s: int) -> tuple[tuple[int, ...], ...]:
    if name == "identity":
        return identity_theta(s)
    if name == "shear":
        return shear_theta(s)
    raise InputError(f"unknown theta {name!r}; use identity or shear")


def _emit(doc: dict[str, Any], out: str | None) -> None:
    text = dump_json(doc, out)
    if out is None:
        sys.stdout.write(text)
    else:
        log.info("wrote %s", out)


def _field(args: argparse.Namespace):
    if not args.tolerance > 0:
        raise InputError("--tolerance must be positive")
    return make_field(args.mode, args.tolerance)


def _require_N(args: argparse.Namespace) -> int:
    if args.N is None or args.N < 1:
        raise InputError("-N must be given and at least 1")
    return args.N


def cmd_gen(args: argparse.Namespace) -> int:
    if args.s < 1 or args.terms < 1:
        raise InputError("--s and --terms must be positive")
    rng = np.random.default_rng(args.seed)
    if args.type == "expsum":
        spec = random_rational_spec(rng, args.s, args.terms) if args.mode == "exact" else random_expsum_spec(rng, args.s, args.terms)
        doc = expsum_to_json(spec)
    else:
        if args.maxexp < 0 or args.terms > (args.maxexp + 1) ** args.s:
            raise InputError("--maxexp too small for the requested number of terms")
        p = random_sparse_polynomial(rng, args.s, args.terms, args.maxexp)
        doc = sparsepoly_to_json(p, _theta_for(args.theta, args.s))
    _emit(doc, args.out)
    return EXIT_OK


def _read_instance(path: str | None) -> dict[str, Any]:
    if path is None:
        raise InputError("--in is required")
    return load_json(path)


def cmd_decompose(args: argparse.Namespace) -> int:
    doc = _read_instance(args.input)
    N = _require_N(args)
    oracle = oracle_for_instance(doc, _field(args))
    d = decompose(oracle, N, args.algorithm)
    out = d.to_json()
    bound = d.evaluation_bound()
    out.update({"bound": bound, "withinBound": d.evaluations <= bound, "saturated": d.saturated})
    _emit(out, args.out)
    if not d.saturated:
        log.error("rank %d exceeds N = %d; increase N", len(d.A), N)
        return EXIT_ALGO
    return EXIT_OK


def cmd_recover(args: argparse.Namespace) -> int:
    doc = _read_instance(args.input)
    N = _require_N(args)
    if doc.get("type") == "sparsepoly":
        return _run_sparsepoly(doc, N, args)
    oracle = oracle_for_instance(doc, _field(args))
    res = reconstruct(oracle, N, RecoveryConfig(args.algorithm, args.seed, args.threshold))
    _emit({"type": "expsum-recovery", **res.to_json()}, args.out)
    if res.residual > args.threshold:
        log.error("residual %.3e exceeds threshold %.1e", res.residual, args.threshold)
        return EXIT_VERIFY
    return EXIT_OK


def _run_sparsepoly(doc: dict[str, Any], N: int, args: argparse.Namespace) -> int:
    p, theta = sparsepoly_from_json(doc)
    res = recover_sparse_polynomial(geometric_oracle(p, theta), N, theta, args.seed)
    _emit({**res.to_json(), "theta": [list(r) for r in theta]}, args.out)
    return EXIT_OK


def cmd_sparsepoly(args: argparse.Namespace) -> int:
    if args.input is not None:
        doc = _read_instance(args.input)
        if doc.get("type") != "sparsepoly":
            raise InputError("sparsepoly needs a sparsepoly instance")
    else:
        if args.s is None or args.terms is None:
            raise InputError("give --in or --s/--terms for a generated polynomial")
        rng = np.random.default_rng(args.seed)
        p = random_sparse_polynomial(rng, args.s, args.terms, args.maxexp)
        doc = sparsepoly_to_json(p, _theta_for(args.theta, args.s))
    N = args.N if args.N is not None else len(doc["terms"])
    if N < 1:
        raise InputError("-N must be at least 1")
    return _run_sparsepoly(doc, N, args)


def _check(lines: list[str], name: str, ok: bool, detail: str) -> bool:
    lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return ok


def verify_documents(instance: dict[str, Any], result: dict[str, Any], tol: float = 1e-6) -> tuple[bool, list[str]]:
    """Compare a recovery result with its ground-truth instance."""
    lines: list[str] = []
    if instance.get("type") == "sparsepoly":
        p, _ = sparsepoly_from_json(instance)
        try:
            q = SparseIntPolynomial.from_json(p.dimension, result["terms"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"bad sparsepoly result: {exc}") from None
        if q.dimension != p.dimension or any(len(t["exp"]) != p.dimension for t in result["terms"]):
            raise InputError("result and instance differ in dimension")
        ok = _check(lines, "terms", q.terms == p.terms, f"{len(q)} recovered, {len(p)} expected")
        return ok, lines

    spec = expsum_from_json(instance)
    try:
        freqs = np.array([[complex(*w) for w in om] for om in result["frequencies"]], dtype=complex)
        coeffs = np.array([complex(*c) for c in result["coefficients"]], dtype=complex)
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"bad recovery result: {exc}") from None
    if freqs.ndim != 2 or freqs.shape[1] != spec.dimension:
        raise InputError("result and instance differ in dimension")
    truth_w = np.array(spec.frequencies, dtype=complex)
    truth_c = np.array(spec.coefficients, dtype=complex)

    ok = _check(lines, "count", len(freqs) == len(truth_w), f"{len(freqs)} recovered, {len(truth_w)} expected")
    if not ok:
        return False, lines
    cost = np.abs(truth_w[:, None, :] - freqs[None, :, :]).max(axis=2)
    rows, cols = linear_sum_assignment(cost)
    ferr = float(cost[rows, cols].max())
    ok &= _check(lines, "frequencies", ferr <= tol, f"max matched error {ferr:.3e} (tol {tol:.1e})")
    cerr = float(np.max(np.abs(truth_c[rows] - coeffs[cols]) / np.abs(truth_c[rows])))
    ok &= _check(lines, "coefficients", cerr <= tol, f"max relative error {cerr:.3e} (tol {tol:.1e})")

    n = len(truth_w)
    grid = list(total_degree_simplex(spec.dimension, 2 * n + 1))
    truth_pts = np.exp(truth_w)
    model_pts = np.exp(freqs)
    f_true = vandermonde(truth_pts, grid) @ truth_c
    f_model = vandermonde(model_pts, grid) @ coeffs
    res = float(np.abs(f_true - f_model).max() / max(np.abs(f_true).max(), 1e-300))
    ok &= _check(lines, "residual", res <= tol, f"relative residual {res:.3e} on Gamma_{2 * n + 1} (tol {tol:.1e})")
    return bool(ok), lines


def cmd_verify(args: argparse.Namespace) -> int:
    instance = _read_instance(args.input)
    if args.result is None:
        raise InputError("--result is required")
    result = load_json(args.result)
    ok, lines = verify_documents(instance, result, args.match_tol)
    for line in lines:
        print(line)
    print("OVERALL", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["exact", "float"], default="float")
    common.add_argument("--tolerance", type=float, default=1e-10, help="relative pivot tolerance (float mode)")
    common.add_argument("--algorithm", choices=[SMILE, DEGREEWISE], default=SMILE)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-N", type=int, default=None, help="upper bound on the number of terms")
    common.add_argument("--in", dest="input", default=None)
    common.add_argument("--out", default=None)

    parser = argparse.ArgumentParser(prog="hcprony", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write a seeded random instance")
    g.add_argument("--type", choices=["expsum", "sparsepoly"], default="expsum")
    g.add_argument("--s", type=int, default=2)
    g.add_argument("--terms", type=int, default=3)
    g.add_argument("--maxexp", type=int, default=10)
    g.add_argument("--theta", default="identity", help="identity or shear (sparsepoly)")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("decompose", parents=[common], help="compute A, I and the ideal basis")
    d.set_defaults(func=cmd_decompose)

    r = sub.add_parser("recover", parents=[common], help="recover frequencies and coefficients")
    r.add_argument("--threshold", type=float, default=1e-6, help="maximum accepted relative residual")
    r.set_defaults(func=cmd_recover)

    sp = sub.add_parser("sparsepoly", parents=[common], help="exact sparse polynomial recovery")
    sp.add_argument("--s", type=int, default=None)
    sp.add_argument("--terms", type=int, default=None)
    sp.add_argument("--maxexp", type=int, default=10)
    sp.add_argument("--theta", default="identity")
    sp.set_defaults(func=cmd_sparsepoly)

    v = sub.add_parser("verify", parents=[common], help="check a result file against its instance")
    v.add_argument("--result", default=None)
    v.add_argument("--match-tol", type=float, default=1e-6)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    level = os.environ.get("PRONY_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ALGORITHMIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ALGO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
