"""Seeded instance generators and the JSON instance format."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .oracle import ExponentialSumSpec, SampleOracle, make_oracle_from_spec
from .scalars import Field, format_gaussian, parse_gaussian
from .sparsepoly import SparseIntPolynomial, check_theta, geometric_oracle


class InstanceError(ValueError):
    """Malformed or unsupported instance document."""


def random_expsum_spec(
    rng: np.random.Generator,
    s: int,
    terms: int,
    max_real: float = 1.0,
    min_separation: float = 1e-2,
    max_tries: int = 1000,
) -> ExponentialSumSpec:
    """Frequencies with ``|Re w| <= max_real``, imaginary parts in ``(-pi, pi]``,
    pairwise max-norm separation at least ``min_separation``; coefficients of
    modulus in ``[1, 2]`` with uniform phase."""
    if s < 1 or terms < 1:
        raise ValueError("need s >= 1 and terms >= 1")
    for _ in range(max_tries):
        W = rng.uniform(-max_real, max_real, (terms, s)) + 1j * rng.uniform(-math.pi, math.pi, (terms, s))
        sep = min(
            (float(np.abs(W[i] - W[j]).max()) for i in range(terms) for j in range(i)),
            default=math.inf,
        )
        if sep >= min_separation:
            break
    else:
        raise ValueError("could not draw separated frequencies")
    c = rng.uniform(1.0, 2.0, terms) * np.exp(1j * rng.uniform(-math.pi, math.pi, terms))
    return ExponentialSumSpec(tuple(tuple(complex(w) for w in row) for row in W), tuple(complex(x) for x in c))


def _random_rational(rng: np.random.Generator, max_num: int, max_den: int) -> Fraction:
    while True:
        p = int(rng.integers(-max_num, max_num + 1))
        if p:
            return Fraction(p, int(rng.integers(1, max_den + 1)))


def random_rational_spec(
    rng: np.random.Generator, s: int, terms: int, max_num: int = 9, max_den: int = 5
) -> ExponentialSumSpec:
    """Distinct points with nonzero rational coordinates and nonzero rational
    coefficients; suitable for exact oracles."""
    pts: list[tuple[Fraction, ...]] = []
    seen = set()
    while len(pts) < terms:
        x = tuple(_random_rational(rng, max_num, max_den) for _ in range(s))
        if x not in seen:
            seen.add(x)
            pts.append(x)
    coeffs = [_random_rational(rng, max_num, max_den) for _ in range(terms)]
    return ExponentialSumSpec.from_points(pts, coeffs)


def hyperbola_spec(count: int = 7) -> ExponentialSumSpec:
    """Points ``(t, 1/t)``, ``t = 1..count``, unit coefficients."""
    return ExponentialSumSpec.from_points([(t, Fraction(1, t)) for t in range(1, count + 1)], [1] * count)


def expsum_to_json(spec: ExponentialSumSpec) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "type": "expsum",
        "dimension": spec.dimension,
        "frequencies": [[[w.real, w.imag] for w in om] for om in spec.frequencies],
        "coefficients": [[c.real, c.imag] for c in spec.coefficients],
    }
    if spec.points is not None:
        doc["points"] = [[format_gaussian(x) for x in p] for p in spec.points]
    if spec.exact_coefficients is not None:
        doc["exact_coefficients"] = [format_gaussian(c) for c in spec.exact_coefficients]
    return doc


def expsum_from_json(doc: dict[str, Any]) -> ExponentialSumSpec:
    try:
        if "points" in doc:
            pts = [[parse_gaussian(x) for x in p] for p in doc["points"]]
            if "exact_coefficients" in doc:
                coeffs: list[Any] = [parse_gaussian(c) for c in doc["exact_coefficients"]]
            else:
                coeffs = [complex(c[0], c[1]) for c in doc["coefficients"]]
            return ExponentialSumSpec.from_points(pts, coeffs)
        freqs = tuple(tuple(complex(w[0], w[1]) for w in om) for om in doc["frequencies"])
        coeffs = [complex(c[0], c[1]) for c in doc["coefficients"]]
        return ExponentialSumSpec(freqs, tuple(coeffs))
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise InstanceError(f"bad expsum instance: {exc}") from None


def sparsepoly_to_json(p: SparseIntPolynomial, theta) -> dict[str, Any]:
    return {
        "type": "sparsepoly",
        "dimension": p.dimension,
        "terms": p.to_json(),
        "theta": [list(r) for r in theta],
    }


def sparsepoly_from_json(doc: dict[str, Any]) -> tuple[SparseIntPolynomial, tuple[tuple[int, ...], ...]]:
    try:
        terms = doc["terms"]
        s = int(doc.get("dimension") or len(terms[0]["exp"]))
        p = SparseIntPolynomial.from_json(s, terms)
        theta = check_theta(doc.get("theta") or [[int(i == j) for j in range(s)] for i in range(s)])
        if len(theta) != s:
            raise ValueError("theta and polynomial differ in dimension")
        return p, theta
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise InstanceError(f"bad sparsepoly instance: {exc}") from None


def load_json(path: str | Path) -> dict[str, Any]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise InstanceError(f"{path}: expected a JSON object")
    return doc


def dump_json(doc: dict[str, Any], path: str | Path | None) -> str:
    text = json.dumps(doc, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def oracle_for_instance(doc: dict[str, Any], field: Field) -> SampleOracle:
    kind = doc.get("type")
    if kind == "expsum":
        return make_oracle_from_spec(expsum_from_json(doc), field)
    if kind == "sparsepoly":
        p, theta = sparsepoly_from_json(doc)
        return geometric_oracle(p, theta)
    raise InstanceError(f"unknown instance type {kind!r}")


def instance_size(doc: dict[str, Any]) -> int:
    if doc.get("type") == "expsum":
        return len(doc.get("coefficients") or doc.get("exact_coefficients") or [])
    return len(doc.get("terms", []))

