"""Points, frequencies and coefficients from a decomposition.

The symbolic/numeric boundary sits here: multiplication tables may be exact,
but their joint eigenvalues are computed in double precision.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field as dc_field
from typing import Any, Sequence

import numpy as np

from .ideal import multiplication_matrices
from .linalg import DenseMatrix
from .multiindex import IndexSet, MultiIndex
from .oracle import SampleOracle, principal_log
from .prony import SMILE, Decomposition, decompose

log = logging.getLogger(__name__)

SEPARATION = 1e-6
MAX_RETRIES = 8
CONDITION_LIMIT = 1e12


class RecoveryError(RuntimeError):
    """Failure in one pipeline stage; ``stage`` names it."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class EigenError(RuntimeError):
    pass


def eigen_decomposition(M: np.ndarray | DenseMatrix) -> list[tuple[complex, np.ndarray]]:
    """Eigenpairs of a square complex matrix (LAPACK ``geev`` via numpy)."""
    a = M.to_numpy() if isinstance(M, DenseMatrix) else np.asarray(M, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("eigen_decomposition needs a square matrix")
    if a.size == 0:
        return []
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"eigenvalue iteration did not converge: {exc}") from None
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
        raise EigenError("non-finite eigenpairs")
    return [(complex(w[i]), v[:, i]) for i in range(len(w))]


def _min_separation(w: np.ndarray) -> float:
    if len(w) < 2:
        return math.inf
    d = np.abs(w[:, None] - w[None, :])
    d[np.diag_indices(len(w))] = np.inf
    return float(d.min())


@dataclass
class JointEigenInfo:
    attempts: int
    separation: float
    weights: list[float]
    coordinate_residual: float


def _joint_eigen(mats: Sequence[np.ndarray], seed: int | None) -> tuple[list[tuple[complex, ...]], JointEigenInfo]:
    n = mats[0].shape[0]
    rng = np.random.default_rng(seed)
    if n == 1:
        return [tuple(complex(M[0, 0]) for M in mats)], JointEigenInfo(0, math.inf, [], 0.0)
    scale = max(float(np.abs(M).max()) for M in mats)
    last_sep = 0.0
    for attempt in range(1, MAX_RETRIES + 1):
        c = rng.uniform(-1.0, 1.0, size=len(mats))
        Mc = sum(cj * M for cj, M in zip(c, mats))
        pairs = eigen_decomposition(Mc)
        w = np.array([lam for lam, _ in pairs])
        sep = _min_separation(w)
        last_sep = sep
        if sep <= SEPARATION * max(float(np.abs(w).max()), 1e-300):
            log.info("eigenvalues of the random combination not separated (%.3e); retrying", sep)
            continue
        points = []
        worst = 0.0
        for _, v in pairs:
            vv = np.vdot(v, v)
            x = tuple(complex(np.vdot(v, M @ v) / vv) for M in mats)
            for xj, M in zip(x, mats):
                worst = max(worst, float(np.linalg.norm(M @ v - xj * v) / (np.linalg.norm(v) * max(scale, 1.0))))
            points.append(x)
        return points, JointEigenInfo(attempt, sep, list(map(float, c)), worst)
    raise EigenError(
        f"no separated spectrum after {MAX_RETRIES} random combinations (last separation {last_sep:.3e}); "
        "points are probably not distinct"
    )


def joint_eigen_points(d: Decomposition, seed: int | None = 0) -> list[tuple[complex, ...]]:
    """Common eigenvalues of the multiplication tables, one tuple per point.

    A random real combination of the tables is diagonalized and each
    coordinate is read off by a Rayleigh quotient of the matching table.
    """
    mats = [M.to_numpy() for M in multiplication_matrices(d)]
    return _joint_eigen(mats, seed)[0]


def frequencies_from_points(X: Sequence[Sequence[complex]]) -> list[tuple[complex, ...]]:
    """Componentwise principal logarithm, imaginary parts in ``(-pi, pi]``."""
    bad = [i for i, x in enumerate(X) if any(complex(c) == 0 for c in x)]
    if bad:
        raise ValueError(f"points {bad} have a zero coordinate; no frequency exists")
    return [tuple(principal_log(complex(c)) for c in x) for x in X]


def vandermonde(X: Sequence[Sequence[complex]], A: Sequence[MultiIndex]) -> np.ndarray:
    """Rows indexed by exponents in ``A``, columns by points in ``X``."""
    pts = np.asarray(X, dtype=complex)
    exps = np.asarray(A, dtype=int)
    # x^a with integer a; complex power of a zero base is only hit for a = 0
    return np.prod(pts[None, :, :] ** exps[:, None, :], axis=2)


def solve_coefficients(oracle: SampleOracle, X: Sequence[Sequence[complex]], A: IndexSet | Sequence[MultiIndex]) -> list[complex]:
    """Coefficients ``c`` with ``sum_k c_k x_k^a = f(a)`` for ``a`` in ``A``."""
    A = list(A)
    if len(A) != len(X):
        raise ValueError(f"{len(X)} points but {len(A)} exponents")
    V = vandermonde(X, A)
    rhs = np.array([complex(oracle(a)) for a in A])
    cond = float(np.linalg.cond(V))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        log.warning("Vandermonde condition estimate %.3e exceeds %.0e", cond, CONDITION_LIMIT)
        c, *_ = np.linalg.lstsq(V, rhs, rcond=None)
    else:
        c = np.linalg.solve(V, rhs)
    return [complex(v) for v in c]


def model_residual(oracle: SampleOracle, X: Sequence[Sequence[complex]], coeffs: Sequence[complex]) -> float:
    """Max over already sampled grid points of ``|f - model|`` relative to ``max |f|``."""
    samples = oracle.samples()
    if not samples:
        return 0.0
    exps = list(samples)
    V = vandermonde(X, exps)
    model = V @ np.asarray(coeffs, dtype=complex)
    data = np.array([complex(samples[a]) for a in exps])
    denom = float(np.abs(data).max()) or 1.0
    return float(np.abs(model - data).max() / denom)


@dataclass
class RecoveryConfig:
    algorithm: str = SMILE
    seed: int = 0
    residual_threshold: float = 1e-6


@dataclass
class RecoveryResult:
    points: list[tuple[complex, ...]]
    frequencies: list[tuple[complex, ...]]
    coefficients: list[complex]
    residual: float
    decomposition: Decomposition
    timings: dict[str, float] = dc_field(default_factory=dict)
    condition: float = math.nan
    eigen: JointEigenInfo | None = None

    @property
    def size(self) -> int:
        return len(self.points)

    def to_json(self) -> dict[str, Any]:
        def pairs(vec: Sequence[complex]) -> list[list[float]]:
            return [[z.real, z.imag] for z in vec]

        return {
            "dimension": self.decomposition.dimension,
            "points": [pairs(x) for x in self.points],
            "frequencies": [pairs(w) for w in self.frequencies],
            "coefficients": pairs(self.coefficients),
            "residual": self.residual,
            "evaluations": self.decomposition.evaluations,
            "A": self.decomposition.A.to_list(),
            "algorithm": self.decomposition.algorithm,
            "mode": self.decomposition.field.name,
            "condition": self.condition,
            "timings": dict(self.timings),
        }


def reconstruct(oracle: SampleOracle, N: int, config: RecoveryConfig | None = None) -> RecoveryResult:
    """Decompose, diagonalize the multiplication tables, solve for coefficients."""
    config = config or RecoveryConfig()
    timings: dict[str, float] = {}

    def stage(name: str, fn, *args):
        t0 = time.perf_counter()
        try:
            return fn(*args)
        except RecoveryError:
            raise
        except Exception as exc:  # tag and re-raise with the stage name
            raise RecoveryError(name, f"{type(exc).__name__}: {exc}") from exc
        finally:
            timings[name] = time.perf_counter() - t0

    d = stage("decompose", decompose, oracle, N, config.algorithm)
    if not d.saturated:
        raise RecoveryError("decompose", f"rank {len(d.A)} exceeds N = {N}")
    mats = stage("multiplication", lambda: [M.to_numpy() for M in multiplication_matrices(d)])
    points, info = stage("eigen", _joint_eigen, mats, config.seed)
    freqs = stage("frequencies", frequencies_from_points, points)
    coeffs = stage("coefficients", solve_coefficients, oracle, points, d.A)
    cond = float(np.linalg.cond(vandermonde(points, list(d.A))))
    residual = stage("residual", model_residual, oracle, points, coeffs)
    return RecoveryResult(points, freqs, coeffs, residual, d, timings, cond, info)
