"""Random sampling of unit-radius nonnegative matrices with a_11 = 0, and
derivative-free minimization of their spread.

Parameters are the n^2 - 1 free entries, mapped through abs() so every
point is nonnegative; the objective is the spread divided by the spectral
radius, i.e. the spread after normalization.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .bounds import REPORT_TOL, spread_lower_bound, two_eigenvalue_bound, verify_bounds
from .constructions import extremal_matrix
from .errors import NilpotentMatrixError, SpreadLabError
from .matrix import (
    RADIUS_TOL,
    NonnegativeMatrix,
    format_matrix,
    is_nilpotent,
    normalize_to_unit_radius,
    require_dimension,
)
from .spectral import eigenvalues, spread

log = logging.getLogger(__name__)

METHODS = ("random", "nelder_mead", "anneal")
MAX_NILPOTENT_DRAWS = 100
THREADS_ENV = "SPREADLAB_THREADS"


@dataclass(frozen=True)
class SearchConfig:
    n: int
    seed: int = 0
    restarts: int = 4
    iters_per_restart: int = 2000
    density: float = 1.0
    method: str = "nelder_mead"
    threads: int | None = None  # None: read SPREADLAB_THREADS; 0: one per CPU

    def __post_init__(self):
        require_dimension(self.n, 2)
        require_dimension(self.restarts, 1, "restarts")
        require_dimension(self.iters_per_restart, 1, "iters_per_restart")
        if not 0.0 < self.density <= 1.0:
            raise ValueError(f"density must lie in (0, 1], got {self.density}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")


@dataclass
class SearchResult:
    n: int
    method: str
    best_matrix: NonnegativeMatrix
    best_spread: float
    theoretical_bound: float
    gap: float
    evaluations: int
    best_restart: int
    trace: tuple[float, ...] = field(default=())

    @property
    def alert(self) -> bool:
        return self.gap < -REPORT_TOL

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "n": self.n,
            "method": self.method,
            "best_spread": self.best_spread,
            "theoretical_bound": self.theoretical_bound,
            "gap": self.gap,
            "evaluations": self.evaluations,
            "best_restart": self.best_restart,
            "trace": list(self.trace),
            "alert": self.alert,
            "best_matrix": format_matrix(self.best_matrix),
        }


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    """Independent stream for one restart: the restart index is the spawn key
    of a SeedSequence rooted at ``seed``."""
    root = int(seed) & (2**64 - 1)
    return np.random.default_rng(np.random.SeedSequence(root, spawn_key=(restart,)))


def sample_cn(n: int, rng, density: float = 1.0, radius_tol: float = RADIUS_TOL) -> NonnegativeMatrix:
    """Random nonnegative matrix with a_11 = 0 and spectral radius 1.

    Each entry is nonzero with probability ``density`` and then uniform on
    (0, 1].  Nilpotent draws are redrawn.
    """
    n = require_dimension(n, 2)
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    for _ in range(MAX_NILPOTENT_DRAWS):
        mask = rng.random((n, n)) < density
        values = 1.0 - rng.random((n, n))
        A = np.where(mask, values, 0.0)
        A[0, 0] = 0.0
        M = NonnegativeMatrix(A)
        if is_nilpotent(M):
            continue
        return normalize_to_unit_radius(M, radius_tol)
    raise NilpotentMatrixError(
        f"{MAX_NILPOTENT_DRAWS} consecutive nilpotent draws; density {density} too low"
    )


def _embed(x: np.ndarray, n: int) -> np.ndarray:
    A = np.empty(n * n)
    A[0] = 0.0
    A[1:] = np.abs(x)
    return A.reshape(n, n)


def normalized_spread(A: np.ndarray) -> float:
    """Spread of A / r(A) from one LAPACK eigensolve; inf on failure or r = 0."""
    if not A.all() and is_nilpotent(NonnegativeMatrix(A)):
        return math.inf
    try:
        w = np.linalg.eigvals(A)
    except np.linalg.LinAlgError:
        return math.inf
    r = float(np.max(np.abs(w)))
    if not math.isfinite(r) or r <= 0.0:
        return math.inf
    return spread(w) / r


class _Objective:
    def __init__(self, n: int):
        self.n = n
        self.calls = 0

    def __call__(self, x) -> float:
        self.calls += 1
        return normalized_spread(_embed(x, self.n))


def _anneal(f, x0, rng, iters):
    # geometric cooling from T=0.1 to 1e-5; step size shrinks with sqrt(T)
    x, fx = np.array(x0, dtype=float), f(x0)
    best_x, best_f = x.copy(), fx
    t0, t1 = 0.1, 1e-5
    for i in range(1, iters):
        T = t0 * (t1 / t0) ** (i / iters)
        scale = 0.1 * math.sqrt(T / t0) * (np.mean(np.abs(x)) + 1e-12)
        y = x + scale * rng.standard_normal(x.size)
        fy = f(y)
        if fy <= fx or rng.random() < math.exp(-(fy - fx) / T):
            x, fx = y, fy
            if fx < best_f:
                best_x, best_f = x.copy(), fx
    return best_x, best_f


def _restart(config: SearchConfig, restart: int, incumbent: NonnegativeMatrix | None):
    """One restart -> (value, matrix, evaluations, exact_matrix_or_None)."""
    n = config.n
    rng = restart_rng(config.seed, restart)
    f = _Objective(n)

    if config.method == "random":
        best_val, best_A = math.inf, None
        for _ in range(config.iters_per_restart):
            A = sample_cn(n, rng, config.density).data
            v = f(A.ravel()[1:])
            if v < best_val:
                best_val, best_A = v, A
        return best_val, best_A, f.calls, None

    if incumbent is not None and restart == 0:
        start = incumbent.data
        inc_val = spread(eigenvalues(incumbent, "exact"))
    else:
        start = sample_cn(n, rng, config.density).data
        inc_val = math.inf
    x0 = start.ravel()[1:].copy()

    if config.method == "nelder_mead":
        res = minimize(
            f,
            x0,
            method="Nelder-Mead",
            options={
                "maxfev": config.iters_per_restart,
                "maxiter": config.iters_per_restart,
                "xatol": 1e-10,
                "fatol": np.inf,
                "adaptive": False,
            },
        )
        x, val = res.x, float(res.fun)
    else:
        x, val = _anneal(f, x0, rng, config.iters_per_restart)

    if inc_val <= val:
        return inc_val, incumbent.data, f.calls, incumbent
    return val, _embed(x, n), f.calls, None


def _threads(config: SearchConfig) -> int:
    t = config.threads
    if t is None:
        try:
            t = int(os.environ.get(THREADS_ENV, "1"))
        except ValueError:
            t = 1
    if t <= 0:
        t = os.cpu_count() or 1
    return max(1, min(t, config.restarts))


def _exactly(A: np.ndarray) -> NonnegativeMatrix:
    """Normalize, then attach the exact (dyadic) form of the float entries."""
    M = normalize_to_unit_radius(NonnegativeMatrix(A))
    return NonnegativeMatrix.from_fractions(M.data.tolist(), in_cn=True, validate=False)


def minimize_spread(config: SearchConfig) -> SearchResult:
    """Best (smallest-spread) unit-radius matrix with a_11 = 0 found by the
    configured method.

    For nelder_mead and anneal, restart 0 starts from ``extremal_matrix(n)``.
    Restarts are merged by the key (spread, restart index), so the result
    does not depend on the thread count.  The winner is re-evaluated through
    the exact spectral route before it is reported.
    """
    incumbent = extremal_matrix(config.n) if config.method != "random" else None
    threads = _threads(config)
    run = lambda r: _restart(config, r, incumbent)  # noqa: E731
    if threads == 1:
        results = [run(r) for r in range(config.restarts)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(config.restarts)))

    evaluations = sum(r[2] for r in results)
    trace = tuple(float(r[0]) for r in results)
    best_restart = min(range(len(results)), key=lambda i: (results[i][0], i))
    _, best_A, _, exact_best = results[best_restart]
    best = exact_best if exact_best is not None else _exactly(best_A)
    spec = eigenvalues(best, "exact")
    best_spread = spread(spec) / spec.radius()

    bound = spread_lower_bound(config.n)
    result = SearchResult(
        n=config.n,
        method=config.method,
        best_matrix=best,
        best_spread=best_spread,
        theoretical_bound=bound,
        gap=best_spread - bound,
        evaluations=evaluations,
        best_restart=best_restart,
        trace=trace,
    )
    if result.alert:
        log.warning(
            "n=%d: spread %.17g is below the lower bound %.17g (gap %.3g)",
            config.n, best_spread, bound, result.gap,
        )
    return result


SWEEP_COLUMNS = (
    "format_version",
    "n",
    "theoretical_bound_general",
    "theoretical_bound_D_n",
    "best_spread",
    "gap",
    "evaluations",
    "violations",
    "error",
)


def sweep_experiment(n_min: int, n_max: int, config: SearchConfig) -> list[dict]:
    """minimize_spread + verify_bounds for every n in [n_min, n_max].

    A failing n is recorded in its row's ``error`` column and the sweep
    moves on.
    """
    n_min = require_dimension(n_min, 2, "n_min")
    n_max = require_dimension(n_max, n_min, "n_max")
    rows = []
    for n in range(n_min, n_max + 1):
        row = {
            "format_version": 1,
            "n": n,
            "theoretical_bound_general": spread_lower_bound(n),
            "theoretical_bound_D_n": two_eigenvalue_bound(n),
            "best_spread": "",
            "gap": "",
            "evaluations": "",
            "violations": "",
            "error": "",
        }
        try:
            res = minimize_spread(replace(config, n=n))
            report = verify_bounds(res.best_matrix)
            violations = list(report.violations)
            if res.alert and "search_gap" not in violations:
                violations.append("search_gap")
            row.update(
                best_spread=res.best_spread,
                gap=res.gap,
                evaluations=res.evaluations,
                violations=";".join(violations),
            )
        except (SpreadLabError, ValueError, ArithmeticError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
