"""Lower bounds on the spread and the trace inequalities behind them.

Every bound assumes unit spectral radius.  ``verify_bounds`` normalizes the
spectrum first and lists any bound the computed spread falls below; a
non-empty list is a finding (solver trouble or a counterexample) and is
never clamped away.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import NilpotentMatrixError
from .matrix import (
    RADIUS_TOL,
    NonnegativeMatrix,
    as_matrix,
    is_nilpotent,
    require_dimension,
    zero_diagonal_count,
)
from .spectral import (
    CLUSTER_TOL,
    Spectrum,
    distinct_eigenvalue_count,
    eigenvalues,
    perron_root,
    spread,
)

REPORT_TOL = 1e-9
JLL_TOL = 1e-9
M_MAX = 5
FORMAT_VERSION = 1


# --------------------------------------------------------------------------
# closed-form bounds
# --------------------------------------------------------------------------


def bound_zero_diagonal(n: int, k: int) -> float:
    """k/n: spread lower bound for k zero diagonal entries."""
    n = require_dimension(n, 1)
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k!r}, n={n}")
    return k / n


@lru_cache(maxsize=None)
def _n5_bound() -> float:
    # 5 / (8 + sqrt(74)) == (-8 + sqrt(74)) / 2 without the cancellation
    with mpmath.workdps(50):
        return float(mpmath.mpf(5) / (8 + mpmath.sqrt(74)))


def spread_lower_bound(n: int) -> float:
    """Best known lower bound on s(A) for unit-radius nonnegative A with a_11 = 0.

    Exact (attained) for n = 2 and 3; for n >= 6 the inequality is strict,
    see :func:`bound_is_strict`.
    """
    n = require_dimension(n, 2)
    if n == 2:
        return 1.0
    if n == 3:
        return 0.75
    if n == 4:
        return 1.0 / 3.0
    if n == 5:
        return _n5_bound()
    return 2.0 / (4.0 + math.sqrt(2.0 * (n + 3)))


def bound_is_strict(n: int) -> bool:
    return require_dimension(n, 2) >= 6


def two_eigenvalue_bound(n: int) -> float:
    """n / (2(n-1)), attained by the extremal family."""
    n = require_dimension(n, 2)
    return n / (2.0 * (n - 1))


def eq2_residual(n: int, s: float) -> float:
    """(n-1)(n-4) s^2 + 8(n-1) s - 2n; nonnegative at the spread of any
    unit-radius member with spread below 1."""
    n = require_dimension(n, 4)
    return (n - 1) * (n - 4) * s * s + 8 * (n - 1) * s - 2 * n


def pairwise_identity_check(S) -> float:
    """|sum_{i<j} (l_i - l_j)^2 - (n sum l_i^2 - (sum l_i)^2)|.

    The two sides agree identically, so this measures rounding in the
    spectrum handed in.
    """
    vals = S.as_array() if isinstance(S, Spectrum) else np.asarray(list(S), dtype=complex)
    n = vals.size
    lhs = 0.5 * np.sum((vals[:, None] - vals[None, :]) ** 2)
    rhs = n * np.sum(vals**2) - np.sum(vals) ** 2
    return float(abs(lhs - rhs))


# --------------------------------------------------------------------------
# trace inequalities
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceSequence:
    """s_1..s_M with s_m = tr(A^m); None marks an overflowed entry."""

    values: tuple
    exact: bool = False

    def __getitem__(self, m: int):
        return self.values[m - 1]


def trace_sequence(A, m_max: int) -> TraceSequence:
    """Traces of A, A^2, ..., A^m_max.

    Exact rationals when A carries an exact form, floats otherwise.
    """
    A = as_matrix(A)
    m_max = require_dimension(m_max, 1, "m_max")
    if A.exact is not None:
        X, d = A.exact, A.denominator
        out, P = [], X
        for m in range(1, m_max + 1):
            if m > 1:
                P = P @ X
            out.append(Fraction(P.trace(), d**m))
        return TraceSequence(tuple(out), exact=True)
    out, P = [], A.data
    with np.errstate(over="ignore", invalid="ignore"):
        for m in range(1, m_max + 1):
            if m == 1:
                out.append(math.fsum(np.diagonal(P)))
                continue
            P = P @ A.data
            t = float(np.trace(P))
            out.append(t if math.isfinite(t) and np.all(np.isfinite(P)) else None)
    return TraceSequence(tuple(out))


@dataclass(frozen=True)
class JLLCheck:
    """One trace inequality s_p^m <= base^(m-1) s_{pm}.

    ``form`` is "modified" (p = 1, base = n - k) or "classical" (base = n).
    """

    form: str
    power: int
    m: int
    lhs: float | None
    rhs: float | None
    satisfied: bool | None
    exact: bool
    skipped: bool = False

    @property
    def name(self) -> str:
        if self.form == "modified":
            return f"jll_modified_m{self.m}"
        return f"jll_classical_k{self.power}_m{self.m}"


def _to_float(x) -> float | None:
    try:
        v = float(x)
    except OverflowError:
        return None
    return v if math.isfinite(v) else None


def _check(form, p, m, base, traces: TraceSequence, tol) -> JLLCheck:
    sp, spm = traces[p], traces[p * m]
    if sp is None or spm is None:
        return JLLCheck(form, p, m, None, None, None, traces.exact, skipped=True)
    if traces.exact:
        lhs, rhs = sp**m, base ** (m - 1) * spm
        return JLLCheck(form, p, m, _to_float(lhs), _to_float(rhs), lhs <= rhs, True)
    try:
        lhs = sp**m
        rhs = float(base) ** (m - 1) * spm
    except OverflowError:
        return JLLCheck(form, p, m, None, None, None, False, skipped=True)
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        return JLLCheck(form, p, m, None, None, None, False, skipped=True)
    ok = lhs <= rhs + tol * max(abs(lhs), abs(rhs))
    return JLLCheck(form, p, m, lhs, rhs, ok, False)


def jll_certificate(A, m_max: int = M_MAX, jll_tol: float = JLL_TOL) -> list[JLLCheck]:
    """Modified trace inequalities s_1^m <= (n-k)^(m-1) s_m for m = 2..m_max,
    plus the classical s_p^m <= n^(m-1) s_{pm} for every p*m <= m_max.

    Exact integer arithmetic when A carries an exact form (both sides scale
    by the same power of the denominator); otherwise floats with relative
    tolerance ``jll_tol``.  Overflowing checks are returned with
    ``skipped=True``.
    """
    A = as_matrix(A)
    m_max = require_dimension(m_max, 2, "m_max")
    n, k = A.n, zero_diagonal_count(A)
    traces = trace_sequence(A, m_max)
    checks = [_check("modified", 1, m, n - k, traces, jll_tol) for m in range(2, m_max + 1)]
    for p in range(1, m_max // 2 + 1):
        for m in range(2, m_max // p + 1):
            checks.append(_check("classical", p, m, n, traces, jll_tol))
    return checks


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------


@dataclass
class BoundReport:
    n: int
    k: int
    spread: float
    perron: float
    bounds: dict[str, float]
    jll: list[JLLCheck]
    violations: list[str]
    distinct_eigenvalues: int
    cluster_tol: float
    eq2_residual: float | None
    pairwise_identity: float
    normalized: bool
    spectrum: Spectrum = field(repr=False)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "n": self.n,
            "k": self.k,
            "spread": self.spread,
            "perron": self.perron,
            "bounds": dict(self.bounds),
            "jll": [dict(asdict(c), name=c.name) for c in self.jll],
            "violations": list(self.violations),
            "distinct_eigenvalues": self.distinct_eigenvalues,
            "cluster_tol": self.cluster_tol,
            "eq2_residual": self.eq2_residual,
            "pairwise_identity": self.pairwise_identity,
            "normalized": self.normalized,
            "spectrum_method": self.spectrum.method,
            "eigenvalues": [[z.real, z.imag] for z in self.spectrum],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def verify_bounds(
    A,
    m_max: int = M_MAX,
    *,
    report_tol: float = REPORT_TOL,
    jll_tol: float = JLL_TOL,
    cluster_tol: float = CLUSTER_TOL,
    radius_tol: float = RADIUS_TOL,
    method: str = "auto",
) -> BoundReport:
    """Evaluate every applicable lower bound against the computed spread.

    The spectrum is divided by the Perron root unless that is already within
    ``radius_tol`` of 1.  The two-eigenvalue bound is added only when the
    spectrum clusters (at ``cluster_tol``) into exactly two values, and the
    zero-(1,1) bounds only when some diagonal entry is zero.
    """
    A = NonnegativeMatrix.wrap(as_matrix(A))
    n, k = A.n, zero_diagonal_count(A)
    if is_nilpotent(A):
        raise NilpotentMatrixError("nilpotent matrix has no unit-radius normalization")
    r = perron_root(A)
    if r <= 0.0:
        raise NilpotentMatrixError()
    spec = eigenvalues(A, method)
    normalized = abs(r - 1.0) > radius_tol
    if normalized:
        spec = spec.scaled(1.0 / r)
    s = spread(spec)
    distinct = distinct_eigenvalue_count(spec, cluster_tol)

    bounds = {"zero_diagonal": bound_zero_diagonal(n, k)}
    if k >= 1 and n >= 2:
        bounds["piecewise"] = spread_lower_bound(n)
        if distinct == 2:
            bounds["two_eigenvalue"] = two_eigenvalue_bound(n)
    violations = [name for name, b in bounds.items() if s < b - report_tol]

    eq2 = None
    if k >= 1 and n >= 4 and 0.0 < s < 1.0:
        eq2 = eq2_residual(n, s)
        if eq2 < -report_tol:
            violations.append("eq2")

    jll = jll_certificate(A, m_max, jll_tol) if m_max >= 2 else []
    violations.extend(c.name for c in jll if c.satisfied is False)

    return BoundReport(
        n=n,
        k=k,
        spread=s,
        perron=r,
        bounds=bounds,
        jll=jll,
        violations=violations,
        distinct_eigenvalues=distinct,
        cluster_tol=cluster_tol,
        eq2_residual=eq2,
        pairwise_identity=pairwise_identity_check(spec),
        normalized=normalized,
        spectrum=spec,
    )
