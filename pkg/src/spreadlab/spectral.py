"""Eigenvalues, Perron root and the spread functional."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import mpmath
import numpy as np

from .errors import ConvergenceError, MatrixFormatError
from .matrix import DenseMatrix, ExactMatrix, as_matrix, is_irreducible

PAIRING_TOL = 1e-8
CLUSTER_TOL = 1e-6
QR_MAX_ITER = 40
PERRON_TOL = 1e-13
PERRON_MAX_ITER = 20000
EXACT_DPS = 40


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicity, plus how far they can be trusted.

    ``max_residual`` is the largest ||Av - lv|| / ||v|| over the computed
    eigenpairs (LAPACK), the largest deflated subdiagonal (QR), or the
    largest Newton correction of a root of a squarefree factor (exact).
    """

    eigenvalues: tuple[complex, ...]
    max_residual: float = 0.0
    method: str = "lapack"

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)

    def as_array(self) -> np.ndarray:
        return np.array(self.eigenvalues, dtype=complex)

    def scaled(self, c: float) -> Spectrum:
        return Spectrum(tuple(c * z for z in self.eigenvalues), abs(c) * self.max_residual, self.method)

    def radius(self) -> float:
        return float(np.max(np.abs(self.as_array())))

    def is_conjugate_closed(self, tol: float = PAIRING_TOL) -> bool:
        remaining = list(self.eigenvalues)
        for z in self.eigenvalues:
            dist = [abs(w - z.conjugate()) for w in remaining]
            j = int(np.argmin(dist))
            if dist[j] > tol:
                return False
            remaining.pop(j)
        return True


def _sorted(vals: Iterable[complex]) -> tuple[complex, ...]:
    return tuple(sorted((complex(z) for z in vals), key=lambda z: (-z.real, -z.imag)))


def _lapack(A: np.ndarray) -> Spectrum:
    try:
        w, V = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"LAPACK eigensolver failed: {exc}", partial=()) from None
    norms = np.linalg.norm(V, axis=0)
    norms[norms == 0] = 1.0
    res = np.linalg.norm(A @ V - V * w, axis=0) / norms
    return Spectrum(_sorted(w), float(np.max(res)) if res.size else 0.0, "lapack")


def _qr(A: np.ndarray, max_iter: int) -> Spectrum:
    from ._qr import hqr_eigenvalues

    vals, achieved = hqr_eigenvalues(A, max_iter=max_iter)
    return Spectrum(_sorted(vals), achieved, "qr")


def charpoly(X: ExactMatrix) -> list[int]:
    """Integer coefficients of det(tI - X), leading coefficient first."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    dM = DomainMatrix([[ZZ(v) for v in r] for r in X.rows], (X.n, X.n), ZZ)
    return [int(c) for c in dM.charpoly()]


def _exact(X: ExactMatrix, denominator: int) -> Spectrum:
    from sympy import Poly, Symbol

    t = Symbol("t")
    p = Poly(charpoly(X), t)
    _, factors = p.sqf_list()
    vals: list[complex] = []
    worst = mpmath.mpf(0)
    with mpmath.workdps(EXACT_DPS):
        for f, mult in factors:
            coeffs = [int(c) for c in f.all_coeffs()]
            if len(coeffs) == 2:
                roots = [mpmath.mpf(-coeffs[1]) / coeffs[0]]
            else:
                try:
                    roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * EXACT_DPS)
                except mpmath.libmp.NoConvergence:
                    raise ConvergenceError(
                        f"root finding failed for a degree-{len(coeffs) - 1} factor",
                        partial=tuple(vals),
                    ) from None
                for z in roots:
                    val, der = mpmath.polyval(coeffs, z, derivative=True)
                    if der != 0:
                        worst = max(worst, abs(val / der))
            for z in roots:
                zc = complex(mpmath.mpc(z) / denominator)
                vals.extend([zc] * mult)
    return Spectrum(_sorted(vals), float(worst / denominator), "exact")


def exact_form(A: DenseMatrix) -> tuple[ExactMatrix, int]:
    """The exact rational form of A; float entries are dyadic rationals."""
    if A.exact is not None:
        return A.exact, A.denominator
    M = DenseMatrix.from_fractions(A.data.tolist())
    return M.exact, M.denominator


def eigenvalues(A, method: str = "auto", max_iter: int = QR_MAX_ITER) -> Spectrum:
    """All n eigenvalues of a real square matrix, with multiplicity.

    ``method`` is one of:

    * ``"lapack"`` -- balancing, Hessenberg reduction and shifted QR (LAPACK);
    * ``"qr"`` -- the in-package Hessenberg / Wilkinson-shift QR;
    * ``"exact"`` -- exact characteristic polynomial, squarefree
      factorization, then high-precision roots of each factor.  Repeated
      (even defective) eigenvalues come out exactly repeated;
    * ``"auto"`` -- ``"exact"`` for matrices carrying an exact form,
      otherwise ``"lapack"``.
    """
    A = as_matrix(A)
    if method == "auto":
        method = "exact" if A.exact is not None else "lapack"
    if method == "lapack":
        return _lapack(A.data)
    if method == "qr":
        return _qr(A.data, max_iter)
    if method == "exact":
        return _exact(*exact_form(A))
    raise ValueError(f"unknown eigenvalue method {method!r}")


def spread(S) -> float:
    """Largest distance between two eigenvalues (pairwise O(n^2) scan)."""
    vals = S.as_array() if isinstance(S, Spectrum) else np.asarray(list(S), dtype=complex)
    if vals.size == 0:
        raise ValueError("spread of an empty spectrum")
    return float(np.max(np.abs(vals[:, None] - vals[None, :])))


def distinct_eigenvalue_count(S, cluster_tol: float = CLUSTER_TOL) -> int:
    """Number of greedy clusters of eigenvalues within ``cluster_tol``.

    Each eigenvalue joins the first cluster whose seed lies within the
    tolerance, else seeds a new one.  The answer depends on the tolerance.
    """
    if cluster_tol <= 0:
        raise ValueError("cluster_tol must be positive")
    seeds: list[complex] = []
    for z in S:
        if not any(abs(z - c) <= cluster_tol for c in seeds):
            seeds.append(z)
    return len(seeds)


@dataclass(frozen=True)
class PerronRoot:
    value: float
    lower: float
    upper: float
    iterations: int
    method: str  # "power" (certified bracket) or "eigen" (fallback)


def perron(
    A,
    tol: float = PERRON_TOL,
    max_iter: int = PERRON_MAX_ITER,
    shift: float = 1.0,
    stride: int = 8,
) -> PerronRoot:
    """Perron root of a nonnegative matrix.

    Power iteration on B = A + shift*I from the all-ones vector, advancing
    ``stride`` steps at a time with a precomputed (scaled) power P of B.  The
    Collatz-Wielandt quotients min/max (Px)_i / x_i bracket r(P) = r(B)^stride
    and stop the iteration once the bracket on r(B) is tighter than ``tol``
    (relative).  The bracket is only a certificate for irreducible A, so
    reducible inputs, and runs that exhaust ``max_iter`` steps, fall back to
    the largest eigenvalue modulus.
    """
    A = as_matrix(A)
    data = A.data
    if np.any(data < 0):
        raise MatrixFormatError("Perron root requires a nonnegative matrix")
    n = A.n
    if is_irreducible(A):
        B = data + shift * np.eye(n)
        scale = float(np.max(B.sum(axis=1)))
        P = B / scale
        k = 1
        while k < stride:
            P = P @ P
            k *= 2
        x = np.ones(n)
        for it in range(1, max_iter // k + 1):
            y = P @ x
            q = y / x
            lo, hi = float(q.min()), float(q.max())
            if hi - lo <= k * tol * hi:
                lo_b, hi_b = scale * lo ** (1.0 / k), scale * hi ** (1.0 / k)
                mid = 0.5 * (lo_b + hi_b)
                return PerronRoot(max(mid - shift, 0.0), lo_b - shift, hi_b - shift, it * k, "power")
            x = y / hi
    r = eigenvalues(A).radius()
    return PerronRoot(r, r, r, 0, "eigen")


def perron_root(A, **kwargs) -> float:
    return perron(A, **kwargs).value
