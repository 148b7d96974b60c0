"""Extremal two-eigenvalue family and its exact similarity certificate.

All matrices are built over the integers; indices in comments are 1-based
to match the usual statement of the construction, code is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConstructionError
from .matrix import ExactMatrix, NonnegativeMatrix, require_dimension


def build_N(n: int) -> ExactMatrix:
    """Subdiagonal 0/1 nilpotent: N e_i = e_{i+1}."""
    n = require_dimension(n, 1)
    return ExactMatrix.from_entries(n, {(i + 1, i): 1 for i in range(n - 1)})


def build_M(n: int) -> ExactMatrix:
    """Superdiagonal n-1, n-2, ..., 1, zeros elsewhere."""
    n = require_dimension(n, 1)
    return ExactMatrix.from_entries(n, {(i, i + 1): n - 1 - i for i in range(n - 1)})


def build_A(n: int) -> ExactMatrix:
    """a_{i,i+1} = n-i, a_{i,i} = n for i >= 2, a_{i,j} = 2 for even i-j > 0."""
    n = require_dimension(n, 2)
    entries: dict[tuple[int, int], int] = {}

    def place(ij, value):
        if ij in entries:
            raise ConstructionError(f"placement rules collide at {ij}")
        entries[ij] = value

    for i in range(n - 1):
        place((i, i + 1), n - 1 - i)
    for i in range(1, n):
        place((i, i), n)
    for i in range(n):
        for j in range(i - 2, -1, -2):
            place((i, j), 2)
    return ExactMatrix.from_entries(n, entries)


def build_U(n: int) -> ExactMatrix:
    """Upper bidiagonal: u_{i,i+1} = n-i, u_11 = 2(n-1), u_ii = n-2 otherwise."""
    n = require_dimension(n, 2)
    entries = {(i, i + 1): n - 1 - i for i in range(n - 1)}
    entries[(0, 0)] = 2 * (n - 1)
    for i in range(1, n):
        entries[(i, i)] = n - 2
    return ExactMatrix.from_entries(n, entries)


def _series(n: int) -> ExactMatrix:
    n = require_dimension(n, 2)
    return ExactMatrix.from_entries(
        n, {(i, j): (1 if i == j else 2) for i in range(n) for j in range(i + 1)}
    )


def _series_identity_holds(S: ExactMatrix) -> bool:
    I, N = ExactMatrix.identity(S.n), build_N(S.n)
    return (I - N) @ S == I + N


def build_S(n: int) -> ExactMatrix:
    """(I+N)(I-N)^{-1} as the finite series I + 2N + ... + 2N^{n-1}.

    The defining identity (I-N) S = I+N is checked exactly before returning.
    """
    S = _series(n)
    if not _series_identity_holds(S):
        raise ConstructionError(f"series identity (I-N)S = I+N failed at n={n}")
    return S


@dataclass(frozen=True)
class ExtremalFamily:
    n: int
    A: ExactMatrix
    U: ExactMatrix
    N: ExactMatrix
    M: ExactMatrix
    S: ExactMatrix

    @classmethod
    def build(cls, n: int) -> ExtremalFamily:
        return cls(n, build_A(n), build_U(n), build_N(n), build_M(n), build_S(n))

    def get(self, which: str) -> ExactMatrix:
        if which not in ("A", "U", "N", "M", "S"):
            raise KeyError(which)
        return getattr(self, which)


def _e_k_e1t(n: int, k: int) -> ExactMatrix:
    return ExactMatrix.from_entries(n, {(k - 1, 0): 1})


def commutator_identity_check(n: int, k: int) -> bool:
    """[N^k, M] == k N^{k-1} - n e_k e_1^T, exactly (n = 1 is the trivial 0 = I - I)."""
    n = require_dimension(n, 1)
    k = require_dimension(k, 1, "k")
    if k > n:
        raise ValueError(f"k must be <= n, got k={k}, n={n}")
    N, M = build_N(n), build_M(n)
    Nk = N**k
    lhs = Nk @ M - M @ Nk
    rhs = k * (N ** (k - 1)) - n * _e_k_e1t(n, k)
    return lhs == rhs


def commutator_suite(n: int) -> bool:
    """All commutator identities for k = 1..n, sharing the powers of N."""
    n = require_dimension(n, 1)
    N, M = build_N(n), build_M(n)
    I = ExactMatrix.identity(n)
    prev, ok = I, True
    for k in range(1, n + 1):
        Nk = prev @ N
        lhs = Nk @ M - M @ Nk
        rhs = k * prev - n * _e_k_e1t(n, k)
        ok &= lhs == rhs
        prev = Nk
    return ok


def verify_similarity(n: int) -> bool:
    """S U - A S is the zero matrix, in exact integer arithmetic."""
    fam = ExtremalFamily.build(n)
    return (fam.S @ fam.U - fam.A @ fam.S).is_zero()


def series_identity(n: int) -> bool:
    """(I-N) S == I+N for the truncated series S."""
    return _series_identity_holds(_series(n))


def nilpotency_checks(n: int) -> bool:
    n = require_dimension(n, 2)
    return (build_N(n) ** n).is_zero() and (build_M(n) ** n).is_zero()


def certificate(n: int) -> dict:
    """JSON-ready certificate of the exact identities for one n."""
    n = require_dimension(n, 2)
    return {
        "format_version": 1,
        "n": n,
        "similarity_exact": verify_similarity(n),
        "commutators_exact": commutator_suite(n),
        "series_identity_exact": series_identity(n),
        "nilpotent_exact": nilpotency_checks(n),
    }


def extremal_matrix(n: int) -> NonnegativeMatrix:
    """build_A(n) / (2(n-1)): a unit-radius member with two distinct eigenvalues.

    The exact form is kept, so its spectrum {1, (n-2)/(2(n-1)) x (n-1)} is
    recovered exactly by the spectral module.
    """
    n = require_dimension(n, 2)
    return NonnegativeMatrix.from_exact(build_A(n), 2 * (n - 1), in_cn=True)


def witness_3x3() -> NonnegativeMatrix:
    """(1/4) [[0,2,0],[0,3,1],[2,0,3]], spectrum {1, 1/4, 1/4}."""
    X = ExactMatrix(((0, 2, 0), (0, 3, 1), (2, 0, 3)))
    return NonnegativeMatrix.from_exact(X, 4, in_cn=True)


def witness_2x2() -> NonnegativeMatrix:
    """diag(0, 1)."""
    return NonnegativeMatrix.from_exact(ExactMatrix(((0, 0), (0, 1))), 1, in_cn=True)
