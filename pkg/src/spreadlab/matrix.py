"""Dense and exact matrix types, structural predicates and the text format.

Zero-pattern questions (zero diagonal, irreducibility, nilpotency) compare
entries to 0 exactly.  Matrices here are constructed, not measured, and the
classes of interest are defined by exact zeros.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionError,
    MatrixFormatError,
    NilpotentMatrixError,
    NumericOverflowError,
)

RADIUS_TOL = 1e-9


def require_dimension(n, minimum: int = 1, name: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise DimensionError(f"{name} must be an integer, got {n!r}")
    if n < minimum:
        raise DimensionError(f"{name} must be >= {minimum}, got {n}")
    return int(n)


# --------------------------------------------------------------------------
# exact integer matrices
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix of Python integers (arbitrary precision).

    Equality is exact entrywise equality; arithmetic never overflows.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        n = len(rows)
        if n == 0:
            raise DimensionError("matrix must have at least one row")
        for r in rows:
            if len(r) != n:
                raise DimensionError("exact matrix must be square")
            for v in r:
                if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                    raise MatrixFormatError(f"exact entries must be integers, got {v!r}")
        object.__setattr__(
            self, "rows", tuple(tuple(int(v) for v in r) for r in rows)
        )

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        n = require_dimension(n)
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> ExactMatrix:
        n = require_dimension(n)
        return cls(tuple((0,) * n for _ in range(n)))

    @classmethod
    def from_entries(cls, n: int, entries: dict[tuple[int, int], int]) -> ExactMatrix:
        """Build from a sparse ``{(i, j): value}`` map with 0-based indices."""
        n = require_dimension(n)
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in entries.items():
            rows[i][j] = v
        return cls(tuple(tuple(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def _check_same(self, other: ExactMatrix) -> None:
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"expected ExactMatrix, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same(other)
        cols = tuple(zip(*other.rows))
        return ExactMatrix(
            tuple(
                tuple(sum(map(operator.mul, row, col)) for col in cols)
                for row in self.rows
            )
        )

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same(other)
        return ExactMatrix(
            tuple(tuple(map(operator.add, a, b)) for a, b in zip(self.rows, other.rows))
        )

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same(other)
        return ExactMatrix(
            tuple(tuple(map(operator.sub, a, b)) for a, b in zip(self.rows, other.rows))
        )

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix(tuple(tuple(-v for v in r) for r in self.rows))

    def __rmul__(self, c: int) -> ExactMatrix:
        if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
            return NotImplemented
        return ExactMatrix(tuple(tuple(c * v for v in r) for r in self.rows))

    def __pow__(self, k: int) -> ExactMatrix:
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = ExactMatrix.identity(self.n)
        for _ in range(k):
            out = out @ self
        return out

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(tuple(zip(*self.rows)))

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def to_numpy(self, dtype=float) -> np.ndarray:
        return np.array(self.rows, dtype=dtype)


def exact_mul(X: ExactMatrix, Y: ExactMatrix) -> ExactMatrix:
    return X @ Y


def exact_sub(X: ExactMatrix, Y: ExactMatrix) -> ExactMatrix:
    return X - Y


def exact_eq(X: ExactMatrix, Y: ExactMatrix) -> bool:
    X._check_same(Y)
    return X.rows == Y.rows


# --------------------------------------------------------------------------
# dense real matrices
# --------------------------------------------------------------------------


class DenseMatrix:
    """Real n x n matrix backed by a read-only float array.

    A matrix may also carry an exact rational form ``exact / denominator``
    with an integer numerator.  Spectral routines use it to avoid the
    ill-conditioning of defective eigenvalues.
    """

    __slots__ = ("_data", "exact", "denominator")

    def __init__(self, entries, *, exact: ExactMatrix | None = None, denominator: int = 1):
        if exact is not None:
            if not isinstance(exact, ExactMatrix):
                raise TypeError("exact must be an ExactMatrix")
            if isinstance(denominator, bool) or not isinstance(denominator, int) or denominator <= 0:
                raise MatrixFormatError("denominator must be a positive integer")
            if entries is None:
                entries = [[v / denominator for v in r] for r in exact.rows]
        data = np.array(entries, dtype=float)
        if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] == 0:
            raise DimensionError(f"expected a non-empty square matrix, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise MatrixFormatError("matrix entries must be finite")
        if exact is not None and exact.n != data.shape[0]:
            raise DimensionError("exact form and entries disagree in size")
        data.setflags(write=False)
        self._data = data
        self.exact = exact
        self.denominator = denominator if exact is not None else 1

    @classmethod
    def from_exact(cls, X: ExactMatrix, denominator: int = 1, **kwargs):
        return cls(None, exact=X, denominator=denominator, **kwargs)

    @classmethod
    def from_fractions(cls, rows: Sequence[Sequence], **kwargs):
        """Build from rational entries, keeping the exact form."""
        fr = [[Fraction(v) for v in r] for r in rows]
        den = reduce(math.lcm, (v.denominator for r in fr for v in r), 1)
        X = ExactMatrix(tuple(tuple(int(v * den) for v in r) for r in fr))
        return cls.from_exact(X, den, **kwargs)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def n(self) -> int:
        return self._data.shape[0]

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def fraction(self, i: int, j: int) -> Fraction:
        if self.exact is not None:
            return Fraction(self.exact[i, j], self.denominator)
        return Fraction(float(self._data[i, j]))

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def __repr__(self) -> str:
        tag = f", exact/{self.denominator}" if self.exact is not None else ""
        return f"{type(self).__name__}(n={self.n}{tag})\n{self._data}"


class NonnegativeMatrix(DenseMatrix):
    """Dense matrix with every entry >= 0.

    ``in_cn`` marks membership of the class of nonnegative matrices with a
    zero (1,1) entry and unit spectral radius.  When set, it is checked on
    construction unless ``validate=False`` (used by producers that have just
    established it themselves).
    """

    __slots__ = ("in_cn",)

    def __init__(
        self,
        entries,
        *,
        exact: ExactMatrix | None = None,
        denominator: int = 1,
        in_cn: bool = False,
        radius_tol: float = RADIUS_TOL,
        validate: bool = True,
    ):
        super().__init__(entries, exact=exact, denominator=denominator)
        if exact is not None:
            if any(v < 0 for r in exact.rows for v in r):
                raise MatrixFormatError("nonnegative matrix has a negative entry")
        elif np.any(self._data < 0):
            raise MatrixFormatError("nonnegative matrix has a negative entry")
        self.in_cn = bool(in_cn)
        if self.in_cn and validate:
            if self._data[0, 0] != 0:
                raise MatrixFormatError("C_n member must have a zero (1,1) entry")
            from .spectral import perron_root

            r = perron_root(self)
            if abs(r - 1.0) > radius_tol:
                raise MatrixFormatError(f"C_n member must have spectral radius 1, got {r!r}")

    @classmethod
    def wrap(cls, M: DenseMatrix, **kwargs) -> NonnegativeMatrix:
        """View a DenseMatrix as nonnegative, keeping its exact form."""
        if isinstance(M, NonnegativeMatrix) and not kwargs:
            return M
        if M.exact is not None:
            return cls(M.data, exact=M.exact, denominator=M.denominator, **kwargs)
        return cls(M.data, **kwargs)


def as_matrix(A) -> DenseMatrix:
    return A if isinstance(A, DenseMatrix) else DenseMatrix(A)


# --------------------------------------------------------------------------
# structural predicates
# --------------------------------------------------------------------------


def zero_diagonal_count(A: DenseMatrix) -> int:
    A = as_matrix(A)
    if A.exact is not None:
        return sum(1 for i in range(A.n) if A.exact[i, i] == 0)
    return int(np.count_nonzero(np.diagonal(A.data) == 0))


def trace_power(A: DenseMatrix, m: int) -> float:
    """tr(A^m); for m = 1 the diagonal sum, no multiplication."""
    A = as_matrix(A)
    m = require_dimension(m, 1, "m")
    if m == 1:
        return math.fsum(np.diagonal(A.data))
    P = A.data
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(m - 1):
            P = P @ A.data
        t = float(np.trace(P))
    if not math.isfinite(t) or not np.all(np.isfinite(P)):
        raise NumericOverflowError()
    return t


def exact_trace_power(X: ExactMatrix, m: int) -> int:
    m = require_dimension(m, 1, "m")
    if m == 1:
        return X.trace()
    return (X**m).trace()


def _pattern(A: DenseMatrix) -> np.ndarray:
    if A.exact is not None:
        return np.array(A.exact.rows, dtype=object) != 0
    return A.data != 0


def _adjacency(P: np.ndarray) -> tuple[list[list[int]], list[list[int]]]:
    n = P.shape[0]
    out_adj: list[list[int]] = [[] for _ in range(n)]
    in_adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in zip(*(idx.tolist() for idx in np.nonzero(P))):
        out_adj[i].append(j)
        in_adj[j].append(i)
    return out_adj, in_adj


def _reaches_all(adj: list[list[int]]) -> bool:
    seen = [False] * len(adj)
    seen[0] = True
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if not seen[j]:
                seen[j] = True
                stack.append(j)
    return all(seen)


def is_irreducible(A: DenseMatrix) -> bool:
    """Strong connectivity of the digraph with an edge i -> j iff a_ij != 0.

    Vertex 0 must reach every vertex and be reached from every vertex
    (two linear-time searches).  A 1 x 1 matrix counts as irreducible
    whatever its entry.
    """
    A = as_matrix(A)
    if A.n == 1:
        return True
    P = _pattern(A)
    if P.all():
        return True
    out_adj, in_adj = _adjacency(P)
    return _reaches_all(out_adj) and _reaches_all(in_adj)


def is_nilpotent(A: DenseMatrix) -> bool:
    """Exact nilpotency test for nonnegative matrices: the digraph is acyclic
    (Kahn's topological sort consumes every vertex)."""
    A = as_matrix(A)
    P = _pattern(A)
    if np.any(np.diagonal(P)):
        return False
    out_adj, in_adj = _adjacency(P)
    indeg = [len(a) for a in in_adj]
    ready = [i for i, d in enumerate(indeg) if d == 0]
    done = 0
    while ready:
        i = ready.pop()
        done += 1
        for j in out_adj[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    return done == A.n


def normalize_to_unit_radius(A: NonnegativeMatrix, radius_tol: float = RADIUS_TOL) -> NonnegativeMatrix:
    """Return A / r(A), flagged as a C_n member when a_11 = 0.

    A matrix whose Perron root is already within ``radius_tol`` of 1 is
    returned with its entries untouched (exact form included).
    """
    from .spectral import perron_root

    A = NonnegativeMatrix.wrap(as_matrix(A))
    if is_nilpotent(A):
        raise NilpotentMatrixError()
    r = perron_root(A)
    if r <= 0.0:
        raise NilpotentMatrixError()
    in_cn = A.data[0, 0] == 0
    if abs(r - 1.0) <= radius_tol:
        if A.exact is not None:
            return NonnegativeMatrix(A.data, exact=A.exact, denominator=A.denominator,
                                     in_cn=in_cn, validate=False)
        return NonnegativeMatrix(A.data, in_cn=in_cn, validate=False)
    return NonnegativeMatrix(A.data / r, in_cn=in_cn, validate=False)


# --------------------------------------------------------------------------
# text format
# --------------------------------------------------------------------------


def parse_matrix(text: str) -> DenseMatrix:
    """Parse the matrix text format: a line with n, then n rows of n numbers.

    Entries are read exactly (as rationals), so the result always carries an
    exact form.
    """
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix text")
    if len(lines[0]) != 1:
        raise MatrixFormatError("first line must contain only the dimension n")
    try:
        n = int(lines[0][0])
    except ValueError:
        raise MatrixFormatError(f"bad dimension {lines[0][0]!r}") from None
    if n < 1:
        raise MatrixFormatError(f"dimension must be >= 1, got {n}")
    body = lines[1:]
    if len(body) != n:
        raise MatrixFormatError(f"expected {n} rows, got {len(body)}")
    rows = []
    for idx, tokens in enumerate(body, start=1):
        if len(tokens) != n:
            raise MatrixFormatError(f"row {idx}: expected {n} entries, got {len(tokens)}")
        try:
            rows.append([Fraction(t) for t in tokens])
        except (ValueError, ZeroDivisionError):
            raise MatrixFormatError(f"row {idx}: non-numeric entry in {tokens}") from None
    return DenseMatrix.from_fractions(rows)


def read_matrix(path) -> DenseMatrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from None
    return parse_matrix(text)


def _format_entry(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def format_matrix(M) -> str:
    """Render ExactMatrix / DenseMatrix / array in the matrix text format."""
    if isinstance(M, ExactMatrix):
        rows: Iterable[Iterable] = M.rows
        n = M.n
    else:
        data = np.asarray(M.data if isinstance(M, DenseMatrix) else M, dtype=float)
        rows = data.tolist()
        n = data.shape[0]
    out = [str(n)]
    out.extend(" ".join(_format_entry(v) for v in r) for r in rows)
    return "\n".join(out) + "\n"
