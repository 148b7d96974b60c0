"""Small dense eigensolver: balancing, Householder Hessenberg reduction and
complex single-shift QR with Wilkinson shifts and deflation.

Eigenvalues only.  Meant for n in the tens; it is the independent
cross-check for the LAPACK path, not the production backend.
"""

from __future__ import annotations

import cmath

import numpy as np

from .errors import ConvergenceError

_EPS = np.finfo(float).eps


def balance(A: np.ndarray) -> np.ndarray:
    """Diagonal similarity by powers of two so row and column norms match."""
    H = np.array(A, dtype=float)
    n = H.shape[0]
    radix = 2.0
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = np.sum(np.abs(H[:, i])) - abs(H[i, i])
            r = np.sum(np.abs(H[i, :])) - abs(H[i, i])
            if c == 0.0 or r == 0.0:
                continue
            g, f, s = r / radix, 1.0, c + r
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                converged = False
                H[i, :] /= f
                H[:, i] *= f
    return H


def hessenberg(A: np.ndarray) -> np.ndarray:
    """Upper Hessenberg matrix similar to A (Householder reflections)."""
    H = np.array(A, dtype=float)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1 :, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        H[k + 1 :, k:] -= 2.0 * np.outer(v, v @ H[k + 1 :, k:])
        H[:, k + 1 :] -= 2.0 * np.outer(H[:, k + 1 :] @ v, v)
        H[k + 2 :, k] = 0.0
    return H


def _eig2(a, b, c, d) -> tuple[complex, complex]:
    """Closed-form eigenvalues of [[a, b], [c, d]]."""
    half_tr = 0.5 * (a + d)
    disc = cmath.sqrt(0.25 * (a - d) ** 2 + b * c)
    return half_tr + disc, half_tr - disc


def _wilkinson(a, b, c, d) -> complex:
    l1, l2 = _eig2(a, b, c, d)
    return l1 if abs(l1 - d) <= abs(l2 - d) else l2


def _qr_sweep(H: np.ndarray, lo: int, hi: int, mu: complex) -> None:
    """One explicit shifted QR step on the window H[lo:hi+1, lo:hi+1]."""
    m = hi - lo + 1
    W = H[lo : hi + 1, lo : hi + 1]
    W -= mu * np.eye(m)
    rots = []
    for k in range(m - 1):
        x, y = W[k, k], W[k + 1, k]
        r = np.hypot(abs(x), abs(y))
        if r == 0.0:
            c, s = 1.0, 0.0
        else:
            c, s = x / r, y / r
        G = np.array([[np.conj(c), np.conj(s)], [-s, c]])
        W[k : k + 2, k:] = G @ W[k : k + 2, k:]
        rots.append(G)
    for k, G in enumerate(rots):
        W[: k + 2, k : k + 2] = W[: k + 2, k : k + 2] @ G.conj().T
    W += mu * np.eye(m)


def hqr_eigenvalues(
    A: np.ndarray, max_iter: int = 40, do_balance: bool = True
) -> tuple[list[complex], float]:
    """All eigenvalues of a real square matrix.

    Returns ``(eigenvalues, achieved)`` where ``achieved`` is the largest
    subdiagonal magnitude that was set to zero at a deflation.  Raises
    ConvergenceError (with the eigenvalues found so far) when one eigenvalue
    needs more than ``max_iter`` sweeps.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n == 1:
        return [complex(A[0, 0])], 0.0
    # work at unit scale so deflation tests cannot underflow
    amax = float(np.max(np.abs(A)))
    if amax == 0.0:
        return [0j] * n, 0.0
    H = balance(A / amax) if do_balance else A / amax
    H = hessenberg(H).astype(complex)
    # normwise floor: dropping a subdiagonal this small is a backward-stable perturbation
    floor = _EPS * float(np.linalg.norm(H, 1))
    found: list[complex] = []
    achieved = 0.0
    hi = n - 1
    iters = 0
    while hi >= 0:
        if hi == 0:
            found.append(complex(H[0, 0]))
            break
        l = hi
        while l > 0:
            sub = abs(H[l, l - 1])
            scale = abs(H[l, l]) + abs(H[l - 1, l - 1])
            if scale == 0.0:
                scale = np.linalg.norm(H[: hi + 1, : hi + 1], 1)
            if sub <= _EPS * scale or sub <= floor:
                achieved = max(achieved, sub)
                H[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            found.append(complex(H[hi, hi]))
            hi -= 1
            iters = 0
            continue
        if l == hi - 1:
            found.extend(_eig2(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi]))
            hi -= 2
            iters = 0
            continue
        if iters >= max_iter:
            raise ConvergenceError(
                f"QR iteration did not converge in {max_iter} sweeps", partial=found
            )
        iters += 1
        if iters % 10 == 0:
            # exceptional shift breaks stagnation cycles
            mu = H[hi, hi] + abs(H[hi, hi - 1]) + abs(H[hi - 1, hi - 2] if hi >= 2 else 0.0)
        else:
            mu = _wilkinson(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        _qr_sweep(H, l, hi, mu)
    return [z * amax for z in found], float(achieved) * amax
