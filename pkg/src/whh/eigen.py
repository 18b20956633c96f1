"""Symmetric eigensolver: Householder tridiagonalization plus implicit-shift QL.

Used by the Gauss-Jacobi rule builder (Golub-Welsch, first eigenvector
components only) and by the SPD functional calculus in ``operator_means``.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = [
    "EigenSolverError",
    "tridiagonal_ql",
    "householder_tridiagonalize",
    "symmetric_eigh",
]

MAX_SWEEPS = 60


class EigenSolverError(ArithmeticError):
    """Raised when the QL iteration hits its iteration cap."""


def tridiagonal_ql(diag, offdiag, z=None, max_sweeps=MAX_SWEEPS):
    """Eigen-decompose a symmetric tridiagonal matrix by implicit-shift QL.

    Parameters
    ----------
    diag : array_like, shape (n,)
        Diagonal entries.
    offdiag : array_like, shape (n-1,)
        Sub-diagonal entries.
    z : ndarray, shape (k, n), optional
        Rows to be rotated alongside the matrix. Pass the identity to get the
        full eigenvector matrix, or ``e_1`` as a single row to get only the
        first components (Golub-Welsch). Defaults to the identity.
    max_sweeps : int
        Iteration cap per eigenvalue.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    z : ndarray, shape (k, n)
        Rotated rows; column ``j`` pairs with ``w[j]``.
    """
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    n = diag.size
    z = np.eye(n) if z is None else np.array(z, dtype=float, ndmin=2)
    if z.shape[1] != n:
        raise ValueError("z must have n columns")
    if n > 1 and abs(diag[-1]) < abs(diag[0]):
        # QL is accurate on matrices graded toward the bottom-right; run it on
        # the reversed matrix otherwise
        w, zr = tridiagonal_ql(diag[::-1], offdiag[::-1], z[:, ::-1], max_sweeps)
        return w, zr
    d = diag.tolist()
    e = offdiag.tolist() + [0.0]
    # a single tracked row is rotated as plain floats; numpy per-element overhead dominates otherwise
    row = z[0].tolist() if z.shape[0] == 1 else None
    eps = np.finfo(float).eps

    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_sweeps:
                raise EigenSolverError(
                    f"QL iteration did not converge for eigenvalue {l} after {it} sweeps"
                )
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if row is not None:
                    zi = row[i]
                    row[i] = c * zi - s * row[i + 1]
                    row[i + 1] = s * zi + c * row[i + 1]
                else:
                    zi = z[:, i].copy()
                    z[:, i] = c * zi - s * z[:, i + 1]
                    z[:, i + 1] = s * zi + c * z[:, i + 1]
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    if row is not None:
        z = np.array([row])
    d = np.array(d)
    order = np.argsort(d, kind="stable")
    return d[order], z[:, order]


def householder_tridiagonalize(a):
    """Reduce a symmetric matrix to tridiagonal form, ``a = q @ t @ q.T``.

    Returns ``(diag, offdiag, q)``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1 :, k]
        alpha = -math.copysign(np.linalg.norm(x), x[0] if x[0] != 0 else 1.0)
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        # two-sided reflection P a P with P = I - 2 v v^T on the trailing block
        sub = a[k + 1 :, :]
        sub -= 2.0 * np.outer(v, v @ sub)
        sub = a[:, k + 1 :]
        sub -= 2.0 * np.outer(sub @ v, v)
        qs = q[:, k + 1 :]
        qs -= 2.0 * np.outer(qs @ v, v)
    diag = np.diag(a).copy()
    offdiag = np.diag(a, -1).copy()
    return diag, offdiag, q


def symmetric_eigh(a):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    n = a.shape[0]
    if n == 1:
        return a[0].copy(), np.ones((1, 1))
    diag, offdiag, q = householder_tridiagonalize(0.5 * (a + a.T))
    # rotating the columns of q turns them into eigenvectors of a
    w, v = tridiagonal_ql(diag, offdiag, z=q)
    return w, v
