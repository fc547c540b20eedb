"""Implicit-shift QL for symmetric tridiagonal matrices.

Only the first row of the eigenvector matrix is accumulated (Golub-Welsch),
which is all that spectral weights and Gauss quadrature need.  The kernel is
compiled with numba; each call allocates its own work arrays.
"""

from __future__ import annotations

import numba
import numpy as np

from .errors import ConvergenceError

__all__ = ["tridiag_eig", "tridiag_eig_batch", "MAX_ITER"]

MAX_ITER = 50


@numba.njit(cache=True)
def _ql_first_row(diag, offdiag, max_iter):
    n = diag.shape[0]
    d = diag.copy()
    e = np.zeros(n)
    e[: n - 1] = offdiag
    z = np.zeros(n)
    z[0] = 1.0
    eps = np.finfo(np.float64).eps
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
            if it == max_iter:
                return d, z, l, it
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
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
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z, -1, 0


@numba.njit(cache=True)
def _ql_batch(diags, offdiags, max_iter, out_d, out_w, status):
    for r in range(diags.shape[0]):
        d, z, fail, it = _ql_first_row(diags[r], offdiags[r], max_iter)
        order = np.argsort(d)
        for i in range(d.shape[0]):
            out_d[r, i] = d[order[i]]
            out_w[r, i] = z[order[i]] ** 2
        status[r] = fail


def tridiag_eig(diag, offdiag, max_iter: int = MAX_ITER):
    """Eigenvalues and squared first eigenvector components.

    Parameters
    ----------
    diag : array_like, shape (n,)
        Diagonal entries.
    offdiag : array_like, shape (n-1,)
        Sub/super-diagonal entries.
    max_iter : int
        QL sweeps allowed per eigenvalue.

    Returns
    -------
    eigenvalues : ndarray, shape (n,)
        Sorted ascending.
    weights : ndarray, shape (n,)
        ``|<u_i, e_1>|**2`` for the matching normalised eigenvectors.
    """
    d = np.ascontiguousarray(diag, dtype=np.float64)
    e = np.ascontiguousarray(offdiag, dtype=np.float64)
    if d.ndim != 1 or d.size == 0:
        raise ValueError("diag must be a non-empty 1-d array")
    if e.shape != (d.size - 1,):
        raise ValueError(f"offdiag must have length {d.size - 1}, got {e.shape}")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
        raise ValueError("tridiagonal entries must be finite")
    vals, z, fail, it = _ql_first_row(d, e, max_iter)
    if fail >= 0:
        raise ConvergenceError(
            f"QL did not converge for eigenvalue index {fail} after {it} iterations (n={d.size})"
        )
    order = np.argsort(vals, kind="stable")
    return vals[order], z[order] ** 2


def tridiag_eig_batch(diags, offdiags, max_iter: int = MAX_ITER):
    """Row-wise :func:`tridiag_eig` over a stack of matrices of equal size."""
    d = np.ascontiguousarray(diags, dtype=np.float64)
    e = np.ascontiguousarray(offdiags, dtype=np.float64)
    if d.ndim != 2 or e.shape != (d.shape[0], d.shape[1] - 1):
        raise ValueError("expected diags (R, n) and offdiags (R, n-1)")
    out_d = np.empty_like(d)
    out_w = np.empty_like(d)
    status = np.empty(d.shape[0], dtype=np.int64)
    _ql_batch(d, e, max_iter, out_d, out_w, status)
    bad = np.flatnonzero(status >= 0)
    if bad.size:
        raise ConvergenceError(
            f"QL did not converge for replicate {bad[0]} (eigenvalue index {status[bad[0]]})"
        )
    return out_d, out_w
