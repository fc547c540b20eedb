"""Three-term recursions and the maps between moments, recursion
coefficients, recursion variables and canonical moments.

The conversions are written against plain Python sequences and generic
arithmetic: feed :class:`fractions.Fraction` values and every result is
exact, feed floats and the same code runs in double precision.  Polynomial
evaluation and quadrature are numpy-based.

Conventions (monic polynomials ``p_k``)::

    p_0 = 1,  p_1 = x - b_1,
    x p_k = p_{k+1} + b_{k+1} p_k + a_k p_{k-1},
    a_k = z_{2k-1} z_{2k},  b_k = z_{2k-2} + z_{2k-1},  z_0 = 0,
    z_k = (1 - p_{k-1}) p_k,  p_0 = 0.

``k`` moments ``m_1..m_k`` correspond to ``ceil(k/2)`` diagonal entries
``b`` and ``floor(k/2)`` off-diagonal entries ``a``, interleaved as
``b_1, a_1, b_2, a_2, ...`` like the recursion variables ``z_1, z_2, ...``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .eigensolver import tridiag_eig
from .errors import DomainError, NotAMomentSequenceError, SupportError

__all__ = [
    "RecursionCoefficients",
    "coeffs_from_z",
    "z_from_coeffs",
    "z_from_canonical",
    "canonical_from_z",
    "moments_from_coeffs",
    "coeffs_from_moments",
    "eval_orthonormal",
    "orthonormal_monomial_coeffs",
    "gauss_quadrature",
    "MAX_FLOAT_MOMENTS",
]

#: raw-moment inversion in double precision is refused above this many moments
MAX_FLOAT_MOMENTS = 15


@dataclass(frozen=True)
class RecursionCoefficients:
    """Diagonal ``b_1, b_2, ...`` and off-diagonal ``a_1, a_2, ...`` (all ``a > 0``)."""

    b: tuple
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(self.b))
        object.__setattr__(self, "a", tuple(self.a))
        for i, ai in enumerate(self.a, start=1):
            if not ai > 0:
                raise DomainError(f"recursion coefficient a_{i} = {ai} is not positive")

    @property
    def exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.b + self.a)

    def as_float(self) -> "RecursionCoefficients":
        return RecursionCoefficients(tuple(map(float, self.b)), tuple(map(float, self.a)))

    def interleaved(self) -> tuple:
        """``(b_1, a_1, b_2, a_2, ...)``."""
        out = []
        for i, bi in enumerate(self.b):
            out.append(bi)
            if i < len(self.a):
                out.append(self.a[i])
        return tuple(out)

    @classmethod
    def from_interleaved(cls, r: Sequence) -> "RecursionCoefficients":
        return cls(tuple(r[0::2]), tuple(r[1::2]))


def _positive(seq, name):
    for i, v in enumerate(seq, start=1):
        if not v > 0:
            raise DomainError(f"{name}_{i} = {v} must be positive")


def coeffs_from_z(z: Sequence[Real]) -> RecursionCoefficients:
    """Recursion coefficients from recursion variables ``z_1..z_L``.

    Returns ``ceil(L/2)`` values of ``b`` and ``floor(L/2)`` values of ``a``.
    """
    z = tuple(z)
    if not z:
        raise DomainError("need at least one recursion variable")
    _positive(z, "z")
    zz = (0,) + z  # zz[i] = z_i with z_0 = 0
    b = tuple(zz[2 * k - 2] + zz[2 * k - 1] for k in range(1, (len(z) + 1) // 2 + 1))
    a = tuple(zz[2 * k - 1] * zz[2 * k] for k in range(1, len(z) // 2 + 1))
    return RecursionCoefficients(b, a)


def z_from_coeffs(c: RecursionCoefficients) -> tuple:
    """Invert :func:`coeffs_from_z`.

    Raises
    ------
    SupportError
        If some ``z_k <= 0``; the underlying measure is then not supported
        on ``[0, inf)``.
    """
    r = c.interleaved()
    if not r:
        raise DomainError("empty recursion coefficients")
    z = []
    prev = 0
    for idx, val in enumerate(r):
        if idx % 2 == 0:  # b_{k} -> z_{2k-1}
            zk = val - prev
        else:  # a_k -> z_{2k}
            zk = val / prev
        if not zk > 0:
            raise SupportError(
                f"z_{idx + 1} = {zk} <= 0: measure is not supported on [0, inf)"
            )
        z.append(zk)
        prev = zk
    return tuple(z)


def z_from_canonical(p: Sequence[Real]) -> tuple:
    """Chain sequence ``z_k = (1 - p_{k-1}) p_k`` with ``p_0 = 0``."""
    p = tuple(p)
    if not p:
        raise DomainError("need at least one canonical moment")
    for i, v in enumerate(p, start=1):
        if not 0 < v < 1:
            raise DomainError(f"canonical moment p_{i} = {v} outside (0, 1)")
    prev = 0
    out = []
    for v in p:
        out.append((1 - prev) * v)
        prev = v
    return tuple(out)


def canonical_from_z(z: Sequence[Real]) -> tuple:
    """Invert :func:`z_from_canonical`.

    Raises
    ------
    SupportError
        If some ``p_k`` falls outside ``(0, 1)``; the measure is then not
        supported on ``[0, 1]``.
    """
    z = tuple(z)
    if not z:
        raise DomainError("need at least one recursion variable")
    prev = 0
    out = []
    for i, v in enumerate(z, start=1):
        pk = v / (1 - prev)
        if not 0 < pk < 1:
            raise SupportError(f"p_{i} = {pk} outside (0, 1): measure is not supported on [0, 1]")
        out.append(pk)
        prev = pk
    return tuple(out)


def moments_from_coeffs(c: RecursionCoefficients, k: int) -> tuple:
    """Moments ``m_1..m_k`` of the measure orthogonalising the recursion.

    Uses ``m_j = e_1^T J^j e_1`` with the monic Jacobi matrix ``J``
    (diagonal ``b``, superdiagonal ``a``, subdiagonal ones), which has the
    same moments as the symmetric form and needs no square roots, so
    rational input gives exact output.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    nb, na = (k + 1) // 2, k // 2
    if len(c.b) < nb or len(c.a) < na:
        raise DomainError(
            f"{k} moments need {nb} diagonal and {na} off-diagonal coefficients, "
            f"got {len(c.b)} and {len(c.a)}"
        )
    size = k // 2 + 1
    zero = c.b[0] * 0
    b = list(c.b[:size]) + [zero] * (size - min(size, len(c.b)))
    a = list(c.a[: size - 1])
    v = [zero + 1] + [zero] * (size - 1)
    out = []
    for _ in range(k):
        w = [zero] * size
        for i in range(size):
            s = b[i] * v[i]
            if i + 1 < size:
                s += a[i] * v[i + 1]
            if i > 0:
                s += v[i - 1]
            w[i] = s
        v = w
        out.append(v[0])
    return tuple(out)


def coeffs_from_moments(
    m: Sequence[Real],
    *,
    allow_ill_conditioned: bool = False,
    residual_tol: float = 1e-9,
) -> RecursionCoefficients:
    """Recursion coefficients from moments ``m_1..m_k`` (``m_0 = 1`` implied).

    Runs the Chebyshev algorithm, i.e. the bordered-Hankel elimination on
    the raw moments.  ``k`` moments give ``ceil(k/2)`` values of ``b`` and
    ``floor(k/2)`` values of ``a``.

    With Fraction input the result is exact.  In floating point the monomial
    basis is badly conditioned; more than :data:`MAX_FLOAT_MOMENTS` moments
    are refused unless ``allow_ill_conditioned`` is set, and the result is
    always pushed back through :func:`moments_from_coeffs` as a residual check.

    Raises
    ------
    NotAMomentSequenceError
        A Hankel determinant ratio ``a_1 ... a_j`` is not positive.
    """
    m = tuple(m)
    k = len(m)
    if k == 0:
        raise DomainError("need at least one moment")
    exact = all(isinstance(v, (int, Fraction)) for v in m)
    if exact:
        mom = [Fraction(1)] + [Fraction(v) for v in m]
    else:
        if k > MAX_FLOAT_MOMENTS and not allow_ill_conditioned:
            raise DomainError(
                f"inverting {k} raw moments in double precision is ill-conditioned; "
                "pass Fraction moments or allow_ill_conditioned=True"
            )
        mom = [1.0] + [float(v) for v in m]

    # sigma[l] holds sigma_{j,l} = integral of p_j(x) x^l for the current j
    sig_prev = [0 * mom[0]] * (k + 1)
    sig = list(mom)
    b, a = [], []
    alpha = mom[1] / mom[0]
    b.append(alpha)
    beta = mom[0]
    for j in range(1, k // 2 + 1):
        new = [0 * mom[0]] * (k + 1)
        for l in range(j, k - j + 1):
            new[l] = sig[l + 1] - alpha * sig[l] - beta * sig_prev[l]
        if not new[j] > 0:
            raise NotAMomentSequenceError(
                f"Hankel matrix of order {j + 1} is not positive definite "
                "(not a moment sequence of a nondegenerate measure)"
            )
        beta = new[j] / sig[j - 1]
        a.append(beta)
        if 2 * j + 1 <= k:
            alpha = new[j + 1] / new[j] - sig[j] / sig[j - 1]
            b.append(alpha)
        sig_prev, sig = sig, new
    out = RecursionCoefficients(tuple(b), tuple(a))

    if not exact:
        back = moments_from_coeffs(out, k)
        scale = max(1.0, max(abs(v) for v in m))
        resid = max(abs(x - y) for x, y in zip(back, m)) / scale
        if not resid <= residual_tol:
            raise NotAMomentSequenceError(
                f"moment roundtrip residual {resid:.3e} exceeds {residual_tol:.1e}"
            )
    return out


def _check_degree(c: RecursionCoefficients, degree: int):
    if degree < 0:
        raise DomainError(f"degree must be nonnegative, got {degree}")
    if len(c.b) < degree or len(c.a) < degree:
        raise DomainError(
            f"orthonormal degree {degree} needs b_1..b_{degree} and a_1..a_{degree}"
        )


def eval_orthonormal(c: RecursionCoefficients, degree: int, x):
    """Evaluate the orthonormal polynomial of the given degree at ``x``.

    Uses the normalised recurrence
    ``sqrt(a_{k+1}) q_{k+1} = (x - b_{k+1}) q_k - sqrt(a_k) q_{k-1}``,
    which equals ``p_k / sqrt(a_1 ... a_k)`` without forming the product.
    """
    _check_degree(c, degree)
    x = np.asarray(x, dtype=float)
    b = np.asarray(c.b, dtype=float)
    sa = np.sqrt(np.asarray(c.a, dtype=float))
    q_prev = np.zeros_like(x)
    q = np.ones_like(x)
    for k in range(degree):
        nxt = ((x - b[k]) * q - (sa[k - 1] * q_prev if k > 0 else 0.0)) / sa[k]
        q_prev, q = q, nxt
    return q if q.ndim else float(q)


def orthonormal_monomial_coeffs(c: RecursionCoefficients, k: int) -> np.ndarray:
    """Monomial coefficients of the orthonormal polynomials of degrees 1..k.

    Returns
    -------
    ndarray, shape (k, k + 1)
        Row ``i - 1`` holds the coefficients of ``x^0 .. x^k`` of the
        degree-``i`` orthonormal polynomial.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    _check_degree(c, k)
    b = np.asarray(c.b, dtype=float)
    sa = np.sqrt(np.asarray(c.a, dtype=float))
    table = np.zeros((k + 1, k + 1))
    table[0, 0] = 1.0
    for d in range(k):
        row = -b[d] * table[d]
        row[1:] += table[d, :-1]
        if d > 0:
            row -= sa[d - 1] * table[d - 1]
        table[d + 1] = row / sa[d]
    return table[1:]


def gauss_quadrature(c: RecursionCoefficients, K: int):
    """K-point Gauss rule for the measure of ``c``.

    The nodes are the eigenvalues of the K x K truncated Jacobi matrix and
    the weights the squared first eigenvector components, i.e. the spectral
    measure of that truncation.  Exact for polynomials of degree ``2K - 1``.
    """
    if K < 1:
        raise DomainError(f"quadrature needs K >= 1 nodes, got {K}")
    if len(c.b) < K or len(c.a) < K - 1:
        raise DomainError(f"K={K} nodes need b_1..b_{K} and a_1..a_{K - 1}")
    diag = np.asarray(c.b[:K], dtype=float)
    off = np.sqrt(np.asarray(c.a[: K - 1], dtype=float))
    return tridiag_eig(diag, off)
