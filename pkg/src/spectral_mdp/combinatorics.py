"""Exact lattice-path combinatorics and the moment covariance factors ``D_k``.

Everything here works in arbitrary-precision integers and
:class:`fractions.Fraction`.  The only irrational quantity is the common
``2**-0.5`` factor of the Jacobi rows, which is carried as a flag and only
resolved by :meth:`DkMatrix.to_float`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

__all__ = [
    "Ensemble",
    "DkMatrix",
    "binom",
    "gen_catalan",
    "count_paths_dp",
    "dk_matrix",
    "covariance_identity_error",
    "crossing_identity_error",
    "odd_crossing_identity_error",
]


class Ensemble(str, enum.Enum):
    GAUSSIAN = "gaussian"
    LAGUERRE = "laguerre"
    JACOBI = "jacobi"

    @classmethod
    def parse(cls, value: "Ensemble | str") -> "Ensemble":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown ensemble {value!r}") from None


def binom(n: int, m: int) -> int:
    """Binomial coefficient with ``C(n, m) = 0`` for ``m < 0`` or ``m > n``."""
    if m < 0 or m > n:
        return 0
    return comb(n, m)


def gen_catalan(i: int, j: int) -> int:
    """Generalised Catalan number ``d_{i,j} = C(i+j, i) - C(i+j, i-1)``.

    Counts the monotone lattice paths from ``(i, j)`` to ``(0, 0)`` that stay
    in the region ``j >= i``.  ``d_{k,k}`` is the k-th Catalan number.
    """
    if i < 0 or j < 0:
        raise ValueError(f"gen_catalan needs nonnegative indices, got ({i}, {j})")
    if i > j:
        raise ValueError(f"gen_catalan needs i <= j, got ({i}, {j})")
    return binom(i + j, i) - binom(i + j, i - 1)


def count_paths_dp(i: int, j: int) -> int:
    """Count lattice paths from ``(i, j)`` to ``(0, 0)`` by dynamic programming.

    Each step decreases either coordinate by one and the walk must remain in
    ``{(r, s): s >= r}``.  Independent of the closed form in :func:`gen_catalan`.
    """
    if i < 0 or j < 0 or i > j:
        raise ValueError(f"count_paths_dp needs 0 <= i <= j, got ({i}, {j})")
    if i + j > 40:
        raise ValueError("count_paths_dp is an oracle; keep i + j <= 40")
    # ways[r][s]: number of admissible paths from (r, s) down to (0, 0)
    ways = [[0] * (j + 1) for _ in range(i + 1)]
    for r in range(i + 1):
        for s in range(r, j + 1):
            if r == 0 and s == 0:
                ways[r][s] = 1
                continue
            total = 0
            if r > 0:
                total += ways[r - 1][s]
            if s > r:
                total += ways[r][s - 1]
            ways[r][s] = total
    return ways[i][j]


@dataclass(frozen=True)
class DkMatrix:
    """Lower-triangular covariance factor of the moment CLT.

    ``rows[i-1][j-1]`` holds the exact rational part of entry ``(i, j)``.
    When ``sqrt2_scaled`` is set every entry is additionally multiplied by
    ``2**-0.5`` (Jacobi ensemble).  Indices in the public accessors are
    1-based to match moment indices.
    """

    ensemble: Ensemble
    k: int
    rows: tuple[tuple[Fraction, ...], ...]
    sqrt2_scaled: bool = False

    def entry(self, i: int, j: int) -> Fraction:
        """Rational part of entry ``(i, j)``, 1-based; zero above the diagonal."""
        if not (1 <= i <= self.k and 1 <= j <= self.k):
            raise IndexError(f"entry ({i}, {j}) outside a {self.k}x{self.k} matrix")
        return self.rows[i - 1][j - 1] if j <= i else Fraction(0)

    def to_float(self) -> np.ndarray:
        out = np.zeros((self.k, self.k))
        for i, row in enumerate(self.rows):
            out[i, : len(row)] = [float(v) for v in row]
        if self.sqrt2_scaled:
            out /= np.sqrt(2.0)
        return out

    def inverse_rows(self) -> tuple[tuple[Fraction, ...], ...]:
        """Exact inverse of the rational part by forward substitution.

        The full inverse is this times ``sqrt(2)`` when ``sqrt2_scaled``.
        """
        inv: list[list[Fraction]] = []
        for i in range(self.k):
            row = [Fraction(0)] * (i + 1)
            row[i] = 1 / self.rows[i][i]
            for j in range(i):
                s = sum((self.rows[i][r] * inv[r][j] for r in range(j, i)), Fraction(0))
                row[j] = -s / self.rows[i][i]
            inv.append(row)
        return tuple(tuple(r) for r in inv)

    def inverse_to_float(self) -> np.ndarray:
        """``D_k^{-1}`` rounded once from exact arithmetic."""
        out = np.zeros((self.k, self.k))
        for i, row in enumerate(self.inverse_rows()):
            out[i, : len(row)] = [float(v) for v in row]
        if self.sqrt2_scaled:
            out *= np.sqrt(2.0)
        return out

    def gram(self) -> list[list[Fraction]]:
        """Exact ``D_k D_k^T`` (the ``2**-0.5`` factors pair up into ``1/2``)."""
        scale = Fraction(1, 2) if self.sqrt2_scaled else Fraction(1)
        g = [[Fraction(0)] * self.k for _ in range(self.k)]
        for i in range(self.k):
            for j in range(i + 1):
                s = sum(
                    (self.rows[i][r] * self.rows[j][r] for r in range(j + 1)),
                    Fraction(0),
                )
                g[i][j] = g[j][i] = s * scale
        return g


def _gaussian_entry(i: int, j: int) -> int:
    if j > i or (i + j) % 2:
        return 0
    h = (i - j) // 2
    return binom(i, h) - binom(i, h - 1)


def _laguerre_entry(i: int, j: int) -> int:
    if j > i:
        return 0
    return binom(2 * i, i - j) - binom(2 * i, i - j - 1)


def _jacobi_entry(i: int, j: int) -> Fraction:
    # rational part only; the 2**-0.5 lives in DkMatrix.sqrt2_scaled
    if j > i:
        return Fraction(0)
    return Fraction(2) ** (-2 * i + 1) * binom(2 * i, i - j)


@lru_cache(maxsize=64)
def dk_matrix(ensemble: Ensemble | str, k: int) -> DkMatrix:
    """Build ``D_k`` for the given ensemble.

    Parameters
    ----------
    ensemble : Ensemble or str
        ``"gaussian"``, ``"laguerre"`` or ``"jacobi"``.
    k : int
        Order, ``k >= 1``.

    Returns
    -------
    DkMatrix
        Exact lower-triangular factor with ``D_k D_k^T`` equal to the
        covariance ``m_{i+j} - m_i m_j`` of the limit law.
    """
    ens = Ensemble.parse(ensemble)
    if k < 1:
        raise ValueError(f"dk_matrix needs k >= 1, got {k}")
    entry = {
        Ensemble.GAUSSIAN: _gaussian_entry,
        Ensemble.LAGUERRE: _laguerre_entry,
        Ensemble.JACOBI: _jacobi_entry,
    }[ens]
    rows = tuple(
        tuple(Fraction(entry(i, j)) for j in range(1, i + 1)) for i in range(1, k + 1)
    )
    return DkMatrix(ens, k, rows, sqrt2_scaled=ens is Ensemble.JACOBI)


def _limit_moment(ens: Ensemble, k: int) -> Fraction:
    # local copy so this module stays free of the measures import
    if ens is Ensemble.GAUSSIAN:
        return Fraction(0) if k % 2 else Fraction(gen_catalan(k // 2, k // 2))
    if ens is Ensemble.LAGUERRE:
        return Fraction(gen_catalan(k, k))
    return Fraction(comb(2 * k, k), 4**k)


def covariance_identity_error(ensemble: Ensemble | str, k: int) -> Fraction:
    """Max over ``1 <= i, j <= k`` of ``|(D_k D_k^T)_{ij} - (m_{i+j} - m_i m_j)|``.

    Evaluated in exact rational arithmetic, so a correct factor gives 0.
    """
    ens = Ensemble.parse(ensemble)
    g = dk_matrix(ens, k).gram()
    worst = Fraction(0)
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            target = _limit_moment(ens, i + j) - _limit_moment(ens, i) * _limit_moment(ens, j)
            worst = max(worst, abs(g[i - 1][j - 1] - target))
    return worst


def crossing_identity_error(i: int, j: int) -> int:
    """``sum_r d_{i-r,i+r} d_{j-r,j+r} - d_{i+j,i+j}`` for ``r = 0..min(i, j)``."""
    if not 0 <= i <= j:
        raise ValueError(f"crossing identity needs 0 <= i <= j, got ({i}, {j})")
    lhs = sum(gen_catalan(i - r, i + r) * gen_catalan(j - r, j + r) for r in range(i + 1))
    return lhs - gen_catalan(i + j, i + j)


def odd_crossing_identity_error(i: int, j: int) -> int:
    """Odd-diagonal variant: ``sum_r d_{i-r,i+1+r} d_{j-r,j+1+r} - d_{i+j+1,i+j+1}``.

    Here ``i, j`` are the halved odd indices ``(i_odd - 1) / 2``.
    """
    if not 0 <= i <= j:
        raise ValueError(f"crossing identity needs 0 <= i <= j, got ({i}, {j})")
    lhs = sum(
        gen_catalan(i - r, i + 1 + r) * gen_catalan(j - r, j + 1 + r) for r in range(i + 1)
    )
    return lhs - gen_catalan(i + j + 1, i + j + 1)
