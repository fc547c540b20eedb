"""Tridiagonal models of the Gaussian, Laguerre and Jacobi beta-ensembles.

Gaussian
    ``b_k ~ N(0, 2/(beta n))``, ``a_k ~ Gamma(beta (n-k) / 2, scale 2/(beta n))``.
Laguerre
    recursion variables ``z_{2k-1} ~ Gamma(beta (n-k)/2 + gamma + 1, 2/(beta n))``,
    ``z_{2k} ~ Gamma(beta (n-k)/2, 2/(beta n))``.
Jacobi
    canonical moments ``p_1..p_{2n-1}`` independent Beta variables (see
    :func:`jacobi_beta_parameters`).

All Gamma laws use the (shape, scale) convention.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .combinatorics import Ensemble
from .eigensolver import tridiag_eig, tridiag_eig_batch
from .errors import DomainError
from .measures import SpectralMeasure, reference_for, reference_moment
from .orthopoly import coeffs_from_z, z_from_canonical
from .rng import RngState

__all__ = [
    "EnsembleSpec",
    "TridiagonalMatrix",
    "jacobi_beta_parameters",
    "sample_tridiagonal",
    "sample_batch",
    "spectral_measure",
    "moment_vector",
    "moment_vectors",
    "sample_dirichlet_weights",
    "assemble_spectral",
    "sample_moments",
    "CovarianceEstimate",
    "estimate_moment_covariance",
    "jackknife_covariance",
]


@dataclass(frozen=True)
class EnsembleSpec:
    kind: Ensemble
    n: int
    beta: float
    gamma: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Ensemble.parse(self.kind))
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if self.kind is not Ensemble.GAUSSIAN and not self.gamma > -1:
            raise DomainError(f"gamma must exceed -1, got {self.gamma}")
        if self.kind is Ensemble.JACOBI and not self.delta > -1:
            raise DomainError(f"delta must exceed -1, got {self.delta}")

    def to_dict(self) -> dict:
        return {
            "ensemble": self.kind.value,
            "n": self.n,
            "beta": self.beta,
            "gamma": self.gamma,
            "delta": self.delta,
        }


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix with positive off-diagonal ``sqrt(a_k)``."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or d.size == 0 or e.shape != (d.size - 1,):
            raise DomainError("need diag of length n >= 1 and offdiag of length n - 1")
        if np.any(e <= 0):
            raise DomainError("off-diagonal entries must be strictly positive")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def jacobi_beta_parameters(spec: EnsembleSpec) -> tuple[np.ndarray, np.ndarray]:
    """Beta parameters of the canonical moments ``p_1..p_{2n-1}``."""
    n, beta = spec.n, spec.beta
    k = np.arange(1, 2 * n)
    odd = k % 2 == 1
    first = np.where(
        odd,
        (2 * n - k - 1) / 4 * beta + spec.gamma + 1,
        (2 * n - k) / 4 * beta,
    )
    second = np.where(
        odd,
        (2 * n - k - 1) / 4 * beta + spec.delta + 1,
        (2 * n - k - 2) / 4 * beta + spec.gamma + spec.delta + 2,
    )
    return first, second


def _check_shapes(shapes, what):
    bad = np.flatnonzero(~(shapes > 0))
    if bad.size:
        i = bad[0] + 1
        raise DomainError(f"{what} shape parameter at index {i} is {shapes[bad[0]]} <= 0")


def _draw(spec: EnsembleSpec, g: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    n, beta = spec.n, spec.beta
    scale = 2.0 / (beta * n)
    if spec.kind is Ensemble.GAUSSIAN:
        shapes = beta * (n - np.arange(1, n)) / 2
        _check_shapes(shapes, "a_k Gamma")
        b = g.standard_normal(n) * math.sqrt(scale)
        a = g.gamma(shapes, scale)
        return b, np.sqrt(a)
    if spec.kind is Ensemble.LAGUERRE:
        k = np.arange(1, n + 1)
        odd_shapes = beta * (n - k) / 2 + spec.gamma + 1
        even_shapes = beta * (n - k[:-1]) / 2
        _check_shapes(odd_shapes, "z_{2k-1} Gamma")
        _check_shapes(even_shapes, "z_{2k} Gamma")
        z = np.empty(2 * n - 1)
        z[0::2] = g.gamma(odd_shapes, scale)
        z[1::2] = g.gamma(even_shapes, scale)
        return _from_z(z)
    first, second = jacobi_beta_parameters(spec)
    _check_shapes(first, "p_k Beta first")
    _check_shapes(second, "p_k Beta second")
    p = g.beta(first, second)
    z = np.empty_like(p)
    z[0] = p[0]
    z[1:] = (1.0 - p[:-1]) * p[1:]
    return _from_z(z)


def _from_z(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # vectorised coeffs_from_z; off-diagonal returned as sqrt(a_k)
    zz = np.concatenate(([0.0], z))
    b = zz[0:-1:2] + zz[1::2]
    a = zz[1:-1:2] * zz[2::2]
    return b, np.sqrt(a)


def sample_tridiagonal(spec: EnsembleSpec, rng: RngState, lane: int = 0) -> TridiagonalMatrix:
    """Draw one tridiagonal model; identical ``(spec, rng, lane)`` give identical output."""
    b, off = _draw(spec, rng.generator(lane))
    return TridiagonalMatrix(b, off)


def sample_batch(spec: EnsembleSpec, reps: int, rng: RngState, start: int = 0):
    """Replicates ``start .. start+reps-1`` stacked as ``(diag, offdiag)`` arrays."""
    diag = np.empty((reps, spec.n))
    off = np.empty((reps, spec.n - 1))
    for r in range(reps):
        diag[r], off[r] = _draw(spec, rng.generator(start + r))
    return diag, off


def spectral_measure(T: TridiagonalMatrix) -> SpectralMeasure:
    """Eigenvalues with weights ``|<u_i, e_1>|^2``."""
    vals, w = tridiag_eig(T.diag, T.offdiag)
    return SpectralMeasure(vals, w / math.fsum(w))


def moment_vectors(diag: np.ndarray, offdiag: np.ndarray, k: int) -> np.ndarray:
    """Row-wise ``(T^j)_{1,1}``, ``j = 1..k``, for stacked tridiagonals.

    Only the leading ``min(n, k//2 + 1)`` block is touched, so later
    coefficients cannot influence the result.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    diag = np.atleast_2d(np.asarray(diag, dtype=float))
    offdiag = np.asarray(offdiag, dtype=float).reshape(diag.shape[0], -1)
    s = min(diag.shape[1], k // 2 + 1)
    b = diag[:, :s]
    e = offdiag[:, : s - 1]
    v = np.zeros((diag.shape[0], s))
    v[:, 0] = 1.0
    out = np.empty((diag.shape[0], k))
    for j in range(k):
        w = b * v
        w[:, :-1] += e * v[:, 1:]
        w[:, 1:] += e * v[:, :-1]
        v = w
        out[:, j] = v[:, 0]
    return out


def moment_vector(T: TridiagonalMatrix, k: int) -> np.ndarray:
    """Moments of the spectral measure of ``T`` by repeated products on ``e_1``."""
    return moment_vectors(T.diag[None, :], T.offdiag[None, :], k)[0]


def sample_dirichlet_weights(n: int, beta: float, rng: RngState, lane: int = 0) -> np.ndarray:
    """Symmetric Dirichlet(beta/2) weights from normalised Gamma(beta/2, 1) draws."""
    if n < 1 or not beta > 0:
        raise DomainError("need n >= 1 and beta > 0")
    g = rng.generator(lane).gamma(beta / 2.0, 1.0, size=n)
    return g / math.fsum(g)


def assemble_spectral(atoms, weights) -> SpectralMeasure:
    """Pair eigenvalues with an independently drawn weight vector."""
    atoms = np.asarray(atoms, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if atoms.shape != weights.shape:
        raise DomainError(f"length mismatch: {atoms.size} atoms, {weights.size} weights")
    return SpectralMeasure(atoms, weights)


def _moment_chunk(args):
    spec, k, rng, start, reps = args
    s = min(spec.n, k // 2 + 1)
    diag = np.empty((reps, s))
    off = np.empty((reps, s - 1))
    for r in range(reps):
        b, e = _draw(spec, rng.generator(start + r))
        diag[r], off[r] = b[:s], e[: s - 1]
    return moment_vectors(diag, off, k)


def default_workers() -> int:
    return int(os.environ.get("SPECTRAL_MDP_WORKERS", "1"))


def sample_moments(
    spec: EnsembleSpec,
    k: int,
    reps: int,
    rng: RngState,
    workers: int | None = None,
    chunk: int = 2000,
) -> np.ndarray:
    """Moment vectors ``m_1..m_k`` of ``reps`` sampled spectral measures.

    Replicate ``r`` always uses lane ``r`` of ``rng``, so the output is the
    same for every worker count.
    """
    if reps < 1:
        raise DomainError("reps must be positive")
    workers = default_workers() if workers is None else workers
    jobs = [(spec, k, rng, s, min(chunk, reps - s)) for s in range(0, reps, chunk)]
    if workers <= 1 or len(jobs) == 1:
        parts = [_moment_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_moment_chunk, jobs))
    return np.concatenate(parts, axis=0)


def jackknife_covariance(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sample covariance of the rows of ``x`` and its delete-one jackknife SE.

    Uses the closed form of the leave-one-out covariances,
    ``C_(i) = (S - N/(N-1) y_i y_i^T) / (N-2)`` with ``y`` the centred rows.
    """
    x = np.asarray(x, dtype=float)
    N = x.shape[0]
    if N < 3:
        raise DomainError("jackknife covariance needs at least 3 replicates")
    y = x - x.mean(axis=0)
    cov = y.T @ y / (N - 1)
    u = y[:, :, None] * y[:, None, :]
    dev = u - u.mean(axis=0)
    ss = np.einsum("rij,rij->ij", dev, dev)
    factor = N / ((N - 1) * (N - 2))
    se = factor * np.sqrt((N - 1) / N * ss)
    return cov, se


@dataclass(frozen=True)
class CovarianceEstimate:
    cov: np.ndarray
    se: np.ndarray
    mean: np.ndarray
    reps: int


def estimate_moment_covariance(
    spec: EnsembleSpec,
    k: int,
    reps: int,
    rng: RngState,
    workers: int | None = None,
) -> CovarianceEstimate:
    """Covariance of ``sqrt(beta n / 2) (m^(k)(mu_n) - m^(k)(sigma))``.

    ``mean`` is the average of the scaled, limit-centred vectors; the
    covariance itself is taken about the sample mean.
    """
    if reps < 2:
        raise DomainError("reps must be at least 2")
    ref = reference_for(spec.kind)
    centre = np.array([float(reference_moment(ref, j)) for j in range(1, k + 1)])
    m = sample_moments(spec, k, reps, rng, workers)
    x = math.sqrt(spec.beta * spec.n / 2.0) * (m - centre)
    if reps >= 3:
        cov, se = jackknife_covariance(x)
    else:
        cov, se = np.atleast_2d(np.cov(x, rowvar=False)), np.full((k, k), np.inf)
    return CovarianceEstimate(cov, se, x.mean(axis=0), reps)
