"""Limit laws, spectral measures, signed measures and the moment metric."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence, Union

import numpy as np
from scipy import integrate

from .combinatorics import Ensemble, gen_catalan
from .errors import DomainError
from .orthopoly import (
    RecursionCoefficients,
    coeffs_from_z,
    eval_orthonormal,
    gauss_quadrature,
    z_from_canonical,
)

__all__ = [
    "Reference",
    "reference_for",
    "density",
    "reference_moment",
    "reference_recursion",
    "integrate_reference",
    "SpectralMeasure",
    "PolynomialDensity",
    "DiscreteSigned",
    "SignedMeasure",
    "spectral_moments",
    "signed_moments",
    "MomentMetricValue",
    "moment_metric",
    "signed_measure_to_json",
    "signed_measure_from_json",
]


class Reference(str, enum.Enum):
    SEMICIRCLE = "semicircle"
    MARCHENKO_PASTUR = "marchenko_pastur"
    ARCSINE = "arcsine"

    @property
    def support(self) -> tuple[float, float]:
        return {
            Reference.SEMICIRCLE: (-2.0, 2.0),
            Reference.MARCHENKO_PASTUR: (0.0, 4.0),
            Reference.ARCSINE: (0.0, 1.0),
        }[self]

    @classmethod
    def parse(cls, value) -> "Reference":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "_")
        aliases = {"mp": "marchenko_pastur", "marchenkopastur": "marchenko_pastur"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise DomainError(f"unknown reference measure {value!r}") from None


_LIMIT_LAW = {
    Ensemble.GAUSSIAN: Reference.SEMICIRCLE,
    Ensemble.LAGUERRE: Reference.MARCHENKO_PASTUR,
    Ensemble.JACOBI: Reference.ARCSINE,
}


def reference_for(ensemble) -> Reference:
    """Weak limit of the spectral measure of the given ensemble."""
    return _LIMIT_LAW[Ensemble.parse(ensemble)]


def density(ref, x):
    """Lebesgue density of the reference law; zero outside the open support."""
    ref = Reference.parse(ref)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    lo, hi = ref.support
    inside = (x > lo) & (x < hi)
    xi = x[inside]
    if ref is Reference.SEMICIRCLE:
        out[inside] = np.sqrt(4.0 - xi**2) / (2.0 * np.pi)
    elif ref is Reference.MARCHENKO_PASTUR:
        out[inside] = np.sqrt(xi * (4.0 - xi)) / (2.0 * np.pi * xi)
    else:
        out[inside] = 1.0 / (np.pi * np.sqrt(xi * (1.0 - xi)))
    return out if out.ndim else float(out)


def reference_moment(ref, k: int) -> Fraction:
    """Exact k-th moment of the reference law."""
    ref = Reference.parse(ref)
    if k < 0:
        raise DomainError(f"moment order must be nonnegative, got {k}")
    if ref is Reference.SEMICIRCLE:
        return Fraction(0) if k % 2 else Fraction(gen_catalan(k // 2, k // 2))
    if ref is Reference.MARCHENKO_PASTUR:
        return Fraction(gen_catalan(k, k))
    return Fraction(comb(2 * k, k), 4**k)


def reference_recursion(ref, k: int) -> RecursionCoefficients:
    """Exact recursion coefficients ``b_1..b_k`` and ``a_1..a_{k-1}``.

    The Marchenko-Pastur law has all recursion variables equal to 1 and
    the arcsine law all canonical moments equal to 1/2.
    """
    ref = Reference.parse(ref)
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if ref is Reference.SEMICIRCLE:
        return RecursionCoefficients((Fraction(0),) * k, (Fraction(1),) * (k - 1))
    if ref is Reference.MARCHENKO_PASTUR:
        return coeffs_from_z((Fraction(1),) * (2 * k - 1))
    return coeffs_from_z(z_from_canonical((Fraction(1, 2),) * (2 * k - 1)))


def integrate_reference(ref, f, *, epsabs: float = 1e-12, epsrel: float = 1e-12) -> float:
    """``integral f dsigma`` by adaptive quadrature.

    Substitutes ``x = mid + half * sin(theta)`` so the inverse square-root
    endpoint singularities of the arcsine and Marchenko-Pastur densities
    disappear; the integrand in ``theta`` is smooth.
    """
    ref = Reference.parse(ref)
    lo, hi = ref.support
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)

    if ref is Reference.SEMICIRCLE:
        # sqrt(4 - x^2) dx = 4 cos^2(theta) dtheta
        def g(t):
            return f(2.0 * np.sin(t)) * 4.0 * np.cos(t) ** 2 / (2.0 * np.pi)
    elif ref is Reference.MARCHENKO_PASTUR:
        # sqrt(x(4-x))/x dx = 4 cos^2(theta) / x dtheta, x = 2 + 2 sin(theta);
        # rewrite as (2 - 2 sin) dtheta to avoid 0/0 at theta = -pi/2
        def g(t):
            return f(mid + half * np.sin(t)) * (2.0 - 2.0 * np.sin(t)) / (2.0 * np.pi)
    else:
        def g(t):
            return f(mid + half * np.sin(t)) / np.pi

    val, _ = integrate.quad(g, -np.pi / 2, np.pi / 2, epsabs=epsabs, epsrel=epsrel, limit=200)
    return val


@dataclass(frozen=True)
class SpectralMeasure:
    """Atomic probability measure ``sum_i w_i delta_{lambda_i}``."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if atoms.shape != weights.shape or atoms.ndim != 1 or atoms.size == 0:
            raise DomainError("atoms and weights must be matching non-empty vectors")
        if not np.all(np.isfinite(atoms)):
            raise DomainError("atoms must be finite")
        if np.any(weights < 0):
            raise DomainError("weights must be nonnegative")
        if abs(math.fsum(weights) - 1.0) > 1e-12:
            raise DomainError(f"weights sum to {math.fsum(weights)!r}, not 1")
        order = np.argsort(atoms, kind="stable")
        object.__setattr__(self, "atoms", atoms[order])
        object.__setattr__(self, "weights", weights[order])

    def to_csv(self) -> str:
        lines = ["atom,weight"]
        lines += [f"{x:.17g},{w:.17g}" for x, w in zip(self.atoms, self.weights)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "SpectralMeasure":
        rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        if rows[0].replace(" ", "") != "atom,weight":
            raise DomainError("expected header 'atom,weight'")
        data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
        return cls(data[:, 0], data[:, 1])


def spectral_moments(mu: SpectralMeasure, k: int) -> np.ndarray:
    """``m_j = sum_i w_i lambda_i^j`` for ``j = 1..k`` with exactly rounded sums."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    powers = np.cumprod(np.broadcast_to(mu.atoms, (k, mu.atoms.size)), axis=0)
    return np.array([math.fsum(row) for row in powers * mu.weights])


@dataclass(frozen=True)
class PolynomialDensity:
    """Signed measure ``h dsigma`` with ``h = sum_{k>=1} c_k q_k``.

    ``q_k`` is the degree-k orthonormal polynomial of the reference law, so
    the measure has total mass zero by construction.
    """

    reference: Reference
    coeffs: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "reference", Reference.parse(self.reference))
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def scaled(self, t: float) -> "PolynomialDensity":
        return PolynomialDensity(self.reference, tuple(t * c for c in self.coeffs))

    def h(self, x):
        """Signed density with respect to the reference law."""
        rec = reference_recursion(self.reference, max(self.degree, 1) + 1)
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k, ck in enumerate(self.coeffs, start=1):
            if ck:
                out = out + ck * eval_orthonormal(rec, k, x)
        return out


@dataclass(frozen=True)
class DiscreteSigned:
    """Finite signed atomic measure with total mass zero."""

    atoms: tuple
    weights: tuple

    def __post_init__(self):
        merged: dict[float, float] = {}
        for x, w in zip(self.atoms, self.weights, strict=True):
            merged[float(x)] = merged.get(float(x), 0.0) + float(w)
        if abs(math.fsum(merged.values())) > 1e-12 * max(1.0, sum(map(abs, merged.values()))):
            raise DomainError("signed atomic measure must have total mass 0")
        object.__setattr__(self, "atoms", tuple(merged))
        object.__setattr__(self, "weights", tuple(merged.values()))

    def scaled(self, t: float) -> "DiscreteSigned":
        return DiscreteSigned(self.atoms, tuple(t * w for w in self.weights))

    @property
    def is_zero(self) -> bool:
        return all(w == 0 for w in self.weights)


SignedMeasure = Union[PolynomialDensity, DiscreteSigned]


def signed_moments(mu: SignedMeasure, k: int) -> np.ndarray:
    """Moments ``m_1..m_k`` of a signed measure (``m_0 = 0`` is implicit).

    Polynomial densities are integrated with a Gauss rule of the reference
    law that is exact for the degree ``k + deg(h)`` integrand.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if isinstance(mu, DiscreteSigned):
        x = np.asarray(mu.atoms, dtype=float)
        w = np.asarray(mu.weights, dtype=float)
        return np.array([math.fsum(w * x**j) for j in range(1, k + 1)])
    if not any(mu.coeffs):
        return np.zeros(k)
    n_nodes = (k + mu.degree) // 2 + 1
    rec = reference_recursion(mu.reference, max(n_nodes, mu.degree + 1))
    nodes, weights = gauss_quadrature(rec, n_nodes)
    hw = weights * mu.h(nodes)
    return np.array([math.fsum(hw * nodes**j) for j in range(1, k + 1)])


@dataclass(frozen=True)
class MomentMetricValue:
    value: float
    truncation: int

    @property
    def tail_bound(self) -> float:
        """Upper bound on the omitted terms ``k > truncation``."""
        return 2.0 ** (-self.truncation)


def moment_metric(m_a: Sequence[float], m_b: Sequence[float], K: int = 32) -> MomentMetricValue:
    """Truncated moment metric ``sum_{k=0..K} 2^-k |D_k| / (1 + |D_k|)``.

    ``m_a`` and ``m_b`` start at the first moment; the zeroth difference is
    taken to be 0, as for two elements of the mass-zero space or two
    probability measures.
    """
    if K < 0:
        raise DomainError(f"truncation K must be nonnegative, got {K}")
    m_a = np.asarray(m_a, dtype=float)
    m_b = np.asarray(m_b, dtype=float)
    if m_a.size < K or m_b.size < K:
        raise DomainError(f"moment vectors need at least {K} entries")
    delta = np.abs(m_a[:K] - m_b[:K])
    with np.errstate(invalid="ignore"):
        terms = np.where(np.isinf(delta), 1.0, delta / (1.0 + delta))
    value = math.fsum(2.0 ** -np.arange(1, K + 1) * terms)
    return MomentMetricValue(value, K)


def signed_measure_to_json(mu: SignedMeasure) -> str:
    if isinstance(mu, PolynomialDensity):
        doc = {"variant": "PolynomialDensity", "reference": mu.reference.value, "coeffs": list(mu.coeffs)}
    else:
        doc = {"variant": "DiscreteSigned", "atoms": list(mu.atoms), "weights": list(mu.weights)}
    return json.dumps(doc, sort_keys=True)


def signed_measure_from_json(doc) -> SignedMeasure:
    if isinstance(doc, str):
        doc = json.loads(doc)
    variant = doc.get("variant")
    if variant == "PolynomialDensity":
        return PolynomialDensity(Reference.parse(doc["reference"]), tuple(doc["coeffs"]))
    if variant == "DiscreteSigned":
        return DiscreteSigned(tuple(doc["atoms"]), tuple(doc["weights"]))
    raise DomainError(f"unknown signed-measure variant {variant!r}")
