"""Moderate-deviation rate functions and their numerical checks.

Three levels are covered: the quadratic rates of scalar Normal, Gamma and
Beta sequences, the moment-vector rate ``beta/4 |D_k^{-1} m|^2`` and the
measure rate ``beta/4 * integral (dmu/dsigma)^2 dsigma``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .combinatorics import dk_matrix
from .errors import ConvergenceError, DomainError
from .measures import (
    DiscreteSigned,
    PolynomialDensity,
    SignedMeasure,
    integrate_reference,
    reference_recursion,
)
from .orthopoly import RecursionCoefficients, eval_orthonormal, gauss_quadrature
from .tails import log_beta_sf, log_gamma_cdf, log_gamma_sf, log_normal_sf

__all__ = [
    "ScalarKind",
    "ScalarRateSpec",
    "scalar_rate",
    "SpeedSchedule",
    "MdpRow",
    "scalar_log_tail",
    "scalar_mdp_table",
    "moment_rate",
    "measure_rate",
    "projection_partial_sums",
    "rate_via_projections",
    "quadrature_rate",
    "delta_method_rate",
]


class ScalarKind(str, enum.Enum):
    NORMAL_VAR = "normal_var"
    GAMMA_MEAN = "gamma_mean"
    BETA_HALF = "beta_half"

    @classmethod
    def parse(cls, value) -> "ScalarKind":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "_")
        aliases = {"normal": "normal_var", "gamma": "gamma_mean", "beta": "beta_half"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise DomainError(f"unknown scalar rate kind {value!r}") from None


@dataclass(frozen=True)
class ScalarRateSpec:
    """Scalar sequence with a quadratic MDP rate.

    ``normal_var``: ``X_n ~ N(0, alpha/n)``.
    ``gamma_mean``: ``Y_n ~ Gamma(alpha n + shift1, scale 1/(alpha n))``, centred at 1.
    ``beta_half``: ``Z_n ~ Beta(alpha n + shift1, alpha n + shift2)``, centred at 1/2.
    """

    kind: ScalarKind
    alpha: float
    shift1: float = 1.0
    shift2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ScalarKind.parse(self.kind))
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")

    @property
    def centre(self) -> float:
        return {ScalarKind.NORMAL_VAR: 0.0, ScalarKind.GAMMA_MEAN: 1.0, ScalarKind.BETA_HALF: 0.5}[
            self.kind
        ]


def scalar_rate(spec: ScalarRateSpec, x: float) -> float:
    """``x^2/(2 alpha)``, ``alpha x^2 / 2`` or ``4 alpha x^2``."""
    a = spec.alpha
    if spec.kind is ScalarKind.NORMAL_VAR:
        return x * x / (2.0 * a)
    if spec.kind is ScalarKind.GAMMA_MEAN:
        return a * x * x / 2.0
    return 4.0 * a * x * x


@dataclass(frozen=True)
class SpeedSchedule:
    """Speed sequence ``a_n`` with ``a_n -> inf`` and ``a_n / n -> 0``."""

    name: str
    rule: Callable[[float], float]

    def __call__(self, n: float) -> float:
        return self.rule(n)

    @classmethod
    def power(cls, theta: float = 0.5) -> "SpeedSchedule":
        if not 0 < theta < 1:
            raise DomainError(f"theta must lie in (0, 1), got {theta}")
        return cls(f"n^{theta:g}", lambda n: float(n) ** theta)

    @classmethod
    def log(cls) -> "SpeedSchedule":
        return cls("log n", lambda n: math.log(n))

    @classmethod
    def parse(cls, text: str) -> "SpeedSchedule":
        text = text.strip().lower()
        if text in ("log", "log n", "logn"):
            return cls.log()
        if text in ("sqrt", "sqrt n"):
            return cls.power(0.5)
        if text.startswith("n^"):
            return cls.power(float(text[2:]))
        return cls.power(float(text))


def scalar_log_tail(spec: ScalarRateSpec, n: float, point: float) -> float:
    """``log P(V_n >= point)`` for the n-th variable of the scalar sequence."""
    a = spec.alpha
    if spec.kind is ScalarKind.NORMAL_VAR:
        return log_normal_sf(point / math.sqrt(a / n))
    if spec.kind is ScalarKind.GAMMA_MEAN:
        return log_gamma_sf(a * n + spec.shift1, 1.0 / (a * n), point)
    return log_beta_sf(a * n + spec.shift1, a * n + spec.shift2, point)


def _log_lower_tail(spec: ScalarRateSpec, n: float, point: float) -> float:
    a = spec.alpha
    if spec.kind is ScalarKind.NORMAL_VAR:
        return log_normal_sf(-point / math.sqrt(a / n))
    if spec.kind is ScalarKind.GAMMA_MEAN:
        return log_gamma_cdf(a * n + spec.shift1, 1.0 / (a * n), point)
    # P(Beta(p, q) <= t) = P(Beta(q, p) >= 1 - t)
    return log_beta_sf(a * n + spec.shift2, a * n + spec.shift1, 1.0 - point)


@dataclass(frozen=True)
class MdpRow:
    n: float
    a_n: float
    x_n: float
    log_tail: float
    normalized_rate: float
    target_rate: float
    flagged: bool = False


def scalar_mdp_table(
    spec: ScalarRateSpec,
    x: float,
    schedule: SpeedSchedule,
    n_list: Iterable[float],
    two_sided: bool = False,
) -> list[MdpRow]:
    """Exact ``-(1/a_n) log P(sqrt(n/a_n) (V_n - centre) >= x)`` for each n.

    The event is ``V_n >= x_n`` with ``x_n = centre + x sqrt(a_n/n)``; with
    ``two_sided`` the mirrored lower tail is added.  Rows whose tail could
    not be resolved are returned with ``flagged=True`` and NaN rates.
    """
    target = scalar_rate(spec, x)
    rows = []
    for n in n_list:
        a_n = schedule(n)
        if not (a_n > 0 and a_n < n):
            raise DomainError(f"speed a_n={a_n} at n={n} is outside (0, n)")
        step = abs(x) * math.sqrt(a_n / n)
        up = spec.centre + step
        try:
            lt = scalar_log_tail(spec, n, up)
            if two_sided:
                lt = float(np.logaddexp(lt, _log_lower_tail(spec, n, spec.centre - step)))
            flagged = not math.isfinite(lt)
        except (ConvergenceError, ValueError, OverflowError):
            lt, flagged = math.nan, True
        rate = -lt / a_n if not flagged else math.nan
        rows.append(MdpRow(float(n), a_n, up, lt, rate, target, flagged))
    return rows


@lru_cache(maxsize=64)
def _dk_inverse(ensemble, k: int) -> np.ndarray:
    return dk_matrix(ensemble, k).inverse_to_float()


def moment_rate(ensemble, beta: float, m: Sequence[float]) -> float:
    """``beta/4 * |D_k^{-1} m|^2`` with ``k = len(m)``."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 1 or m.size < 1:
        raise DomainError("moment vector must be a non-empty 1-d array")
    y = _dk_inverse(ensemble, m.size) @ m
    return beta / 4.0 * float(y @ y)


def measure_rate(beta: float, mu: SignedMeasure) -> float:
    """Rate of a signed measure: ``beta/4 |c|^2`` or ``inf`` for atoms."""
    if isinstance(mu, PolynomialDensity):
        c = np.asarray(mu.coeffs, dtype=float)
        return beta / 4.0 * math.fsum(c * c)
    if isinstance(mu, DiscreteSigned):
        # the reference laws have no atoms
        return 0.0 if mu.is_zero else math.inf
    raise TypeError(f"unsupported signed measure {type(mu).__name__}")


def _projections(mu: SignedMeasure, sigma: RecursionCoefficients | None, K: int) -> np.ndarray:
    if isinstance(mu, PolynomialDensity):
        n_nodes = (K + mu.degree) // 2 + 1
        need = max(n_nodes, K + 1)
        if sigma is None:
            sigma = reference_recursion(mu.reference, need)
        nodes, weights = gauss_quadrature(sigma, n_nodes)
        hw = weights * mu.h(nodes)
        return np.array([math.fsum(hw * eval_orthonormal(sigma, k, nodes)) for k in range(1, K + 1)])
    if sigma is None:
        raise DomainError("atomic measures need explicit reference recursion coefficients")
    x = np.asarray(mu.atoms, dtype=float)
    w = np.asarray(mu.weights, dtype=float)
    return np.array([math.fsum(w * eval_orthonormal(sigma, k, x)) for k in range(1, K + 1)])


def projection_partial_sums(
    beta: float, mu: SignedMeasure, sigma: RecursionCoefficients | None, K: int
) -> np.ndarray:
    """``beta/4 sum_{k<=K'} (integral q_k dmu)^2`` for ``K' = 1..K``."""
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    proj = _projections(mu, sigma, K)
    return beta / 4.0 * np.cumsum(proj * proj)


def rate_via_projections(
    beta: float, mu: SignedMeasure, sigma: RecursionCoefficients | None, K: int
) -> float:
    """Truncated projection series of the rate; nondecreasing in ``K``.

    ``sigma`` holds the recursion coefficients of the reference law (at
    least ``K`` of each kind); for polynomial densities it may be omitted.
    """
    return float(projection_partial_sums(beta, mu, sigma, K)[-1])


def quadrature_rate(beta: float, mu: PolynomialDensity) -> float:
    """``beta/4 * integral h^2 dsigma`` by adaptive quadrature of the density."""
    return beta / 4.0 * integrate_reference(mu.reference, lambda x: mu.h(x) ** 2)


def delta_method_rate(weight: float, jacobian, z) -> float:
    """``inf { weight |x|^2 : J x = z }``.

    Square ``J`` must be invertible.  A wide ``J`` of full row rank uses the
    minimum-norm solution ``J^T (J J^T)^{-1} z``.
    """
    J = np.atleast_2d(np.asarray(jacobian, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if J.shape[0] != z.size:
        raise DomainError(f"jacobian has {J.shape[0]} rows but z has {z.size} entries")
    if J.shape[0] == J.shape[1]:
        if np.linalg.matrix_rank(J) < J.shape[0]:
            raise DomainError("jacobian is singular")
        x = np.linalg.solve(J, z)
    elif J.shape[0] < J.shape[1]:
        gram = J @ J.T
        if np.linalg.matrix_rank(gram) < J.shape[0]:
            raise DomainError("jacobian does not have full row rank")
        x = J.T @ np.linalg.solve(gram, z)
    else:
        raise DomainError("jacobian has more rows than columns")
    return weight * float(x @ x)
