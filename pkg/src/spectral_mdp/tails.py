"""Log-space upper tail probabilities of Normal, Gamma and Beta laws.

The moderate-deviation tables need ``log P(X >= x)`` far below the
smallest positive double, so the regularised incomplete gamma and beta
functions are evaluated as ``log(prefactor) + log(continued fraction)``
(modified Lentz) instead of exponentiating.
"""

from __future__ import annotations

import math

from scipy import special

from .errors import ConvergenceError

__all__ = ["log_normal_sf", "log_gamma_sf", "log_gamma_cdf", "log_beta_sf"]

_TINY = 1e-300
_EPS = 1e-15
_MAXIT = 1_000_000


def _clamp(v: float) -> float:
    return _TINY if abs(v) < _TINY else v


def log_normal_sf(t: float) -> float:
    """``log P(N(0,1) >= t)``."""
    return float(special.log_ndtr(-t))


def _log_gamma_cf(a: float, x: float) -> float:
    # log Q(a, x) for x > a + 1, Legendre continued fraction
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAXIT):
        an = -i * (i - a)
        b += 2.0
        d = 1.0 / _clamp(an * d + b)
        c = _clamp(b + an / c)
        step = d * c
        h *= step
        if abs(step - 1.0) < _EPS:
            return -x + a * math.log(x) - math.lgamma(a) + math.log(h)
    raise ConvergenceError(f"incomplete gamma continued fraction stalled (a={a}, x={x})")


def _log_gamma_series(a: float, x: float) -> float:
    # log P(a, x) for x < a + 1, power series
    ap = a
    term = total = 1.0 / a
    for _ in range(_MAXIT):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return -x + a * math.log(x) - math.lgamma(a) + math.log(total)
    raise ConvergenceError(f"incomplete gamma series stalled (a={a}, x={x})")


def log_gamma_sf(shape: float, scale: float, x: float) -> float:
    """``log P(Gamma(shape, scale) >= x)``."""
    if x <= 0:
        return 0.0
    y = x / scale
    if y > shape + 1.0:
        return _log_gamma_cf(shape, y)
    return math.log1p(-math.exp(_log_gamma_series(shape, y)))


def log_gamma_cdf(shape: float, scale: float, x: float) -> float:
    """``log P(Gamma(shape, scale) <= x)``."""
    if x <= 0:
        return -math.inf
    y = x / scale
    if y < shape + 1.0:
        return _log_gamma_series(shape, y)
    return math.log1p(-math.exp(_log_gamma_cf(shape, y)))


def _log_beta_cf(a: float, b: float, x: float) -> float:
    # log I_x(a, b) for x < (a + 1) / (a + b + 2)
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 / _clamp(1.0 - qab * x / qap)
    h = d
    for m in range(1, _MAXIT):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 / _clamp(1.0 + aa * d)
        c = _clamp(1.0 + aa / c)
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 / _clamp(1.0 + aa * d)
        c = _clamp(1.0 + aa / c)
        step = d * c
        h *= step
        if abs(step - 1.0) < _EPS:
            log_front = (
                math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x)
            )
            return log_front + math.log(h) - math.log(a)
    raise ConvergenceError(f"incomplete beta continued fraction stalled (a={a}, b={b}, x={x})")


def log_beta_sf(a: float, b: float, x: float) -> float:
    """``log P(Beta(a, b) >= x)`` computed as ``log I_{1-x}(b, a)``."""
    if x <= 0:
        return 0.0
    if x >= 1:
        return -math.inf
    y = 1.0 - x
    if y < (b + 1.0) / (a + b + 2.0):
        return _log_beta_cf(b, a, y)
    return math.log1p(-math.exp(_log_beta_cf(a, b, x)))
