"""Power means, exponential means and their ratio.

Every mean here is evaluated through one log-domain kernel,
``(1/p) * ln(mean(exp(p * x)))`` on log-values ``x``.  Power means feed it
``ln v``; exponential means feed it the raw entries, so the two families
share the exact same arithmetic.  Exponents are plain floats, with
``math.inf`` / ``-math.inf`` selecting the max / min cases.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from .errors import DomainError

ArrayLike = Union[Sequence[float], np.ndarray]

# below this |p * (x - mean x)| the expm1/log1p form is used; it has no
# cancellation as p -> 0 and cannot overflow
_SMALL_EXPONENT = 0.5


def check_exponent(p: float) -> float:
    p = float(p)
    if math.isnan(p):
        raise DomainError("exponent must not be NaN")
    return p


def as_positive_vector(v: ArrayLike) -> np.ndarray:
    """Validate ``v`` as a nonempty vector of finite, strictly positive reals."""
    arr = np.asarray(v, dtype=float).ravel()
    if arr.size == 0:
        raise DomainError("vector must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise DomainError("vector entries must be finite")
    if not np.all(arr > 0):
        raise DomainError("power means need strictly positive entries")
    return arr


def as_real_vector(v: ArrayLike) -> np.ndarray:
    arr = np.asarray(v, dtype=float).ravel()
    if arr.size == 0:
        raise DomainError("vector must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise DomainError("vector entries must be finite")
    return arr


def _log_mean_exp(p: float, x: np.ndarray) -> float:
    """Return ``(1/p) ln(mean(exp(p x)))`` with its limit cases, kept in [min x, max x]."""
    lo = float(x.min())
    hi = float(x.max())
    if lo == hi:
        return lo
    if p == -math.inf:
        return lo
    if p == math.inf:
        return hi
    n = x.size
    # fsum: correctly rounded, so results do not depend on entry order
    mu = math.fsum(x) / n
    if p == 0.0:
        return min(max(mu, lo), hi)
    y = p * (x - mu)
    if float(np.max(np.abs(y))) < _SMALL_EXPONENT:
        val = mu + math.log1p(math.fsum(np.expm1(y)) / n) / p
    else:
        m = float(y.max())
        val = mu + (m + math.log(math.fsum(np.exp(y - m)) / n)) / p
    return min(max(val, lo), hi)


def log_power_mean(p: float, v: ArrayLike) -> float:
    """Natural log of the power mean of order ``p``."""
    p = check_exponent(p)
    arr = as_positive_vector(v)
    return _log_mean_exp(p, np.log(arr))


def power_mean(p: float, v: ArrayLike) -> float:
    """Power mean of order ``p``; ``p=0`` is geometric, ``p=±inf`` is max/min.

    >>> power_mean(2, [1, 7])
    5.0
    """
    p = check_exponent(p)
    arr = as_positive_vector(v)
    lo = float(arr.min())
    hi = float(arr.max())
    if p == -math.inf:
        return lo
    if p == math.inf:
        return hi
    if lo == hi:
        return lo
    x = np.log(arr)
    if abs(p) >= 1.0 and abs(p) * float(np.max(np.abs(x))) < 700.0:
        # plain power form: no overflow here, and exact on small integer data
        val = (math.fsum(arr**p) / arr.size) ** (1.0 / p)
    else:
        val = math.exp(_log_mean_exp(p, x))
    return min(max(val, lo), hi)


def exponential_mean(p: float, v: ArrayLike) -> float:
    """Exponential mean ``(1/p) ln(mean(exp(p v)))``; arithmetic mean at ``p=0``."""
    p = check_exponent(p)
    arr = as_real_vector(v)
    return _log_mean_exp(p, arr)


def spread_gamma(v: ArrayLike) -> float:
    arr = as_positive_vector(v)
    lo = float(arr.min())
    hi = float(arr.max())
    if lo == hi:
        return 1.0
    return hi / lo


def ratio(p: float, q: float, v: ArrayLike) -> float:
    """``P_p(v) / P_q(v)``, taken as the exponential of a log difference."""
    p = check_exponent(p)
    q = check_exponent(q)
    arr = as_positive_vector(v)
    if arr.min() == arr.max():
        return 1.0
    x = np.log(arr)
    return math.exp(_log_mean_exp(p, x) - _log_mean_exp(q, x))


def log_ratio(p: float, q: float, v: ArrayLike) -> float:
    p = check_exponent(p)
    q = check_exponent(q)
    arr = as_positive_vector(v)
    if arr.min() == arr.max():
        return 0.0
    x = np.log(arr)
    return _log_mean_exp(p, x) - _log_mean_exp(q, x)
