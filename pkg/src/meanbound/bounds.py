"""Special functions and upper bounds for the ratio of two power means.

Three bound families live here:

* ``kantorovich_bound`` -- arithmetic/harmonic case, ``(g+1)^2 / (4g)``;
* ``cargo_shisha`` -- the classical bound ``K(p, q, gamma)``, in a raw
  closed form and in a log-sinch form that stays finite as ``p``, ``q`` or
  ``p - q`` tend to zero;
* ``new_bound`` -- ``exp((p - q)/8 * ln(gamma)^2)``.

All ``log_*`` variants return the natural log of the corresponding bound and
are what the verification code compares, so huge bounds never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .means_core import ArrayLike, as_real_vector

# Taylor coefficients of ln(sinh x / x) in powers of x^2
_LOG_SINCH_COEFFS = (
    1.0 / 6.0,
    -1.0 / 180.0,
    1.0 / 2835.0,
    -1.0 / 37800.0,
    1.0 / 467775.0,
    -691.0 / 3831077250.0,
)
# Taylor coefficients of coth x - 1/x in odd powers of x
_LOG_SINCH_PRIME_COEFFS = (
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
)
_SERIES_CUTOFF = 0.1
_LARGE = 20.0


def _finite(name: str, x: float) -> float:
    x = float(x)
    if math.isnan(x):
        raise DomainError(f"{name} must not be NaN")
    if math.isinf(x):
        raise DomainError(f"{name} must be finite")
    return x


def _even_series(x2: float, coeffs, start: int = 0) -> float:
    # sum_k coeffs[k] * x2**(k+1) for k >= start, Horner form
    acc = 0.0
    for c in reversed(coeffs[start:]):
        acc = acc * x2 + c
    return acc * x2 ** (start + 1)


def sinch(x: float) -> float:
    """``sinh(x)/x`` with the removable singularity filled in (``sinch(0) == 1``)."""
    x = _finite("x", x)
    ax = abs(x)
    if ax < 1e-2:
        x2 = x * x
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0 + x2 * x2 * x2 / 5040.0
    if ax > 700.0:
        lv = log_sinch(ax)
        return math.exp(lv) if lv < 709.0 else math.inf
    return math.sinh(ax) / ax


def log_sinch(x: float) -> float:
    x = _finite("x", x)
    ax = abs(x)
    if ax < _SERIES_CUTOFF:
        return _even_series(x * x, _LOG_SINCH_COEFFS)
    if ax > _LARGE:
        return ax + math.log1p(-math.exp(-2.0 * ax)) - math.log(2.0 * ax)
    return math.log(math.sinh(ax) / ax)


def log_sinch_prime(x: float) -> float:
    """Derivative of ``log_sinch``: ``coth(x) - 1/x`` (odd, zero at 0)."""
    x = _finite("x", x)
    ax = abs(x)
    if ax < _SERIES_CUTOFF:
        x2 = x * x
        acc = 0.0
        for c in reversed(_LOG_SINCH_PRIME_COEFFS):
            acc = acc * x2 + c
        return acc * x
    if ax > _LARGE:
        return math.copysign(1.0, x) - 1.0 / x
    return 1.0 / math.tanh(x) - 1.0 / x


def f(x: float) -> float:
    """``ln(sinh x / x) - x^2/6``, extended by 0 at the origin."""
    x = _finite("x", x)
    if abs(x) < _SERIES_CUTOFF:
        return _even_series(x * x, _LOG_SINCH_COEFFS, start=1)
    return log_sinch(x) - x * x / 6.0


def f_prime(x: float) -> float:
    return log_sinch_prime(x) - x / 3.0


def _series_diff(a: float, b: float, coeffs, start: int) -> float:
    # sum_k c_k (a^{2k} - b^{2k}), factoring a^2 - b^2 out of each term
    a2, b2 = a * a, b * b
    d2 = (a - b) * (a + b)
    total = 0.0
    for k, c in enumerate(coeffs):
        if k < start:
            continue
        # a^{2m} - b^{2m} = (a^2 - b^2) * sum_{j<m} a^{2j} b^{2(m-1-j)}
        m = k + 1
        h = 0.0
        for j in range(m):
            h += a2**j * b2 ** (m - 1 - j)
        total += c * h
    return total * d2


def _abs_shift(b: float, delta: float) -> tuple[float, float]:
    """Map ``(b, delta)`` to ``(|b|, |b + delta| - |b|)`` without rounding ``delta``."""
    a = b + delta
    if b >= 0.0 and a >= 0.0:
        return b, delta
    if b <= 0.0 and a <= 0.0:
        return -b, -delta
    return abs(b), abs(a) - abs(b)


def _log_sinch_shift(b: float, delta: float) -> float:
    """``log_sinch(b + delta) - log_sinch(b)`` accurate when ``delta`` is small."""
    b, delta = _abs_shift(b, delta)
    a = b + delta
    if delta == 0.0:
        return 0.0
    if b == 0.0 or abs(delta) > 0.5 * b:
        return log_sinch(a) - log_sinch(b)
    if max(a, b) < _SERIES_CUTOFF:
        return _series_diff(a, b, _LOG_SINCH_COEFFS, 0)
    # ln sinh a - ln sinh b = delta + ln((1 - e^{-2a}) / (1 - e^{-2b}))
    tail = math.exp(-2.0 * b) * (-math.expm1(-2.0 * delta)) / (-math.expm1(-2.0 * b))
    return delta + math.log1p(tail) - math.log1p(delta / b)


def _f_shift(b: float, delta: float) -> float:
    """``f(b + delta) - f(b)``."""
    b, delta = _abs_shift(b, delta)
    a = b + delta
    if delta == 0.0:
        return 0.0
    if max(a, b) < _SERIES_CUTOFF:
        return _series_diff(a, b, _LOG_SINCH_COEFFS, 1)
    return _log_sinch_shift(b, delta) - delta * (a + b) / 6.0


def lemma_uv_lhs(p: float, q: float) -> float:
    """``f(q)/p - f(p)/q + (1/q - 1/p) f(p-q)``; nonnegative whenever ``q <= p``.

    Evaluated as two divided differences of ``f`` so that a small ``p`` or
    ``q`` does not turn into catastrophic cancellation.
    """
    p = _finite("p", p)
    q = _finite("q", q)
    if p == 0.0 or q == 0.0:
        raise DomainError("lemma_uv_lhs needs p != 0 and q != 0")
    if p == q:
        return 0.0
    # (f(q) - f(q-p))/p + (f(p-q) - f(p))/q, using evenness of f
    return _f_shift(q - p, p) / p + _f_shift(p, -q) / q


def cubic_identity_check(p0: float, q0: float) -> float:
    """Residual of ``(p0^3 - q0^3 + (q0-p0)^3) / (6 p0 q0) = (p0 - q0)/2``."""
    p0 = _finite("p0", p0)
    q0 = _finite("q0", q0)
    if p0 * q0 == 0.0:
        raise DomainError("cubic identity needs p0 * q0 != 0")
    return (p0**3 - q0**3 + (q0 - p0) ** 3) / (6.0 * p0 * q0) - (p0 - q0) / 2.0


def kantorovich_bound(gamma: float) -> float:
    gamma = _finite("gamma", gamma)
    if gamma < 1.0:
        raise DomainError("gamma must be >= 1")
    return (gamma + 1.0) ** 2 / (4.0 * gamma)


@dataclass(frozen=True)
class BoundInputs:
    p: float
    q: float
    gamma: float

    def __post_init__(self):
        _check_ordered(self.p, self.q, self.gamma)


@dataclass
class BoundReport:
    inputs: BoundInputs
    cargo_shisha: float
    new_bound: float
    sup_estimate: Optional[float] = None
    slack_K_over_sup: Optional[float] = None
    slack_B_over_K: float = 0.0

    def as_record(self) -> dict:
        return {
            "p": self.inputs.p,
            "q": self.inputs.q,
            "gamma": self.inputs.gamma,
            "sup_estimate": self.sup_estimate,
            "K": self.cargo_shisha,
            "B": self.new_bound,
            "slack_K_over_sup": self.slack_K_over_sup,
            "slack_B_over_K": self.slack_B_over_K,
        }


def _check_ordered(p: float, q: float, gamma: float) -> tuple[float, float, float]:
    p = _finite("p", p)
    q = _finite("q", q)
    gamma = _finite("gamma", gamma)
    if q > p:
        raise DomainError(f"need q <= p, got p={p!r}, q={q!r}")
    if gamma < 1.0:
        raise DomainError(f"need gamma >= 1, got {gamma!r}")
    return p, q, gamma


def _log_abs_expm1(x: float) -> float:
    """``ln|e^x - 1|`` without overflow, for ``x != 0``."""
    if x > 1.0:
        return x + math.log1p(-math.exp(-x))
    if x > 0.0:
        return math.log(math.expm1(x))
    return math.log(-math.expm1(x))


def _exprel(x: float) -> float:
    """``(e^x - 1)/x``, equal to 1 at 0."""
    if abs(x) < 1e-5:
        return 1.0 + x / 2.0 + x * x / 6.0
    return math.expm1(x) / x


def _exprel_divided_difference(x: float, y: float) -> float:
    """``(E(x) - E(y))/(x - y)`` for ``E(t) = (e^t - 1)/t`` and ``|x|, |y| <= 1``."""
    total = 0.0
    h = 1.0  # complete homogeneous sum h_{k-1}(x, y)
    yk = 1.0
    fact = 2.0
    for k in range(1, 24):
        total += h / fact
        yk *= y
        h = h * x + yk
        fact *= k + 2
    return total


def _log_cs_factor_over(a: float, b: float, lg: float) -> float:
    """``ln(b (g^a - g^b) / ((a - b)(g^b - 1))) / a`` with ``g = e^lg``.

    The quotient inside the log is positive for every sign pattern of
    ``a``, ``b``; that is checked, not assumed.
    """
    al, bl = a * lg, b * lg
    if abs(al) <= 1.0 and abs(bl) <= 1.0:
        # factor - 1 = a * lg * D / E(bl), D the divided difference of
        # E(x) = (e^x - 1)/x at (al, bl); summed termwise to avoid cancellation
        s = lg * _exprel_divided_difference(al, bl) / _exprel(bl)
        r = a * s
        if abs(r) < 1e-8:
            return s * (1.0 - r / 2.0)
        return math.log1p(r) / a
    if abs(al) <= 1.0:
        # factor = 1 + a*s; with a divided out analytically nothing here
        # is formed as a product with the (possibly tiny) a
        if bl > 0.0:
            scale = math.exp(-bl)
            num = b * lg * _exprel(al) * scale + math.expm1(-bl)
            den = (a - b) * (-math.expm1(-bl))
        else:
            num = b * lg * _exprel(al) - math.expm1(bl)
            den = (a - b) * math.expm1(bl)
        s = num / den
        r = a * s
        if not r > -1.0:
            raise ArithmeticError(f"Cargo-Shisha factor not positive at a={a!r}, b={b!r}")
        if abs(r) < 1e-8:
            return s * (1.0 - r / 2.0)
        return math.log1p(r) / a
    # sign(e^x - 1) == sign(x)
    sign = (
        math.copysign(1.0, b)
        * math.copysign(1.0, (a - b) * lg)
        * math.copysign(1.0, a - b)
        * math.copysign(1.0, bl)
    )
    if sign <= 0.0:
        raise ArithmeticError(f"Cargo-Shisha factor not positive at a={a!r}, b={b!r}")
    if abs(bl) <= 1.0:
        # b / (e^bl - 1) = 1 / (lg E(bl)), exact even for subnormal b
        log_b_over = -math.log(lg * _exprel(bl))
    else:
        log_b_over = math.log(abs(b)) - _log_abs_expm1(bl)
    log_factor = log_b_over + bl + _log_abs_expm1((a - b) * lg) - math.log(abs(a - b))
    return log_factor / a


def log_cargo_shisha_raw(p: float, q: float, gamma: float) -> float:
    p = _finite("p", p)
    q = _finite("q", q)
    gamma = _finite("gamma", gamma)
    if p == 0.0 or q == 0.0:
        raise DomainError("raw Cargo-Shisha form needs p*q != 0; use cargo_shisha")
    if p == q:
        raise DomainError("raw Cargo-Shisha form needs p != q; use cargo_shisha")
    if not gamma > 1.0:
        raise DomainError("raw Cargo-Shisha form needs gamma > 1; use cargo_shisha")
    lg = math.log(gamma)
    return _log_cs_factor_over(p, q, lg) - _log_cs_factor_over(q, p, lg)


def cargo_shisha_raw(p: float, q: float, gamma: float) -> float:
    """Cargo-Shisha bound straight from its closed form (``pq != 0``, ``p != q``, ``gamma > 1``).

    ``q > p`` is accepted; the formula is symmetric enough to be evaluated
    there, which is handy for two-sided extrapolation around ``p = q``.
    """
    return math.exp(log_cargo_shisha_raw(p, q, gamma))


def log_cargo_shisha(p: float, q: float, gamma: float) -> float:
    p, q, gamma = _check_ordered(p, q, gamma)
    if gamma == 1.0 or p == q:
        return 0.0
    lg = math.log(gamma)
    # NOTE: the published substitution reads q0 := (p/2) ln(gamma); q0 must
    # scale q, otherwise the identity for K does not hold.
    p0 = 0.5 * p * lg
    q0 = 0.5 * q * lg
    d0 = 0.5 * (p - q) * lg
    if max(abs(p0), abs(q0)) < _SERIES_CUTOFF:
        bracket = _log_sinch_bracket_series(p0, q0)
    else:
        # bracket = (L(p0) - L(d0))/q0 + (L(d0) - L(q0))/p0, L = log_sinch
        if q0 == 0.0:
            first = log_sinch_prime(p0)
        else:
            first = _log_sinch_shift(d0, q0) / q0
        if p0 == 0.0:
            second = -log_sinch_prime(q0)
        elif q0 < 0.0:
            second = _log_sinch_shift(-q0, p0) / p0
        else:
            second = _log_sinch_shift(q0, p0 - 2.0 * q0) / p0
        bracket = first + second
    return 0.5 * lg * bracket


def _log_sinch_bracket_series(p0: float, q0: float) -> float:
    # sum_k c_k (p0^m - q0^m - (p0-q0)^m) / (p0 q0), m = 2k+1, expanded as a
    # polynomial so that p0 = 0 or q0 = 0 is harmless
    total = 0.0
    for k, c in enumerate(_LOG_SINCH_COEFFS):
        m = 2 * k + 3
        poly = 0.0
        for j in range(1, m):
            poly -= math.comb(m, j) * (-1.0) ** j * p0 ** (m - 1 - j) * q0 ** (j - 1)
        total += c * poly
    return total


def cargo_shisha(p: float, q: float, gamma: float) -> float:
    """Cargo-Shisha bound ``K`` for all ``q <= p`` and ``gamma >= 1``, limits included.

    >>> round(cargo_shisha(1, -1, 4), 12)
    1.5625
    """
    return math.exp(log_cargo_shisha(p, q, gamma))


def log_new_bound(p: float, q: float, gamma: float) -> float:
    p, q, gamma = _check_ordered(p, q, gamma)
    if gamma == 1.0 or p == q:
        return 0.0
    lg = math.log(gamma)
    return (p - q) / 8.0 * lg * lg


def new_bound(p: float, q: float, gamma: float) -> float:
    """``exp((p - q)/8 * ln(gamma)^2)``; ``inf`` if the value overflows."""
    lv = log_new_bound(p, q, gamma)
    return math.exp(lv) if lv < 709.78 else math.inf


def exp_mean_diff_bound(p: float, q: float, v: ArrayLike) -> float:
    p = _finite("p", p)
    q = _finite("q", q)
    if q > p:
        raise DomainError("need q <= p")
    arr = as_real_vector(v)
    width = float(np.max(arr) - np.min(arr))
    return (p - q) / 8.0 * width * width
