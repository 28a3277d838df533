"""Extremal search for ``sup R(p, q, v)`` over vectors of bounded spread.

Candidates are weighted two-point configurations: mass ``lam`` on ``gamma``
and ``1 - lam`` on ``1``.  ``sup_ratio`` scans a uniform grid in ``lam`` and
polishes the best cell with a golden-section search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import BoundInputs, BoundReport, log_cargo_shisha, log_new_bound
from .errors import DomainError

GRID_POINTS = 1024
LAMBDA_TOL = 1e-10
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TwoPointConfig:
    gamma: float
    lam: float
    n: Optional[int] = None

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 1.0):
            raise DomainError("two-point config needs a finite gamma > 1")
        if not 0.0 < self.lam < 1.0:
            raise DomainError("two-point config needs 0 < lam < 1")
        if self.n is not None:
            if self.n < 2:
                raise DomainError("two-point config needs n >= 2")
            k = round(self.lam * self.n)
            if not 1 <= k <= self.n - 1:
                raise DomainError(f"lam={self.lam} rounds to k={k} outside [1, n-1]")

    @property
    def weight(self) -> float:
        """Mass on the high value; ``k/n`` when a discretization size is set."""
        if self.n is None:
            return self.lam
        return round(self.lam * self.n) / self.n


@dataclass(frozen=True)
class SharpnessProbeResult:
    t: float
    normalized_ratio: float


def _log_two_point_mean(r: float, lam, lg: float):
    """ln of the weighted power mean of order ``r`` of ``(e^lg, 1)`` with weights ``(lam, 1-lam)``.

    ``lam`` may be a float or an ndarray.
    """
    if r == 0.0:
        return lam * lg
    rl = r * lg
    if abs(rl) < 1.0:
        return np.log1p(lam * math.expm1(rl)) / r
    # ln(lam e^{rl} + (1 - lam)) as a two-term log-sum-exp
    return np.logaddexp(np.log(lam) + rl, np.log1p(-lam)) / r


def _log_two_point_ratio(p: float, q: float, lam, lg: float):
    return _log_two_point_mean(p, lam, lg) - _log_two_point_mean(q, lam, lg)


def two_point_ratio(p: float, q: float, config: TwoPointConfig) -> float:
    """Ratio of order-``p`` and order-``q`` means of a weighted two-point configuration."""
    p = float(p)
    q = float(q)
    if not (math.isfinite(p) and math.isfinite(q)):
        raise DomainError("p and q must be finite")
    if not q < p:
        raise DomainError("two_point_ratio needs q < p")
    lg = math.log(config.gamma)
    return math.exp(float(_log_two_point_ratio(p, q, config.weight, lg)))


def _golden_max(fn, a: float, b: float, tol: float) -> tuple[float, float]:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fn(d)
    if fc >= fd:
        return c, fc
    return d, fd


def log_sup_ratio(p: float, q: float, gamma: float) -> tuple[float, float]:
    """``(ln sup, argmax lam)`` of the two-point ratio over ``lam`` in (0, 1)."""
    p = float(p)
    q = float(q)
    gamma = float(gamma)
    if not all(math.isfinite(x) for x in (p, q, gamma)):
        raise DomainError("p, q and gamma must be finite")
    if not q < p:
        raise DomainError("sup_ratio needs q < p")
    if not gamma > 1.0:
        raise DomainError("sup_ratio needs gamma > 1")
    lg = math.log(gamma)
    grid = (np.arange(GRID_POINTS) + 0.5) / GRID_POINTS
    vals = _log_two_point_ratio(p, q, grid, lg)
    # np.argmax returns the first maximum: lowest-lam tie-break
    i = int(np.argmax(vals))
    lo = grid[i - 1] if i > 0 else 0.0
    hi = grid[i + 1] if i < GRID_POINTS - 1 else 1.0
    lam, best = _golden_max(lambda x: float(_log_two_point_ratio(p, q, x, lg)), lo, hi, LAMBDA_TOL)
    if vals[i] > best:
        lam, best = grid[i], vals[i]
    return float(best), float(lam)


def sup_ratio(p: float, q: float, gamma: float) -> tuple[float, float]:
    """Largest ``P_p/P_q`` over vectors with ``max/min <= gamma``, with its maximizing weight.

    >>> value, lam = sup_ratio(1, -1, 4)
    >>> round(value, 12), round(lam, 6)
    (1.5625, 0.5)
    """
    log_value, lam = log_sup_ratio(p, q, gamma)
    return math.exp(log_value), lam


_LOG_COSH_LARGE = 20.0


def _log_cosh(x: float) -> float:
    ax = abs(x)
    if ax > _LOG_COSH_LARGE:
        return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)
    # cosh x - 1 = 2 sinh^2(x/2)
    s = math.sinh(0.5 * ax)
    return math.log1p(2.0 * s * s)


def sharpness_probe(p: float, q: float, t: float) -> SharpnessProbeResult:
    """Evaluate the ``v = (e^t, e^-t)`` construction; the result tends to 1 as ``t -> 0+``.

    ``normalized_ratio = 2 g(t) / (t^2 (p - q))`` with
    ``g(t) = ln cosh(tp)/p - ln cosh(tq)/q``.  Any admissible constant ``C``
    must satisfy ``(p - q)/8 * normalized_ratio <= C`` for every ``t``.
    """
    p = float(p)
    q = float(q)
    t = float(t)
    if not all(math.isfinite(x) for x in (p, q, t)):
        raise DomainError("p, q and t must be finite")
    if not t > 0.0:
        raise DomainError("sharpness probe needs t > 0")
    if p * q == 0.0:
        raise DomainError("sharpness probe needs p*q != 0")
    if not q < p:
        raise DomainError("sharpness probe needs q < p")
    g = _log_cosh(t * p) / p - _log_cosh(t * q) / q
    return SharpnessProbeResult(t=t, normalized_ratio=2.0 * g / (t * t * (p - q)))


def _exp(x: float) -> float:
    return math.exp(x) if x < 709.78 else math.inf


def gap_report(p: float, q: float, gamma: float) -> BoundReport:
    inputs = BoundInputs(float(p), float(q), float(gamma))
    if inputs.p == inputs.q or inputs.gamma == 1.0:
        return BoundReport(inputs, 1.0, 1.0, sup_estimate=1.0, slack_K_over_sup=0.0, slack_B_over_K=0.0)
    log_sup, _ = log_sup_ratio(inputs.p, inputs.q, inputs.gamma)
    log_k = log_cargo_shisha(inputs.p, inputs.q, inputs.gamma)
    log_b = log_new_bound(inputs.p, inputs.q, inputs.gamma)
    return BoundReport(
        inputs,
        cargo_shisha=math.exp(log_k),
        new_bound=_exp(log_b),
        sup_estimate=math.exp(log_sup),
        slack_K_over_sup=math.expm1(log_k - log_sup),
        slack_B_over_K=_exp(log_b - log_k) - 1.0 if log_b - log_k > 1.0 else math.expm1(log_b - log_k),
    )
