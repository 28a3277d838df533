"""Seeded property campaigns.

Each registered property has a sampler, which draws one input record from a
random stream, and a margin function, which maps that record to a real
number that must stay ``>= -tolerance``.  Sample ``i`` of a campaign draws
from a stream derived only from ``(seed, i)``, so reports are reproducible
and the worst witness can be replayed on its own with :func:`replay`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import bounds
from .errors import DomainError
from .means_core import exponential_mean, log_power_mean, log_ratio, spread_gamma

# entries of power-mean vectors are drawn log-uniformly inside [1e-3, 1e3]
_LOG_ENTRY_BOX = math.log(1e3)
_ZERO_INJECTION = 0.01


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 0
    samples: int = 1000
    p_range: Tuple[float, float] = (-10.0, 10.0)
    q_range: Tuple[float, float] = (-10.0, 10.0)
    gamma_max: float = 1e3
    n_max: int = 16
    tolerance: float = 1e-9

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.samples < 1:
            raise DomainError("samples must be >= 1")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be > 0")
        if not self.gamma_max > 1:
            raise DomainError("gamma_max must be > 1")
        if self.n_max < 2:
            raise DomainError("n_max must be >= 2")
        for name in ("p_range", "q_range"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise DomainError(f"{name} must be a finite interval lo <= hi")


@dataclass
class CampaignReport:
    property_name: str
    samples_run: int
    violations: int
    worst_margin: float
    worst_witness: dict = field(default_factory=dict)

    def as_record(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Property:
    name: str
    sample: Callable[[np.random.Generator, CampaignConfig], dict]
    margin: Callable[[dict], float]


def sample_stream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


# ---------------------------------------------------------------- samplers


def _uniform(rng, interval) -> float:
    lo, hi = interval
    return float(rng.uniform(lo, hi))


def _ordered_pair(rng, cfg: CampaignConfig, inject_zero: bool = True) -> tuple[float, float]:
    p = _uniform(rng, cfg.p_range)
    q = _uniform(rng, cfg.q_range)
    if inject_zero:
        u = float(rng.random())
        if u < _ZERO_INJECTION / 2:
            p = 0.0
        elif u < _ZERO_INJECTION:
            q = 0.0
    if q > p:
        p, q = q, p
    return p, q


def _positive_vector(rng, cfg: CampaignConfig) -> list:
    n = int(rng.integers(2, cfg.n_max + 1))
    width = min(float(rng.uniform(0.0, math.log(cfg.gamma_max))), 2 * _LOG_ENTRY_BOX)
    start = float(rng.uniform(-_LOG_ENTRY_BOX, _LOG_ENTRY_BOX - width))
    return [math.exp(start + width * float(u)) for u in rng.random(n)]


def _real_vector(rng, cfg: CampaignConfig) -> list:
    n = int(rng.integers(2, cfg.n_max + 1))
    width = float(rng.uniform(0.0, math.log(cfg.gamma_max)))
    start = float(rng.uniform(-5.0, 5.0))
    return [start + width * float(u) for u in rng.random(n)]


def _sample_pqv(rng, cfg):
    p, q = _ordered_pair(rng, cfg)
    return {"p": p, "q": q, "v": _positive_vector(rng, cfg)}


def _sample_pq_gamma(rng, cfg):
    p, q = _ordered_pair(rng, cfg)
    gamma = math.exp(float(rng.uniform(0.0, math.log(cfg.gamma_max))))
    return {"p": p, "q": q, "gamma": gamma}


def _sample_step_function(rng, cfg):
    k = int(rng.integers(1, 9))
    span = 10.0
    breaks = sorted(float(b) for b in rng.uniform(0.0, span, k))
    drops = np.cumsum(rng.exponential(1.0, k))
    top = float(rng.uniform(-2.0, 2.0))
    values = [top] + [top - float(d) for d in drops]
    x, y = (float(t) for t in rng.uniform(0.0, span / 2, 2))
    return {"breaks": breaks, "values": values, "x": x, "y": y}


def _sample_f_pair(rng, cfg):
    x, y = sorted(float(t) for t in rng.uniform(0.0, 50.0, 2))
    if float(rng.random()) < _ZERO_INJECTION:
        x = 0.0
    if x == y:
        y = math.nextafter(y, math.inf)
    return {"x": x, "y": y}


def _sample_nonzero_pair(rng, cfg):
    while True:
        p = _uniform(rng, cfg.p_range)
        q = _uniform(rng, cfg.q_range)
        if p != 0.0 and q != 0.0:
            return p, q


def _sample_uv(rng, cfg):
    p, q = _sample_nonzero_pair(rng, cfg)
    if q > p:
        case = "reversed"
    elif 0 < q:
        case = "alpha"
    elif q < 0 < p:
        case = "beta"
    else:
        case = "gamma"
    return {"p": p, "q": q, "case": case}


def _sample_conjugacy(rng, cfg):
    n = int(rng.integers(1, cfg.n_max + 1))
    w = [float(t) for t in rng.uniform(-5.0, 5.0, n)]
    u = float(rng.random())
    if u < _ZERO_INJECTION / 3:
        p = 0.0
    elif u < 2 * _ZERO_INJECTION / 3:
        p = -math.inf
    elif u < _ZERO_INJECTION:
        p = math.inf
    else:
        p = _uniform(rng, cfg.p_range)
    return {"p": p, "w": w}


def _sample_corollary(rng, cfg):
    p, q = _ordered_pair(rng, cfg)
    return {"p": p, "q": q, "v": _real_vector(rng, cfg)}


def _sample_monotone(rng, cfg):
    v = _positive_vector(rng, cfg)
    while max(v) == min(v):
        v = _positive_vector(rng, cfg)
    p_lo, p_hi = sorted(_uniform(rng, cfg.p_range) for _ in range(2))
    q_lo, q_hi = sorted(_uniform(rng, cfg.q_range) for _ in range(2))
    p_hi = max(p_hi, p_lo + 0.1)
    q_hi = max(q_hi, q_lo + 0.1)
    return {
        "v": v,
        "p_lo": p_lo,
        "p_hi": p_hi,
        "q_fixed": _uniform(rng, cfg.q_range),
        "q_lo": q_lo,
        "q_hi": q_hi,
        "p_fixed": _uniform(rng, cfg.p_range),
    }


def _sample_cubic(rng, cfg):
    p0, q0 = _sample_nonzero_pair(rng, cfg)
    return {"p0": p0, "q0": q0}


def _sample_taylor(rng, cfg):
    return {"x": 30.0 * (1.0 - float(rng.random()))}


# ------------------------------------------------------------------ margins


def _margin_main_theorem(w):
    v = w["v"]
    return bounds.log_new_bound(w["p"], w["q"], spread_gamma(v)) - log_ratio(w["p"], w["q"], v)


def _margin_cs_ratio(w):
    v = w["v"]
    return bounds.log_cargo_shisha(w["p"], w["q"], spread_gamma(v)) - log_ratio(w["p"], w["q"], v)


def _margin_new_vs_k(w):
    args = (w["p"], w["q"], w["gamma"])
    return bounds.log_new_bound(*args) - bounds.log_cargo_shisha(*args)


def _margin_step_subadditive(w):
    breaks, values = w["breaks"], w["values"]

    def step(t):
        return values[int(np.searchsorted(breaks, t, side="right"))]

    x, y = w["x"], w["y"]
    return x * step(x) + y * step(y) - (x + y) * step(x + y)


def _margin_f_decreasing(w):
    return bounds.f(w["x"]) - bounds.f(w["y"])


def _margin_uv(w):
    lhs = bounds.lemma_uv_lhs(w["p"], w["q"])
    return lhs if w["q"] <= w["p"] else -lhs


def _margin_conjugacy(w):
    p, x = w["p"], w["w"]
    return -abs(exponential_mean(p, x) - log_power_mean(p, np.exp(x)))


def _margin_corollary(w):
    p, q, v = w["p"], w["q"], w["v"]
    return bounds.exp_mean_diff_bound(p, q, v) - (exponential_mean(p, v) - exponential_mean(q, v))


def _margin_monotone(w):
    v = w["v"]
    in_p = log_ratio(w["p_hi"], w["q_fixed"], v) - log_ratio(w["p_lo"], w["q_fixed"], v)
    in_q = log_ratio(w["p_fixed"], w["q_lo"], v) - log_ratio(w["p_fixed"], w["q_hi"], v)
    return min(in_p, in_q)


def _margin_cubic(w):
    p0, q0 = w["p0"], w["q0"]
    return -abs(bounds.cubic_identity_check(p0, q0)) / max(1.0, abs(p0), abs(q0)) ** 3


def _margin_taylor(w):
    # 3x cosh x < (3 + x^2) sinh x, i.e. f'(x) < 0, as a relative gap
    x = w["x"]
    lhs = 3.0 * x * math.cosh(x)
    return ((3.0 + x * x) * math.sinh(x) - lhs) / lhs


PROPERTIES: Dict[str, Property] = {
    p.name: p
    for p in (
        Property("main_theorem", _sample_pqv, _margin_main_theorem),
        Property("cargo_shisha_dominates_ratio", _sample_pqv, _margin_cs_ratio),
        Property("new_dominates_K", _sample_pq_gamma, _margin_new_vs_k),
        Property("lemma_sub_generic", _sample_step_function, _margin_step_subadditive),
        Property("lemma_f_decreasing", _sample_f_pair, _margin_f_decreasing),
        Property("lemma_uv", _sample_uv, _margin_uv),
        Property("conjugacy", _sample_conjugacy, _margin_conjugacy),
        Property("corollary", _sample_corollary, _margin_corollary),
        Property("ratio_monotone", _sample_monotone, _margin_monotone),
        Property("cubic_identity", _sample_cubic, _margin_cubic),
        Property("taylor_conclusion", _sample_taylor, _margin_taylor),
    )
}
# P1..P11 short names, in registration order
ALIASES = {f"P{i}": name for i, name in enumerate(PROPERTIES, start=1)}


def resolve(name: str) -> Property:
    key = ALIASES.get(name, name)
    try:
        return PROPERTIES[key]
    except KeyError:
        raise KeyError(f"unknown property {name!r}; known: {', '.join(PROPERTIES)}") from None


def replay(name: str, witness: dict) -> float:
    """Re-evaluate the margin of a stored witness."""
    return resolve(name).margin(witness)


def run_property(name: str, cfg: CampaignConfig) -> CampaignReport:
    prop = resolve(name)
    violations = 0
    worst = math.inf
    witness: dict = {}
    for i in range(cfg.samples):
        record = prop.sample(sample_stream(cfg.seed, i), cfg)
        m = prop.margin(record)
        if math.isnan(m):
            m = -math.inf
        if m < -cfg.tolerance:
            violations += 1
        if m < worst or not witness:
            worst = m
            witness = record
    return CampaignReport(prop.name, cfg.samples, violations, worst, witness)


def run_all(cfg: CampaignConfig) -> List[CampaignReport]:
    return [run_property(name, cfg) for name in PROPERTIES]
