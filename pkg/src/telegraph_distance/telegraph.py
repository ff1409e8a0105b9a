"""Distribution of a single Goldstein-Kac telegraph process X(t).

A particle starts at the origin, picks a direction with probability 1/2 each
and moves at speed ``c``, reversing at the events of a Poisson process of
rate ``lam``.  At time ``t`` the law of X(t) has two atoms of mass
``exp(-lam t)/2`` at ``-ct`` and ``ct`` and a density on ``(-ct, ct)``.

CDF values follow the strict convention ``P{X(t) < x}``: the CDF is
left-continuous, so at ``x = ct`` it equals ``1 - exp(-lam t)/2`` and
``P{X(t) <= ct}`` is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, EmptyIntersectionError
from .specfun import (
    LOG_SPACE_THRESHOLD,
    SeriesControl,
    bessel_i0,
    bessel_i1,
    compensated_sum,
    double_factorial_ratio,
    gegenbauer_form,
    hyp_neg_k_table,
    telegraph_weights,
    truncation_length,
)

MAX_LAMBDA_T = 200.0


@dataclass(frozen=True)
class TelegraphParams:
    """Speed ``c`` and Poisson switching rate ``lam`` of one process."""

    c: float
    lam: float

    def __post_init__(self):
        for name in ("c", "lam"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")


class IntervalProb(NamedTuple):
    value: float
    alpha: float
    beta: float


def check_time(p: TelegraphParams, t: float) -> None:
    if not (math.isfinite(t) and t > 0):
        raise DomainError(f"t must be a positive finite time, got {t!r}")
    if p.lam * t > MAX_LAMBDA_T:
        raise DomainError(f"lam*t = {p.lam * t:g} exceeds the supported maximum {MAX_LAMBDA_T:g}")


def singular_mass(p: TelegraphParams, t: float) -> float:
    """Mass of each of the two atoms at ``-ct`` and ``ct``."""
    check_time(p, t)
    return 0.5 * math.exp(-p.lam * t)


def density_ac(p: TelegraphParams, t: float, x):
    """Density of the absolutely continuous part; zero for ``|x| >= ct``."""
    check_time(p, t)
    x_arr = np.asarray(x, dtype=float)
    ct = p.c * t
    ax = np.abs(x_arr)
    inside = ax < ct
    out = np.zeros(x_arr.shape)
    if np.any(inside):
        xi = ax[inside]
        s = np.sqrt((ct - xi) * (ct + xi))
        y = p.lam * s / p.c
        i1_over_s = np.empty_like(s)
        pos = s > 0
        i1_over_s[pos] = bessel_i1(y[pos]) / s[pos]
        i1_over_s[~pos] = 0.5 * p.lam / p.c
        out[inside] = (p.lam * math.exp(-p.lam * t) / (2.0 * p.c)) * (bessel_i0(y) + ct * i1_over_s)
    return float(out) if x_arr.ndim == 0 else out


def _prefactor_log(p: TelegraphParams, t: float) -> float:
    # log of lam * exp(-lam t) / (2c)
    return math.log(p.lam / (2.0 * p.c)) - p.lam * t


def odd_series(p: TelegraphParams, t: float, x, ctrl: SeriesControl):
    """``(lam e^{-lam t} / 2c) * x * sum_k w_k F(-k, 1/2; 3/2; x^2/(ct)^2)``.

    This odd function of ``x`` on ``[-ct, ct]`` is the absolutely continuous
    mass of ``(0, x)``; interval probabilities are differences of it.

    Returns ``(values, terms_used, tail_bound)``.
    """
    x_arr = np.asarray(x, dtype=float)
    ct = p.c * t
    lam_t = p.lam * t
    weights = telegraph_weights(lam_t, ctrl.max_terms + 1, _prefactor_log(p, t))
    xmax = float(np.max(np.abs(x_arr))) if x_arr.size else 0.0
    n_terms, tail = truncation_length(weights * xmax, ctrl)
    z = np.clip((x_arr / ct) ** 2, 0.0, 1.0)
    hyp = hyp_neg_k_table(n_terms, z)
    w = weights[:n_terms].reshape((n_terms,) + (1,) * x_arr.ndim)
    values = x_arr * compensated_sum(w * hyp)
    return values, n_terms, tail


def _clip_interval(p, t, a, b):
    if not a < b:
        raise DomainError(f"interval requires a < b, got ({a!r}, {b!r})")
    ct = p.c * t
    alpha = max(-ct, a)
    beta = min(ct, b)
    if not alpha < beta:
        raise EmptyIntersectionError(f"({a!r}, {b!r}) does not meet the support (-{ct:g}, {ct:g})")
    return alpha, beta


def interval_prob(p: TelegraphParams, t: float, a: float, b: float, ctrl: SeriesControl = SeriesControl()) -> IntervalProb:
    """Absolutely continuous mass of ``(a, b)``; atoms are never included."""
    check_time(p, t)
    alpha, beta = _clip_interval(p, t, a, b)
    vals, _, _ = odd_series(p, t, np.array([alpha, beta]), ctrl)
    value = min(max(float(vals[1] - vals[0]), 0.0), 1.0)
    return IntervalProb(value, alpha, beta)


def centered_interval_prob(p: TelegraphParams, t: float, x0: float, r: float, ctrl: SeriesControl = SeriesControl()) -> float:
    """Mass of ``(x0 - r, x0 + r)``, which must lie inside ``[-ct, ct]``."""
    check_time(p, t)
    ct = p.c * t
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    if not (-ct <= x0 - r and x0 + r <= ct):
        raise DomainError(f"({x0 - r:g}, {x0 + r:g}) is not contained in [-{ct:g}, {ct:g}]")
    return interval_prob(p, t, x0 - r, x0 + r, ctrl).value


def cdf(p: TelegraphParams, t: float, x, ctrl: SeriesControl = SeriesControl()):
    """``P{X(t) < x}``, evaluated through the hypergeometric series."""
    check_time(p, t)
    x_arr = np.asarray(x, dtype=float)
    ct = p.c * t
    out = np.where(x_arr > ct, 1.0, 0.0)
    inner = (x_arr > -ct) & (x_arr <= ct)
    if np.any(inner):
        vals, _, _ = odd_series(p, t, x_arr[inner], ctrl)
        out[inner] = np.clip(0.5 + vals, 0.0, 1.0)
    return float(out) if x_arr.ndim == 0 else out


def _gegenbauer_weights(lam_t: float, n_terms: int) -> np.ndarray:
    # (e^{-lam t}/2) (lam t)^{2k+1} / (2k+1)! (1 + lam t / (2k+2))
    k = np.arange(n_terms, dtype=float)
    if lam_t > LOG_SPACE_THRESHOLD:
        lgam = np.array([math.lgamma(2 * i + 2.0) for i in range(n_terms)])
        base = np.exp((2 * k + 1) * math.log(lam_t) - lgam - lam_t + math.log(0.5))
    else:
        base = np.empty(n_terms)
        term = 0.5 * math.exp(-lam_t) * lam_t
        for i in range(n_terms):
            base[i] = term
            term *= lam_t * lam_t / ((2 * i + 2) * (2 * i + 3))
    return base * (1.0 + lam_t / (2 * k + 2))


def cdf_gegenbauer(p: TelegraphParams, t: float, x, ctrl: SeriesControl = SeriesControl()):
    """``P{X(t) < x}`` through the Gegenbauer-polynomial form of the series.

    Same contract as :func:`cdf`; ``sgn(0) = 0`` so the value at the origin
    is exactly 1/2.
    """
    check_time(p, t)
    x_arr = np.asarray(x, dtype=float)
    ct = p.c * t
    lam_t = p.lam * t
    out = np.where(x_arr > ct, 1.0, 0.0)
    inner = (x_arr > -ct) & (x_arr <= ct)
    if np.any(inner):
        xi = x_arr[inner]
        u = np.minimum(np.abs(xi) / ct, 1.0)
        weights = _gegenbauer_weights(lam_t, ctrl.max_terms + 1)
        # |C_{2k+1}^{-k-1/2}(u)| <= u (2k+1)!!/(2k)!!
        bounds = weights * float(u.max()) / np.array(
            [double_factorial_ratio(k) for k in range(ctrl.max_terms + 1)]
        )
        n_terms, _ = truncation_length(bounds, ctrl)
        terms = np.array([weights[k] * gegenbauer_form(k, u) for k in range(n_terms)])
        out[inner] = np.clip(0.5 - np.sign(xi) * compensated_sum(terms), 0.0, 1.0)
    return float(out) if x_arr.ndim == 0 else out
