"""Distribution function of the distance between two telegraph processes.

For independent processes X1, X2 with speeds ``c1 >= c2`` the distance
``rho(t) = |X1(t) - X2(t)|`` lives on ``[0, (c1+c2)t]``.  When no switching
event occurs in either process, ``rho`` sits on one of two atoms of mass
``exp(-(lam1+lam2)t)/2`` each: ``(c1-c2)t`` (same initial direction) and
``(c1+c2)t`` (opposite directions).  The rest of the law is absolutely
continuous.

``phi`` returns ``P{rho(t) < r}``.  For ``c1 > c2`` it dispatches to ``G`` on
``(0, (c1-c2)t]`` and ``Q`` on ``((c1-c2)t, (c1+c2)t]``; for equal speeds to
``H`` on ``(0, 2ct]``.  All three contain the integral term

    I_k(r) = (lam2 e^{-lam2 t} / 2 c2) * integral_{-c2 t}^{c2 t}
             [beta F_k(beta^2/(c1 t)^2) - alpha F_k(alpha^2/(c1 t)^2)] * B(x) dx,

with ``alpha = max(-c1 t, x - r)``, ``beta = min(c1 t, x + r)`` and the
Bessel bracket ``B(x) = I0(y) + c2 t I1(y) / sqrt(c2^2 t^2 - x^2)``,
``y = (lam2/c2) sqrt(c2^2 t^2 - x^2)``.  It is integrated in
``theta = arcsin(x / c2 t)``, which cancels the inverse square root, with
panels split where the clipping in ``alpha`` or ``beta`` switches on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BranchError, DomainError, NearlyEqualSpeedsError, RegimeError
from .quadrature import QuadratureControl, integrate
from .specfun import (
    SeriesControl,
    bessel_i0,
    bessel_i1,
    compensated_sum,
    hyp_neg_k_table,
    telegraph_weights,
    truncation_length,
)
from .telegraph import TelegraphParams, check_time, interval_prob

SPEED_REL_TOL = 1e-12


@dataclass(frozen=True)
class DistancePairParams:
    """Two telegraph processes ordered so that ``p1.c >= p2.c``.

    Build with :meth:`from_processes` to get the ordering for free;
    ``swapped`` records whether the inputs were exchanged.
    """

    p1: TelegraphParams
    p2: TelegraphParams
    swapped: bool = False

    def __post_init__(self):
        if self.p1.c < self.p2.c:
            raise DomainError("p1 must be the faster process; use DistancePairParams.from_processes")
        if self.p1.c != self.p2.c and (self.p1.c - self.p2.c) / self.p1.c < SPEED_REL_TOL:
            raise NearlyEqualSpeedsError(
                f"speeds {self.p1.c!r} and {self.p2.c!r} differ by less than "
                f"{SPEED_REL_TOL:g} relative; pass exactly equal speeds for the equal-speed formula"
            )

    @classmethod
    def from_processes(cls, first: TelegraphParams, second: TelegraphParams) -> "DistancePairParams":
        if first.c >= second.c:
            return cls(first, second, False)
        return cls(second, first, True)

    @classmethod
    def from_values(cls, lambda1: float, lambda2: float, c1: float, c2: float) -> "DistancePairParams":
        return cls.from_processes(TelegraphParams(c1, lambda1), TelegraphParams(c2, lambda2))

    @property
    def equal_speeds(self) -> bool:
        return self.p1.c == self.p2.c

    def support_breaks(self, t: float) -> tuple[float, float]:
        """Atom locations ``((c1-c2)t, (c1+c2)t)``."""
        return (self.p1.c - self.p2.c) * t, (self.p1.c + self.p2.c) * t


class ClippedWindow(NamedTuple):
    alpha: float
    beta: float


class PhiBreakdown(NamedTuple):
    value: float
    branch: str
    atoms_below: float
    series_terms_used: int
    quad_error_est: float


class ConditionalProbs(NamedTuple):
    """``P{rho < r}`` conditioned on which processes had at least one event.

    ``p10`` is conditioned on ``N1 >= 1, N2 = 0`` and so on.
    """

    p00: float
    p10: float
    p01: float
    p11: float

    def recombine(self, d: DistancePairParams, t: float) -> float:
        e1 = math.exp(-d.p1.lam * t)
        e2 = math.exp(-d.p2.lam * t)
        return (
            e1 * e2 * self.p00
            + (1 - e1) * e2 * self.p10
            + e1 * (1 - e2) * self.p01
            + (1 - e1) * (1 - e2) * self.p11
        )


class _Series(NamedTuple):
    value: float
    terms: int
    quad_err: float


def _check(d: DistancePairParams, t: float) -> None:
    check_time(d.p1, t)
    check_time(d.p2, t)


def clipped_window(d: DistancePairParams, t: float, x, r: float) -> ClippedWindow:
    """Window ``(alpha, beta)`` of X1 values within ``r`` of ``X2 = x``."""
    c1t = d.p1.c * t
    return ClippedWindow(np.maximum(-c1t, x - r), np.minimum(c1t, x + r))


def atom_masses(d: DistancePairParams, t: float) -> tuple[float, float]:
    """Masses at ``(c1-c2)t`` and ``(c1+c2)t``; they are always equal."""
    _check(d, t)
    m = 0.5 * math.exp(-(d.p1.lam + d.p2.lam) * t)
    return m, m


def _theta_breaks(d: DistancePairParams, t: float, r: float) -> list[float]:
    c1t, c2t = d.p1.c * t, d.p2.c * t
    half = 0.5 * math.pi
    breaks = [-half, half]
    for x_kink in (r - c1t, c1t - r):
        u = x_kink / c2t
        if -1.0 < u < 1.0:
            breaks.append(math.asin(u))
    return sorted(breaks)


def integral_terms(d: DistancePairParams, t: float, r: float, n_terms: int, qctrl: QuadratureControl = QuadratureControl()):
    """``I_k(r)`` for ``k = 0 .. n_terms-1`` and the quadrature error estimate.

    The Bessel bracket does not depend on ``k`` and is computed once per node.
    """
    _check(d, t)
    c1t, c2t = d.p1.c * t, d.p2.c * t
    if not 0 < r <= c1t + c2t:
        raise DomainError(f"r must lie in (0, {c1t + c2t:g}], got {r!r}")
    lam2t = d.p2.lam * t
    # applied inside the integrand so the stopping rule sees probabilities,
    # not raw Bessel values of size e^{lam2 t}
    pref = d.p2.lam * math.exp(-lam2t) / (2.0 * d.p2.c)

    def integrand(theta):
        cos = np.cos(theta)
        x = c2t * np.sin(theta)
        y = lam2t * cos
        bracket = pref * c2t * (cos * bessel_i0(y) + bessel_i1(y))
        alpha, beta = clipped_window(d, t, x, r)
        fa = hyp_neg_k_table(n_terms, np.clip((alpha / c1t) ** 2, 0.0, 1.0))
        fb = hyp_neg_k_table(n_terms, np.clip((beta / c1t) ** 2, 0.0, 1.0))
        return (beta * fb - alpha * fa) * bracket

    return integrate(integrand, _theta_breaks(d, t, r), qctrl)


def integral_term(
    d: DistancePairParams,
    t: float,
    r: float,
    k: int,
    qctrl: QuadratureControl = QuadratureControl(),
    sctrl: SeriesControl = SeriesControl(),
) -> float:
    """Single integral term ``I_k(r)`` (``J_k`` when the speeds are equal)."""
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k!r}")
    if k > sctrl.max_terms:
        raise DomainError(f"k={k} exceeds the series cap {sctrl.max_terms}")
    vals, _ = integral_terms(d, t, r, int(k) + 1, qctrl)
    return float(vals[-1])


def _series_len(*magnitude_arrays, ctrl: SeriesControl) -> tuple[int, float]:
    lengths = [truncation_length(m, ctrl)[0] for m in magnitude_arrays]
    n = max(lengths)
    tail = sum(float(m[n]) for m in magnitude_arrays) if n < len(magnitude_arrays[0]) else 0.0
    return n, tail


def _log_pref(lam: float, c: float, decay: float) -> float:
    # log of lam/(2c) * exp(-decay)
    return math.log(lam / (2.0 * c)) - decay


def _integral_series(d, t, r, n_terms, w_int, qctrl):
    ik, err = integral_terms(d, t, r, n_terms, qctrl)
    return float(compensated_sum(w_int[:n_terms] * ik)), float(np.sum(w_int[:n_terms]) * err)


def _g(d: DistancePairParams, t: float, r: float, sctrl: SeriesControl, qctrl: QuadratureControl) -> _Series:
    c1, c2 = d.p1.c, d.p2.c
    lam1t, lam2t = d.p1.lam * t, d.p2.lam * t
    c1t, c2t = c1 * t, c2 * t
    cap = sctrl.max_terms + 1
    w_atom = telegraph_weights(lam1t, cap, _log_pref(d.p1.lam, c1, lam1t + lam2t))
    w_int = telegraph_weights(lam1t, cap, _log_pref(d.p1.lam, c1, lam1t))
    upper, lower = c2t + r, c2t - r
    bound_int = 2 * c1t * (1 - math.exp(-lam2t))
    n, _ = _series_len(w_atom * (abs(upper) + abs(lower)), w_int * bound_int, ctrl=sctrl)
    fu = hyp_neg_k_table(n, min((upper / c1t) ** 2, 1.0))
    fl = hyp_neg_k_table(n, min((lower / c1t) ** 2, 1.0))
    first = compensated_sum(w_atom[:n] * (upper * fu - lower * fl))
    second, qerr = _integral_series(d, t, r, n, w_int, qctrl)
    return _Series(float(first) + second, n, qerr)


def _check_unequal(d: DistancePairParams):
    if d.equal_speeds:
        raise RegimeError("G and Q require c1 > c2; use h_function for equal speeds")


def g_function(
    d: DistancePairParams,
    t: float,
    r: float,
    sctrl: SeriesControl = SeriesControl(),
    qctrl: QuadratureControl = QuadratureControl(),
) -> float:
    """``G(r, t)``: the distribution function on ``(0, (c1-c2)t]``."""
    _check(d, t)
    _check_unequal(d)
    lo, _ = d.support_breaks(t)
    if not 0 < r <= lo:
        raise BranchError(f"G is defined on (0, {lo:g}], got r={r!r}")
    return _g(d, t, r, sctrl, qctrl).value


def _q(d: DistancePairParams, t: float, r: float, sctrl: SeriesControl, qctrl: QuadratureControl) -> _Series:
    c1, c2 = d.p1.c, d.p2.c
    lam1t, lam2t = d.p1.lam * t, d.p2.lam * t
    c1t, c2t = c1 * t, c2 * t
    e1, e2 = math.exp(-lam1t), math.exp(-lam2t)
    cap = sctrl.max_terms + 1
    w1 = telegraph_weights(lam1t, cap, _log_pref(d.p1.lam, c1, lam1t + lam2t))
    w2 = telegraph_weights(lam2t, cap, _log_pref(d.p2.lam, c2, lam1t + lam2t))
    w_int = telegraph_weights(lam1t, cap, _log_pref(d.p1.lam, c1, lam1t))
    a1, a2 = c2t - r, c1t - r
    n, _ = _series_len(w1 * abs(a1), w2 * abs(a2), w_int * 2 * c1t * (1 - e2), ctrl=sctrl)
    const = 0.5 * ((1 - e1) * e2 + (1 - e2) * e1 + e1 * e2)
    s1 = a1 * compensated_sum(w1[:n] * hyp_neg_k_table(n, min((a1 / c1t) ** 2, 1.0)))
    s2 = a2 * compensated_sum(w2[:n] * hyp_neg_k_table(n, min((a2 / c2t) ** 2, 1.0)))
    s3, qerr = _integral_series(d, t, r, n, w_int, qctrl)
    return _Series(const - float(s1) - float(s2) + s3, n, qerr)


def q_function(
    d: DistancePairParams,
    t: float,
    r: float,
    sctrl: SeriesControl = SeriesControl(),
    qctrl: QuadratureControl = QuadratureControl(),
) -> float:
    """``Q(r, t)``: the distribution function on ``((c1-c2)t, (c1+c2)t]``."""
    _check(d, t)
    _check_unequal(d)
    lo, hi = d.support_breaks(t)
    if not lo < r <= hi:
        raise BranchError(f"Q is defined on ({lo:g}, {hi:g}], got r={r!r}")
    return _q(d, t, r, sctrl, qctrl).value


def _h(d: DistancePairParams, t: float, r: float, sctrl: SeriesControl, qctrl: QuadratureControl) -> _Series:
    c = d.p1.c
    ct = c * t
    lam1t, lam2t = d.p1.lam * t, d.p2.lam * t
    e1, e2 = math.exp(-lam1t), math.exp(-lam2t)
    cap = sctrl.max_terms + 1
    # (lam t/2)^(2k+1)/(k!)^2 (1 + lam t/(2k+2)) = (lam t/2) * telegraph weight
    v1 = telegraph_weights(lam1t, cap, math.log(lam1t / 2) - lam1t - lam2t)
    v2 = telegraph_weights(lam2t, cap, math.log(lam2t / 2) - lam1t - lam2t)
    w_int = telegraph_weights(lam1t, cap, _log_pref(d.p1.lam, c, lam1t))
    frac = 1.0 - r / ct
    n, _ = _series_len(abs(frac) * (v1 + v2), w_int * 2 * ct * (1 - e2), ctrl=sctrl)
    const = 0.5 * ((1 - e1) * e2 + e1 * (1 - e2) + e1 * e2)
    hyp = hyp_neg_k_table(n, min(frac * frac, 1.0))
    s1 = frac * compensated_sum((v1[:n] + v2[:n]) * hyp)
    s2, qerr = _integral_series(d, t, r, n, w_int, qctrl)
    return _Series(const - float(s1) + s2, n, qerr)


def h_function(
    d: DistancePairParams,
    t: float,
    r: float,
    sctrl: SeriesControl = SeriesControl(),
    qctrl: QuadratureControl = QuadratureControl(),
) -> float:
    """``H(r, t)``: the distribution function on ``(0, 2ct]`` for equal speeds."""
    _check(d, t)
    if not d.equal_speeds:
        raise RegimeError("H requires c1 == c2")
    hi = 2 * d.p1.c * t
    if not 0 < r <= hi:
        raise BranchError(f"H is defined on (0, {hi:g}], got r={r!r}")
    return _h(d, t, r, sctrl, qctrl).value


def phi(
    d: DistancePairParams,
    t: float,
    r: float,
    sctrl: SeriesControl = SeriesControl(),
    qctrl: QuadratureControl = QuadratureControl(),
) -> PhiBreakdown:
    """``P{rho(t) < r}`` with the branch and numerical diagnostics used."""
    _check(d, t)
    if math.isnan(r):
        raise DomainError("r is NaN")
    atom = atom_masses(d, t)[0]
    lo, hi = d.support_breaks(t)
    if r <= 0:
        return PhiBreakdown(0.0, "zero", 0.0, 0, 0.0)
    if r > hi:
        return PhiBreakdown(1.0, "one", 2 * atom, 0, 0.0)
    if d.equal_speeds:
        s, branch, below = _h(d, t, r, sctrl, qctrl), "H", atom
    elif r <= lo:
        s, branch, below = _g(d, t, r, sctrl, qctrl), "G", 0.0
    else:
        s, branch, below = _q(d, t, r, sctrl, qctrl), "Q", atom
    return PhiBreakdown(min(max(s.value, 0.0), 1.0), branch, below, s.terms, s.quad_err)


def phi_values(d: DistancePairParams, t: float, rs, sctrl: SeriesControl = SeriesControl(), qctrl: QuadratureControl = QuadratureControl()) -> np.ndarray:
    """Vector of ``phi(...).value`` over the points ``rs``."""
    return np.array([phi(d, t, float(r), sctrl, qctrl).value for r in np.ravel(rs)]).reshape(np.shape(rs))


def conditional_probs(
    d: DistancePairParams,
    t: float,
    r: float,
    sctrl: SeriesControl = SeriesControl(),
    qctrl: QuadratureControl = QuadratureControl(),
) -> ConditionalProbs:
    """The four conditional distribution functions for ``c1 > c2``.

    The first three are assembled from single-process interval
    probabilities; the last one from the integral terms.
    """
    _check(d, t)
    _check_unequal(d)
    lo, hi = d.support_breaks(t)
    if r <= 0:
        return ConditionalProbs(0.0, 0.0, 0.0, 0.0)
    if r > hi:
        return ConditionalProbs(1.0, 1.0, 1.0, 1.0)
    p1, p2 = d.p1, d.p2
    c1t, c2t = p1.c * t, p2.c * t
    e1, e2 = math.exp(-p1.lam * t), math.exp(-p2.lam * t)

    # X2 frozen at -c2t or +c2t; X1 must fall within r of it.
    p10 = (
        interval_prob(p1, t, -c2t - r, -c2t + r, sctrl).value
        + interval_prob(p1, t, c2t - r, c2t + r, sctrl).value
    ) / (2 * (1 - e1))
    if r <= lo:
        p00 = 0.0
        p01 = 0.0
    else:
        p00 = 0.5
        # X1 frozen at -c1t or +c1t; X2 must fall within r of it.
        p01 = (
            interval_prob(p2, t, -c2t, -c1t + r, sctrl).value
            + interval_prob(p2, t, c1t - r, c2t, sctrl).value
        ) / (2 * (1 - e2))

    cap = sctrl.max_terms + 1
    w_int = telegraph_weights(p1.lam * t, cap, _log_pref(p1.lam, p1.c, p1.lam * t))
    n, _ = truncation_length(w_int * 2 * c1t * (1 - e2), sctrl)
    s, _ = _integral_series(d, t, r, n, w_int, qctrl)
    p11 = s / ((1 - e1) * (1 - e2))
    return ConditionalProbs(p00, p10, p01, p11)
