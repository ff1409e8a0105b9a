"""Scalar special functions and series machinery.

Everything here is numpy-aware: scalar inputs return Python floats, array
inputs return arrays of the same shape.

The terminating hypergeometric function ``F(-k, (n+1)/2; (n+3)/2; z)`` is a
degree-k polynomial whose binomial expansion alternates in sign and loses
about ``log10(C(k, k/2))`` digits at ``z = 1``.  It is evaluated instead with
the positive forward recurrence

    F_k = ((n+1) (1-z)^k + 2k F_{k-1}) / (n + 1 + 2k),    F_0 = 1,

which follows from ``F_k = (n+1) * integral_0^1 v^n (1 - z v^2)^k dv`` by
integration by parts and produces the same polynomial without cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, SeriesConvergenceError

BESSEL_MAX_ARG = 700.0
DOUBLE_FACTORIAL_MAX_K = 150
# Above this argument the series coefficients are formed in log space.
LOG_SPACE_THRESHOLD = 30.0


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the infinite series.

    A series stops at the first index ``k >= 3`` whose term bound drops below
    ``tol`` while no larger than its predecessor, and never uses more than ``max_terms`` terms.  With ``strict``
    set, running into the cap with a tail bound above ``tol`` raises
    :class:`SeriesConvergenceError`; otherwise the truncated value is
    returned as is.
    """

    max_terms: int = 30
    tol: float = 1e-14
    strict: bool = True

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")
        if not self.tol >= 0:
            raise DomainError(f"tol must be non-negative, got {self.tol!r}")

    @classmethod
    def fixed(cls, n_terms: int) -> "SeriesControl":
        """Exactly ``n_terms`` terms, no early stop and no convergence error."""
        return cls(max_terms=n_terms, tol=0.0, strict=False)


class SeriesValue(NamedTuple):
    value: float
    terms_used: int
    tail_bound: float


def truncation_length(magnitudes, ctrl: SeriesControl) -> tuple[int, float]:
    """Number of terms to keep and the bound of the first omitted term.

    ``magnitudes[k]`` bounds the absolute value of term ``k`` and must have
    at least ``ctrl.max_terms + 1`` entries.
    """
    magnitudes = np.asarray(magnitudes, dtype=float)
    cap = ctrl.max_terms
    for k in range(min(3, cap), cap):
        # the terms must be past their peak: for large arguments the first
        # few are tiny but still growing
        if magnitudes[k] < ctrl.tol and magnitudes[k] <= magnitudes[k - 1]:
            return k, float(magnitudes[k])
    tail = float(magnitudes[cap])
    if ctrl.strict and tail > ctrl.tol:
        raise SeriesConvergenceError(
            f"series tail bound {tail:.3e} exceeds tol {ctrl.tol:.1e} after "
            f"{cap} terms; raise max_terms",
            tail,
        )
    return cap, tail


def compensated_sum(terms, axis: int = 0):
    """Neumaier-compensated sum of ``terms`` along ``axis``."""
    terms = np.moveaxis(np.asarray(terms, dtype=float), axis, 0)
    s = np.zeros(terms.shape[1:])
    comp = np.zeros(terms.shape[1:])
    for term in terms:
        tot = s + term
        comp += np.where(np.abs(s) >= np.abs(term), (s - tot) + term, (term - tot) + s)
        s = tot
    return s + comp


def _as_output(value, scalar: bool):
    return float(np.asarray(value).reshape(-1)[0]) if scalar else value


def _bessel_series(z, order: int):
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    if np.any(np.isnan(z_arr)) or np.any(z_arr < 0) or np.any(z_arr > BESSEL_MAX_ARG):
        raise DomainError(f"Bessel argument must lie in [0, {BESSEL_MAX_ARG:g}]")
    quarter_sq = (z_arr / 2.0) ** 2
    term = np.ones_like(z_arr) if order == 0 else z_arr / 2.0
    s = term.copy()
    comp = np.zeros_like(z_arr)
    k = 0
    while True:
        k += 1
        term = term * quarter_sq / (k * (k + order))
        tot = s + term
        comp += (s - tot) + term  # s >= term always: one-signed series
        s = tot
        if np.all(term <= 1e-17 * s) and k * (k + order) > quarter_sq.max():
            break
    return _as_output(s + comp, scalar)


def bessel_i0(z):
    """Modified Bessel function of the first kind, order zero, for 0 <= z <= 700."""
    return _bessel_series(z, 0)


def bessel_i1(z):
    """Modified Bessel function of the first kind, order one, for 0 <= z <= 700."""
    return _bessel_series(z, 1)


def _check_unit(z, name="z"):
    arr = np.asarray(z, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")
    return arr


def hyp_neg_k_table(n_terms: int, z, n: int = 0) -> np.ndarray:
    """``F(-k, (n+1)/2; (n+3)/2; z)`` for ``k = 0 .. n_terms-1``.

    The result has shape ``(n_terms,) + shape(z)``.  No domain check: callers
    pass ``z`` already in ``[0, 1]``.
    """
    z = np.asarray(z, dtype=float)
    out = np.empty((n_terms,) + z.shape)
    if n_terms == 0:
        return out
    one_minus = 1.0 - z
    power = np.ones_like(z)
    prev = np.ones_like(z)
    out[0] = prev
    a = n + 1.0
    for k in range(1, n_terms):
        power = power * one_minus
        prev = (a * power + 2.0 * k * prev) / (a + 2.0 * k)
        out[k] = prev
    return out


def hyp_neg_k(k: int, z, n: int = 0):
    """Terminating Gauss series ``F(-k, (n+1)/2; (n+3)/2; z)`` on ``[0, 1]``.

    For ``n = 0`` this is ``F(-k, 1/2; 3/2; z)``, the polynomial
    ``sum_s (-1)^s C(k, s) z^s / (2s + 1)``.  The value lies in ``(0, 1]``.
    """
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k!r}")
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    arr = _check_unit(z)
    return _as_output(hyp_neg_k_table(int(k) + 1, arr, int(n))[-1], arr.ndim == 0)


def double_factorial_ratio(k: int) -> float:
    """``(2k)!! / (2k+1)!!``, the value of ``F(-k, 1/2; 3/2; 1)``."""
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k!r}")
    if k > DOUBLE_FACTORIAL_MAX_K:
        raise OverflowError(f"double_factorial_ratio supports k <= {DOUBLE_FACTORIAL_MAX_K}")
    ratio = 1.0
    for j in range(1, int(k) + 1):
        ratio *= (2.0 * j) / (2.0 * j + 1.0)
    return ratio


def gegenbauer_form(k: int, u):
    """Gegenbauer polynomial ``C_{2k+1}^{-k-1/2}(u)`` for ``u`` in ``[0, 1]``.

    Obtained from ``F(-k, 1/2; 3/2; u^2)`` through
    ``C = -(2k+1)!!/(2k)!! * u * F``.
    """
    arr = _check_unit(u, "u")
    val = -arr * hyp_neg_k(k, arr * arr) / double_factorial_ratio(k)
    return _as_output(val, arr.ndim == 0)


def _coefficients(y: float, n_terms: int, shift: int, log_scale: float) -> np.ndarray:
    # exp(log_scale) * (y/2)^(2k+shift) / (k! (k+shift)!)
    if y < 0:
        raise DomainError("series argument must be non-negative")
    k = np.arange(n_terms, dtype=float)
    if y == 0.0:
        out = np.zeros(n_terms)
        if shift == 0 and n_terms:
            out[0] = math.exp(log_scale)
        return out
    if y > LOG_SPACE_THRESHOLD:
        lgam = np.array([math.lgamma(i + 1.0) for i in range(n_terms + shift)])
        log_terms = (2 * k + shift) * math.log(y / 2.0) - lgam[:n_terms] - lgam[shift:]
        return np.exp(log_terms + log_scale)
    out = np.empty(n_terms)
    term = math.exp(log_scale) * (y / 2.0) ** shift / math.factorial(shift)
    q = (y / 2.0) ** 2
    for i in range(n_terms):
        out[i] = term
        term *= q / ((i + 1) * (i + 1 + shift))
    return out


def i0_coefficients(y: float, n_terms: int, log_scale: float = 0.0) -> np.ndarray:
    """``(y/2)^(2k) / (k!)^2`` for ``k < n_terms``, times ``exp(log_scale)``."""
    return _coefficients(y, n_terms, 0, log_scale)


def i1_coefficients(y: float, n_terms: int, log_scale: float = 0.0) -> np.ndarray:
    """``(y/2)^(2k+1) / (k! (k+1)!)`` for ``k < n_terms``, times ``exp(log_scale)``."""
    return _coefficients(y, n_terms, 1, log_scale)


def telegraph_weights(lam_t: float, n_terms: int, log_scale: float = 0.0) -> np.ndarray:
    """``(1/(k!)^2) (lam_t/2)^(2k) (1 + lam_t/(2k+2))`` for ``k < n_terms``.

    This is the coefficient shared by every interval-probability series; it
    is the sum of the I0 and I1 series coefficients at ``lam_t``.
    """
    return i0_coefficients(lam_t, n_terms, log_scale) + i1_coefficients(lam_t, n_terms, log_scale)


def _antideriv(q, p, x, n, ctrl, order):
    if not p > 0:
        raise DomainError(f"p must be positive, got {p!r}")
    if not q >= 0:
        raise DomainError(f"q must be non-negative, got {q!r}")
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(x_arr)) or np.any(np.abs(x_arr) > p):
        raise DomainError(f"|x| must not exceed p={p!r}")
    scalar = x_arr.ndim == 0
    n = int(n)
    coef_fn = i0_coefficients if order == 0 else i1_coefficients
    coef = coef_fn(p * q, ctrl.max_terms + 1)
    if coef[0] == 0.0:
        # q = 0 in the I1 case: the integrand vanishes identically
        return SeriesValue(_as_output(np.zeros_like(x_arr), scalar), 0, 0.0)
    prefactor = x_arr ** (n + 1) / (n + 1)
    if order == 1:
        prefactor = prefactor / p
    # all terms share the sign of the prefactor, so tol bounds the relative error
    n_terms, _ = truncation_length(coef / coef[0], ctrl)
    tail = float(np.max(np.abs(prefactor), initial=0.0)) * float(coef[n_terms])
    hyp = hyp_neg_k_table(n_terms, np.minimum((x_arr / p) ** 2, 1.0), n)
    w = coef[:n_terms].reshape((n_terms,) + (1,) * x_arr.ndim)
    value = prefactor * compensated_sum(w * hyp)
    return SeriesValue(_as_output(value, scalar), n_terms, tail)


def antideriv_i0(q: float, p: float, x, n: int = 0, ctrl: SeriesControl = SeriesControl()) -> SeriesValue:
    """Antiderivative of ``x^n I0(q sqrt(p^2 - x^2))`` vanishing at ``x = 0``.

    ``x`` may be an array; the value then has its shape and ``tail_bound``
    is the largest over the points.
    """
    return _antideriv(q, p, x, n, ctrl, 0)


def antideriv_i1(q: float, p: float, x, n: int = 0, ctrl: SeriesControl = SeriesControl()) -> SeriesValue:
    """Antiderivative of ``x^n I1(q sqrt(p^2 - x^2)) / sqrt(p^2 - x^2)`` vanishing at ``x = 0``."""
    return _antideriv(q, p, x, n, ctrl, 1)


def _shifted(fn, q, p, x, n, a, sign, ctrl):
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    value = 0.0
    tail = 0.0
    used = 0
    for m in range(int(n) + 1):
        weight = sign**m * math.comb(int(n), m) * a ** (int(n) - m)
        sv = fn(q, p, x, m, ctrl)
        value += weight * sv.value
        tail += abs(weight) * sv.tail_bound
        used = max(used, sv.terms_used)
    return SeriesValue(value, used, tail)


def antideriv_i0_shifted(q, p, x, n, a, sign=1, ctrl: SeriesControl = SeriesControl()) -> SeriesValue:
    """Antiderivative of ``(a + sign*x)^n I0(q sqrt(p^2 - x^2))`` by binomial expansion."""
    return _shifted(antideriv_i0, q, p, x, n, a, sign, ctrl)


def antideriv_i1_shifted(q, p, x, n, a, sign=1, ctrl: SeriesControl = SeriesControl()) -> SeriesValue:
    """Antiderivative of ``(a + sign*x)^n I1(q sqrt(p^2 - x^2)) / sqrt(p^2 - x^2)``."""
    return _shifted(antideriv_i1, q, p, x, n, a, sign, ctrl)
