"""Gauss-Legendre quadrature with node doubling, for vector-valued integrands."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, QuadratureConvergenceError


@dataclass(frozen=True)
class QuadratureControl:
    """Node count per panel and the stopping rule for node doubling.

    The rule is applied to the largest absolute change of any component of
    the integrand between ``n`` and ``2n`` nodes.
    """

    n_nodes: int = 200
    tol: float = 1e-10
    max_doublings: int = 5

    def __post_init__(self):
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 2:
            raise DomainError("n_nodes must be an integer >= 2")
        if not self.tol >= 0:
            raise DomainError("tol must be non-negative")
        if self.max_doublings < 1:
            raise DomainError("max_doublings must be >= 1")


@lru_cache(maxsize=32)
def legendre_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]; the cached arrays are read-only."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_nodes(breaks, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Concatenated nodes and weights of an ``n``-point rule on each panel."""
    x, w = legendre_nodes(n)
    nodes, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= a:
            continue
        half = 0.5 * (b - a)
        nodes.append(a + half * (x + 1.0))
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def integrate(func, breaks, ctrl: QuadratureControl = QuadratureControl()):
    """Integrate ``func`` over the panels delimited by ``breaks``.

    ``func(nodes)`` returns an array whose last axis runs over the nodes, so
    several integrals sharing one set of nodes are computed together.  The
    node count doubles until successive estimates agree to ``ctrl.tol``.

    Returns ``(values, error_estimate)``.
    """
    breaks = np.asarray(breaks, dtype=float)
    n = ctrl.n_nodes
    nodes, weights = composite_nodes(breaks, n)
    prev = np.asarray(func(nodes)) @ weights
    err = np.inf
    for _ in range(ctrl.max_doublings):
        n *= 2
        nodes, weights = composite_nodes(breaks, n)
        cur = np.asarray(func(nodes)) @ weights
        err = float(np.max(np.abs(cur - prev))) if np.size(cur) else 0.0
        if err < ctrl.tol:
            return cur, err
        prev = cur
    raise QuadratureConvergenceError(
        f"quadrature did not converge: change {err:.3e} > tol {ctrl.tol:.1e} at {n} nodes",
        err,
    )
