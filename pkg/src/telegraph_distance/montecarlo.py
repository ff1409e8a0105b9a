"""Exact event-driven simulation of telegraph paths and empirical CDFs.

Paths are simulated without time discretisation: exponential inter-event
times are drawn until the horizon ``t`` is passed, and the position is the
sum of signed travel segments.  Paths with no event land exactly on
``+-ct``.

Reproducibility: paths are grouped in fixed blocks of ``BLOCK_SIZE``; block
``i`` of process ``j`` draws from its own PCG64 stream seeded by
``SeedSequence(seed, spawn_key=(j, i))``.  The samples therefore depend only
on ``(seed, n_paths)``, not on how blocks are scheduled across workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np

from .distance import DistancePairParams
from .errors import DomainError, EmptySampleError
from .telegraph import TelegraphParams, check_time

BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    seed: int
    n_paths: int
    params: Union[TelegraphParams, DistancePairParams]
    t: float

    def __post_init__(self):
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise DomainError(f"n_paths must be a positive integer, got {self.n_paths!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise DomainError(f"seed must be a non-negative integer, got {self.seed!r}")
        if isinstance(self.params, DistancePairParams):
            check_time(self.params.p1, self.t)
            check_time(self.params.p2, self.t)
        else:
            check_time(self.params, self.t)


class PathSample(NamedTuple):
    position: np.ndarray
    n_events: np.ndarray


class PairSample(NamedTuple):
    distance: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    n1: np.ndarray
    n2: np.ndarray


def block_rng(seed: int, stream: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream, block))))


def simulate_block(p: TelegraphParams, t: float, size: int, rng: np.random.Generator) -> PathSample:
    """Simulate ``size`` independent paths up to time ``t``."""
    direction = np.where(rng.random(size) < 0.5, -1.0, 1.0)
    clock = np.zeros(size)
    position = np.zeros(size)
    n_events = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    while active.size:
        # 1 - U lies in (0, 1], so the waiting time is finite
        wait = -np.log1p(-rng.random(active.size)) / p.lam
        nxt = clock[active] + wait
        done = nxt >= t
        fin = active[done]
        position[fin] += direction[fin] * p.c * (t - clock[fin])
        go = active[~done]
        position[go] += direction[go] * p.c * wait[~done]
        clock[go] = nxt[~done]
        direction[go] = -direction[go]
        n_events[go] += 1
        active = go
    ct = p.c * t
    np.clip(position, -ct, ct, out=position)
    return PathSample(position, n_events)


def _blocks(n_paths: int):
    starts = range(0, n_paths, BLOCK_SIZE)
    return [(i, min(BLOCK_SIZE, n_paths - s)) for i, s in enumerate(starts)]


def _run(cfg: SimConfig, p: TelegraphParams, stream: int, workers: int) -> PathSample:
    jobs = _blocks(cfg.n_paths)

    def one(job):
        i, size = job
        return simulate_block(p, cfg.t, size, block_rng(cfg.seed, stream, i))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(one, jobs))
    else:
        parts = [one(j) for j in jobs]
    return PathSample(
        np.concatenate([s.position for s in parts]),
        np.concatenate([s.n_events for s in parts]),
    )


def simulate_position(cfg: SimConfig, workers: int = 1) -> PathSample:
    """Samples of X(t) and the number of direction switches per path."""
    if not isinstance(cfg.params, TelegraphParams):
        raise DomainError("simulate_position needs TelegraphParams")
    return _run(cfg, cfg.params, 0, workers)


def simulate_distance(cfg: SimConfig, workers: int = 1) -> PairSample:
    """Samples of ``|X1(t) - X2(t)|`` with the underlying paths."""
    if not isinstance(cfg.params, DistancePairParams):
        raise DomainError("simulate_distance needs DistancePairParams")
    a = _run(cfg, cfg.params.p1, 1, workers)
    b = _run(cfg, cfg.params.p2, 2, workers)
    return PairSample(np.abs(a.position - b.position), a.position, b.position, a.n_events, b.n_events)


class EmpiricalCdf:
    """Left-continuous empirical distribution function ``#{samples < x} / n``."""

    def __init__(self, samples):
        arr = np.sort(np.asarray(samples, dtype=float).ravel())
        if arr.size == 0:
            raise EmptySampleError("EmpiricalCdf needs at least one sample")
        arr.setflags(write=False)
        self._samples = arr

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def n(self) -> int:
        return self._samples.size

    def evaluate(self, x):
        out = np.searchsorted(self._samples, x, side="left") / self.n
        return float(out) if np.ndim(out) == 0 else out

    __call__ = evaluate

    def evaluate_right(self, x):
        """``#{samples <= x} / n``, the right limit at ``x``."""
        out = np.searchsorted(self._samples, x, side="right") / self.n
        return float(out) if np.ndim(out) == 0 else out

    def fraction_near(self, x0: float, atol: float) -> float:
        """Share of samples within ``atol`` of ``x0``."""
        lo = np.searchsorted(self._samples, x0 - atol, side="left")
        hi = np.searchsorted(self._samples, x0 + atol, side="right")
        return (hi - lo) / self.n

    def __eq__(self, other):
        return isinstance(other, EmpiricalCdf) and np.array_equal(self._samples, other._samples)

    def __hash__(self):
        return hash(self._samples.tobytes())


def ks_distance(
    e: EmpiricalCdf,
    f: Callable,
    exclusion_radius: float = 0.0,
    atoms: Sequence[float] = (),
    points=None,
) -> float:
    """Sup of ``|e - f|`` over evaluation points away from the atoms.

    ``f`` must accept an array.  By default the sample points are used and
    both one-sided limits of ``e`` are compared with ``f``, which gives the
    usual Kolmogorov-Smirnov statistic when ``f`` is continuous there.
    """
    if e.n == 0:
        raise EmptySampleError("empty sample")
    pts = np.unique(e.samples) if points is None else np.unique(np.asarray(points, dtype=float))
    keep = np.ones(pts.shape, dtype=bool)
    for a in atoms:
        keep &= np.abs(pts - a) > exclusion_radius
    pts = pts[keep]
    if pts.size == 0:
        return 0.0
    fv = np.asarray(f(pts), dtype=float)
    left = np.abs(e.evaluate(pts) - fv)
    right = np.abs(e.evaluate_right(pts) - fv)
    return float(max(left.max(), right.max()))


def dkw_epsilon(n: int, confidence: float) -> float:
    """Half-width of the Dvoretzky-Kiefer-Wolfowitz band at ``confidence``."""
    return float(np.sqrt(np.log(2.0 / (1.0 - confidence)) / (2.0 * n)))
