"""Exact evolution of the walk's law on the two intersection-size lumps.

Why the StartOverlap lump gives the exact d(t): the stabiliser of X_0 in the
symmetric group acts transitively on the n-sets A with a fixed |A & X_0|, so
P^t(X_0, .) is constant on each such class, as is the uniform law. The
vertex-level TV therefore equals the TV between the lumped laws, and by
vertex transitivity the max over starting vertices is attained at X_0.

Both lumps share one kernel: from a state with overlap s the next set is an
n-subset of the complement, which holds n - s members of the reference set
and s + k non-members, so the next overlap is H(n+k, n-s, n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from .combinatorics import exact_binomial, log_binomial_array
from .model import (
    KneserParams,
    LumpKind,
    lump_start,
    stationary_lump,
)

FLUSH_THRESHOLD = 1e-320
FLUSH_BUDGET = 1e-14
# Dense (n+1)^2 kernels up to this n; beyond, rows are streamed.
DENSE_MAX_N = 20000
# Up to this n+k kernel entries are correctly rounded from exact integers.
_EXACT_ENTRY_LIMIT = 2000


class MassDrift(RuntimeError):
    pass


def kernel_entry_exact(p: KneserParams, kind: LumpKind, s: int, z: int) -> Fraction:
    n, k = p.n, p.k
    if kind is LumpKind.START_OVERLAP:
        # Z ~ H(n+k, n-j, n)
        num = exact_binomial(n - s, z) * exact_binomial(s + k, n - z)
    else:
        # n - Y with Y ~ H(n+k, s+k, n)
        num = exact_binomial(s + k, n - z) * exact_binomial(n - s, z)
    return Fraction(num, exact_binomial(n + k, n))


def _rows_exact_int(p: KneserParams, lo: int, hi: int) -> np.ndarray:
    n, k = p.n, p.k
    denom = exact_binomial(n + k, n)
    out = np.zeros((hi - lo, n + 1))
    for s in range(lo, hi):
        row = out[s - lo]
        for z in range(max(0, n - s - k), n - s + 1):
            row[z] = exact_binomial(n - s, z) * exact_binomial(s + k, n - z) / denom
    return out


def _rows_log(p: KneserParams, lo: int, hi: int) -> np.ndarray:
    n, k = p.n, p.k
    s = np.arange(lo, hi)[:, None]
    z = np.arange(n + 1)[None, :]
    logs = log_binomial_array(n - s, z) + log_binomial_array(s + k, n - z)
    top = logs.max(axis=1, keepdims=True)
    rows = np.exp(logs - top)
    # per-row normalisation removes the common gammaln error of binom(n+k, n)
    return rows / np.array([math.fsum(r) for r in rows])[:, None]


def kernel_rows(p: KneserParams, lo: int, hi: int) -> np.ndarray:
    """Rows lo..hi-1 of the lumped transition matrix."""
    if p.n + p.k <= _EXACT_ENTRY_LIMIT:
        return _rows_exact_int(p, lo, hi)
    return _rows_log(p, lo, hi)


@dataclass(frozen=True)
class LumpedKernel:
    params: KneserParams
    kind: LumpKind
    matrix: np.ndarray | None  # None in row-streaming mode
    block: int = 256

    @property
    def size(self) -> int:
        return self.params.n + 1

    def apply(self, mu: np.ndarray) -> np.ndarray:
        if self.matrix is not None:
            return mu @ self.matrix
        out = np.zeros(self.size)
        for lo in range(0, self.size, self.block):
            hi = min(self.size, lo + self.block)
            if mu[lo:hi].any():
                out += mu[lo:hi] @ kernel_rows(self.params, lo, hi)
        return out


def dense_feasible(p: KneserParams) -> bool:
    return p.n <= DENSE_MAX_N


@lru_cache(maxsize=32)
def _dense_matrix(p: KneserParams) -> np.ndarray:
    m = kernel_rows(p, 0, p.n + 1)
    m.setflags(write=False)
    return m


def build_kernel(p: KneserParams, kind: LumpKind = LumpKind.START_OVERLAP, stream: bool | None = None) -> LumpedKernel:
    if stream is None:
        stream = not dense_feasible(p)
    return LumpedKernel(p, kind, None if stream else _dense_matrix(p))


def build_kernel_exact(p: KneserParams, kind: LumpKind = LumpKind.START_OVERLAP) -> list[list[Fraction]]:
    return [[kernel_entry_exact(p, kind, s, z) for z in range(p.n + 1)] for s in range(p.n + 1)]


@dataclass
class LumpedDistribution:
    masses: np.ndarray
    time_step: int = 0
    flushed: float = 0.0

    @classmethod
    def delta(cls, size: int, state: int) -> "LumpedDistribution":
        m = np.zeros(size)
        m[state] = 1.0
        return cls(m)

    def total(self) -> float:
        return math.fsum(self.masses)

    def mean(self) -> float:
        return math.fsum(self.masses * np.arange(len(self.masses)))

    def variance(self) -> float:
        s = np.arange(len(self.masses))
        mu = self.mean()
        return math.fsum(self.masses * (s - mu) ** 2)


def step(kernel: LumpedKernel, dist: LumpedDistribution) -> LumpedDistribution:
    nxt = kernel.apply(dist.masses)
    tiny = (nxt > 0) & (nxt < FLUSH_THRESHOLD)
    flushed = dist.flushed
    if tiny.any():
        flushed += float(nxt[tiny].sum())
        nxt[tiny] = 0.0
    if flushed >= FLUSH_BUDGET:
        raise MassDrift(f"flushed mass {flushed:.3e} exceeds budget {FLUSH_BUDGET}")
    return LumpedDistribution(nxt, dist.time_step + 1, flushed)


def evolve(kernel: LumpedKernel, start: LumpedDistribution, steps: int) -> LumpedDistribution:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    dist = LumpedDistribution(start.masses.copy(), start.time_step, start.flushed)
    for _ in range(steps):
        dist = step(kernel, dist)
    return dist


def trajectory(kernel: LumpedKernel, start: LumpedDistribution | None = None) -> Iterator[LumpedDistribution]:
    """Endless stream of laws at t = 0, 1, 2, ..."""
    if start is None:
        start = LumpedDistribution.delta(kernel.size, lump_start(kernel.params, kernel.kind))
    dist = start
    while True:
        yield dist
        dist = step(kernel, dist)


def evolve_exact(kernel: list[list[Fraction]], start: list[Fraction], steps: int) -> list[Fraction]:
    mu = list(start)
    size = len(mu)
    for _ in range(steps):
        mu = [sum((mu[s] * kernel[s][z] for s in range(size) if mu[s]), Fraction(0)) for z in range(size)]
    return mu


def tv_to(masses: np.ndarray, target: np.ndarray) -> float:
    return 0.5 * math.fsum(np.abs(masses - target))


class TVProfile:
    """Lazily extended exact d(t) for one Kneser instance."""

    def __init__(self, p: KneserParams, stream: bool | None = None):
        self.params = p
        self.kernel = build_kernel(p, LumpKind.START_OVERLAP, stream)
        self.pi = stationary_lump(p, LumpKind.START_OVERLAP)
        self._traj = trajectory(self.kernel)
        self.values: list[float] = []
        self.last: LumpedDistribution | None = None

    def extend(self, t_max: int) -> None:
        while len(self.values) <= t_max:
            self.last = next(self._traj)
            self.values.append(tv_to(self.last.masses, self.pi))

    def __getitem__(self, t: int) -> float:
        self.extend(t)
        return self.values[t]

    def upto(self, t_max: int) -> np.ndarray:
        self.extend(t_max)
        return np.array(self.values[: t_max + 1])


def exact_tv_profile(p: KneserParams, t_max: int, stream: bool | None = None) -> np.ndarray:
    """d(t) for t = 0..t_max, computed on the StartOverlap lump."""
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    return TVProfile(p, stream).upto(t_max)


def paper_statistic_tv(p: KneserParams, t_max: int) -> np.ndarray:
    """TV between the law of f_t and its stationary law (a lower bound on d(t))."""
    pi = stationary_lump(p, LumpKind.PAPER_STATISTIC)
    traj = trajectory(build_kernel(p, LumpKind.PAPER_STATISTIC))
    return np.array([tv_to(next(traj).masses, pi) for _ in range(t_max + 1)])


@dataclass(frozen=True)
class MomentTrack:
    time: int
    mean: float
    variance: float


@dataclass
class FMoments:
    """E f_t and Var f_t for t = 0..len-1, plus mass totals for drift checks."""

    mean: np.ndarray
    var: np.ndarray
    total: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.mean)

    def __getitem__(self, t: int) -> MomentTrack:
        return MomentTrack(t, float(self.mean[t]), float(self.var[t]))


def f_moments(p: KneserParams, t_max: int, stream: bool | None = None) -> FMoments:
    """Exact moments of f_t = |X_t & [n]| from f_0 = 0."""
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    kernel = build_kernel(p, LumpKind.PAPER_STATISTIC, stream)
    states = np.arange(p.n + 1, dtype=np.float64)
    mean = np.empty(t_max + 1)
    var = np.empty(t_max + 1)
    total = np.empty(t_max + 1)
    traj = trajectory(kernel)
    for t in range(t_max + 1):
        mu = next(traj).masses
        m1 = float(mu @ states)
        mean[t] = m1
        var[t] = float(mu @ (states - m1) ** 2)
        total[t] = math.fsum(mu)
    return FMoments(mean, var, total)


def closed_form_mean(p: KneserParams, t) -> np.ndarray | float:
    """E f_t = n^2/(2n+k) + (-1)^(t+1) n (n+k) (n/(n+k))^(t+1) / (2n+k)."""
    n, k, N = p.n, p.k, p.ground
    t = np.asarray(t)
    sign = np.where(t % 2 == 0, -1.0, 1.0)
    tail = n * (n + k) / N * np.exp((t + 1) * math.log(n / (n + k)))
    out = n * n / N + sign * tail
    return float(out) if out.ndim == 0 else out
