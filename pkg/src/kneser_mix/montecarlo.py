"""Seeded simulation of the walk, explicit (n-subsets) or lumped (f_t only).

Walks are split into fixed blocks of BLOCK_SIZE consecutive walk indices and
block b draws from Philox keyed by SeedSequence([seed, b]). The stream a walk
sees depends only on (seed, walk index), so results do not depend on how many
worker threads run the blocks. Per-block power sums of f_t are integers and
are reduced in block order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .combinatorics import HypergeometricParams, hypergeometric_cdf
from .engine import build_kernel
from .model import KneserParams, LumpKind

BLOCK_SIZE = 4096
THREADS_ENV = "KNESER_MIX_THREADS"


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1), stream])))


def worker_count(requested: int | None = None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class WalkState:
    current_set: tuple[int, ...]
    time: int = 0

    def __post_init__(self):
        if len(set(self.current_set)) != len(self.current_set):
            raise ValueError("walk state elements must be distinct")


def initial_state(p: KneserParams) -> WalkState:
    """X_0 = {n+1, ..., 2n}."""
    return WalkState(tuple(range(p.n + 1, 2 * p.n + 1)))


def step_explicit(p: KneserParams, state: WalkState, rng: np.random.Generator) -> WalkState:
    """Move to a uniform n-subset of the complement (partial Fisher-Yates)."""
    taken = set(state.current_set)
    pool = [x for x in range(1, p.ground + 1) if x not in taken]
    for i in range(p.n):
        j = int(rng.integers(i, len(pool)))
        pool[i], pool[j] = pool[j], pool[i]
    return WalkState(tuple(sorted(pool[: p.n])), state.time + 1)


def sample_hypergeometric(p: HypergeometricParams, rng: np.random.Generator) -> int:
    """Exact H(N, m, n) draw by inverse CDF on the precomputed pmf."""
    return int(np.searchsorted(hypergeometric_cdf(p), rng.random(), side="right"))


@dataclass(frozen=True)
class SimConfig:
    params: KneserParams
    walks: int
    horizon: int
    seed: int
    mode: str = "lumped"

    def __post_init__(self):
        if self.walks < 1:
            raise ValueError("walks must be positive")
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")
        if self.mode not in ("lumped", "explicit"):
            raise ValueError(f"unknown mode {self.mode!r}")


def _explicit_block(p: KneserParams, size: int, horizon: int, rng: np.random.Generator) -> np.ndarray:
    n, ground = p.n, p.ground
    free = n + p.k
    # elements are 0-based here: X_0 = {n, ..., 2n-1}, reference set [n] = {0..n-1}
    cur = np.tile(np.arange(n, 2 * n), (size, 1))
    rows = np.arange(size)[:, None]
    f = np.empty((horizon + 1, size), dtype=np.int64)
    f[0] = (cur < n).sum(axis=1)
    for t in range(1, horizon + 1):
        mask = np.ones((size, ground), dtype=bool)
        mask[rows, cur] = False
        pool = np.nonzero(mask)[1].reshape(size, free)
        for i in range(n):
            j = rng.integers(i, free, size=size)
            a = pool[:, i].copy()
            pool[:, i] = pool[np.arange(size), j]
            pool[np.arange(size), j] = a
        cur = pool[:, :n]
        f[t] = (cur < n).sum(axis=1)
    return f


def _lumped_block(p: KneserParams, size: int, horizon: int, rng: np.random.Generator) -> np.ndarray:
    n = p.n
    kernel = build_kernel(p, LumpKind.PAPER_STATISTIC).matrix
    cdf = np.cumsum(kernel, axis=1)
    # pin every row to exactly 1 from its support maximum on
    for s in range(n + 1):
        cdf[s, n - s:] = 1.0
    # row s is shifted by 2s so the flattened table is sorted
    offsets = 2.0 * np.arange(n + 1)
    flat = (cdf + offsets[:, None]).ravel()
    s = np.zeros(size, dtype=np.int64)
    f = np.empty((horizon + 1, size), dtype=np.int64)
    f[0] = s
    for t in range(1, horizon + 1):
        u = rng.random(size)
        pos = np.searchsorted(flat, u + offsets[s], side="right")
        s = pos - s * (n + 1)
        f[t] = s
    return f


def _block_sums(cfg: SimConfig, block: int) -> np.ndarray:
    lo = block * BLOCK_SIZE
    size = min(BLOCK_SIZE, cfg.walks - lo)
    rng = make_rng(cfg.seed, block)
    run = _explicit_block if cfg.mode == "explicit" else _lumped_block
    f = run(cfg.params, size, cfg.horizon, rng)
    return np.stack([(f**q).sum(axis=1) for q in range(1, 5)], axis=1)


@dataclass
class MomentEstimate:
    t: int
    mean: float
    var: float
    stderr: float
    var_stderr: float


def estimate_f_moments(cfg: SimConfig, threads: int | None = None) -> list[MomentEstimate]:
    """Per-t sample mean, variance and standard errors of f_t across walks."""
    blocks = range(math.ceil(cfg.walks / BLOCK_SIZE))
    workers = worker_count(threads)
    if workers == 1:
        parts = [_block_sums(cfg, b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _block_sums(cfg, b), blocks))
    # int64 sums are exact, so the reduction is order independent
    sums = np.stack(parts).sum(axis=0)
    W = cfg.walks
    out = []
    for t in range(cfg.horizon + 1):
        s1, s2, s3, s4 = (int(v) for v in sums[t])
        mean = s1 / W
        var = (W * s2 - s1 * s1) / (W * (W - 1)) if W > 1 else 0.0
        # population central moments from exact integer power sums
        m2 = (W * s2 - s1 * s1) / W**2
        m4 = (W**3 * s4 - 4 * W**2 * s3 * s1 + 6 * W * s2 * s1**2 - 3 * s1**4) / W**4
        out.append(MomentEstimate(t, mean, var, math.sqrt(var / W), math.sqrt(max(m4 - m2 * m2, 0.0) / W)))
    return out


def simulate_sets(p: KneserParams, walks: int, horizon: int, seed: int) -> np.ndarray:
    """f_t paths (horizon+1, walks) from explicit set walks, for inspection."""
    return _explicit_block(p, walks, horizon, make_rng(seed, 0))
