"""Brute-force ground truth on tiny Kneser graphs.

Every quantity here is exact: P^t is carried as the integer matrix A^t over
deg^t, so TV distances and traces come out as Fractions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import exact_binomial
from .engine import build_kernel_exact, evolve_exact
from .model import KneserParams, LumpKind, lump_start, spectrum_exact

MAX_VERTICES = 5000


class OracleSizeError(ValueError):
    pass


def rank_subset(subset, ground: int) -> int:
    """Lexicographic rank of a sorted r-subset of {1..ground}."""
    r = len(subset)
    rank, prev = 0, 0
    for pos, x in enumerate(subset):
        for skipped in range(prev + 1, x):
            rank += exact_binomial(ground - skipped, r - pos - 1)
        prev = x
    return rank


def unrank_subset(rank: int, ground: int, r: int) -> tuple[int, ...]:
    out = []
    x = 1
    for pos in range(r):
        while True:
            block = exact_binomial(ground - x, r - pos - 1)
            if rank < block:
                break
            rank -= block
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


@dataclass
class FullChain:
    params: KneserParams
    vertices: list[tuple[int, ...]]
    neighbors: np.ndarray  # (V, deg) vertex indices
    degree: int

    @property
    def size(self) -> int:
        return len(self.vertices)

    def transition_matrix(self) -> list[list[Fraction]]:
        V, w = self.size, Fraction(1, self.degree)
        rows = [[Fraction(0)] * V for _ in range(V)]
        for a in range(V):
            for b in self.neighbors[a]:
                rows[a][int(b)] = w
        return rows

    def adjacency_powers(self, upto: int):
        """Yield the integer matrices A^0, A^1, ..., A^upto (object dtype)."""
        V = self.size
        M = np.zeros((V, V), dtype=object)
        for i in range(V):
            M[i, i] = 1
        yield M
        for _ in range(upto):
            # (A^t A)[x, z] = sum over y adjacent to z of A^t[x, y]
            M = M[:, self.neighbors].sum(axis=2)
            yield M


def build_full_chain(p: KneserParams) -> FullChain:
    count = exact_binomial(p.ground, p.n)
    if count > MAX_VERTICES:
        raise OracleSizeError(
            f"oracle needs binom(2n+k, n) <= {MAX_VERTICES}; K({p.ground},{p.n}) has {count} vertices"
        )
    vertices = list(itertools.combinations(range(1, p.ground + 1), p.n))
    masks = [sum(1 << (x - 1) for x in v) for v in vertices]
    neighbors = [[j for j, mb in enumerate(masks) if not ma & mb] for ma in masks]
    deg = exact_binomial(p.n + p.k, p.n)
    if any(len(row) != deg for row in neighbors):
        raise AssertionError("Kneser graph is not regular of the expected degree")
    return FullChain(p, vertices, np.array(neighbors, dtype=np.intp), deg)


def _row_tv(row, V: int, scale: int) -> Fraction:
    # (1/2) sum_y |row[y]/scale - 1/V|
    return Fraction(sum(abs(V * int(x) - scale) for x in row), 2 * V * scale)


def oracle_tv(chain: FullChain, t_max: int) -> list[Fraction]:
    """Exact d(t) for t = 0..t_max; every starting row must give the same value."""
    if t_max > 200:
        raise ValueError("oracle_tv supports t_max <= 200")
    V = chain.size
    out = []
    for t, M in enumerate(chain.adjacency_powers(t_max)):
        scale = chain.degree**t
        tvs = {_row_tv(M[x], V, scale) for x in range(V)}
        if len(tvs) != 1:
            raise AssertionError(f"TV depends on the starting vertex at t={t}")
        out.append(tvs.pop())
    return out


def certify_spectrum(chain: FullChain, m_max: int = 6) -> dict[int, bool]:
    """trace(P^m) == sum_i m_i lambda_i^m for m = 0..m_max, exactly."""
    if m_max > 8:
        raise ValueError("certify_spectrum supports m_max <= 8")
    table = spectrum_exact(chain.params)
    report = {}
    for m, M in enumerate(chain.adjacency_powers(m_max)):
        trace = Fraction(sum(int(M[i, i]) for i in range(chain.size)), chain.degree**m)
        report[m] = trace == sum(mult * lam**m for lam, mult in table)
    return report


def start_vertex(p: KneserParams) -> tuple[int, ...]:
    return tuple(range(p.n + 1, 2 * p.n + 1))


def _statistic(p: KneserParams, kind: LumpKind):
    ref = set(start_vertex(p)) if kind is LumpKind.START_OVERLAP else set(range(1, p.n + 1))
    return lambda v: len(ref.intersection(v))


def lump_pushforward(chain: FullChain, t_max: int, kind: LumpKind) -> list[list[Fraction]]:
    """Law of the lump statistic at t = 0..t_max for the walk from X_0 = {n+1..2n}."""
    p = chain.params
    x0 = chain.vertices.index(start_vertex(p))
    stat = _statistic(p, kind)
    labels = [stat(v) for v in chain.vertices]
    out = []
    for t, M in enumerate(chain.adjacency_powers(t_max)):
        scale = chain.degree**t
        masses = [0] * (p.n + 1)
        for y, lab in enumerate(labels):
            masses[lab] += int(M[x0, y])
        out.append([Fraction(m, scale) for m in masses])
    return out


def lump_consistency(chain: FullChain, t_max: int) -> dict[LumpKind, bool]:
    """Exact equality of the oracle pushforward with the engine's lumped laws."""
    p = chain.params
    report = {}
    for kind in LumpKind:
        pushed = lump_pushforward(chain, t_max, kind)
        kernel = build_kernel_exact(p, kind)
        mu = [Fraction(0)] * (p.n + 1)
        mu[lump_start(p, kind)] = Fraction(1)
        ok = True
        for t in range(t_max + 1):
            ok &= mu == pushed[t]
            mu = evolve_exact(kernel, mu, 1)
        report[kind] = ok
    return report
