"""Kneser graph parameters, walk spectrum and stationary laws."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import (
    HypergeometricParams,
    exact_binomial,
    hypergeometric_pmf_vector,
    log_binomial,
)

# Exact vertex counts are exposed only while they stay below this many bits.
_EXACT_BITS = 4096


class InvalidParams(ValueError):
    pass


@dataclass(frozen=True)
class KneserParams:
    """K(2n+k, n): n-subsets of a (2n+k)-set, adjacent when disjoint."""

    n: int
    k: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidParams(f"n must be a positive integer (n >= 1), got n={self.n}")
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidParams(
                f"k must be a positive integer (k >= 1; k = 0 gives a bipartite, "
                f"non-ergodic walk), got k={self.k}"
            )

    @property
    def ground(self) -> int:
        return 2 * self.n + self.k

    @property
    def log_vertex_count(self) -> float:
        return log_binomial(self.ground, self.n)

    @property
    def log_degree(self) -> float:
        return log_binomial(self.n + self.k, self.n)

    @property
    def vertex_count(self) -> int | None:
        if self.log_vertex_count / math.log(2) > _EXACT_BITS:
            return None
        return exact_binomial(self.ground, self.n)

    @property
    def degree(self) -> int | None:
        if self.log_degree / math.log(2) > _EXACT_BITS:
            return None
        return exact_binomial(self.n + self.k, self.n)

    @property
    def t_star(self) -> float:
        """Cutoff location (1/2) log_{1+k/n}(2n+k)."""
        return 0.5 * math.log(self.ground) / math.log1p(self.k / self.n)

    @property
    def window(self) -> float:
        return self.n / self.k


@dataclass(frozen=True)
class SpectrumEntry:
    index: int
    sign: int
    log_magnitude: float
    log_multiplicity: float

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_magnitude)


@dataclass(frozen=True)
class SpectrumTable:
    params: KneserParams
    entries: tuple[SpectrumEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def log_magnitudes(self) -> np.ndarray:
        return np.array([e.log_magnitude for e in self.entries])

    def log_multiplicities(self) -> np.ndarray:
        return np.array([e.log_multiplicity for e in self.entries])


def spectrum(p: KneserParams) -> SpectrumTable:
    """Transition-matrix eigenvalues (-1)^i binom(n+k-i, n-i)/binom(n+k, n).

    Multiplicity of the i-th eigenvalue is binom(2n+k, i) - binom(2n+k, i-1).
    """
    n, k, N = p.n, p.k, p.ground
    entries = []
    log_mag = 0.0
    for i in range(n + 1):
        if i > 0:
            # |lambda_i| / |lambda_{i-1}| = (n-i+1)/(n+k-i+1)
            log_mag += math.log(n - i + 1) - math.log(n + k - i + 1)
        if i == 0:
            log_mult = 0.0
        else:
            # binom(N,i) - binom(N,i-1) = binom(N,i) * (1 - i/(N-i+1))
            log_mult = log_binomial(N, i) + math.log1p(-i / (N - i + 1))
        entries.append(SpectrumEntry(i, -1 if i % 2 else 1, log_mag, log_mult))
    return SpectrumTable(p, tuple(entries))


def spectrum_exact(p: KneserParams) -> list[tuple[Fraction, int]]:
    """Exact (eigenvalue, multiplicity) pairs, i = 0..n."""
    n, k, N = p.n, p.k, p.ground
    deg = exact_binomial(n + k, n)
    return [
        (
            Fraction((-1) ** i * exact_binomial(n + k - i, n - i), deg),
            exact_binomial(N, i) - exact_binomial(N, i - 1),
        )
        for i in range(n + 1)
    ]


def adjacency_spectrum_exact(p: KneserParams) -> list[tuple[int, int]]:
    """Adjacency eigenvalues (-1)^i binom(n+k-i, n-i) with multiplicities."""
    deg = exact_binomial(p.n + p.k, p.n)
    return [(int(lam * deg), m) for lam, m in spectrum_exact(p)]


def stationary_vertex_mass(p: KneserParams) -> float:
    """log of the uniform vertex mass 1/binom(2n+k, n)."""
    return -p.log_vertex_count


def stationary_vertex_mass_exact(p: KneserParams) -> Fraction:
    return Fraction(1, exact_binomial(p.ground, p.n))


class LumpKind(enum.Enum):
    START_OVERLAP = "start_overlap"  # j_t = |X_t & X_0|, j_0 = n
    PAPER_STATISTIC = "paper_statistic"  # f_t = |X_t & [n]|, X_0 = {n+1..2n}, f_0 = 0


def lump_start(p: KneserParams, kind: LumpKind) -> int:
    return p.n if kind is LumpKind.START_OVERLAP else 0


def stationary_lump(p: KneserParams, kind: LumpKind) -> np.ndarray:
    """Uniform-vertex law pushed to {0..n}: both lumps are H(2n+k, n, n)."""
    # kind only labels the statistic; both overlap counts with a fixed n-set
    # are hypergeometric with the same parameters.
    return hypergeometric_pmf_vector(HypergeometricParams(p.ground, p.n, p.n))


def stationary_lump_exact(p: KneserParams, kind: LumpKind) -> list[Fraction]:
    n, N = p.n, p.ground
    denom = exact_binomial(N, n)
    return [Fraction(exact_binomial(n, j) * exact_binomial(n + p.k, n - j), denom) for j in range(n + 1)]


def stationary_f_moments(p: KneserParams) -> tuple[float, float]:
    """E f = n^2/(2n+k), Var f = n^2 (n+k)^2 / ((2n+k)^2 (2n+k-1))."""
    n, k, N = p.n, p.k, p.ground
    return n * n / N, (n * (n + k)) ** 2 / (N * N * (N - 1))
