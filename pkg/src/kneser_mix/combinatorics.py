"""Binomial and hypergeometric primitives.

Two numeric modes live side by side: log-domain floats (``-inf`` is the log of
zero) for production sizes, and exact integers / ``Fraction`` for the oracle
and for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy.special import gammaln

LOG_ZERO = -math.inf

# log_binomial goes through exact math.comb while n or min(r, n-r) is below
# these limits (cheap there, and lgamma differences cancel badly for small r).
_EXACT_LOG_LIMIT = 4096
_EXACT_SMALL_R = 256


def log_add(a: float, b: float) -> float:
    """log(exp(a) + exp(b)) without overflow."""
    if a == LOG_ZERO:
        return b
    if b == LOG_ZERO:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def log_sum_exp(values: Iterable[float]) -> float:
    """log of a sum of exponentials, max-extracted and fsum-accumulated."""
    vals = [v for v in values if v != LOG_ZERO]
    if not vals:
        return LOG_ZERO
    top = max(vals)
    if top == math.inf:
        return math.inf
    return top + math.log(math.fsum(math.exp(v - top) for v in vals))


def exact_binomial(n: int, r: int) -> int:
    """binom(n, r) as an exact integer; 0 when r is outside [0, n]."""
    if r < 0 or r > n or n < 0:
        return 0
    return math.comb(n, r)


def log_binomial(n: int, r: int) -> float:
    """Natural log of binom(n, r), ``LOG_ZERO`` off the support."""
    if r < 0 or r > n or n < 0:
        return LOG_ZERO
    if n <= _EXACT_LOG_LIMIT or min(r, n - r) <= _EXACT_SMALL_R:
        return math.log(math.comb(n, r))
    return math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r + 1)


def log_binomial_array(n, r) -> np.ndarray:
    """Vectorized log binomial via gammaln; ``-inf`` off the support."""
    n = np.asarray(n, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    ok = (r >= 0) & (r <= n) & (n >= 0)
    rs = np.where(ok, r, 0.0)
    ns = np.where(ok, n, 0.0)
    out = gammaln(ns + 1) - gammaln(rs + 1) - gammaln(ns - rs + 1)
    return np.where(ok, out, -np.inf)


@dataclass(frozen=True)
class HypergeometricParams:
    """H(N, m, n): draw ``draws`` items from ``population`` holding ``successes``."""

    population: int
    successes: int
    draws: int

    def __post_init__(self):
        N, m, n = self.population, self.successes, self.draws
        if N < 0 or not 0 <= m <= N or not 0 <= n <= N:
            raise ValueError(f"invalid hypergeometric parameters N={N}, m={m}, n={n}")

    @property
    def support(self) -> range:
        N, m, n = self.population, self.successes, self.draws
        return range(max(0, n + m - N), min(n, m) + 1)


def hypergeometric_pmf_exact(p: HypergeometricParams, i: int) -> Fraction:
    N, m, n = p.population, p.successes, p.draws
    num = exact_binomial(m, i) * exact_binomial(N - m, n - i)
    return Fraction(num, exact_binomial(N, n))


def hypergeometric_pmf(p: HypergeometricParams, i: int) -> float:
    """log Pr[Y = i] for Y ~ H(N, m, n)."""
    N, m, n = p.population, p.successes, p.draws
    if i not in p.support:
        return LOG_ZERO
    return log_binomial(m, i) + log_binomial(N - m, n - i) - log_binomial(N, n)


def hypergeometric_pmf_vector(p: HypergeometricParams) -> np.ndarray:
    """Probabilities over 0..draws, correctly rounded from exact integers."""
    N, m, n = p.population, p.successes, p.draws
    denom = exact_binomial(N, n)
    out = np.zeros(n + 1)
    for i in p.support:
        out[i] = exact_binomial(m, i) * exact_binomial(N - m, n - i) / denom
    return out


def hypergeometric_moments(p: HypergeometricParams) -> tuple[float, float]:
    """Closed-form (mean, variance) of H(N, m, n)."""
    N, m, n = p.population, p.successes, p.draws
    if N < 1:
        raise ValueError("moments need a non-empty population")
    mean = n * m / N
    if N == 1:
        return mean, 0.0
    var = n * m * (N - m) * (N - n) / (N * N * (N - 1))
    return mean, var


def hypergeometric_moments_exact(p: HypergeometricParams) -> tuple[Fraction, Fraction]:
    N, m, n = p.population, p.successes, p.draws
    mean = Fraction(n * m, N)
    if N == 1:
        return mean, Fraction(0)
    return mean, Fraction(n * m * (N - m) * (N - n), N * N * (N - 1))


@lru_cache(maxsize=4096)
def hypergeometric_cdf(p: HypergeometricParams) -> np.ndarray:
    """Cumulative table over 0..draws, pinned to 1 from the support maximum on."""
    cdf = np.cumsum(hypergeometric_pmf_vector(p))
    cdf[p.support[-1]:] = 1.0
    cdf.setflags(write=False)
    return cdf
