"""Upper and lower bounds on d(t).

Upper: the transitive spectral bound and its closed-form relaxation
sqrt(g(t)/2). Lower: Wilson's distinguishing-statistic bound 1 - 8/r^2 using
f_t = |X_t & [n]|, once with exact moments and once in the analytic form
built from the finite-n constant C(n, k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .combinatorics import log_sum_exp
from .model import KneserParams, SpectrumTable, spectrum, stationary_f_moments


def log_spectral_sum(table: SpectrumTable, t: float) -> float:
    """log sum_{i>=1} m_i |lambda_i|^{2t}; t may be real."""
    return log_sum_exp(e.log_multiplicity + 2.0 * t * e.log_magnitude for e in table.entries[1:])


def spectral_upper_raw(p: KneserParams, t: float, table: SpectrumTable | None = None) -> float:
    table = table or spectrum(p)
    return 0.5 * math.exp(0.5 * log_spectral_sum(table, t))


def spectral_upper(p: KneserParams, t: float, table: SpectrumTable | None = None) -> float:
    """min(1, (1/2) sqrt(sum_i m_i lambda_i^{2t})).

    Real t evaluates the expression as a function of t; integer t is a bound on d(t).
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    return min(1.0, spectral_upper_raw(p, t, table))


def log_g(p: KneserParams, t: float) -> float:
    return math.log(p.ground) - 2.0 * t * math.log1p(p.k / p.n)


def g(p: KneserParams, t: float) -> float:
    """g(t) = (1 + k/n)^{-2t} (2n+k)."""
    return math.exp(log_g(p, t))


def g_bound(p: KneserParams, t: float) -> float | None:
    """sqrt(g(t)/2) when g(t) <= 1/2, otherwise None (not applicable)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    gt = g(p, t)
    if gt > 0.5:
        return None
    return math.sqrt(gt / 2.0)


def g_series_terms(p: KneserParams, t: float) -> tuple[float, float, float]:
    """The three members of the chain used to reach e^{g} - 1.

    Returns (spectral sum, sum_{i=1}^n g^i / i!, e^g - 1).
    """
    gt = g(p, t)
    spec = math.exp(log_spectral_sum(spectrum(p), t))
    series = math.fsum(gt**i / math.factorial(i) for i in range(1, p.n + 1))
    return spec, series, math.expm1(gt)


def c_constant(p: KneserParams) -> float:
    """C(n, k) = 1 + k/n, a valid finite-n constant in Var f_t <= C Var f.

    The proof bound n(n+k)^2 / (4(2n+k)(n+k-1)) divided by Var f equals
    (2n+k)(2n+k-1) / (4n(n+k-1)), which never exceeds 1 + k/n for n, k >= 1.
    """
    return 1.0 + p.k / p.n


def c_proof_ratio(p: KneserParams) -> float:
    """(2n+k)(2n+k-1) / (4n(n+k-1)): the proof's variance ceiling over Var f."""
    n, k, N = p.n, p.k, p.ground
    return N * (N - 1) / (4 * n * (n + k - 1))


def variance_ceiling(p: KneserParams) -> float:
    """n (n+k)^2 / (4 (2n+k) (n+k-1)), the A = 1/4 bound on every Var f_t."""
    n, k, N = p.n, p.k, p.ground
    return n * (n + k) ** 2 / (4 * N * (n + k - 1))


@dataclass(frozen=True)
class WilsonInputs:
    mean_gap: float
    sigma_star: float

    def __post_init__(self):
        if not self.sigma_star > 0:
            raise ValueError("degenerate sigma_star: the statistic has zero variance")

    @property
    def r(self) -> float:
        return self.mean_gap / self.sigma_star

    def raw(self) -> float:
        r = self.r
        return -math.inf if r == 0 else 1.0 - 8.0 / (r * r)

    def bound(self) -> float:
        return max(0.0, self.raw())


def wilson_inputs_exact(p: KneserParams, mean_t: float, var_t: float) -> WilsonInputs:
    mean_pi, var_pi = stationary_f_moments(p)
    return WilsonInputs(abs(mean_t - mean_pi), math.sqrt(max(var_t, var_pi)))


def wilson_lower_exact(p: KneserParams, mean_t: float, var_t: float) -> float:
    """max(0, 1 - 8/r^2) from the exact moments of f_t."""
    return wilson_inputs_exact(p, mean_t, var_t).bound()


def g_tilde(p: KneserParams, t: float) -> float:
    """sqrt(2n+k-1)/C(n,k) (1+k/n)^{-t-1}."""
    return math.sqrt(p.ground - 1) / c_constant(p) * math.exp(-(t + 1) * math.log1p(p.k / p.n))


def wilson_lower_analytic_raw(p: KneserParams, t: float) -> float:
    r = g_tilde(p, t)
    return -math.inf if r == 0 else 1.0 - 8.0 / (r * r)


def wilson_lower_analytic(p: KneserParams, t: float) -> float:
    if t < 0:
        raise ValueError("t must be non-negative")
    return max(0.0, wilson_lower_analytic_raw(p, t))


def upper_case1_target(c: float) -> float:
    """e^{-c}: the k = o(n) upper bound at t* + c n/k."""
    return math.exp(-c)


def upper_case2_target(p: KneserParams, c: float) -> float:
    """(1+k/n)^{-c}: the k = Omega(n) upper bound at t* + c."""
    return math.exp(-c * math.log1p(p.k / p.n))


def lower_case1_asymptotic(c: float) -> float:
    """1 - 8 e^{-2c}: the k = o(n) lower bound with the o(1) terms dropped."""
    return 1.0 - 8.0 * math.exp(-2.0 * c)


def lower_case2_as_stated(p: KneserParams, c: float) -> float:
    """1 - 8 (1+k/n)^{-2c+4}, the k = Theta(n) form taken literally."""
    return 1.0 - 8.0 * math.exp((4.0 - 2.0 * c) * math.log1p(p.k / p.n))


def spectral_profile(p: KneserParams, t_max: int) -> np.ndarray:
    table = spectrum(p)
    return np.array([spectral_upper(p, t, table) for t in range(t_max + 1)])
