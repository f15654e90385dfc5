"""Mixing times and cutoff diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .engine import TVProfile, dense_feasible
from .model import KneserParams


class NonConvergence(RuntimeError):
    pass


def _scan_limit(p: KneserParams) -> int:
    return max(100, math.ceil(100 * p.t_star))


def mixing_time(p: KneserParams, eps: float, profile: TVProfile | None = None) -> int:
    """min{t : d(t) < eps}, extending the exact profile as needed."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    profile = profile or TVProfile(p)
    # d is non-increasing: jump ahead, then step back if we overshot
    t = max(0, math.floor(p.t_star - 5 * p.window))
    limit = _scan_limit(p)
    while profile[t] < eps and t > 0:
        t = max(0, t - max(1, math.ceil(p.window)))
    while profile[t] >= eps:
        t += 1
        if t > limit:
            raise NonConvergence(f"d(t) >= {eps} up to t = {limit} for {p}")
    while t > 0 and profile[t - 1] < eps:
        t -= 1
    return t


@dataclass
class MixingReport:
    params: KneserParams
    epsilons: list[float]
    t_mix: dict[float, int]
    t_star: float
    window_scale: float
    cutoff_ratio: float | None
    profile_source: str
    window_constant: float | None = None  # |t_mix(1/4) - t*| / (n/k)
    probe: "CutoffProfile | None" = None

    def to_dict(self) -> dict:
        out = {
            "n": self.params.n,
            "k": self.params.k,
            "epsilons": self.epsilons,
            "t_mix": {repr(e): v for e, v in self.t_mix.items()},
            "t_star": self.t_star,
            "window_scale": self.window_scale,
            "cutoff_ratio": self.cutoff_ratio,
            "window_constant": self.window_constant,
            "profile_source": self.profile_source,
        }
        if self.probe is not None:
            out["window_probe"] = self.probe.to_dict()
        return out


def mixing_report(
    p: KneserParams, epsilons: list[float], c_grid: list[float] | None = None, profile: TVProfile | None = None
) -> MixingReport:
    if not dense_feasible(p) and profile is None:
        raise ValueError(f"exact profile infeasible for n={p.n}; pass a streaming profile")
    profile = profile or TVProfile(p)
    eps_all = sorted(set(epsilons))
    t_mix = {e: mixing_time(p, e, profile) for e in eps_all}
    e_min = eps_all[0]
    ratio = None
    if e_min < 0.5:
        upper = mixing_time(p, 1 - e_min, profile)
        ratio = t_mix[e_min] / upper if upper > 0 else math.inf
    quarter = t_mix.get(0.25)
    if quarter is None:
        quarter = mixing_time(p, 0.25, profile)
    probe = window_probe(p, c_grid, profile) if c_grid else None
    return MixingReport(
        params=p,
        epsilons=eps_all,
        t_mix=t_mix,
        t_star=p.t_star,
        window_scale=p.window,
        cutoff_ratio=ratio,
        profile_source="exact",
        window_constant=abs(quarter - p.t_star) / p.window,
        probe=probe,
    )


def cutoff_ratio(p: KneserParams, eps: float, profile: TVProfile | None = None) -> float:
    """t_mix(eps) / t_mix(1 - eps)."""
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    profile = profile or TVProfile(p)
    hi = mixing_time(p, 1 - eps, profile)
    lo = mixing_time(p, eps, profile)
    return lo / hi if hi > 0 else math.inf


def cutoff_diagnostic(ps: list[KneserParams], eps: float) -> list[tuple[KneserParams, int, int, float]]:
    """(p, t_mix(eps), t_mix(1-eps), ratio) for each member of a family."""
    rows = []
    for p in ps:
        profile = TVProfile(p)
        lo = mixing_time(p, eps, profile)
        hi = mixing_time(p, 1 - eps, profile)
        rows.append((p, lo, hi, lo / hi if hi > 0 else math.inf))
    return rows


@dataclass
class CutoffProfile:
    params: KneserParams
    lambda_grid: list[float]
    times: list[int]
    d_at: dict[float, float] = field(default_factory=dict)
    # bounds-only mode stores (lower, upper) pairs instead of exact values
    bound_pairs: dict[float, tuple[float, float]] = field(default_factory=dict)

    @property
    def source(self) -> str:
        return "exact" if self.d_at else "bounds_only"

    def to_dict(self) -> dict:
        rows = []
        for c, t in zip(self.lambda_grid, self.times):
            row = {"c": c, "t": t}
            if self.d_at:
                row["d"] = self.d_at[c]
            else:
                row["lower"], row["upper"] = self.bound_pairs[c]
            rows.append(row)
        return {"source": self.source, "rows": rows}


def probe_time(p: KneserParams, c: float) -> int:
    return max(0, math.floor(p.t_star + c * p.window))


def window_probe(
    p: KneserParams, c_grid: list[float], profile: TVProfile | None = None, bounds_only: bool | None = None
) -> CutoffProfile:
    """d(floor(t* + c n/k)) over the grid; spectral/Wilson pairs when exact is off."""
    grid = list(c_grid)
    times = [probe_time(p, c) for c in grid]
    if bounds_only is None:
        bounds_only = profile is None and not dense_feasible(p)
    out = CutoffProfile(p, grid, times)
    if bounds_only:
        table = bounds.spectrum(p)
        for c, t in zip(grid, times):
            out.bound_pairs[c] = (bounds.wilson_lower_analytic(p, t), bounds.spectral_upper(p, t, table))
        return out
    profile = profile or TVProfile(p)
    for c, t in zip(grid, times):
        out.d_at[c] = profile[t]
    return out


def rescaled_profile(p: KneserParams, c_values: np.ndarray, profile: TVProfile | None = None) -> np.ndarray:
    profile = profile or TVProfile(p)
    return np.array([profile[probe_time(p, c)] for c in c_values])
