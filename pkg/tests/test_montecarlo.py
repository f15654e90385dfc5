import math
from collections import Counter

import numpy as np
import pytest

from kneser_mix import montecarlo as mc
from kneser_mix.combinatorics import HypergeometricParams
from kneser_mix.engine import f_moments
from kneser_mix.model import KneserParams


def test_step_explicit_triangle():
    p = KneserParams(1, 1)
    rng = mc.make_rng(1)
    counts = Counter(mc.step_explicit(p, mc.WalkState((1,)), rng).current_set for _ in range(20000))
    assert set(counts) == {(2,), (3,)}
    assert counts[(2,)] / 20000 == pytest.approx(0.5, abs=4 * math.sqrt(0.25 / 20000))


def test_step_explicit_petersen_uniform():
    p = KneserParams(2, 1)
    rng = mc.make_rng(2)
    N = 30000
    counts = Counter(mc.step_explicit(p, mc.WalkState((3, 4)), rng).current_set for _ in range(N))
    assert set(counts) == {(1, 2), (1, 5), (2, 5)}
    se = math.sqrt((1 / 3) * (2 / 3) / N)
    for c in counts.values():
        assert c / N == pytest.approx(1 / 3, abs=4 * se)


def test_step_explicit_disjoint():
    p = KneserParams(6, 3)
    rng = mc.make_rng(3)
    state = mc.initial_state(p)
    for _ in range(200):
        nxt = mc.step_explicit(p, state, rng)
        assert len(nxt.current_set) == 6 and not set(nxt.current_set) & set(state.current_set)
        assert all(1 <= x <= p.ground for x in nxt.current_set)
        state = nxt
    assert state.time == 200


def test_sample_hypergeometric():
    rng = mc.make_rng(4)
    assert {mc.sample_hypergeometric(HypergeometricParams(4, 0, 2), rng) for _ in range(200)} == {0}
    assert {mc.sample_hypergeometric(HypergeometricParams(5, 5, 3), rng) for _ in range(200)} == {3}
    draws = [mc.sample_hypergeometric(HypergeometricParams(5, 2, 2), rng) for _ in range(100_000)]
    assert draws.count(1) / 1e5 == pytest.approx(0.6, abs=0.005)


def test_t0_is_exact():
    est = mc.estimate_f_moments(mc.SimConfig(KneserParams(5, 2), 1000, 3, 1))
    assert est[0].mean == 0 and est[0].var == 0 and est[0].stderr == 0


@pytest.mark.parametrize("mode", ["lumped", "explicit"])
def test_moments_petersen(mode):
    p = KneserParams(2, 1)
    est = mc.estimate_f_moments(mc.SimConfig(p, 100_000, 10, 7, mode))
    exact = f_moments(p, 10)
    assert abs(est[1].mean - 4 / 3) <= 4 * est[1].stderr
    for e in est[1:]:
        assert abs(e.mean - exact.mean[e.t]) <= 4 * e.stderr
        assert abs(e.var - exact.var[e.t]) <= 4 * e.var_stderr


def test_explicit_and_lumped_agree():
    p = KneserParams(4, 2)
    a = mc.estimate_f_moments(mc.SimConfig(p, 40_000, 8, 11, "lumped"))
    b = mc.estimate_f_moments(mc.SimConfig(p, 40_000, 8, 11, "explicit"))
    for x, y in zip(a[1:], b[1:]):
        assert abs(x.mean - y.mean) <= 4 * math.hypot(x.stderr, y.stderr)


def test_long_run_mean_stationary():
    p = KneserParams(10, 3)
    est = mc.estimate_f_moments(mc.SimConfig(p, 50_000, 60, 5))
    assert abs(est[-1].mean - 100 / 23) <= 4 * est[-1].stderr


def test_reproducible_across_threads():
    cfg = mc.SimConfig(KneserParams(6, 1), 3 * mc.BLOCK_SIZE + 17, 12, 99)
    one = mc.estimate_f_moments(cfg, threads=1)
    many = mc.estimate_f_moments(cfg, threads=4)
    assert one == many
    other = mc.estimate_f_moments(mc.SimConfig(KneserParams(6, 1), 3 * mc.BLOCK_SIZE + 17, 12, 100))
    assert other != one


def test_threads_env(monkeypatch):
    monkeypatch.setenv(mc.THREADS_ENV, "3")
    assert mc.worker_count() == 3
    assert mc.worker_count(2) == 2


def test_sim_config_validation():
    with pytest.raises(ValueError):
        mc.SimConfig(KneserParams(2, 1), 0, 3, 1)
    with pytest.raises(ValueError):
        mc.SimConfig(KneserParams(2, 1), 5, 3, 1, "bogus")
