import itertools
from fractions import Fraction

import pytest

from kneser_mix.model import KneserParams, LumpKind
from kneser_mix import oracle


@pytest.mark.parametrize("n,k,V,deg", [(2, 1, 10, 3), (1, 2, 4, 3), (3, 1, 35, 4)])
def test_build_full_chain(n, k, V, deg):
    ch = oracle.build_full_chain(KneserParams(n, k))
    assert ch.size == V and ch.degree == deg
    P = ch.transition_matrix()
    for a in range(V):
        assert sum(P[a]) == 1
        for b in range(V):
            assert P[a][b] == P[b][a]
            disjoint = not set(ch.vertices[a]) & set(ch.vertices[b])
            assert P[a][b] == (Fraction(1, deg) if disjoint else 0)


def test_complete_graph_k4():
    ch = oracle.build_full_chain(KneserParams(1, 2))
    P = ch.transition_matrix()
    assert all(P[a][b] == (0 if a == b else Fraction(1, 3)) for a in range(4) for b in range(4))
    assert oracle.oracle_tv(ch, 1) == [Fraction(3, 4), Fraction(1, 4)]


def test_size_limit():
    with pytest.raises(oracle.OracleSizeError):
        oracle.build_full_chain(KneserParams(10, 1))


def test_petersen_tv_values():
    ch = oracle.build_full_chain(KneserParams(2, 1))
    assert oracle.oracle_tv(ch, 3) == [Fraction(9, 10), Fraction(7, 10), Fraction(3, 10), Fraction(23, 90)]


def test_certify_spectrum(tiny):
    report = oracle.certify_spectrum(oracle.build_full_chain(tiny), 6)
    assert report == {m: True for m in range(7)}


def test_trace_values_petersen():
    ch = oracle.build_full_chain(KneserParams(2, 1))
    powers = list(ch.adjacency_powers(2))
    assert sum(int(powers[0][i, i]) for i in range(10)) == 10
    assert sum(int(powers[1][i, i]) for i in range(10)) == 0
    assert Fraction(sum(int(powers[2][i, i]) for i in range(10)), 9) == Fraction(10, 3)


def test_certify_detects_wrong_spectrum(monkeypatch):
    ch = oracle.build_full_chain(KneserParams(2, 1))
    monkeypatch.setattr(oracle, "spectrum_exact", lambda p: [(1, 1), (Fraction(-2, 3), 5), (Fraction(1, 3), 4)])
    report = oracle.certify_spectrum(ch, 3)
    assert report[0] and not report[1]


def test_lump_consistency(tiny):
    assert oracle.lump_consistency(oracle.build_full_chain(tiny), 12) == {kind: True for kind in LumpKind}


def test_rank_unrank_roundtrip():
    for ground, r in [(5, 2), (7, 3), (8, 1), (6, 6)]:
        for rank, subset in enumerate(itertools.combinations(range(1, ground + 1), r)):
            assert oracle.rank_subset(subset, ground) == rank
            assert oracle.unrank_subset(rank, ground, r) == subset
