from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sparsematroids.johnson import (
    colex_rank,
    colex_unrank,
    elements_of,
    graph_constants,
    johnson,
    mask_of,
    neighbors,
    popcount,
)


def test_colex_rank_examples():
    assert colex_rank(mask_of({1, 2}), 4, 2) == 0
    assert colex_rank(mask_of({3, 4}), 4, 2) == 5
    assert colex_rank(mask_of({1, 4}), 4, 2) == 3


def test_colex_unrank_examples():
    assert elements_of(colex_unrank(0, 4, 2)) == (1, 2)
    assert elements_of(colex_unrank(5, 4, 2)) == (3, 4)
    assert elements_of(colex_unrank(2, 4, 2)) == (2, 3)


def test_colex_order_of_pairs():
    order = [elements_of(colex_unrank(i, 4, 2)) for i in range(6)]
    assert order == [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]


def test_colex_errors():
    with pytest.raises(ValueError):
        colex_rank(mask_of({1, 2, 3}), 4, 2)
    with pytest.raises(ValueError):
        colex_unrank(6, 4, 2)
    with pytest.raises(ValueError):
        colex_unrank(-1, 4, 2)


@st.composite
def rsets(draw, max_n=16):
    n = draw(st.integers(0, max_n))
    r = draw(st.integers(0, n))
    elems = draw(st.sets(st.integers(1, n), min_size=r, max_size=r)) if n else set()
    return n, r, mask_of(elems)


@given(rsets())
def test_colex_bijection(case):
    n, r, X = case
    i = colex_rank(X, n, r)
    assert 0 <= i < comb(n, r)
    assert colex_unrank(i, n, r) == X


def test_colex_rank_matches_formula():
    # rank of {x_1 < ... < x_r} is sum C(x_i - 1, i)
    for X in johnson(7, 3).masks:
        xs = elements_of(X)
        assert colex_rank(X, 7, 3) == sum(comb(x - 1, i) for i, x in enumerate(xs, 1))


def test_masks_are_in_colex_order():
    for n in range(7):
        for r in range(n + 1):
            G = johnson(n, r)
            assert [colex_rank(X, n, r) for X in G.masks] == list(range(G.N))


def test_neighbors_examples():
    got = sorted(elements_of(Y) for Y in neighbors(mask_of({1, 2}), 4))
    assert got == [(1, 3), (1, 4), (2, 3), (2, 4)]
    assert neighbors(mask_of({1, 2, 3, 4}), 4) == []
    assert len(neighbors(mask_of({1, 2, 3, 4}), 8)) == 16


@given(rsets(max_n=12))
def test_neighbors_degree_and_symmetry(case):
    n, r, X = case
    nb = neighbors(X, n)
    assert len(nb) == r * (n - r)
    for Y in nb:
        assert popcount(X & Y) == r - 1
        assert X in neighbors(Y, n)


def test_graph_constants():
    assert graph_constants(8, 4) == (16, 4)
    assert graph_constants(4, 2) == (4, 2)
    assert graph_constants(5, 0) == (0, 0)


def _adjacency(n, r):
    G = johnson(n, r)
    A = np.zeros((G.N, G.N), dtype=np.int64)
    for v in range(G.N):
        for u in G.neighbors(v):
            A[v, u] = 1
    return A


def test_octahedron_spectrum():
    A = _adjacency(4, 2)
    # characteristic polynomial of J(4,2) is (x - 4) x^3 (x + 2)^2
    ev = np.linalg.eigvalsh(A.astype(float))
    assert np.allclose(sorted(ev), [-2, -2, 0, 0, 0, 4])
    I = np.eye(6, dtype=np.int64)
    assert not (A @ (A - 4 * I) @ (A + 2 * I)).any()


def test_smallest_eigenvalue_small_n():
    # exact check: A + lam I is positive semidefinite and singular, so -lam is
    # the smallest eigenvalue; decided with Fractions via LDL on A + lam I
    for n in range(2, 7):
        for r in range(1, n):
            d, lam = graph_constants(n, r)
            A = _adjacency(n, r)
            assert A.sum(axis=1).tolist() == [d] * len(A)
            M = [[Fraction(int(x)) for x in row] for row in A + lam * np.eye(len(A), dtype=np.int64)]
            assert _psd_rank(M) < len(M)
            assert _psd_rank([[x - (Fraction(1, 1000) if i == j else 0) for j, x in enumerate(row)]
                              for i, row in enumerate(M)]) is None


def _psd_rank(M):
    """Rank of a symmetric rational matrix if it is PSD, else None."""
    M = [row[:] for row in M]
    n = len(M)
    rank = 0
    for k in range(n):
        if M[k][k] < 0:
            return None
        if M[k][k] == 0:
            if any(M[k][j] != 0 for j in range(k, n)):
                return None
            continue
        rank += 1
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            if f:
                for j in range(k, n):
                    M[i][j] -= f * M[k][j]
    return rank


def test_components_examples():
    G = johnson(4, 2)
    v12, v13, v34 = G.id_of(mask_of({1, 2})), G.id_of(mask_of({1, 3})), G.id_of(mask_of({3, 4}))
    assert G.components((1 << v12) | (1 << v34)) == [1 << v12, 1 << v34]
    assert G.components(0) == []
    assert G.components((1 << v12) | (1 << v13)) == [(1 << v12) | (1 << v13)]


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))),
       st.data())
def test_components_partition(nr, data):
    n, r = nr
    G = johnson(n, r)
    U = data.draw(st.integers(0, G.full))
    comps = G.components(U)
    acc = 0
    for c in comps:
        assert c and not acc & c
        acc |= c
        assert len(G.components(c)) == 1
    assert acc == U
    for i, a in enumerate(comps):
        for b in comps[i + 1:]:
            assert G.crossing_edges(a, b) == 0
    assert [c & -c for c in comps] == sorted(c & -c for c in comps)
    assert G.is_stable(U) == all(not c & (c - 1) for c in comps)


def test_is_stable_examples():
    G = johnson(4, 2)
    v = lambda s: 1 << G.id_of(mask_of(s))
    assert G.is_stable(v({1, 2}) | v({3, 4}))
    assert not G.is_stable(v({1, 2}) | v({1, 3}))
    assert G.is_stable(0)


def test_canonical_max_degree_vertex():
    G = johnson(4, 2)
    assert G.canonical_max_degree_vertex(G.full) == G.id_of(mask_of({1, 2}))
    A = G.vertex_set(mask_of(s) for s in ({1, 3}, {2, 3}, {1, 4}, {2, 4}, {3, 4}))
    assert G.canonical_max_degree_vertex(A) == G.id_of(mask_of({3, 4}))
    assert G.canonical_max_degree_vertex(1 << 4) == 4
    with pytest.raises(ValueError):
        G.canonical_max_degree_vertex(0)


def test_crossing_edges():
    G = johnson(4, 2)
    v = lambda s: 1 << G.id_of(mask_of(s))
    assert G.crossing_edges(v({1, 2}), v({3, 4})) == 0
    assert G.crossing_edges(v({1, 2}), v({1, 3}) | v({1, 4})) == 2
    assert G.crossing_edges(0, G.full) == 0
    with pytest.raises(ValueError):
        G.crossing_edges(v({1, 2}), v({1, 2}))
