from pathlib import Path

import pytest

from conftest import K4_TRIANGLES, parallel_pair_matroid
from sparsematroids.census import enumerate_matroids, enumerate_sparse_paving, sample_sparse_paving
from sparsematroids.encoder import (
    CorruptEncoding,
    FlatEntry,
    UnsupportedMatroid,
    _forced,
    cd_certificates,
    covers,
    decode,
    decode_K_minus_A,
    decode_matroid,
    decode_U,
    encode,
    encode_basic,
    encode_trace,
    flat_cover,
    in_class_N,
    p_closure,
    q_closure,
    t_of,
)
from sparsematroids.formats import format_encoding
from sparsematroids.johnson import iter_bits, johnson, mask_of
from sparsematroids.matroid import Matroid, has_coloops, has_loops, nonbasis_partition, uniform, unique_circuit_in

GOLDEN = Path(__file__).parent / "golden"


def census_ll(max_n=6):
    for n in range(1, max_n + 1):
        for r in range(n + 1):
            for M in enumerate_matroids(n, r):
                if not has_loops(M) and not has_coloops(M):
                    yield M


def test_flat_cover_examples(mk4, ppair):
    assert flat_cover(ppair, mask_of({4, 5, 6})) == [
        FlatEntry(mask_of({5, 6}), 1), FlatEntry(mask_of({4, 5, 6}), 2)]
    assert flat_cover(mk4, K4_TRIANGLES[0]) == [FlatEntry(K4_TRIANGLES[0], 2)]
    # 1, 2, 3 parallel and 4, 5 coloops: {1,2,3} has rank |X| - 2
    M = Matroid.from_bases(5, 3, [{1, 4, 5}, {2, 4, 5}, {3, 4, 5}])
    assert flat_cover(M, mask_of({1, 2, 3})) == [FlatEntry(mask_of({1, 2, 3}), 1)]
    with pytest.raises(ValueError):
        flat_cover(uniform(2, 4), mask_of({1, 2}))


def test_covers():
    F = FlatEntry(mask_of({5, 6}), 1)
    assert covers(F, mask_of({3, 5, 6}))
    assert not covers(F, mask_of({1, 2, 5}))
    assert not covers(FlatEntry(0, 0), mask_of({1, 2, 3}))


def test_encode_uniform():
    for n in range(1, 7):
        for r in range(1, n):
            enc = encode(uniform(r, n))
            assert (enc.S, enc.Z, enc.W, enc.T, enc.t, enc.comp_sizes) == (0, (), 0, 0, 0, ())
            assert decode(enc) == uniform(r, n)


def test_encode_basic_examples(mk4):
    G = johnson(4, 2)
    K = G.vertex_set([mask_of({1, 2}), mask_of({3, 4})])
    M = Matroid(4, 2, G.full & ~K)
    b = encode_basic(M)
    assert b.S == 1 << G.id_of(mask_of({1, 2}))
    assert b.Z == (FlatEntry(mask_of({1, 2}), 1),)
    assert decode_K_minus_A(b.S, b.Z, b.A, G) == b.S
    assert decode_K_minus_A(0, (), 0, G) == 0
    b = encode_basic(mk4)
    assert b.S & ~mk4.nonbases == 0
    assert all(F.flat in K4_TRIANGLES and F.rank == 2 for F in b.Z)


def test_unsupported():
    with pytest.raises(UnsupportedMatroid):
        encode(Matroid.from_bases(4, 2, [{1, 2}, {1, 3}, {2, 3}]))
    with pytest.raises(UnsupportedMatroid):
        encode(uniform(3, 3))


def _naive_p(A, KmA, G):
    P = 0
    while True:
        new = P | sum(1 << v for v in iter_bits(A & ~P) if _forced(G, v, P | KmA))
        if new == P:
            return P
        P = new


def test_p_closure_properties():
    G = johnson(5, 2)
    assert p_closure(G.full, 0, G) == 0
    for M in census_ll(6):
        tr = encode_trace(M)
        G = M.graph
        if G.d == 0:
            continue
        assert tr.P & ~M.nonbases == 0
        assert tr.P == _naive_p(tr.A, tr.KmA, G)


def test_certificates_singleton():
    G = johnson(5, 2)
    X = mask_of({2, 4})
    v = G.id_of(X)
    c = cd_certificates(X, 1 << v, 0, G)
    assert c.e_star == 1 and c.f_star == 0


def test_certificates_and_q_on_census():
    for M in census_ll(6):
        tr = encode_trace(M)
        G = M.graph
        if G.d == 0:
            continue
        KmAp = tr.KmA | tr.P
        KA = M.nonbases & tr.Aprime
        comps = G.components(KA)
        for v in iter_bits(KA):
            X = G.masks[v]
            c = cd_certificates(X, tr.Aprime, KmAp, G)
            assert c.C and c.D
            if M.rank(X) == M.r - 1:
                assert c.C == unique_circuit_in(M, X)
            comp = next(C for C in comps if C >> v & 1)
            assert q_closure(v, tr.Aprime, KmAp, G) == comp


def test_q_isolated_vertex():
    G = johnson(4, 2)
    v = G.id_of(mask_of({1, 2}))
    assert q_closure(v, 1 << v, 0, G) == 1 << v


def test_parallel_pair(ppair):
    enc = encode(ppair)
    assert decode(enc) == ppair
    assert decode_U(enc.S, enc.Z, enc.T, 6, 3) == nonbasis_partition(ppair).U
    assert format_encoding(enc) == (GOLDEN / "parallel_pair.enc").read_text().strip()
    assert format_encoding(encode(parallel_pair_matroid())) == format_encoding(enc)


def test_sparse_paving_t_zero():
    for n, r in ((4, 2), (5, 2), (6, 3)):
        for M in enumerate_sparse_paving(n, r):
            if has_loops(M) or has_coloops(M):
                assert not in_class_N(M, 100.0)
                continue
            enc = encode(M)
            assert enc.t == 0 and enc.T == 0
            assert decode_U(enc.S, enc.Z, enc.T, n, r) == 0
            assert in_class_N(M, 0.0)


def test_loop_not_in_class_N():
    assert not in_class_N(Matroid.from_bases(4, 2, [{1, 2}, {1, 3}, {2, 3}]), 1e9)


def test_round_trip_n5():
    for M in census_ll(5):
        enc = encode(M)
        assert decode(enc) == M
        assert decode_U(enc.S, enc.Z, enc.T, M.n, M.r) == nonbasis_partition(M).U


def test_transversal_swap():
    seen = 0
    for M in enumerate_matroids(6, 3):
        if has_loops(M) or has_coloops(M):
            continue
        tr = encode_trace(M)
        if not tr.encoding.t:
            continue
        seen += 1
        big = [c for c in tr.components if c & (c - 1)]
        enc = tr.encoding
        # every transversal of the big components decodes to M
        choices = [[1 << v for v in iter_bits(c)] for c in big]
        from itertools import product
        for pick in product(*choices):
            assert decode_matroid(enc.S, enc.Z, sum(pick) | enc.W, 6, 3) == M
        assert enc.transversal_count == len(list(product(*choices))) >= 2 ** enc.t
    assert seen > 0


def test_samples_round_trip():
    for seed in range(20):
        M = sample_sparse_paving(10, 5, seed)
        enc = encode(M)
        assert t_of(M) == 0
        assert decode(enc) == M


def test_corrupt_encoding():
    with pytest.raises(CorruptEncoding):
        decode_matroid(3, (), 0, 4, 2)
