"""Exhaustive small-n enumeration, stable-set counting and census statistics."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator

import numpy as np

from . import bounds
from .encoder import encode
from .johnson import iter_bits, johnson, popcount
from .matroid import (
    Matroid,
    cogirth,
    connectivity,
    fractions,
    girth,
    has_coloops,
    has_loops,
    has_uniform_minor,
    nonbasis_partition,
)

MATROID_SCAN_CAP = 21  # C(n, r) limit for the full subset scan
STABLE_SCAN_CAP = 22  # C(n, r) limit for the plain 2^N stable-set scan
STABLE_COUNT_CAP = 35  # C(n, r) limit for branch-and-bound counting


class CapacityError(ValueError):
    """Requested workload is beyond the exhaustive limits."""


def _guard(n: int, r: int, cap: int, what: str) -> None:
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got n={n}, r={r}")
    if comb(n, r) > cap:
        raise CapacityError(f"{what}: C({n},{r}) = {comb(n, r)} exceeds the cap {cap}")


# -- matroid enumeration --------------------------------------------------

def _exchange_triples(n: int, r: int):
    """(pair mask, witness mask) for every (B1, B2, x) with x in B1 - B2.

    A candidate family holding B1 and B2 violates exchange at x exactly when
    it misses every vertex of the witness mask {B1 - x + y : y in B2 - B1}.
    Adjacent pairs come first since they prune the most.
    """
    G = johnson(n, r)
    out = []
    for b1, B1 in enumerate(G.masks):
        for xb in iter_bits(B1):
            base = B1 & ~(1 << xb)
            for b2, B2 in enumerate(G.masks):
                if B2 >> xb & 1:
                    continue
                W = 0
                for yb in iter_bits(B2 & ~B1):
                    W |= 1 << G.index[base | (1 << yb)]
                out.append((popcount(W), (1 << b1) | (1 << b2), W))
    out.sort(key=lambda t: t[0])
    return [(need, W) for _, need, W in out]


@lru_cache(maxsize=None)
def _matroid_bitsets(n: int, r: int) -> tuple[int, ...]:
    N = comb(n, r)
    dtype = np.uint32 if N <= 31 else np.uint64
    cand = np.arange(1, 1 << N, dtype=dtype)
    for need, W in _exchange_triples(n, r):
        need_, W_ = dtype(need), dtype(W)
        keep = ((cand & need_) != need_) | ((cand & W_) != 0)
        cand = cand[keep]
    return tuple(int(x) for x in cand)


def enumerate_matroids(n: int, r: int, cap: int = MATROID_SCAN_CAP) -> Iterator[Matroid]:
    """Every labelled matroid of rank r on [n], in increasing bitset order."""
    _guard(n, r, cap, "matroid enumeration")
    for bases in _matroid_bitsets(n, r):
        yield Matroid(n, r, bases, check=False)


def count_matroids(n: int, r: int, cap: int = MATROID_SCAN_CAP) -> int:
    _guard(n, r, cap, "matroid enumeration")
    return len(_matroid_bitsets(n, r))


# -- stable sets ----------------------------------------------------------

def _components(R: int, nbr: list[int]) -> list[int]:
    out = []
    while R:
        low = R & -R
        comp = frontier = low
        while frontier:
            grow = 0
            for v in iter_bits(frontier):
                grow |= nbr[v]
            frontier = grow & R & ~comp
            comp |= frontier
        out.append(comp)
        R &= ~comp
    return out


def _poly_mul(p, q, cap):
    out = [0] * min(len(p) + len(q) - 1, cap + 1 if cap is not None else len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if i + j >= len(out):
                break
            out[i + j] += a * b
    return out


def independence_polynomial(R: int, nbr: list[int], cap: int | None = None) -> list[int]:
    """Coefficients c_k = number of stable sets of size k inside the bitset R.

    Branch on a maximum-degree vertex, factor over connected components, and
    memoise on the remaining vertex set.  ``cap`` truncates above size cap.
    """
    memo: dict[int, list[int]] = {}

    def rec(R: int) -> list[int]:
        if not R:
            return [1]
        hit = memo.get(R)
        if hit is not None:
            return hit
        comps = _components(R, nbr)
        if len(comps) > 1:
            out = [1]
            for c in comps:
                out = _poly_mul(out, rec(c), cap)
        else:
            v = max(iter_bits(R), key=lambda u: (popcount(nbr[u] & R), -u))
            if not nbr[v] & R:
                out = [1, 1]
            else:
                without = rec(R & ~(1 << v))
                with_v = rec(R & ~nbr[v] & ~(1 << v))
                size = max(len(without), len(with_v) + 1)
                if cap is not None:
                    size = min(size, cap + 1)
                out = [0] * size
                for i, c in enumerate(without[:size]):
                    out[i] += c
                for i, c in enumerate(with_v[: size - 1]):
                    out[i + 1] += c
            if cap is not None:
                out = out[: cap + 1]
        memo[R] = out
        return out

    return rec(R)


def _johnson_nbr(n: int, r: int) -> list[int]:
    G = johnson(n, r)
    return [G.neighbor_bits(v) for v in range(G.N)]


def count_stable_sets_in(n: int, r: int, U: int, max_size: int | None = None) -> int:
    """i(G[U], max_size) for a vertex subset U of J(n, r)."""
    nbr = _johnson_nbr(n, r)
    if max_size is not None and max_size < 0:
        return 0
    return sum(independence_polynomial(U, nbr, max_size))


def count_stable_sets(n: int, r: int, max_size: int | None = None,
                      cap: int = STABLE_COUNT_CAP) -> int:
    """Number of stable sets of J(n, r), optionally of size at most max_size."""
    _guard(n, r, cap, "stable-set count")
    return count_stable_sets_in(n, r, johnson(n, r).full, max_size)


def stable_size_profile(n: int, r: int, cap: int = STABLE_COUNT_CAP) -> list[int]:
    """Number of stable sets of J(n, r) of each size."""
    _guard(n, r, cap, "stable-set count")
    return independence_polynomial(johnson(n, r).full, _johnson_nbr(n, r))


def count_stable_sets_scan(n: int, r: int, max_size: int | None = None,
                           cap: int = STABLE_SCAN_CAP) -> int:
    """Same count by testing all 2^N vertex subsets; the independent oracle."""
    _guard(n, r, cap, "stable-set scan")
    G = johnson(n, r)
    subsets = np.arange(1 << G.N, dtype=np.uint32)
    ok = np.ones(subsets.shape, dtype=bool)
    for v in range(G.N):
        for u in G.neighbors(v):
            if u > v:
                pair = np.uint32((1 << u) | (1 << v))
                ok &= (subsets & pair) != pair
    if max_size is not None:
        ok &= np.bitwise_count(subsets) <= max_size
    return int(ok.sum())


def iter_stable_sets(n: int, r: int, cap: int = STABLE_COUNT_CAP) -> Iterator[int]:
    """All stable sets of J(n, r) as vertex bitsets, depth-first by vertex id."""
    _guard(n, r, cap, "stable-set enumeration")
    G = johnson(n, r)
    nbr = _johnson_nbr(n, r)
    stack = [(0, G.full)]
    while stack:
        chosen, avail = stack.pop()
        if not avail:
            yield chosen
            continue
        v = (avail & -avail).bit_length() - 1
        rest = avail & ~(1 << v)
        # push "with v" first so "without v" is explored first
        stack.append((chosen | (1 << v), rest & ~nbr[v]))
        stack.append((chosen, rest))


def enumerate_sparse_paving(n: int, r: int, cap: int = STABLE_COUNT_CAP) -> Iterator[Matroid]:
    """Sparse paving matroids: complements of stable sets of J(n, r)."""
    full = johnson(n, r).full
    for K in iter_stable_sets(n, r, cap):
        yield Matroid(n, r, full & ~K, check=False)


def gs_class(n: int, r: int, c: int) -> int:
    """r-sets of [n] whose element sum is c mod n; always a stable set."""
    if not 0 <= c < n:
        raise ValueError("need 0 <= c < n")
    G = johnson(n, r)
    out = 0
    for i, X in enumerate(G.masks):
        if sum(b + 1 for b in iter_bits(X)) % n == c:
            out |= 1 << i
    return out


def sample_sparse_paving(n: int, r: int, seed: int, keep: float = 0.9) -> Matroid:
    """Random sparse paving matroid from a greedily grown stable set.

    Vertices are visited in a seeded random order; each one with no chosen
    neighbour is taken with probability ``keep``.
    """
    G = johnson(n, r)
    rng = np.random.default_rng(seed)
    order = rng.permutation(G.N)
    coins = rng.random(G.N)
    K = 0
    for v, coin in zip(order.tolist(), coins.tolist()):
        if not G.neighbor_bits(v) & K and coin < keep:
            K |= 1 << v
    return Matroid(n, r, G.full & ~K, check=False)


# -- entropy lemmas -------------------------------------------------------

def verify_shearer(n: int, r: int, U: int) -> tuple[float, float, bool]:
    """log i(G) / |V| <= log i(G[U]) / |U|, decided as i(G)^|U| <= i(G[U])^|V|."""
    if not U:
        raise ValueError("U must be nonempty")
    G = johnson(n, r)
    iG = count_stable_sets_in(n, r, G.full)
    iU = count_stable_sets_in(n, r, U)
    u = popcount(U)
    lhs = math.log2(iG) / G.N
    rhs = math.log2(iU) / u
    return lhs, rhs, iG**u <= iU**G.N


def verify_disjoint_additivity(n: int, r: int, U: int, U2: int) -> bool:
    """i(G[U]) i(G[U2]) <= i(G) for disjoint U, U2 with no edges between them."""
    G = johnson(n, r)
    if U & U2:
        raise ValueError("U and U2 must be disjoint")
    if G.crossing_edges(U, U2):
        raise ValueError("U and U2 must have no edges between them")
    return count_stable_sets_in(n, r, U) * count_stable_sets_in(n, r, U2) <= \
        count_stable_sets_in(n, r, G.full)


@dataclass
class UGroup:
    U: int
    size: int
    u: Fraction
    ok: bool | None  # None when |U| = 0 (nothing asserted)


def group_by_U_check(n: int, r: int) -> tuple[list[UGroup], bool]:
    """Group M_{n,r} by U(M); check log(group size) <= (1 - u) log s(n, r).

    Compared exactly as size^N <= s^(N - |U|).
    """
    G = johnson(n, r)
    s = count_stable_sets(n, r)
    groups: dict[int, int] = defaultdict(int)
    for M in enumerate_matroids(n, r):
        groups[nonbasis_partition(M).U] += 1
    out = []
    all_ok = True
    for U in sorted(groups):
        size = groups[U]
        k = popcount(U)
        ok = None if k == 0 else size**G.N <= s ** (G.N - k)
        if ok is False:
            all_ok = False
        out.append(UGroup(U, size, Fraction(k, G.N), ok))
    return out, all_ok


# -- per-matroid statistics -----------------------------------------------

@dataclass
class CensusRecord:
    n: int
    r: int
    bases: int
    u: Fraction
    w: Fraction
    d: Fraction
    girth: float
    cogirth: float
    connectivity: float
    loops: bool
    coloops: bool
    sparse_paving: bool
    t: int | None
    in_N: bool
    minor_U12: bool
    minor_U24: bool
    minor_U36: bool


def census_record(M: Matroid) -> CensusRecord:
    u, w, d = fractions(M)
    lo, co = has_loops(M), has_coloops(M)
    t = None if (lo or co) else encode(M).t
    return CensusRecord(
        n=M.n,
        r=M.r,
        bases=M.bases,
        u=u,
        w=w,
        d=d,
        girth=girth(M),
        cogirth=cogirth(M),
        connectivity=connectivity(M),
        loops=lo,
        coloops=co,
        sparse_paving=M.graph.is_stable(M.nonbases),
        t=t,
        in_N=t is not None and t <= 2 * (bounds.zeta(M.n) if M.n >= 1 else 0),
        minor_U12=has_uniform_minor(M, 1, 2),
        minor_U24=has_uniform_minor(M, 2, 4),
        minor_U36=has_uniform_minor(M, 3, 6),
    )


def _num(x) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, bool):
        return "1" if x else "0"
    return str(x)


RECORD_COLUMNS = (
    "n", "r", "bases", "u", "w", "d", "girth", "cogirth", "connectivity",
    "loops", "coloops", "sparse_paving", "t", "in_N", "minor_U12", "minor_U24",
    "minor_U36",
)


def record_row(rec: CensusRecord) -> list[str]:
    from .matroid import bits_to_hex

    row = []
    for col in RECORD_COLUMNS:
        val = getattr(rec, col)
        if col == "bases":
            row.append(bits_to_hex(val, comb(rec.n, rec.r)))
        elif val is None:
            row.append("")
        else:
            row.append(_num(val))
    return row


def stats_pipeline(n: int) -> dict:
    """Per-rank and aggregate statistics over the full census of [n].

    Asymptotic thresholds (w >= digamma(n), d <= upsilon(n) + 2/n) are
    reported as empirical fractions, never asserted.
    """
    per_rank = []
    records = []
    s_total = 0
    for r in range(n + 1):
        recs = [census_record(M) for M in enumerate_matroids(n, r)]
        records.extend(recs)
        s_nr = sum(1 for x in recs if x.sparse_paving)
        s_total += s_nr
        per_rank.append((r, recs, s_nr))

    s_log = math.log2(s_total) if s_total > 1 else None
    ups = None
    if n >= 2 and s_log:
        ups, _ = bounds.upsilon_small(n, s_log)
    dig = bounds.digamma_f(n) if n >= 1 else None

    def summary(recs):
        m = len(recs)
        ll = [x for x in recs if not x.loops and not x.coloops]
        out = {
            "matroids": m,
            "sparse_paving": sum(1 for x in recs if x.sparse_paving),
            "loopless_coloopless": len(ll),
            "u_zero": sum(1 for x in recs if x.u == 0),
            "mean_u": str(sum((x.u for x in recs), Fraction(0)) / m) if m else "0",
            "mean_d": str(sum((x.d for x in recs), Fraction(0)) / m) if m else "0",
            "in_N": sum(1 for x in recs if x.in_N),
            "t_max": max((x.t for x in ll), default=0),
            "minor_U12": sum(1 for x in recs if x.minor_U12),
            "minor_U24": sum(1 for x in recs if x.minor_U24),
            "minor_U36": sum(1 for x in recs if x.minor_U36),
            "girth_hist": _hist(x.girth for x in recs),
            "connectivity_hist": _hist(x.connectivity for x in recs),
        }
        if dig is not None:
            out["w_ge_digamma"] = sum(1 for x in recs if x.w >= dig)
        if ups is not None:
            out["d_le_upsilon_plus_2_over_n"] = sum(
                1 for x in recs if float(x.d) <= ups + 2 / n
            )
        return out

    report = {
        "n": n,
        "s_n": s_total,
        "upsilon": ups,
        "digamma": str(dig) if dig is not None else None,
        "ranks": [
            dict(r=r, s_nr=s_nr, **summary(recs)) for r, recs, s_nr in per_rank
        ],
        "total": summary(records),
    }
    return report


def _hist(values) -> dict[str, int]:
    out: dict[str, int] = defaultdict(int)
    for v in values:
        out[_num(v)] += 1
    return dict(sorted(out.items(), key=lambda kv: (kv[0] == "inf", len(kv[0]), kv[0])))


def census_records(n: int, r: int) -> list[CensusRecord]:
    return [census_record(M) for M in enumerate_matroids(n, r)]
