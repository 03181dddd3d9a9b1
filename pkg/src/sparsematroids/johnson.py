"""Implicit Johnson graphs J(n, r).

Vertices are r-subsets of [n], stored as n-bit element masks (bit ``e - 1``
set iff element ``e`` is in the set).  Vertex ids are colex ranks, and sorting
masks numerically gives exactly the colex order, so id order, mask order and
colex order all coincide.

Vertex sets are Python ints used as bitsets over vertex ids.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def popcount(x: int) -> int:
    return x.bit_count()


def mask_of(elements: Iterable[int]) -> int:
    """Element mask of a collection of 1-based elements."""
    m = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    """Sorted 1-based elements of an element mask."""
    return tuple(b + 1 for b in iter_bits(mask))


def colex_rank(X: int, n: int, r: int) -> int:
    """Colex rank of the r-subset with element mask ``X``.

    The rank of {x_1 < ... < x_r} is sum_i C(x_i - 1, i).
    """
    if X < 0 or X >> n:
        raise ValueError(f"mask {X:#x} is not a subset of [{n}]")
    if popcount(X) != r:
        raise ValueError(f"mask {X:#x} has {popcount(X)} elements, expected {r}")
    return sum(comb(b, i) for i, b in enumerate(iter_bits(X), start=1))


def colex_unrank(i: int, n: int, r: int) -> int:
    """Element mask of the r-subset of [n] with colex rank ``i``."""
    if not 0 <= i < comb(n, r):
        raise ValueError(f"index {i} out of range for C({n},{r})")
    mask = 0
    b = n - 1
    for k in range(r, 0, -1):
        while comb(b, k) > i:
            b -= 1
        i -= comb(b, k)
        mask |= 1 << b
        b -= 1
    return mask


def neighbors(X: int, n: int) -> list[int]:
    """All sets X - e + f with e in X and f outside X, as element masks."""
    full = (1 << n) - 1
    out = []
    for e in iter_bits(X):
        base = X & ~(1 << e)
        for f in iter_bits(full & ~X):
            out.append(base | (1 << f))
    return sorted(out)


def graph_constants(n: int, r: int) -> tuple[int, int]:
    """Degree ``r(n-r)`` and minus the smallest eigenvalue, ``min(r, n-r)``."""
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got n={n}, r={r}")
    return r * (n - r), min(r, n - r)


def _rsets(n: int, r: int) -> list[int]:
    # Gosper's hack walks the r-subsets in increasing mask (= colex) order.
    if r == 0:
        return [0]
    out = []
    x = (1 << r) - 1
    limit = 1 << n
    while x < limit:
        out.append(x)
        c = x & -x
        y = x + c
        x = (((y ^ x) >> 2) // c) | y
    return out


class JohnsonGraph:
    """The Johnson graph J(n, r) with colex-ordered vertex ids.

    Adjacency is derived from masks on demand and memoised per vertex; no
    global edge list is ever built.
    """

    def __init__(self, n: int, r: int):
        if not 0 <= r <= n:
            raise ValueError(f"need 0 <= r <= n, got n={n}, r={r}")
        self.n = n
        self.r = r
        self.masks = _rsets(n, r)
        self.N = len(self.masks)
        self.index = {m: i for i, m in enumerate(self.masks)}
        self.d, self.lam = graph_constants(n, r)
        self.full = (1 << self.N) - 1
        self.ground = (1 << n) - 1
        self._nbrs: list[tuple[int, ...] | None] = [None] * self.N
        self._nbr_bits: list[int | None] = [None] * self.N

    def __repr__(self) -> str:
        return f"JohnsonGraph(n={self.n}, r={self.r})"

    def id_of(self, X: int) -> int:
        try:
            return self.index[X]
        except KeyError:
            raise ValueError(f"{X:#x} is not an {self.r}-subset of [{self.n}]") from None

    def vertex_set(self, sets: Iterable[int]) -> int:
        """Bitset of the vertices with the given element masks."""
        bits = 0
        for X in sets:
            bits |= 1 << self.id_of(X)
        return bits

    def members(self, U: int) -> list[int]:
        """Element masks of the vertices in the bitset ``U``."""
        return [self.masks[v] for v in iter_bits(U)]

    def neighbors(self, v: int) -> tuple[int, ...]:
        nb = self._nbrs[v]
        if nb is None:
            X = self.masks[v]
            nb = tuple(sorted(self.index[Y] for Y in neighbors(X, self.n)))
            self._nbrs[v] = nb
        return nb

    def neighbor_bits(self, v: int) -> int:
        nb = self._nbr_bits[v]
        if nb is None:
            nb = 0
            for u in self.neighbors(v):
                nb |= 1 << u
            self._nbr_bits[v] = nb
        return nb

    def adjacent(self, u: int, v: int) -> bool:
        return popcount(self.masks[u] & self.masks[v]) == self.r - 1

    def neighborhood(self, U: int) -> int:
        """N(U): all vertices adjacent to some member of U."""
        out = 0
        for v in iter_bits(U):
            out |= self.neighbor_bits(v)
        return out

    def degree_in(self, v: int, A: int) -> int:
        return popcount(self.neighbor_bits(v) & A)

    def max_degree(self, A: int) -> int:
        """Maximum degree of the induced subgraph G[A] (0 when A is empty)."""
        return max((self.degree_in(v, A) for v in iter_bits(A)), default=0)

    def components(self, U: int) -> list[int]:
        """Connected components of G[U], ordered by their smallest vertex id."""
        out = []
        rest = U
        while rest:
            start = (rest & -rest).bit_length() - 1
            comp = 1 << start
            queue = deque([start])
            while queue:
                v = queue.popleft()
                new = self.neighbor_bits(v) & rest & ~comp
                comp |= new
                queue.extend(iter_bits(new))
            out.append(comp)
            rest &= ~comp
        return out

    def is_stable(self, U: int) -> bool:
        return all(not (self.neighbor_bits(v) & U) for v in iter_bits(U))

    def canonical_max_degree_vertex(self, A: int) -> int:
        """Vertex of maximum degree in G[A]; ties go to the smallest id."""
        if not A:
            raise ValueError("canonical max-degree vertex of an empty set")
        best, best_deg = -1, -1
        for v in iter_bits(A):
            dg = self.degree_in(v, A)
            if dg > best_deg:
                best, best_deg = v, dg
        return best

    def crossing_edges(self, U: int, U2: int) -> int:
        """Number of edges with one end in U and the other in U2."""
        if U & U2:
            raise ValueError("crossing_edges needs disjoint vertex sets")
        return sum(self.degree_in(v, U2) for v in iter_bits(U))


@lru_cache(maxsize=None)
def johnson(n: int, r: int) -> JohnsonGraph:
    """Shared, memoised J(n, r) instance."""
    return JohnsonGraph(n, r)
