"""Matroids stored as basis bitsets over the vertices of J(n, r)."""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, NamedTuple

from .johnson import elements_of, iter_bits, johnson, mask_of, popcount

INF = math.inf


class ExchangeViolation(NamedTuple):
    """A triple (B1, B2, x) breaking the basis-exchange axiom.

    B1 and B2 are element masks, ``x`` is a 1-based element of B1 - B2 such
    that no y in B2 - B1 makes B1 - x + y a member of the family.
    """

    B1: int
    B2: int
    x: int


def find_exchange_violation(n: int, r: int, cand: int) -> ExchangeViolation | None:
    """First violating triple in (B1 id, x, B2 id) order, or None."""
    G = johnson(n, r)
    ids = list(iter_bits(cand))
    masks = [G.masks[i] for i in ids]
    outside = G.ground
    for B1 in masks:
        for xb in iter_bits(B1):
            base = B1 & ~(1 << xb)
            # elements y outside B1 for which B1 - x + y stays in the family
            ok_y = 0
            for yb in iter_bits(outside & ~B1):
                if cand >> G.index[base | (1 << yb)] & 1:
                    ok_y |= 1 << yb
            for B2 in masks:
                if not (B2 >> xb) & 1 and not (B2 & ok_y):
                    return ExchangeViolation(B1, B2, xb + 1)
    return None


def validate_bases(n: int, r: int, cand: int) -> bool:
    """True iff ``cand`` (a vertex bitset of J(n, r)) is a basis family."""
    if not cand:
        return False
    return find_exchange_violation(n, r, cand) is None


class Matroid:
    """A matroid on [n] of rank r given by its bases.

    ``bases`` is a bitset over the colex ids of J(n, r).  Instances are
    treated as immutable; the only mutable state is the rank memo.
    """

    __slots__ = ("n", "r", "bases", "_basis_masks", "_rank_memo")

    def __init__(self, n: int, r: int, bases: int, *, check: bool = True):
        if not 0 <= r <= n:
            raise ValueError(f"need 0 <= r <= n, got n={n}, r={r}")
        G = johnson(n, r)
        if bases < 0 or bases >> G.N:
            raise ValueError("basis bitset does not fit J(n, r)")
        if check:
            if not bases:
                raise ValueError("a matroid needs at least one basis")
            bad = find_exchange_violation(n, r, bases)
            if bad is not None:
                raise ValueError(
                    "basis exchange fails for B1=%s B2=%s x=%d"
                    % (elements_of(bad.B1), elements_of(bad.B2), bad.x)
                )
        self.n = n
        self.r = r
        self.bases = bases
        self._basis_masks = tuple(G.masks[i] for i in iter_bits(bases))
        self._rank_memo: dict[int, int] = {}

    @classmethod
    def from_bases(cls, n: int, r: int, bases: Iterable[Iterable[int]]) -> Matroid:
        """Build from an iterable of bases, each a collection of 1-based elements."""
        G = johnson(n, r)
        return cls(n, r, G.vertex_set(mask_of(B) for B in bases))

    @classmethod
    def from_nonbases(cls, n: int, r: int, K: int, *, check: bool = True) -> Matroid:
        return cls(n, r, johnson(n, r).full & ~K, check=check)

    @property
    def graph(self):
        return johnson(self.n, self.r)

    @property
    def basis_masks(self) -> tuple[int, ...]:
        return self._basis_masks

    @property
    def nonbases(self) -> int:
        return self.graph.full & ~self.bases

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matroid):
            return NotImplemented
        return (self.n, self.r, self.bases) == (other.n, other.r, other.bases)

    def __hash__(self) -> int:
        return hash((self.n, self.r, self.bases))

    def __repr__(self) -> str:
        return f"Matroid(n={self.n}, r={self.r}, bases={len(self._basis_masks)})"

    def is_basis(self, X: int) -> bool:
        G = self.graph
        i = G.index.get(X)
        return i is not None and bool(self.bases >> i & 1)

    def rank(self, A: int) -> int:
        """r_M(A) = max |A & B| over the bases B."""
        memo = self._rank_memo
        val = memo.get(A)
        if val is None:
            val = max(popcount(A & B) for B in self._basis_masks)
            memo[A] = val
        return val

    def closure(self, A: int) -> int:
        rk = self.rank(A)
        cl = A
        for e in range(self.n):
            bit = 1 << e
            if not A & bit and self.rank(A | bit) == rk:
                cl |= bit
        return cl

    def is_independent(self, A: int) -> bool:
        return self.rank(A) == popcount(A)


def uniform(r: int, n: int) -> Matroid:
    """U_{r,n}."""
    G = johnson(n, r)
    return Matroid(n, r, G.full, check=False)


def graphic(num_vertices: int, edges: list[tuple[int, int]]) -> Matroid:
    """Cycle matroid of a graph; element i is ``edges[i - 1]``."""
    n = len(edges)

    def forest_rank(sel: int) -> int:
        parent = list(range(num_vertices + 1))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        rk = 0
        for b in iter_bits(sel):
            u, v = edges[b]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rk += 1
        return rk

    r = forest_rank((1 << n) - 1)
    G = johnson(n, r)
    bases = 0
    for i, X in enumerate(G.masks):
        if forest_rank(X) == r:
            bases |= 1 << i
    return Matroid(n, r, bases, check=False)


def rank_of(M: Matroid, A: int) -> int:
    return M.rank(A)


def closure_of(M: Matroid, A: int) -> int:
    return M.closure(A)


def unique_circuit_in(M: Matroid, X: int) -> int:
    """The unique circuit inside a set of nullity one.

    The contract is stated for r-sets of rank r - 1, but any X with
    r_M(X) = |X| - 1 has a unique circuit: the x with r(X - x) = r(X).
    """
    rk = M.rank(X)
    if rk != popcount(X) - 1:
        raise ValueError(f"{elements_of(X)} has rank {rk}, not |X| - 1")
    return sum(1 << b for b in iter_bits(X) if M.rank(X & ~(1 << b)) == rk)


def girth(M: Matroid) -> float:
    """Size of a smallest circuit, or inf when every set is independent."""
    ground = range(M.n)
    for k in range(1, M.r + 2):
        if k > M.n:
            break
        for combo in combinations(ground, k):
            A = sum(1 << b for b in combo)
            if M.rank(A) < k:
                return k
    return INF


def circuits(M: Matroid) -> list[int]:
    """All circuits as element masks, by size then colex.  Exponential in n."""
    out = []
    for k in range(1, min(M.r + 1, M.n) + 1):
        for combo in combinations(range(M.n), k):
            X = sum(1 << b for b in combo)
            if M.rank(X) == k - 1 and not any(C & X == C for C in out):
                out.append(X)
    return out


def dual(M: Matroid) -> Matroid:
    G = johnson(M.n, M.n - M.r)
    bases = 0
    for B in M.basis_masks:
        bases |= 1 << G.index[M.graph.ground & ~B]
    return Matroid(M.n, M.n - M.r, bases, check=False)


def cogirth(M: Matroid) -> float:
    return girth(dual(M))


def _squeeze(mask: int, keep: int) -> int:
    """Order-preserving relabel of ``mask`` onto the positions kept in ``keep``."""
    out = 0
    j = 0
    for b in iter_bits(keep):
        if mask >> b & 1:
            out |= 1 << j
        j += 1
    return out


def _check_subset(M: Matroid, A: int, what: str) -> None:
    if A < 0 or A >> M.n:
        raise ValueError(f"{what} set {A:#x} is not a subset of [{M.n}]")


def delete(M: Matroid, D: int) -> Matroid:
    """M \\ D, relabelled order-preservingly onto [n - |D|]."""
    _check_subset(M, D, "deletion")
    keep = M.graph.ground & ~D
    if not keep:
        raise ValueError("cannot delete the whole ground set")
    rk = M.rank(keep)
    G = johnson(popcount(keep), rk)
    bases = 0
    for B in M.basis_masks:
        if popcount(B & keep) == rk:
            bases |= 1 << G.index[_squeeze(B, keep)]
    return Matroid(G.n, rk, bases, check=False)


def maximal_independent_in(M: Matroid, C: int) -> int:
    """Colex-first maximal independent subset of C."""
    rk = M.rank(C)
    elems = list(iter_bits(C))
    for combo in sorted(
        (sum(1 << b for b in c) for c in combinations(elems, rk))
    ):
        if M.rank(combo) == rk:
            return combo
    raise AssertionError("unreachable: C has an independent subset of size r(C)")


def contract(M: Matroid, C: int) -> Matroid:
    """M / C: bases are the B' in E - C with B' + I_C a basis of M."""
    _check_subset(M, C, "contraction")
    keep = M.graph.ground & ~C
    if not keep:
        raise ValueError("cannot contract the whole ground set")
    I_C = maximal_independent_in(M, C)
    rk = M.r - popcount(I_C)
    G = johnson(popcount(keep), rk)
    bases = 0
    for B in M.basis_masks:
        if B & C == I_C:
            bases |= 1 << G.index[_squeeze(B, keep)]
    return Matroid(G.n, rk, bases, check=False)


def truncate(M: Matroid) -> Matroid:
    """T(M): the independent sets of M of size at most r - 1."""
    if M.r < 1:
        raise ValueError("truncation needs rank >= 1")
    G = johnson(M.n, M.r - 1)
    bases = 0
    for B in M.basis_masks:
        for b in iter_bits(B):
            bases |= 1 << G.index[B & ~(1 << b)]
    return Matroid(M.n, M.r - 1, bases, check=False)


class NonbasisPartition(NamedTuple):
    W: int  # circuit-hyperplanes: isolated vertices of G[K]
    U: int  # the other non-bases


def nonbasis_partition(M: Matroid) -> NonbasisPartition:
    W = U = 0
    for comp in M.graph.components(M.nonbases):
        if comp & (comp - 1):
            U |= comp
        else:
            W |= comp
    return NonbasisPartition(W, U)


def is_sparse_paving(M: Matroid) -> bool:
    return M.graph.is_stable(M.nonbases)


def relax(M: Matroid, X: int) -> Matroid:
    """Turn the circuit-hyperplane with vertex id ``X`` into a basis."""
    if not nonbasis_partition(M).W >> X & 1:
        raise ValueError(f"vertex {X} is not a circuit-hyperplane")
    return Matroid(M.n, M.r, M.bases | (1 << X), check=False)


def has_uniform_minor(M: Matroid, a: int, b: int) -> bool:
    """Whether some M / C \\ D equals U_{a,b}.

    Scans disjoint C, D with |C| = r - a and |D| = (n - r) - (b - a); the minor
    is U_{a,b} exactly when every X with C <= X, X & D = 0 is a basis.
    """
    if not 0 <= a <= b:
        raise ValueError("need 0 <= a <= b")
    n, r = M.n, M.r
    if a > r or b - a > n - r:
        return False
    need = comb(b, a)
    ground = range(n)
    bases = M.basis_masks
    for cc in combinations(ground, r - a):
        C = sum(1 << e for e in cc)
        rest = [e for e in ground if not C >> e & 1]
        for dd in combinations(rest, (n - r) - (b - a)):
            D = sum(1 << e for e in dd)
            hits = sum(1 for B in bases if B & C == C and not B & D)
            if hits == need:
                return True
    return False


def connectivity(M: Matroid) -> float:
    """Tutte connectivity: least k with a k-separation, inf if there is none."""
    n = M.n
    full = (1 << n) - 1
    best = INF
    # A always holds element 1, so each bipartition is seen once
    for rest in range(1 << (n - 1)):
        A = 1 | (rest << 1)
        B = full & ~A
        if not B:
            continue
        k = M.rank(A) + M.rank(B) - M.r + 1
        if k <= min(popcount(A), popcount(B)) and k < best:
            best = k
    return best


def separation_tail_count(M: Matroid, A: int) -> tuple[int, int, int]:
    """(q, Ua, Ub) for the bipartition {A, E - A}.

    Ua holds the r-sets meeting A in more than r_M(A) elements, likewise Ub;
    q counts the r-sets in neither, so q + |Ua | Ub| = C(n, r).
    """
    _check_subset(M, A, "separation")
    full = M.graph.ground
    B = full & ~A
    if not A or not B:
        raise ValueError("separation needs a nontrivial bipartition")
    rA, rB = M.rank(A), M.rank(B)
    a, b = popcount(A), popcount(B)
    q = sum(
        comb(a, s) * comb(b, M.r - s)
        for s in range(0, M.r + 1)
        if s <= rA and M.r - s <= rB
    )
    Ua = Ub = 0
    for i, X in enumerate(M.graph.masks):
        if popcount(X & A) > rA:
            Ua |= 1 << i
        if popcount(X & B) > rB:
            Ub |= 1 << i
    return q, Ua, Ub


def fractions(M: Matroid) -> tuple[Fraction, Fraction, Fraction]:
    """(u, w, d): the shares of U(M), W(M) and all non-bases among the r-sets."""
    W, U = nonbasis_partition(M)
    N = M.graph.N
    return Fraction(popcount(U), N), Fraction(popcount(W), N), Fraction(popcount(U | W), N)


def loops(M: Matroid) -> int:
    covered = 0
    for B in M.basis_masks:
        covered |= B
    return M.graph.ground & ~covered


def coloops(M: Matroid) -> int:
    common = M.graph.ground
    for B in M.basis_masks:
        common &= B
    return common


def has_loops(M: Matroid) -> bool:
    return bool(loops(M))


def has_coloops(M: Matroid) -> bool:
    return bool(coloops(M))


# -- text records ---------------------------------------------------------

def bits_to_hex(bits: int, length: int) -> str:
    """Pack a bitset LSB-first into bytes, bytes in increasing order, as hex."""
    return bits.to_bytes((length + 7) // 8, "little").hex()


def hex_to_bits(text: str, length: int) -> int:
    raw = bytes.fromhex(text)
    if len(raw) != (length + 7) // 8:
        raise ValueError(f"expected {(length + 7) // 8} bytes, got {len(raw)}")
    bits = int.from_bytes(raw, "little")
    if bits >> length:
        raise ValueError("padding bits beyond C(n, r) are set")
    return bits


def to_record(M: Matroid) -> str:
    """``n=<int> r=<int> bases=<hex>`` with LSB-first byte packing."""
    return f"n={M.n} r={M.r} bases={bits_to_hex(M.bases, M.graph.N)}"
