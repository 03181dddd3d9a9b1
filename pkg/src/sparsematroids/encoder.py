"""Compressed descriptions of matroids.

``encode`` turns a loopless, coloopless matroid into (S, Z, W, T):

* S, A come from container compression of the non-bases K;
* Z is a partial flat cover certifying the dependent neighbours of S, so
  that (S, Z) determines K - A;
* P collects the vertices of A whose dependence is forced by full pencils;
* inside A' = A - P, each component of G[K & A'] is regenerated from any one
  of its vertices by the C(X)/D(X) propagation rule.  W holds the singleton
  components and T one representative of each larger component.

Everything the decoder needs besides (S, Z, T | W) is recomputed from
(S, Z), which is what makes the description compact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .johnson import JohnsonGraph, iter_bits, johnson, popcount
from .kw import compress, retrace
from .matroid import (
    Matroid,
    has_coloops,
    has_loops,
    unique_circuit_in,
    validate_bases,
)


class UnsupportedMatroid(ValueError):
    """Raised for matroids with loops or coloops."""


class CorruptEncoding(ValueError):
    """Decoding produced a family that is not the set of bases of a matroid."""


class InvariantViolation(RuntimeError):
    """An internal guarantee of the encoding scheme failed."""


class FlatEntry(NamedTuple):
    flat: int  # element mask
    rank: int


def covers(F: FlatEntry, Y: int) -> bool:
    """(F, r(F)) covers Y when Y meets F in more than r(F) elements."""
    return popcount(Y & F.flat) > F.rank


def flat_cover(M: Matroid, X: int) -> list[FlatEntry]:
    """Partial flat cover Z(M, X) of a dependent set X."""
    rk = M.rank(X)
    size = popcount(X)
    if rk == size:
        raise ValueError("flat cover of an independent set")
    top = FlatEntry(M.closure(X), rk)
    if rk < size - 1:
        return [top]
    C = unique_circuit_in(M, X)
    low = FlatEntry(M.closure(C), M.rank(C))
    return [top] if low == top else [low, top]


@dataclass
class BasicEncoding:
    S: int
    Z: tuple[FlatEntry, ...]
    A: int


def encode_basic(M: Matroid) -> BasicEncoding:
    G = M.graph
    res = compress(M.nonbases, G)
    Z = set()
    for v in iter_bits(res.S):
        Z.update(flat_cover(M, G.masks[v]))
    return BasicEncoding(res.S, tuple(sorted(Z)), res.A)


def decode_K_minus_A(S: int, Z, A: int, G: JohnsonGraph) -> int:
    """S together with the neighbours of S outside A covered by some entry of Z."""
    out = S
    cand = G.neighborhood(S) & ~A & ~S
    for v in iter_bits(cand):
        Y = G.masks[v]
        if any(covers(F, Y) for F in Z):
            out |= 1 << v
    return out


def _pencil_ids(G: JohnsonGraph, X: int, e: int) -> list[int]:
    """Ids of X_e = {X - e + y : y outside X} (``e`` a bit position in X)."""
    base = X & ~(1 << e)
    return [G.index[base | (1 << y)] for y in iter_bits(G.ground & ~X)]


def _copencil_ids(G: JohnsonGraph, X: int, f: int) -> list[int]:
    """Ids of X^f = {X - x + f : x in X} (``f`` a bit position outside X)."""
    return [G.index[(X & ~(1 << x)) | (1 << f)] for x in iter_bits(X)]


def _forced(G: JohnsonGraph, v: int, known: int) -> bool:
    X = G.masks[v]
    for e in iter_bits(X):
        if all(known >> u & 1 for u in _pencil_ids(G, X, e)):
            return True
    for f in iter_bits(G.ground & ~X):
        if all(known >> u & 1 for u in _copencil_ids(G, X, f)):
            return True
    return False


def p_closure(A: int, KmA: int, G: JohnsonGraph) -> int:
    """Least P <= A closed under: a full pencil or copencil in P | KmA puts X in P."""
    P = 0
    pending = A
    while pending:
        v = (pending & -pending).bit_length() - 1
        pending &= ~(1 << v)
        if _forced(G, v, P | KmA):
            P |= 1 << v
            # only vertices of A next to v can become forced by its arrival
            pending |= G.neighbor_bits(v) & A & ~P
    return P


class Certificate(NamedTuple):
    e_star: int  # bit position in X
    f_star: int  # bit position outside X
    C: int  # element mask inside X
    D: int  # element mask outside X


def cd_certificates(X: int, Aprime: int, KmAprime: int, G: JohnsonGraph) -> Certificate:
    """e*, f* and the circuit/cocircuit candidates C(X), D(X) of a vertex of A'."""
    f_star = next(
        (f for f in iter_bits(G.ground & ~X)
         if not any(Aprime >> u & 1 for u in _copencil_ids(G, X, f))),
        None,
    )
    e_star = next(
        (e for e in iter_bits(X)
         if not any(Aprime >> u & 1 for u in _pencil_ids(G, X, e))),
        None,
    )
    if e_star is None or f_star is None:
        raise InvariantViolation(
            "no pencil avoiding A'; the max degree of G[A'] is too large"
        )
    C = 0
    for x in iter_bits(X):
        if not KmAprime >> G.index[(X & ~(1 << x)) | (1 << f_star)] & 1:
            C |= 1 << x
    D = 0
    base = X & ~(1 << e_star)
    for y in iter_bits(G.ground & ~X):
        if not KmAprime >> G.index[base | (1 << y)] & 1:
            D |= 1 << y
    return Certificate(e_star, f_star, C, D)


class _Propagation:
    """Decoder-side view of A' with lazily computed certificates."""

    def __init__(self, G: JohnsonGraph, Aprime: int, KmAprime: int):
        self.G = G
        self.Aprime = Aprime
        self.KmAprime = KmAprime
        self._certs: dict[int, Certificate] = {}

    def cert(self, v: int) -> Certificate:
        c = self._certs.get(v)
        if c is None:
            c = cd_certificates(self.G.masks[v], self.Aprime, self.KmAprime, self.G)
            self._certs[v] = c
        return c

    def q_closure(self, v: int) -> int:
        G = self.G
        if not self.Aprime >> v & 1:
            raise ValueError(f"vertex {v} is not in A'")
        Q = 1 << v
        stack = [v]
        while stack:
            w = stack.pop()
            Xw = G.masks[w]
            c = self.cert(w)
            for u in G.neighbors(w):
                if not self.Aprime >> u & 1 or Q >> u & 1:
                    continue
                diff = G.masks[u] ^ Xw
                e, f = diff & Xw, diff & ~Xw
                if not e & c.C or not f & c.D:
                    Q |= 1 << u
                    stack.append(u)
        return Q


def q_closure(X: int, Aprime: int, KmAprime: int, G: JohnsonGraph) -> int:
    """Q(X): everything in A' whose dependence follows from X being dependent."""
    return _Propagation(G, Aprime, KmAprime).q_closure(X)


@dataclass
class Encoding:
    n: int
    r: int
    S: int
    Z: tuple[FlatEntry, ...]
    W: int
    T: int
    t: int
    comp_sizes: tuple[int, ...] = field(default=())

    @property
    def transversal_count(self) -> int:
        out = 1
        for s in self.comp_sizes:
            out *= s
        return out


class _Trace(NamedTuple):
    """Full forward run, kept for verification."""

    encoding: Encoding
    A: int
    KmA: int
    P: int
    Aprime: int
    components: tuple[int, ...]


def _decoder_state(S: int, Z, G: JohnsonGraph):
    A = retrace(S, G)
    KmA = decode_K_minus_A(S, Z, A, G)
    P = p_closure(A, KmA, G)
    Aprime = A & ~P
    return A, KmA, P, Aprime, _Propagation(G, Aprime, KmA | P)


def encode_trace(M: Matroid) -> _Trace:
    if has_loops(M) or has_coloops(M):
        raise UnsupportedMatroid("encoding needs a matroid without loops or coloops")
    G = M.graph
    if G.d == 0:
        empty = Encoding(M.n, M.r, 0, (), 0, 0, 0, ())
        return _Trace(empty, 0, 0, 0, 0, ())
    K = M.nonbases
    basic = encode_basic(M)
    A = basic.A
    KmA = K & ~A
    P = p_closure(A, KmA, G)
    Aprime = A & ~P
    comps = G.components(K & Aprime)
    W = T = 0
    sizes = []
    for comp in comps:
        if comp & (comp - 1):
            T |= comp & -comp
            sizes.append(popcount(comp))
        else:
            W |= comp
    enc = Encoding(M.n, M.r, basic.S, basic.Z, W, T, len(sizes), tuple(sizes))
    return _Trace(enc, A, KmA, P, Aprime, tuple(comps))


def encode(M: Matroid) -> Encoding:
    return encode_trace(M).encoding


def decode_nonbases(S: int, Z, TW: int, G: JohnsonGraph) -> int:
    if G.d == 0:
        return S
    _, KmA, P, _, prop = _decoder_state(S, Z, G)
    K = KmA | P
    for v in iter_bits(TW):
        K |= prop.q_closure(v)
    return K


def _is_matroid_family(G: JohnsonGraph, K: int) -> bool:
    # V - K is a basis family iff V - C is for every component C of G[K];
    # singleton components always qualify.
    if K == G.full:
        return False
    for comp in G.components(K):
        if comp & (comp - 1) and not validate_bases(G.n, G.r, G.full & ~comp):
            return False
    return True


def decode_matroid(S: int, Z, TW: int, n: int, r: int) -> Matroid:
    """Rebuild M from (S, Z, T | W)."""
    G = johnson(n, r)
    K = decode_nonbases(S, Z, TW, G)
    if not _is_matroid_family(G, K):
        raise CorruptEncoding("decoded non-bases do not define a matroid")
    return Matroid(n, r, G.full & ~K, check=False)


def decode_U(S: int, Z, T: int, n: int, r: int) -> int:
    """Rebuild U(M) from (S, Z, T) alone."""
    G = johnson(n, r)
    if G.d == 0:
        return 0
    U = decode_nonbases(S, Z, T, G)
    isolated = 0
    for v in iter_bits(U):
        if not G.neighbor_bits(v) & U:
            isolated |= 1 << v
    return U & ~isolated


def decode(enc: Encoding) -> Matroid:
    return decode_matroid(enc.S, enc.Z, enc.T | enc.W, enc.n, enc.r)


def t_of(M: Matroid) -> int:
    return encode(M).t


def in_class_N(M: Matroid, zeta: float) -> bool:
    """Loopless, coloopless and t(M) <= 2 zeta."""
    if has_loops(M) or has_coloops(M):
        return False
    return t_of(M) <= 2 * zeta
