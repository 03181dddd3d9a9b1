"""Kleitman-Winston style container compression on regular graphs.

A graph context is any object exposing ``N`` (vertex count, ids 0..N-1 in
their fixed linear order), ``d`` (degree), ``lam`` (minus the smallest
adjacency eigenvalue) and ``neighbors(v)``.  :class:`JohnsonGraph` fits, as
does :class:`RegularGraph` below.

Given K, the compression picks a fingerprint S and a leftover region A with
S <= K <= S | N(S) | A, such that A can be recomputed from S alone.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .johnson import iter_bits, popcount

DROPPED = "dropped"
SELECTED = "selected"


class UnsupportedGraph(ValueError):
    """The compression lemmas need a regular graph of degree at least one."""


def sigma(d: int, lam: int) -> float:
    _check_constants(d, lam)
    return math.log(d + 1) / (d + lam)


def sigma_plus(d: int, lam: int) -> float:
    _check_constants(d, lam)
    return (math.log(d + 1) + 1) / (d + lam)


def alpha(d: int, lam: int) -> float:
    _check_constants(d, lam)
    return lam / (d + lam)


def _check_constants(d: int, lam: int) -> None:
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")


class RegularGraph:
    """A small explicit regular graph, for exercising the compression off J(n, r)."""

    def __init__(self, adjacency: list[list[int]], lam: int):
        degs = {len(a) for a in adjacency}
        if len(degs) != 1:
            raise UnsupportedGraph("graph is not regular")
        self.N = len(adjacency)
        self.d = degs.pop()
        self.lam = lam
        self._adj = [tuple(sorted(a)) for a in adjacency]
        for v, a in enumerate(self._adj):
            for u in a:
                if v not in self._adj[u]:
                    raise ValueError("adjacency is not symmetric")

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]


@dataclass
class CompressionResult:
    S: int
    A: int
    steps: list[tuple[int, str]] | None = field(default=None, compare=False)


class _Run:
    """Shared state of one pass: A, S and the degrees inside G[A]."""

    def __init__(self, G, K: int, S: int, A: int, record: bool):
        self.G = G
        self.K = K
        self.S = S
        self.A = A
        self.size = popcount(A)
        self.deg = [0] * G.N
        heap = []
        for v in iter_bits(A):
            dv = sum(1 for u in G.neighbors(v) if A >> u & 1)
            self.deg[v] = dv
            heap.append((-dv, v))
        heapq.heapify(heap)
        self.heap = heap
        self.steps = [] if record else None

    def _remove(self, v: int) -> None:
        self.A &= ~(1 << v)
        self.size -= 1
        for u in self.G.neighbors(v):
            if self.A >> u & 1:
                self.deg[u] -= 1
                heapq.heappush(self.heap, (-self.deg[u], u))

    def top(self) -> tuple[int, int]:
        """Canonical max-degree vertex of G[A] and its degree."""
        heap = self.heap
        while True:
            negd, v = heap[0]
            if self.A >> v & 1 and -negd == self.deg[v]:
                return v, -negd
            heapq.heappop(heap)

    def step(self) -> None:
        v, _ = self.top()
        if self.K >> v & 1:
            self.S |= 1 << v
            doomed = [u for u in self.G.neighbors(v) if self.A >> u & 1]
            self._remove(v)
            for u in doomed:
                self._remove(u)
            if self.steps is not None:
                self.steps.append((v, SELECTED))
        else:
            self._remove(v)
            if self.steps is not None:
                self.steps.append((v, DROPPED))

    def result(self, prior_steps=None) -> CompressionResult:
        steps = None
        if self.steps is not None:
            steps = list(prior_steps or []) + self.steps
        return CompressionResult(self.S, self.A, steps)


def _require_degree(G) -> None:
    if G.d < 1:
        raise UnsupportedGraph(f"compression needs degree >= 1, got {G.d}")


def compress_phase1(K: int, G, *, record: bool = False) -> CompressionResult:
    """Shrink A until |A| <= alpha |V|, selecting canonical max-degree vertices."""
    _require_degree(G)
    run = _Run(G, K, 0, (1 << G.N) - 1, record)
    lam, denom = G.lam, G.d + G.lam
    # |A| > alpha N  <=>  |A| (d + lam) > lam N, kept in integers
    while run.size * denom > lam * G.N:
        run.step()
    return run.result()


def compress_phase2(K: int, phase1: CompressionResult, G, *, record: bool = False) -> CompressionResult:
    """Continue the same rule until the max degree of G[A] drops below lambda."""
    _require_degree(G)
    run = _Run(G, K, phase1.S, phase1.A, record)
    while run.size and run.top()[1] >= G.lam:
        run.step()
    return run.result(phase1.steps if record else None)


def compress(K: int, G, *, record: bool = False) -> CompressionResult:
    """Both phases.  Degree-zero graphs keep S = K and A = empty."""
    if G.d == 0:
        return CompressionResult(K, 0, [] if record else None)
    first = compress_phase1(K, G, record=record)
    return compress_phase2(K, first, G, record=record)


def retrace(S: int, G) -> int:
    """Recover A from S by replaying both phases with S standing in for K."""
    return compress(S, G).A


def sandwich_holds(K: int, res: CompressionResult, G) -> bool:
    """S <= K <= S | N(S) | A."""
    NS = 0
    for v in iter_bits(res.S):
        for u in G.neighbors(v):
            NS |= 1 << u
    return res.S & ~K == 0 and K & ~(res.S | NS | res.A) == 0


def size_bound_S(G) -> int:
    """ceil(sigma_plus |V|)."""
    return math.ceil(sigma_plus(G.d, G.lam) * G.N)
