"""Verification suites over the small-n census.

Each suite is split into independent work units; units run inline or in a
process pool and their outputs are merged in unit order, so the report text
does not depend on the number of workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import bounds, census
from .encoder import decode_K_minus_A, decode_matroid, decode_U, encode_trace
from .johnson import iter_bits, johnson, popcount
from .kw import retrace, size_bound_S
from .matroid import (
    Matroid,
    circuits,
    dual,
    cogirth,
    girth,
    has_coloops,
    has_loops,
    has_uniform_minor,
    nonbasis_partition,
    relax,
    separation_tail_count,
    to_record,
    truncate,
    validate_bases,
    fractions,
)

SUITES = ("stable", "bounds", "roundtrip", "lemmas", "entropy", "grouping")
ENTROPY_GRAPHS = ((4, 2), (5, 2), (6, 3))
SAMPLE_SHAPE = (10, 5)
SAMPLE_CHUNK = 100
GS_MAX_N = 14


@dataclass
class UnitResult:
    count: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def fail(self, invariant: str, detail: str) -> None:
        self.failures.append(f"FAIL {invariant}: {detail}")


@dataclass
class SuiteReport:
    name: str
    count: int
    noun: str
    failures: list[str]
    notes: list[str]

    def lines(self) -> list[str]:
        out = [f"  {x}" for x in self.notes]
        out += [f"  {x}" for x in self.failures]
        out.append(f"{self.name}: {self.count} {self.noun}, {len(self.failures)} failures")
        return out


NOUNS = {
    "stable": "graphs",
    "bounds": "checks",
    "roundtrip": "matroids",
    "lemmas": "matroids",
    "entropy": "checks",
    "grouping": "groups",
}


# -- unit planning ------------------------------------------------------------

def plan(suite: str, max_n: int, seed: int, samples: int) -> list[tuple]:
    if suite == "stable":
        units = [("stable", "count", (n, r))
                 for n in range(2, census.STABLE_COUNT_CAP + 1)
                 for r in range(1, n) if comb(n, r) <= census.STABLE_COUNT_CAP]
        units.append(("stable", "gs", (GS_MAX_N,)))
        return units
    if suite == "bounds":
        return [("bounds", "sigma", (1000,)), ("bounds", "binom", (64,)),
                ("bounds", "container", (census.MATROID_SCAN_CAP - 1,)),
                ("bounds", "z", (400,))]
    if suite == "roundtrip":
        units = [("roundtrip", "census", (n, r))
                 for n in range(1, max_n + 1) for r in range(n + 1)]
        n, r = SAMPLE_SHAPE
        for start in range(0, samples, SAMPLE_CHUNK):
            k = min(SAMPLE_CHUNK, samples - start)
            units.append(("roundtrip", "samples", (n, r, seed, start, k)))
        return units
    if suite == "lemmas":
        return [("lemmas", "census", (n, r))
                for n in range(1, max_n + 1) for r in range(n + 1)]
    if suite == "entropy":
        return [("entropy", "graph", (n, r, seed))
                for n, r in ENTROPY_GRAPHS if n <= max_n]
    if suite == "grouping":
        return [("grouping", "census", (n, r))
                for n in range(2, max_n + 1) for r in range(1, n)]
    raise ValueError(f"unknown suite {suite!r}")


def run_unit(unit: tuple) -> UnitResult:
    suite, kind, args = unit
    return _HANDLERS[(suite, kind)](*args)


# -- stable -------------------------------------------------------------------

def _stable_count(n: int, r: int) -> UnitResult:
    res = UnitResult(count=1)
    N = comb(n, r)
    s = census.count_stable_sets(n, r)
    if N <= census.STABLE_SCAN_CAP:
        scan = census.count_stable_sets_scan(n, r)
        if scan != s:
            res.fail("census.count_agreement", f"n={n} r={r} scan={scan} bnb={s}")
    # s >= 2^(N/n)  <=>  s^n >= 2^N
    if s**n < 2**N:
        res.fail("census.knuth_lower_bound", f"n={n} r={r} s={s}")
    res.notes.append(f"s({n},{r}) = {s}")
    return res


def _gs(max_n: int) -> UnitResult:
    res = UnitResult()
    for n in range(2, max_n + 1):
        for r in range(1, n):
            G = johnson(n, r)
            sizes = []
            for c in range(n):
                cls = census.gs_class(n, r, c)
                res.count += 1
                if not G.is_stable(cls):
                    res.fail("census.gs_class_stable", f"n={n} r={r} c={c}")
                sizes.append(popcount(cls))
            if max(sizes) * n < G.N or max(sizes) < -(-G.N // n):
                res.fail("census.gs_class_size", f"n={n} r={r} max={max(sizes)}")
    res.notes.append(f"gs classes checked for 0 < r < n <= {max_n}: {res.count}")
    res.count = 0
    return res


# -- bounds -------------------------------------------------------------------

def _sigma(n_max: int) -> UnitResult:
    res = UnitResult(count=1)
    bad = [n for n in range(2, n_max + 1) if not bounds.lemma_sigma_check(n)]
    if bad:
        res.fail("bounds.lemma_sigma_check", f"n={bad[:10]}")
    res.notes.append(f"sigma/alpha inequalities for 2 <= n <= {n_max}")
    return res


def _binom(n_max: int) -> UnitResult:
    res = UnitResult(count=1)
    if not bounds.binom_inequality_checks(n_max):
        res.fail("bounds.binom_inequality_checks", f"n_max={n_max}")
    bad = bounds.central_lower_failures(8)
    res.notes.append(f"binomial inequalities for n <= {n_max}; "
                     f"lower central bound with 1/(8n) fails at n={bad}")
    return res


def _container(cap: int) -> UnitResult:
    res = UnitResult()
    for n in range(2, 30):
        for r in range(1, n):
            if comb(n, r) > cap:
                continue
            profile = census.stable_size_profile(n, r)
            total = sum(profile)
            res.count += 1
            if not bounds.container_bound_holds(n, r, total):
                res.fail("bounds.container_upper", f"n={n} r={r} i={total}")
            running = 0
            for m, c in enumerate(profile):
                running += c
                res.count += 1
                if not bounds.container_bound_holds(n, r, running, m=m):
                    res.fail("bounds.container_upper_m", f"n={n} r={r} m={m}")
            for m in range(len(profile), comb(n, r) + 1):
                res.count += 1
                if not bounds.container_bound_holds(n, r, total, m=m):
                    res.fail("bounds.container_upper_m", f"n={n} r={r} m={m}")
    res.notes.append(f"container bounds for C(n,r) <= {cap}")
    return res


def _z(n_max: int) -> UnitResult:
    res = UnitResult()
    res.notes.append(f"z_log_upper <= zeta from n = {bounds.z_threshold(n_max)} "
                     f"through {n_max} (reported only)")
    return res


# -- roundtrip ----------------------------------------------------------------

class _Maxima:
    def __init__(self):
        self.S = self.Z = self.t = 0
        self.S_ratio = Fraction(0)

    def note(self, label: str, count: int) -> str:
        return (f"{label}: {count} matroids, max |S| {self.S}, "
                f"max |S|/bound {self.S_ratio}, max |Z| {self.Z}, max t {self.t}")


def _check_encoding(M: Matroid, res: UnitResult, mx: _Maxima) -> None:
    rec = to_record(M)
    G = M.graph
    try:
        tr = encode_trace(M)
    except Exception as exc:  # noqa: BLE001
        res.fail("encoder.encode", f"{rec} {type(exc).__name__}: {exc}")
        return
    enc = tr.encoding
    K = M.nonbases
    part = nonbasis_partition(M)
    try:
        back = decode_matroid(enc.S, enc.Z, enc.T | enc.W, M.n, M.r)
        if back != M:
            res.fail("encoder.round_trip", rec)
        if decode_U(enc.S, enc.Z, enc.T, M.n, M.r) != part.U:
            res.fail("encoder.decode_U", rec)
    except Exception as exc:  # noqa: BLE001
        res.fail("encoder.decode", f"{rec} {type(exc).__name__}: {exc}")
        return
    s = popcount(enc.S)
    mx.S = max(mx.S, s)
    mx.Z = max(mx.Z, len(enc.Z))
    mx.t = max(mx.t, enc.t)
    if G.d == 0:
        return
    bound = size_bound_S(G)
    mx.S_ratio = max(mx.S_ratio, Fraction(s, bound))
    if s > bound:
        res.fail("kw.size_bound_S", rec)
    if len(enc.Z) > 2 * s:
        res.fail("encoder.Z_size", rec)
    if tr.A and G.max_degree(tr.A) >= G.lam:
        res.fail("kw.max_degree_A", rec)
    if retrace(enc.S, G) != tr.A:
        res.fail("kw.retrace", rec)
    if decode_K_minus_A(enc.S, enc.Z, tr.A, G) != K & ~tr.A:
        res.fail("encoder.decode_K_minus_A", rec)
    if tr.P & ~K:
        res.fail("encoder.P_sound", rec)
    if enc.W & ~part.W:
        res.fail("encoder.W_subset", rec)
    if enc.T & enc.W or not G.is_stable(enc.T | enc.W):
        res.fail("encoder.TW_stable", rec)
    if (len(enc.comp_sizes) != enc.t or popcount(enc.T) != enc.t
            or any(x < 2 for x in enc.comp_sizes)
            or enc.transversal_count < 2**enc.t):
        res.fail("encoder.transversal_count", rec)
    if G.is_stable(K) and enc.t != 0:
        res.fail("encoder.sparse_paving_t", rec)
    if enc.t:
        # the largest id of each big component is another valid transversal
        alt = 0
        for comp in tr.components:
            if comp & (comp - 1):
                alt |= 1 << (comp.bit_length() - 1)
        if decode_matroid(enc.S, enc.Z, alt | enc.W, M.n, M.r) != M:
            res.fail("encoder.transversal_freedom", rec)


def _roundtrip_census(n: int, r: int) -> UnitResult:
    res = UnitResult()
    mx = _Maxima()
    for M in census.enumerate_matroids(n, r):
        if has_loops(M) or has_coloops(M):
            continue
        res.count += 1
        _check_encoding(M, res, mx)
    if res.count:
        res.notes.append(mx.note(f"n={n} r={r}", res.count))
    return res


def _roundtrip_samples(n: int, r: int, seed: int, start: int, k: int) -> UnitResult:
    res = UnitResult()
    mx = _Maxima()
    dmax = Fraction(0)
    for i in range(start, start + k):
        M = census.sample_sparse_paving(n, r, seed=seed * 1_000_003 + i)
        if not validate_bases(n, r, M.bases):
            res.fail("census.sample_valid", f"seed index {i}")
            continue
        res.count += 1
        _check_encoding(M, res, mx)
        dmax = max(dmax, fractions(M)[2])
    res.notes.append(mx.note(f"samples {n},{r} [{start},{start + k})", res.count)
                     + f", max d {float(dmax):.6f} vs 2/n {2 / n}")
    return res


# -- lemmas -------------------------------------------------------------------

def _lemmas(n: int, r: int) -> UnitResult:
    res = UnitResult()
    G = johnson(n, r)
    for M in census.enumerate_matroids(n, r):
        res.count += 1
        rec = to_record(M)
        K = M.nonbases
        part = nonbasis_partition(M)
        u, w, d = fractions(M)
        # girth lemma for every circuit size k < r
        for k in sorted({popcount(C) for C in circuits(M)}):
            if k < r and u < Fraction(r - k, n) ** k:
                res.fail("matroid.girth_lemma", f"{rec} k={k}")
        for a, b in ((1, 2), (2, 4)):
            if a <= r and b - a <= n - r and not has_uniform_minor(M, a, b):
                if d < Fraction(1, comb(b, a)):
                    res.fail("matroid.uniform_minor_lemma", f"{rec} a={a} b={b}")
        for v in iter_bits(K):
            X = G.masks[v]
            isolated = not G.neighbor_bits(v) & K
            ch = (M.rank(X) == r - 1 and M.closure(X) == X
                  and all(M.rank(X & ~(1 << e)) == r - 1 for e in iter_bits(X)))
            if isolated != ch:
                res.fail("matroid.circuit_hyperplane", f"{rec} X={v}")
            if isolated != bool(part.W >> v & 1):
                res.fail("matroid.nonbasis_partition", f"{rec} X={v}")
        if (u == 0) != G.is_stable(K):
            res.fail("census.u_zero_sparse_paving", rec)
        if r >= 1:
            T0 = truncate(M)
            for v in iter_bits(part.W):
                R = relax(M, v)
                if not validate_bases(n, r, R.bases):
                    res.fail("matroid.relax_valid", f"{rec} X={v}")
                if truncate(R) != T0:
                    res.fail("matroid.truncation_invariance", f"{rec} X={v}")
        D = dual(M)
        if dual(D) != M:
            res.fail("matroid.dual_involution", rec)
        GD = D.graph
        wd = nonbasis_partition(D).W
        comp = 0
        for v in iter_bits(part.W):
            comp |= 1 << GD.index[G.ground & ~G.masks[v]]
        if wd != comp:
            res.fail("matroid.dual_circuit_hyperplanes", rec)
        if girth(D) != cogirth(M):
            res.fail("matroid.cogirth", rec)
        if n >= 2:
            for rest in range(1 << (n - 1)):
                A = 1 | (rest << 1)
                if A == G.ground:
                    continue
                q, Ua, Ub = separation_tail_count(M, A)
                if q + popcount(Ua | Ub) != G.N:
                    res.fail("matroid.separation_q_identity", f"{rec} A={A:x}")
                if (Ua | Ub) & ~K:
                    res.fail("matroid.separation_in_K", f"{rec} A={A:x}")
                for Ux in (Ua, Ub):
                    if Ux and len(G.components(Ux)) != 1:
                        res.fail("matroid.separation_connected", f"{rec} A={A:x}")
    return res


# -- entropy ------------------------------------------------------------------

def _entropy(n: int, r: int, seed: int, trials: int = 100) -> UnitResult:
    res = UnitResult()
    G = johnson(n, r)
    rng = np.random.default_rng([seed, n, r])
    worst = None
    for _ in range(trials):
        U = 0
        while not U:
            U = sum(1 << i for i in np.flatnonzero(rng.random(G.N) < rng.random()).tolist())
        lhs, rhs, ok = census.verify_shearer(n, r, U)
        res.count += 1
        if not ok:
            res.fail("census.shearer", f"n={n} r={r} U={U:x}")
        gap = rhs - lhs
        worst = gap if worst is None else min(worst, gap)
    for _ in range(trials):
        U = sum(1 << i for i in np.flatnonzero(rng.random(G.N) < rng.random() / 2).tolist())
        free = G.full & ~U & ~G.neighborhood(U)
        U2 = sum(1 << i for i in iter_bits(free) if rng.random() < 0.5)
        res.count += 1
        if not census.verify_disjoint_additivity(n, r, U, U2):
            res.fail("census.disjoint_additivity", f"n={n} r={r} U={U:x} U2={U2:x}")
    res.notes.append(f"J({n},{r}): {2 * trials} checks, smallest Shearer gap {worst:.6f}")
    return res


# -- grouping -----------------------------------------------------------------

def _grouping(n: int, r: int) -> UnitResult:
    groups, _ = census.group_by_U_check(n, r)
    res = UnitResult(count=len(groups))
    for g in groups:
        if g.ok is False:
            res.fail("census.group_by_U", f"n={n} r={r} U={g.U:x} size={g.size}")
    big = max((g.size for g in groups if g.u), default=0)
    res.notes.append(f"n={n} r={r}: {len(groups)} groups, "
                     f"{sum(g.size for g in groups)} matroids, largest u>0 group {big}")
    return res


_HANDLERS = {
    ("stable", "count"): _stable_count,
    ("stable", "gs"): _gs,
    ("bounds", "sigma"): _sigma,
    ("bounds", "binom"): _binom,
    ("bounds", "container"): _container,
    ("bounds", "z"): _z,
    ("roundtrip", "census"): _roundtrip_census,
    ("roundtrip", "samples"): _roundtrip_samples,
    ("lemmas", "census"): _lemmas,
    ("entropy", "graph"): _entropy,
    ("grouping", "census"): _grouping,
}


def run_suites(suites, max_n: int = 6, jobs: int = 1, seed: int = 0,
               samples: int = 1000) -> list[SuiteReport]:
    """Run the named suites and return one merged report per suite."""
    if "all" in suites:
        suites = SUITES
    units = []
    for s in suites:
        units.extend(plan(s, max_n, seed, samples))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(run_unit, units, chunksize=1))
    else:
        results = [run_unit(u) for u in units]
    out = []
    for s in suites:
        count, fails, notes = 0, [], []
        for u, res in zip(units, results):
            if u[0] == s:
                count += res.count
                fails += res.failures
                notes += res.notes
        out.append(SuiteReport(s, count, NOUNS[s], fails, notes))
    return out


def report_text(reports: list[SuiteReport]) -> str:
    lines = []
    for rep in reports:
        lines += rep.lines()
    return "\n".join(lines) + "\n"
