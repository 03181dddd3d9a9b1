"""One test per acceptance criterion; a pass/fail line each is printed in the
terminal summary."""
import math
import subprocess
import sys
import time
from contextlib import contextmanager
from math import comb

import pytest

from conftest import ACCEPTANCE_LINES
from sparsematroids import bounds, census, verify
from sparsematroids.matroid import has_coloops, has_loops


@contextmanager
def criterion(k: int, label: str, limit: float | None = None):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        ACCEPTANCE_LINES[k] = f"criterion {k:2d} FAIL  {label}"
        raise
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ACCEPTANCE_LINES[k] = f"criterion {k:2d} FAIL  {label} ({dt:.1f}s >= {limit:.0f}s)"
        pytest.fail(f"criterion {k} took {dt:.1f}s, limit {limit}s")
    ACCEPTANCE_LINES[k] = f"criterion {k:2d} PASS  {label} ({dt:.1f}s)"


def _failures(report, prefixes):
    return [f for f in report.failures if any(f"FAIL {p}" in f for p in prefixes)]


@pytest.fixture(scope="module")
def roundtrip_report():
    t0 = time.perf_counter()
    (rep,) = verify.run_suites(["roundtrip"], max_n=6, samples=1000)
    return rep, time.perf_counter() - t0


def test_c01_exact_stable_counts():
    with criterion(1, "s(4,2)=10, s(5,2)=26 by scan and branch-and-bound", 1.0):
        assert census.count_stable_sets_scan(4, 2) == 10
        assert census.count_stable_sets(4, 2) == 10
        assert census.count_stable_sets_scan(5, 2) == 26
        assert census.count_stable_sets(5, 2) == 26


def test_c02_knuth_lower_bound():
    with criterion(2, "s(n,r) >= 2^(C(n,r)/n) for C(n,r) <= 35", 60.0):
        pairs = [(n, r) for n in range(2, 36) for r in range(1, n) if comb(n, r) <= 35]
        assert (7, 3) in pairs and (8, 2) in pairs
        for n, r in pairs:
            s = census.count_stable_sets(n, r)
            assert s**n >= 2 ** comb(n, r), (n, r, s)


def test_c03_container_bounds():
    with criterion(3, "container bounds >= exact i(J), i(J, m) for C(n,r) <= 20", 60.0):
        prefix, aN = bounds.container_bound_parts(4, 2)
        assert prefix * 2**aN == 168 >= 10
        checked = 0
        for n in range(2, 21):
            for r in range(1, n):
                if comb(n, r) > 20:
                    continue
                profile = census.stable_size_profile(n, r)
                assert bounds.container_bound_holds(n, r, sum(profile)), (n, r)
                for m in range(comb(n, r) + 1):
                    assert bounds.container_bound_holds(n, r, sum(profile[: m + 1]), m=m), (n, r, m)
                checked += 1
        assert checked > 0


def test_c04_roundtrip(roundtrip_report):
    rep, dt = roundtrip_report
    with criterion(4, f"round trip on {rep.count} matroids (n <= 6 census + 1000 at (10,5)), "
                       f"suite ran {dt:.1f}s"):
        assert dt < 300, f"{dt:.1f}s"
        assert not _failures(rep, ["encoder.round_trip", "encoder.decode", "encoder.encode",
                                   "census.sample_valid"]), rep.failures[:5]
        census_ll = sum(1 for n in range(1, 7) for r in range(n + 1)
                        for M in census.enumerate_matroids(n, r)
                        if not has_loops(M) and not has_coloops(M))
        assert rep.count == census_ll + 1000


def test_c05_encoding_contracts(roundtrip_report):
    rep, _ = roundtrip_report
    with criterion(5, "encoding contracts on every encode of criterion 4"):
        contracts = ["kw.size_bound_S", "encoder.Z_size", "kw.max_degree_A", "kw.retrace",
                     "encoder.W_subset", "encoder.TW_stable", "encoder.transversal_count",
                     "encoder.sparse_paving_t", "encoder.P_sound", "encoder.decode_K_minus_A",
                     "encoder.transversal_freedom"]
        assert not _failures(rep, contracts), rep.failures[:5]
        assert not rep.failures


def test_c06_sigma_lemma():
    with criterion(6, "sigma/alpha inequalities for 0 < r < n <= 1000", 60.0):
        bad = [n for n in range(2, 1001) if not bounds.lemma_sigma_check(n)]
        assert not bad


def test_c07_matroid_lemmas():
    with criterion(7, "girth, uniform-minor, CH, truncation, q identity on n <= 6"):
        (rep,) = verify.run_suites(["lemmas"], max_n=6)
        assert rep.count == 4304
        assert not rep.failures, rep.failures[:5]


def test_c08_entropy_lemmas():
    with criterion(8, "Shearer and disjoint additivity on J(4,2), J(5,2), J(6,3)", 120.0):
        (rep,) = verify.run_suites(["entropy"], max_n=6)
        assert rep.count == 3 * 200
        assert not rep.failures, rep.failures[:5]


def test_c09_grouping():
    with criterion(9, "grouping bound for every U-group of (4,2), (5,2), (6,3)"):
        for n, r in ((4, 2), (5, 2), (6, 3)):
            groups, ok = census.group_by_U_check(n, r)
            assert ok and all(g.ok is not False for g in groups)
            assert sum(g.size for g in groups) == census.count_matroids(n, r)


def test_c10_determinism(tmp_path):
    with criterion(10, "verify --suite all --max-n 6 identical for --jobs 1 and 2"):
        outs = []
        for jobs in (1, 2):
            path = tmp_path / f"report{jobs}.txt"
            res = subprocess.run(
                [sys.executable, "-m", "sparsematroids", "verify", "--suite", "all",
                 "--max-n", "6", "--jobs", str(jobs), "--out", str(path)],
                capture_output=True, text=True)
            assert res.returncode == 0, res.stderr
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        assert b"roundtrip: " in outs[0] and b" 0 failures" in outs[0]
