"""A walk through the small matroid census.

Counts matroids on up to six elements by rank, shows how many are sparse
paving, and compares the number of stable sets of each Johnson graph with
its Knuth-style lower bound and the container upper bound.

    python3 demos/census_tour.py
"""
from math import comb, log2

from sparsematroids import bounds, census
from sparsematroids.matroid import is_sparse_paving

print("matroids on [n] by rank, with the sparse paving share")
for n in range(1, 7):
    row = []
    for r in range(n + 1):
        ms = list(census.enumerate_matroids(n, r))
        sp = sum(1 for M in ms if is_sparse_paving(M))
        row.append(f"{len(ms)}/{sp}")
    print(f"  n={n}: " + "  ".join(row))

# every sparse paving matroid is a stable set of J(n, r) and vice versa,
# so s(n, r) is sandwiched by the two bounds below
print()
print(f"{'n':>3} {'r':>3} {'N':>4} {'log2 s':>8} {'knuth':>8} {'container':>10}")
for n, r in [(4, 2), (5, 2), (6, 2), (6, 3), (7, 3), (8, 2)]:
    N = comb(n, r)
    s = census.count_stable_sets(n, r)
    lo = float(bounds.knuth_log_lower(n, r))
    hi = bounds.container_log_upper(n, r)
    print(f"{n:>3} {r:>3} {N:>4} {log2(s):>8.3f} {lo:>8.3f} {hi:>10.3f}")
