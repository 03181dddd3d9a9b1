"""Print the bound constants for a range of n, as the bounds subcommand does.

    python3 demos/bounds_table.py 4 12
"""
import sys

from sparsematroids import bounds

lo, hi = (int(a) for a in sys.argv[1:3]) if len(sys.argv) > 2 else (4, 12)
print(f"{'n':>3} {'r':>3} {'ceil sN':>8} {'aN':>10} {'zeta':>8} {'knuth':>9} {'container':>10}")
for n in range(lo, hi + 1):
    r = n // 2
    rep = bounds.bounds_report(n, r)
    print(f"{n:>3} {r:>3} {rep.ceil_sigma_N:>8} {float(rep.alpha_N):>10.3f} {rep.zeta:>8.4f} "
          f"{float(rep.knuth_log_lower):>9.3f} {rep.container_log_upper:>10.3f}")

bad = bounds.central_lower_failures(40, c=8)
print()
print(f"central binomial lower bound with 1/(8n): fails for {len(bad)} of n <= 40")
print(f"with 1/(4n) for even n <= 64: {bounds.binom_inequality_checks(64)}")
