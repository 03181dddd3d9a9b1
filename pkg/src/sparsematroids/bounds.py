"""Evaluators for the counting constants and bounds.

``log`` is base 2 and ``ln`` is natural throughout.  C(n, n/2) means
C(n, floor(n/2)).  Inequalities that are asserted (rather than just
reported) are decided with exact integers/rationals or with mpmath interval
arithmetic, so rounding can only make a check fail, never pass wrongly.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath

from .johnson import graph_constants

# Rational enclosures of e and pi, 30 correct digits each way.
E_LO = Fraction("2.718281828459045235360287471352")
E_HI = Fraction("2.718281828459045235360287471353")
PI_LO = Fraction("3.141592653589793238462643383279")
PI_HI = Fraction("3.141592653589793238462643383280")

EXACT_SUM_LIMIT = 10**6


def central(n: int) -> int:
    return comb(n, n // 2)


def _log2_int(x: int) -> float:
    return math.log2(x) if x > 0 else -math.inf


def sigma_alpha_nr(n: int, r: int) -> tuple[float, Fraction]:
    """(sigma_{n,r}, alpha_{n,r}) for J(n, r), alpha exact."""
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got n={n}, r={r}")
    d, lam = graph_constants(n, r)
    return (math.log(d + 1) + 1) / (d + lam), Fraction(lam, d + lam)


@contextmanager
def _precision(dps: int):
    """Set mpmath's real and interval contexts to the same precision."""
    iv = mpmath.iv
    saved = iv.dps
    iv.dps = dps
    try:
        with mpmath.workdps(dps):
            yield iv
    finally:
        iv.dps = saved


def _endpoints(x) -> tuple[mpmath.mpf, mpmath.mpf]:
    # exact at the current precision when called inside _precision()
    return mpmath.mpf(x.a), mpmath.mpf(x.b)


def ceil_sigma_N(n: int, r: int) -> int:
    """ceil(sigma_{n,r} C(n, r)), decided with interval arithmetic."""
    d, lam = graph_constants(n, r)
    N = comb(n, r)
    dps = 40
    while True:
        with _precision(dps) as iv:
            lo, hi = _endpoints((iv.log(d + 1) + 1) * N / (d + lam))
            c_lo, c_hi = int(mpmath.ceil(lo)), int(mpmath.ceil(hi))
        if c_lo == c_hi:
            return c_lo
        dps *= 2


def _sigma_rhs(n: int) -> mpmath.mpf:
    """A certified lower bound on 9 ln(n) C(n, n/2) / n^2."""
    with _precision(40) as iv:
        lo, _ = _endpoints(9 * iv.log(n) * central(n) / (n * n))
        return lo


def lemma_sigma_check(n: int) -> bool:
    """Both bounds of the sigma/alpha lemma for every 0 < r < n.

    ceil(sigma_{n,r} C(n,r)) <= 9 ln(n) C(n,n/2) / n^2 and
    alpha_{n,r} C(n,r) <= 2 C(n,n/2) / n (exact integers).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    mid = central(n)
    rhs_lo = _sigma_rhs(n)
    rhs_float = float(rhs_lo) * (1 - 1e-12)
    ok = True
    N = 1
    for r in range(1, n):
        N = N * (n - r + 1) // r
        d, lam = graph_constants(n, r)
        # alpha_{n,r} <= 2/n and alpha_{n,r} C(n,r) <= 2 C(n,n/2)/n
        if lam * n > 2 * (d + lam) or lam * N * n > 2 * mid * (d + lam):
            ok = False
        # fast path: floats with a wide relative safety margin
        try:
            approx = (math.log(d + 1) + 1) * float(N) / (d + lam)
            if approx * (1 + 1e-9) <= rhs_float - 1:
                continue
        except OverflowError:
            pass
        with mpmath.workdps(40):
            if not ceil_sigma_N(n, r) <= rhs_lo:
                ok = False
    return ok


def zeta(n: int) -> float:
    """57 log(n)^2 / n^2 * C(n, n/2)."""
    return float(57 * mpmath.log(n, 2) ** 2 / n**2 * central(n))


def upsilon_big(n: int) -> float:
    """5 log(n) zeta(n)."""
    return float(5 * mpmath.log(n, 2) * 57 * mpmath.log(n, 2) ** 2 / n**2 * central(n))


def digamma_f(n: int) -> Fraction:
    """1 / (5n)."""
    return Fraction(1, 5 * n)


def z_log_upper(n: int, r: int | None = None) -> float:
    """Explicit upper bound on log z(n, r) from the counting chain.

    N log(e C(n,n/2) / N) + 2N log(e n 2^n / (2N)) with
    N = ceil(9 ln(n) C(n,n/2) / n^2).  The chain uses the r-independent
    maximum over ranks, so ``r`` does not change the value.
    """
    mid = central(n)
    N = int(mpmath.ceil(9 * mpmath.log(n) * mid / n**2))
    e = mpmath.e
    val = N * mpmath.log(e * mid / N, 2) + 2 * N * mpmath.log(e * n * mpmath.mpf(2) ** n / (2 * N), 2)
    return float(val)


def z_threshold(n_max: int, n_min: int = 2) -> int | None:
    """Smallest n in [n_min, n_max] from which z_log_upper <= zeta holds through n_max."""
    found = None
    for n in range(n_max, n_min - 1, -1):
        if z_log_upper(n) <= zeta(n):
            found = n
        else:
            break
    return found


KNUTH_PROXY = "knuth-proxy"
EXACT = "exact"


def upsilon_small(n: int, s_log: float | None = None) -> tuple[float, str]:
    """(Upsilon(n) + 2 log(n+1)) / log s(n).

    Without an exact ``s_log`` the Knuth lower bound C(n,n/2)/n stands in for
    log s(n); that underestimates the denominator, so the proxy value is an
    overestimate.
    """
    num = upsilon_big(n) + 2 * math.log2(n + 1)
    if s_log is None:
        return num / (central(n) / n), KNUTH_PROXY
    return num / s_log, EXACT


def knuth_log_lower(n: int, r: int) -> Fraction:
    """C(n, r) / n, a lower bound on log s(n, r)."""
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got n={n}, r={r}")
    return Fraction(comb(n, r), n)


def _log2_binom_prefix(N: int, k: int) -> float:
    """log2 sum_{i<=k} C(N, i)."""
    k = min(k, N)
    if k < 0:
        return -math.inf
    if N <= EXACT_SUM_LIMIT:
        total = 0
        term = 1
        for i in range(k + 1):
            total += term
            term = term * (N - i) // (i + 1)
        return _log2_int(total)
    # log-space: sum of exp(lgamma terms)
    logs = [
        (math.lgamma(N + 1) - math.lgamma(i + 1) - math.lgamma(N - i + 1)) / math.log(2)
        for i in range(k + 1)
    ]
    top = max(logs)
    return top + math.log2(sum(2.0 ** (x - top) for x in logs))


def container_log_upper(n: int, r: int) -> float:
    """log2 of sum_{i <= ceil(sigma N)} C(N, i) * 2^(alpha N) on J(n, r)."""
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got n={n}, r={r}")
    N = comb(n, r)
    _, a = sigma_alpha_nr(n, r)
    return _log2_binom_prefix(N, ceil_sigma_N(n, r)) + float(a * N)


def container_log_upper_m(n: int, r: int, m: int) -> float:
    """Bound on log2 i(J(n,r), m): the S-sum times sum_{j<=m} C(floor(alpha N), j)."""
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got n={n}, r={r}")
    if m < 0:
        raise ValueError("m must be nonnegative")
    N = comb(n, r)
    _, a = sigma_alpha_nr(n, r)
    aN = math.floor(a * N)
    return _log2_binom_prefix(N, ceil_sigma_N(n, r)) + _log2_binom_prefix(aN, m)


def container_bound_parts(n: int, r: int) -> tuple[int, Fraction]:
    """(sum_{i<=ceil(sigma N)} C(N, i), alpha N) as exact numbers."""
    N = comb(n, r)
    k = min(ceil_sigma_N(n, r), N)
    prefix = sum(comb(N, i) for i in range(k + 1))
    _, a = sigma_alpha_nr(n, r)
    return prefix, a * N


def container_bound_m_exact(n: int, r: int, m: int) -> int:
    """The size-bounded container bound as an exact integer."""
    prefix, aN = container_bound_parts(n, r)
    aN = math.floor(aN)
    return prefix * sum(comb(aN, j) for j in range(min(m, aN) + 1))


def container_bound_holds(n: int, r: int, count: int, m: int | None = None) -> bool:
    """Exact comparison count <= container bound (optionally size-bounded)."""
    if m is not None:
        return count <= container_bound_m_exact(n, r, m)
    prefix, aN = container_bound_parts(n, r)
    # count <= prefix * 2^(p/q)  <=>  count^q <= prefix^q * 2^p
    p, q = aN.numerator, aN.denominator
    return count**q <= prefix**q * 2**p


def binom_prefix_check(n: int, k: int) -> bool:
    """sum_{i<=k} C(n, i) <= (e n / k)^k, using a lower enclosure of e."""
    total = sum(comb(n, i) for i in range(k + 1))
    return total * k**k <= (E_LO * n) ** k


def central_upper_check(n: int) -> bool:
    """C(n, n/2) <= sqrt(2/pi) 2^n / sqrt(n), squared and cleared of roots."""
    c = central(n)
    return c * c * n * PI_HI <= 2 * 4**n


def central_lower_check(n: int, c: int = 4) -> bool:
    """sqrt(2/pi) 2^n / sqrt(n) (1 - 1/(c n)) <= C(n, n/2), squared.

    With c = 4 this is the Stirling bound C(2m, m) >= 4^m / sqrt(pi m)
    (1 - 1/(8m)) written in n = 2m; it holds for every even n.  With c = 8
    it fails for every n.
    """
    mid = central(n)
    return 2 * 4**n * (1 - Fraction(1, c * n)) ** 2 <= mid * mid * n * PI_LO


def binom_inequality_checks(n_max: int) -> bool:
    """The binomial-sum bound for all 1 <= k <= n <= n_max, the upper central
    binomial bound for all n, and the lower one (c = 4) for even n."""
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    for n in range(1, n_max + 1):
        if not central_upper_check(n):
            return False
        if n % 2 == 0 and not central_lower_check(n):
            return False
        for k in range(1, n + 1):
            if not binom_prefix_check(n, k):
                return False
    return True


def central_lower_failures(n_max: int, c: int = 8) -> list[int]:
    """The n <= n_max at which the lower central bound with constant c fails."""
    return [n for n in range(1, n_max + 1) if not central_lower_check(n, c)]


@dataclass
class BoundsReport:
    n: int
    r: int
    sigma_nr: float
    alpha_nr: Fraction
    ceil_sigma_N: int
    alpha_N: Fraction
    zeta: float
    upsilon_big: float
    upsilon_small: float
    digamma_f: Fraction
    knuth_log_lower: Fraction
    container_log_upper: float
    s_source: str


CSV_COLUMNS = (
    "n", "r", "sigma", "alpha", "ceil_sigma_N", "alpha_N", "zeta", "Upsilon",
    "upsilon", "digamma", "knuth_lower", "container_upper", "s_source",
)


def bounds_report(n: int, r: int, s_log: float | None = None) -> BoundsReport:
    sig, a = sigma_alpha_nr(n, r)
    ups, src = upsilon_small(n, s_log)
    return BoundsReport(
        n=n,
        r=r,
        sigma_nr=sig,
        alpha_nr=a,
        ceil_sigma_N=ceil_sigma_N(n, r),
        alpha_N=a * comb(n, r),
        zeta=zeta(n),
        upsilon_big=upsilon_big(n),
        upsilon_small=ups,
        digamma_f=digamma_f(n),
        knuth_log_lower=knuth_log_lower(n, r),
        container_log_upper=container_log_upper(n, r),
        s_source=src,
    )


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def report_row(rep: BoundsReport) -> list[str]:
    vals = (
        rep.n, rep.r, rep.sigma_nr, rep.alpha_nr, rep.ceil_sigma_N, rep.alpha_N,
        rep.zeta, rep.upsilon_big, rep.upsilon_small, rep.digamma_f,
        rep.knuth_log_lower, rep.container_log_upper, rep.s_source,
    )
    return [_fmt(v) for v in vals]
