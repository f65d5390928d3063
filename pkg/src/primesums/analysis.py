"""Real-valued analytics over prime sums and their prime terms.

Logarithms are natural throughout. Exact integers (prime sums, counts) are
kept as Python ints until the final division into binary64.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DomainError, InsufficientDataError, NoRootError
from .prime_sums import prefix_sums, s, s_prime, terms, Variant
from .primes import factorize, nth_prime, primality_mask, table_with_limit
from .scanner import PrimeHit, pi_counts, scan

EULER_GAMMA = 0.5772156649015329
_INT_GUARD = 1e-9


def _floor_guarded(x: float) -> int:
    """floor(x), snapping to the nearest integer when within 1e-9 of it."""
    r = round(x)
    if abs(x - r) < _INT_GUARD:
        return int(r)
    return math.floor(x)


def _lnln(x: float) -> float:
    return math.log(math.log(x))


# ---------------------------------------------------------------- companions

class SequenceKind(str, Enum):
    NATURALS = "naturals"
    PRIMES = "primes"
    ARITHMETIC = "arithmetic"
    PRIME_SUMS = "prime_sums"


@dataclass(frozen=True)
class CompanionPoint:
    n: int
    a_n: int
    pi_restricted: int
    b_n: float
    c_n: float


def euler_phi(d: int) -> int:
    if d < 1:
        raise DomainError("totient needs d >= 1")
    out = d
    for p in factorize(d):
        out -= out // p
    return out


def companion_b(kind: SequenceKind | str, n: int, a: int = 1, d: int = 1) -> CompanionPoint:
    """Companion values b_n = pi_restricted * ln(a_n) / a_n and c_n.

    ``pi_restricted`` counts the primes among a_1..a_n; ``a``/``d`` describe
    the progression a + (i-1)d for the arithmetic kind.
    """
    kind = SequenceKind(kind)
    if n < 2:
        raise DomainError("companion sequences need n >= 2")
    if kind is SequenceKind.NATURALS:
        a_n = n
        count = table_with_limit(n).pi(n)
    elif kind is SequenceKind.PRIMES:
        a_n = nth_prime(n)
        count = n
    elif kind is SequenceKind.ARITHMETIC:
        if a < 1 or d < 1 or math.gcd(a, d) != 1:
            raise DomainError("arithmetic progression needs gcd(a, d) = 1")
        a_n = a + (n - 1) * d
        primes = table_with_limit(a_n).primes
        sel = primes[(primes >= a) & (primes <= a_n)]
        count = int(np.count_nonzero((sel - a) % d == 0))
    else:
        vals = terms(Variant(), 1, n)
        count = int(primality_mask(vals).sum())
        a_n = int(vals[-1])
    la = math.log(a_n)
    return CompanionPoint(n, a_n, count, count * la / a_n, a_n / (math.log(n) * la))


def omega_ad(a: int, d: int, x: float) -> float:
    """Expected count d*x / (phi(d) ln x) of primes in a + (i-1)d, i <= x."""
    if math.gcd(a, d) != 1:
        raise DomainError("omega_ad needs gcd(a, d) = 1")
    if x <= 1:
        raise DomainError("omega_ad needs x > 1")
    return d * x / (euler_phi(d) * math.log(x))


def omega_34(x: float) -> float:
    """Expected number of Mersenne primes 2^q - 1 over the first x primes q = 3 mod 4."""
    if x <= math.e:
        raise DomainError("omega_34 needs x > e")
    lx = math.log(x)
    llx = math.log(lx)
    return math.exp(EULER_GAMMA) / (2 * math.log(2)) * (lx + llx + llx * llx / 2)


# ---------------------------------------------------------------- M_k

@dataclass(frozen=True)
class MkSolution:
    k: int
    q: int
    m_k: float
    residual: float
    iterations: int


def mk_forward(k: int, m: float) -> float:
    """q as a function of M: 2 M^5 k^2 ln^2 k (ln k + ln ln k + 2 ln M)."""
    lk = math.log(k)
    return 2 * m**5 * k * k * lk * lk * (lk + math.log(lk) + 2 * math.log(m))


def solve_mk(k: int, q: int, lo: float = 0.1, hi: float = 10.0, rtol: float = 1e-12) -> MkSolution:
    """Positive root M of mk_forward(k, M) = q.

    The left side is negative while ln k + ln ln k + 2 ln M <= 0 and strictly
    increasing afterwards, so the root is unique. Bisection brackets it, Newton
    polishes.
    """
    if k < 3:
        raise DomainError("solve_mk needs k >= 3")
    if q < 1:
        raise DomainError("solve_mk needs q >= 1")
    q = int(q)
    lk = math.log(k)
    llk = math.log(lk)
    c = 2.0 * k * k * lk * lk

    def g(m: float) -> float:
        return c * m**5 * (lk + llk + 2 * math.log(m)) - q

    glo, ghi = g(lo), g(hi)
    if glo > 0 or ghi < 0:
        raise NoRootError(f"no sign change of g on [{lo}, {hi}] for k={k}, q={q}")
    it = 0
    while hi - lo > 1e-6 * hi:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
        it += 1
    m = 0.5 * (lo + hi)
    for _ in range(50):
        it += 1
        dg = c * m**4 * (5 * (lk + llk + 2 * math.log(m)) + 2)
        step = g(m) / dg
        m_new = min(max(m - step, lo), hi)
        if m_new == m:
            break
        m = m_new
        if abs(step) <= 1e-16 * m:
            break
    residual = abs(g(m)) / q
    if residual > rtol:
        # floating point floor of the residual: accept the best neighbour
        cands = [m, math.nextafter(m, 0), math.nextafter(m, math.inf)]
        m = min(cands, key=lambda x: abs(g(x)))
        residual = abs(g(m)) / q
    return MkSolution(k, q, m, residual, it)


def t_seq(n: int) -> float:
    """S_n / (2 n^2 ln n)."""
    if n < 2:
        raise DomainError("t_n needs n >= 2")
    return s(n) / (2 * n * n * math.log(n))


def v_seq(n: int) -> float:
    """S_n / (2 n^2)."""
    if n < 1:
        raise DomainError("v_n needs n >= 1")
    return s(n) / (2 * n * n)


def tprime_seq(n: int) -> float:
    """2 S'_n / (n^2 ln(n/2))."""
    if n < 3:
        raise DomainError("t'_n needs n >= 3")
    return 2 * s_prime(n) / (n * n * math.log(n / 2))


def vprime_seq(n: int) -> float:
    """2 S'_n / n^2."""
    if n < 1:
        raise DomainError("v'_n needs n >= 1")
    return 2 * s_prime(n) / (n * n)


def mk_upper(k: int) -> float:
    """Upper bound t_k for M_k."""
    if k < 2:
        raise DomainError("mk_upper needs k >= 2")
    return t_seq(k)


def refined_index(k: int) -> int:
    """floor(k ln k) with the integrality guard."""
    return _floor_guarded(k * math.log(k))


def mk_refined(k: int) -> float:
    """Refined bound t_j with j = floor(k ln k)."""
    if k < 3:
        raise DomainError("mk_refined needs k >= 3")
    return t_seq(refined_index(k))


# ---------------------------------------------------------------- Q diagnostics

@dataclass(frozen=True)
class QDiagnostics:
    k: int
    m: int
    q: int
    Q: float
    Q1: float
    Q2: float
    Q3: float | None
    V: float
    L: float
    ratio_2k2log3k: float


def q_diagnostics(hit: PrimeHit) -> QDiagnostics:
    """Normalised deviations of a prime term from its asymptotic size.

    ``Q1``/``Q2``/``Q3`` are the primed variants; ``Q3`` is None below k = 16
    where ln ln ln k is not positive.
    """
    k, m, q = hit.k, hit.m, hit.q
    if k < 3:
        raise DomainError("Q diagnostics need k >= 3")
    lk = math.log(k)
    llk = math.log(lk)
    k2l2 = 2.0 * k * k * lk * lk
    main = k2l2 * (lk + llk)
    p_k = nth_prime(k)
    Q = (q - k2l2 * lk) / (k2l2 * llk)
    Q1 = (q - main) / (k2l2 * llk)
    Q2 = (q - 2.0 * p_k * p_k * lk) / (k2l2 * llk)
    Q3 = (q - main) / (k2l2 * math.log(llk)) if k >= 16 else None
    return QDiagnostics(k, m, q, Q, Q1, Q2, Q3,
                        V=q / (2.0 * m * m * math.log(m)) if m >= 2 else math.nan,
                        L=q / main,
                        ratio_2k2log3k=q / (k2l2 * lk))


# ---------------------------------------------------------------- monotonicity

@dataclass(frozen=True)
class MonotonicityReport:
    sequence: str
    start: int
    n_max: int
    exception_indices: list[int]

    @property
    def max_exception(self) -> int | None:
        return self.exception_indices[-1] if self.exception_indices else None

    @property
    def count(self) -> int:
        return len(self.exception_indices)


_MONO_START = {"v": 2, "vprime": 4, "t": 2, "tprime": 3}


def sequence_values(sequence: str, n_lo: int, n_hi: int) -> np.ndarray:
    """Binary64 values of v, vprime, t or tprime over n_lo..n_hi."""
    n = np.arange(n_lo, n_hi + 1, dtype=np.float64)
    if sequence in ("v", "t"):
        sums = terms(Variant(), n_lo, n_hi)
    elif sequence in ("vprime", "tprime"):
        sums = prefix_sums(n_hi)[n_lo:]
    else:
        raise DomainError(f"unknown sequence {sequence!r}")
    # exact integers to float: one rounding
    sums = np.array([float(x) for x in sums.tolist()]) if sums.dtype == object else sums.astype(np.float64)
    if sequence == "v":
        return sums / (2 * n * n)
    if sequence == "t":
        return sums / (2 * n * n * np.log(n))
    if sequence == "vprime":
        return 2 * sums / (n * n)
    return 2 * sums / (n * n * np.log(n / 2))


def monotonicity_scan(sequence: str, n_max: int, start: int | None = None) -> MonotonicityReport:
    """Indices m in [start, n_max) where the expected monotone step fails.

    v and vprime are expected to increase, so m is reported when
    x_{m+1} <= x_m; t and tprime are expected to decrease, so m is reported
    when x_{m+1} > x_m.
    """
    if sequence not in _MONO_START:
        raise DomainError(f"unknown sequence {sequence!r}")
    if n_max < 10:
        raise DomainError("monotonicity scans need n_max >= 10")
    lo = _MONO_START[sequence] if start is None else start
    if lo < _MONO_START[sequence] - (1 if sequence == "v" else 0) or lo >= n_max:
        raise DomainError("start index outside the sequence domain")
    x = sequence_values(sequence, lo, n_max)
    step = np.diff(x)
    bad = step <= 0 if sequence in ("v", "vprime") else step > 0
    return MonotonicityReport(sequence, lo, n_max, (np.flatnonzero(bad) + lo).tolist())


# ---------------------------------------------------------------- root equations

def solve_u_log_u(c: float) -> float:
    """Root u > 1 of u ln u = c, for c > 0."""
    if not c > 0:
        raise DomainError("u ln u = c needs c > 0")
    u = c / math.log(c) if c > math.e else 1.0 + c
    for _ in range(100):
        f = u * math.log(u) - c
        u_new = u - f / (math.log(u) + 1)
        if u_new <= 1:
            u_new = 0.5 * (u + 1)
        if abs(u_new - u) <= 1e-12 * u:
            u = u_new
            break
        u = u_new
    return u


def _floor_root(c: float) -> int:
    """floor of the root of u ln u = c, re-checked on the integer grid."""
    k = _floor_guarded(solve_u_log_u(c))
    while k > 1 and k * math.log(k) > c:
        k -= 1
    while (k + 1) * math.log(k + 1) <= c:
        k += 1
    return k


def root_k0(n: int, s_n: int | None = None) -> int:
    """floor(x) where sqrt(x ln x) = 2 n^2 sqrt(n) ln n / S_n."""
    if n < 10:
        raise DomainError("root_k0 needs n >= 10")
    if s_n is None:
        s_n = s(n)
    rhs = 2.0 * n * n * math.sqrt(n) * math.log(n) / s_n
    return _floor_root(rhs * rhs)


def root_k1(n: int) -> int:
    """floor(y) where (1 + (ln 2 + ln ln 2n)/ln n) sqrt(y ln y) = sqrt(n)."""
    if n < 10:
        raise DomainError("root_k1 needs n >= 10")
    factor = 1 + (math.log(2) + _lnln(2 * n)) / math.log(n)
    return _floor_root(n / (factor * factor))


def root_k2(n: int) -> int:
    """floor(z) where z ln z = n."""
    if n < 10:
        raise DomainError("root_k2 needs n >= 10")
    return _floor_root(float(n))


@dataclass(frozen=True)
class Table5Ratios:
    delta0: float
    delta1: float
    delta2: float
    eta: float
    xi: float


def table5_ratios(n: int, k: int, k0: int, k1: int, k2: int) -> Table5Ratios:
    if k1 * k2 <= 0:
        raise DomainError("k1 * k2 must be positive")
    g = math.sqrt(k1 * k2)
    return Table5Ratios((k - k0) / k, (k - k1) / k, (k - k2) / k, k0 / g, k / g)


# ---------------------------------------------------------------- li(x)

def _simpson(f, a: float, fa: float, b: float, fb: float) -> tuple[float, float, float]:
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6 * (fa + 4 * fm + fb)


def li(x: float) -> float:
    """Logarithmic integral from 2 to x by adaptive Simpson quadrature."""
    if x < 2:
        raise DomainError("li(x) needs x >= 2")
    if x == 2:
        return 0.0
    tol = 1e-9 * max(1.0, x / math.log(x))
    f = lambda t: 1.0 / math.log(t)  # noqa: E731
    # geometric initial panels keep the recursion shallow for large x
    edges = np.geomspace(2.0, x, num=max(2, int(math.log2(x)) + 1)).tolist()
    edges[-1] = x
    total = 0.0
    panel_tol = tol / (len(edges) - 1)
    for a, b in zip(edges, edges[1:]):
        fa, fb = f(a), f(b)
        m, fm, whole = _simpson(f, a, fa, b, fb)
        stack = [(a, fa, b, fb, m, fm, whole, panel_tol, 0)]
        while stack:
            a0, fa0, b0, fb0, m0, fm0, w0, eps, depth = stack.pop()
            lm, flm, left = _simpson(f, a0, fa0, m0, fm0)
            rm, frm, right = _simpson(f, m0, fm0, b0, fb0)
            delta = left + right - w0
            if depth >= 50 or abs(delta) <= 15 * eps:
                total += left + right + delta / 15
            else:
                stack.append((a0, fa0, m0, fm0, lm, flm, left, eps / 2, depth + 1))
                stack.append((m0, fm0, b0, fb0, rm, frm, right, eps / 2, depth + 1))
    return total


# ---------------------------------------------------------------- series

class SeriesKind(str, Enum):
    K_LOG2_OVER_Q = "k_log2_over_q"
    K_LOG2EPS_OVER_Q = "k_log2eps_over_q"
    INV_PI = "inv_pi"


@dataclass(frozen=True)
class SeriesLedger:
    kind: SeriesKind
    upto: int
    partial_sum: float
    comparator: float


def series_partial(kind: SeriesKind | str, upto: int, hits: Sequence[PrimeHit],
                   eps: float = 0.5, n_covered: int | None = None) -> SeriesLedger:
    """Partial sums of the series attached to the prime terms.

    ``k_log2_over_q`` and ``k_log2eps_over_q`` sum over k = 2..upto and need
    q_2..q_upto in ``hits``; ``inv_pi`` sums 1/pi_i over i = 1..upto with
    pi_i >= 1 and needs hits covering indices up to ``upto`` (pass
    ``n_covered`` when the scan reached further than the last hit).
    """
    kind = SeriesKind(kind)
    if upto < 2:
        raise DomainError("series need upto >= 2")
    if kind is SeriesKind.INV_PI:
        covered = n_covered if n_covered is not None else (hits[-1].m if hits else 0)
        if covered < upto:
            raise InsufficientDataError(f"hits cover indices up to {covered}, need {upto}")
        counts = pi_counts(hits, upto)[1:]
        pos = counts[counts > 0].astype(np.float64)
        return SeriesLedger(kind, upto, float(np.sum(1.0 / pos)), 0.5 * math.log(upto) ** 2)
    qs = {h.k: h.q for h in hits}
    missing = [k for k in range(2, upto + 1) if k not in qs]
    if missing:
        raise InsufficientDataError(f"missing q_k for k = {missing[0]}..")
    power = 2.0 if kind is SeriesKind.K_LOG2_OVER_Q else 2.0 - eps
    if kind is SeriesKind.K_LOG2EPS_OVER_Q and eps <= 0:
        raise DomainError("eps must be positive")
    total = math.fsum(k * math.log(k) ** power / qs[k] for k in range(2, upto + 1))
    if kind is SeriesKind.K_LOG2_OVER_Q:
        comp = _lnln(upto) - math.log(math.log(2))
    else:
        comp = 1.0 / (eps * math.log(2) ** eps)
    return SeriesLedger(kind, upto, total, comp)


def li_error_report(hits: Sequence[PrimeHit], points: Sequence[int]) -> list[tuple[int, int, float, float]]:
    """(n, pi_n, li(n), pi_n - li(n)) at each sample point."""
    out = []
    ms = [h.m for h in hits]
    for n in points:
        pi_n = bisect_right(ms, n)
        lv = li(n)
        out.append((n, pi_n, lv, pi_n - lv))
    return out


def hits_upto(n_max: int, workers: int = 1) -> list[PrimeHit]:
    """Convenience: hits of the plain sequence up to index n_max."""
    return scan(Variant(), n_max, workers=workers).hits

