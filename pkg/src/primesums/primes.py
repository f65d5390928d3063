"""Prime generation, prime counting and deterministic primality.

Primes come from an odd-only segmented sieve of Eratosthenes; integers beyond
the sieve are decided by Miller-Rabin with fixed base sets taken from the
smallest strong pseudoprimes to the first ``j`` prime bases (OEIS A014233).
"""
from __future__ import annotations

import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError, OutOfProvenRangeError

MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# (exclusive bound, number of leading bases that are deterministic below it)
_MR_TIERS = (
    (2_047, 1),
    (1_373_653, 2),
    (25_326_001, 3),
    (3_215_031_751, 4),
    (2_152_302_898_747, 5),
    (3_474_749_660_383, 6),
    (341_550_071_728_321, 7),
    (3_825_123_056_546_413_051, 9),
    (318_665_857_834_031_151_167_461, 12),
    (3_317_044_064_679_887_385_961_981, 13),
)
PROVEN_LIMIT = _MR_TIERS[-1][0]

DEFAULT_MAX_SIEVE = 2**40
DEFAULT_MAX_BASE_SIEVE = 2**25
DEFAULT_SEGMENT_SIZE = 1 << 20

_SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
                 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233,
                 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311, 313, 317,
                 331, 337, 347, 349, 353, 359, 367, 373, 379, 383, 389, 397, 401, 409, 419,
                 421, 431, 433, 439, 443, 449, 457, 461, 463, 467, 479, 487, 491, 499, 503,
                 509, 521, 523, 541, 547, 557, 563, 569, 571, 577, 587, 593, 599, 601, 607,
                 613, 617, 619, 631, 641, 643, 647, 653, 659, 661, 673, 677, 683, 691, 701,
                 709, 719, 727, 733, 739, 743, 751, 757, 761, 769, 773, 787, 797, 809, 811,
                 821, 823, 827, 829, 839, 853, 857, 859, 863, 877, 881, 883, 887, 907, 911,
                 919, 929, 937, 941, 947, 953, 967, 971, 977, 983, 991, 997)


def max_sieve() -> int:
    """Sieve capacity cap; ``PSL_MAX_SIEVE`` overrides the default 2**40."""
    raw = os.environ.get("PSL_MAX_SIEVE")
    if raw:
        return int(float(raw)) if "e" in raw.lower() else int(raw)
    return DEFAULT_MAX_SIEVE


class Method(str, Enum):
    SIEVE = "sieve"
    MILLER_RABIN = "deterministic-miller-rabin"


@dataclass(frozen=True)
class PrimalityVerdict:
    value: int
    is_prime: bool
    method: Method

    def __bool__(self) -> bool:
        return self.is_prime


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes up to ``limit`` in increasing order (read-only int64 array)."""

    limit: int
    primes: np.ndarray
    segment_size: int = DEFAULT_SEGMENT_SIZE

    def __len__(self) -> int:
        return len(self.primes)

    def pi(self, x: float) -> int:
        """Number of primes <= x, for x <= limit."""
        if x > self.limit:
            raise CapacityError(f"pi({x}) requested beyond sieve limit {self.limit}")
        if x < 2:
            return 0
        return int(np.searchsorted(self.primes, int(x), side="right"))

    def nth(self, n: int) -> int:
        """The n-th prime, 1-based."""
        if n < 1:
            raise DomainError("prime index must be >= 1")
        if n > len(self.primes):
            raise CapacityError(f"table holds only {len(self.primes)} primes")
        return int(self.primes[n - 1])

    def contains(self, value: int) -> bool:
        """Sieve membership test; only meaningful for value <= limit."""
        if value > self.limit:
            raise CapacityError(f"{value} beyond sieve limit {self.limit}")
        if value < 2:
            return False
        i = int(np.searchsorted(self.primes, value))
        return i < len(self.primes) and int(self.primes[i]) == value


def _simple_odd_primes(limit: int) -> np.ndarray:
    """Odd primes <= limit by a plain (unsegmented) sieve; used for base primes."""
    if limit < 3:
        return np.empty(0, dtype=np.int64)
    # index i represents 2*i + 1
    size = (limit - 1) // 2 + 1
    mark = np.ones(size, dtype=bool)
    mark[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if mark[i]:
            p = 2 * i + 1
            mark[(p * p) // 2::p] = False
    return (2 * np.flatnonzero(mark) + 1).astype(np.int64)


def _odd_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primality mask for the odd numbers lo, lo+2, ... < hi (lo odd).

    ``base`` must hold every odd prime up to isqrt(hi - 1).
    """
    count = (hi - lo + 1) // 2
    mark = np.ones(count, dtype=bool)
    for p in base.tolist():
        pp = p * p
        if pp >= hi:
            break
        start = max(pp, -(-lo // p) * p)
        if start % 2 == 0:
            start += p
        if start < hi:
            mark[(start - lo) // 2::p] = False
    if lo == 1 and count:
        mark[0] = False
    return mark


def sieve_primes(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE, workers: int = 1) -> PrimeTable:
    """Segmented sieve of Eratosthenes for all primes <= limit.

    Working memory is one segment of ``segment_size`` odd candidates per
    worker. Segments are merged in order, so the result is independent of
    ``workers`` and ``segment_size``.
    """
    if limit < 2:
        raise DomainError("sieve limit must be >= 2")
    if limit > max_sieve():
        raise CapacityError(f"sieve limit {limit} exceeds configured maximum {max_sieve()}")
    if segment_size < 1:
        raise DomainError("segment_size must be positive")
    base = _simple_odd_primes(math.isqrt(limit))
    span = 2 * segment_size
    bounds = [(lo, min(lo + span, limit + 1)) for lo in range(1, limit + 1, span)]

    def run(b: tuple[int, int]) -> np.ndarray:
        lo, hi = b
        mark = _odd_segment(lo, hi, base)
        return lo + 2 * np.flatnonzero(mark).astype(np.int64)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    primes = np.concatenate([np.array([2], dtype=np.int64), *parts])
    primes.setflags(write=False)
    return PrimeTable(limit=limit, primes=primes, segment_size=segment_size)


# shared, growable table used by the convenience functions below
_shared: PrimeTable | None = None
_shared_lock = threading.Lock()


def _nth_prime_upper(n: int) -> int:
    if n < 6:
        return 13
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 3


def table_with_limit(limit: int) -> PrimeTable:
    """Shared table covering at least ``limit``; regrown by doubling."""
    global _shared
    with _shared_lock:
        if _shared is None or _shared.limit < limit:
            new_limit = max(limit, 2 * _shared.limit if _shared is not None else 1 << 16)
            new_limit = min(new_limit, max(limit, max_sieve()))
            _shared = sieve_primes(new_limit)
        return _shared


def table_with_count(count: int) -> PrimeTable:
    """Shared table holding at least ``count`` primes."""
    table = _shared
    if table is not None and len(table) >= count:
        return table
    return table_with_limit(_nth_prime_upper(count))


def nth_prime(n: int) -> int:
    """The n-th prime (p_1 = 2)."""
    if n < 1:
        raise DomainError("prime index must be >= 1")
    return table_with_count(n).nth(n)


def first_primes(count: int) -> np.ndarray:
    """Read-only view of p_1..p_count."""
    return table_with_count(count).primes[:count]


def _strong_probable_prime(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def miller_rabin(n: int) -> bool:
    """Deterministic Miller-Rabin for 0 <= n < PROVEN_LIMIT."""
    if n < 0:
        raise DomainError("primality is defined for nonnegative integers")
    if n >= PROVEN_LIMIT:
        raise OutOfProvenRangeError(f"{n} is not below the proven bound {PROVEN_LIMIT}")
    if n < 4:
        return n >= 2
    if n % 2 == 0:
        return False
    for p in MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    nbases = next(j for bound, j in _MR_TIERS if n < bound)
    return all(_strong_probable_prime(n, d, s, a) for a in MR_BASES[:nbases])


def is_prime(value: int, table: PrimeTable | None = None) -> PrimalityVerdict:
    """Decide primality; sieve lookup when the value lies inside a table."""
    value = int(value)
    if value < 0:
        raise DomainError("primality is defined for nonnegative integers")
    if table is None:
        table = _shared
    if table is not None and value <= table.limit:
        return PrimalityVerdict(value, table.contains(value), Method.SIEVE)
    return PrimalityVerdict(value, miller_rabin(value), Method.MILLER_RABIN)


def primality_mask(values: np.ndarray | Sequence[int]) -> np.ndarray:
    """Boolean mask of which values are prime.

    Trial division by odd primes below 1000 runs vectorised; survivors go
    through :func:`miller_rabin`. Accepts int64 or object arrays.
    """
    arr = np.asarray(values)
    if arr.dtype != object and arr.dtype.kind not in "iu":
        raise DomainError("primality_mask needs integer values")
    n = len(arr)
    if n == 0:
        return np.zeros(0, dtype=bool)
    if arr.dtype == object:
        if any(v >= PROVEN_LIMIT for v in arr):
            raise OutOfProvenRangeError(f"values reach the proven bound {PROVEN_LIMIT}")
    alive = (arr % 2 == 1) & (arr > 1) if arr.dtype != object else np.array(
        [v % 2 == 1 and v > 1 for v in arr], dtype=bool)
    idx = np.flatnonzero(alive)
    sub = arr[idx]
    for p in _SMALL_PRIMES:
        if not len(idx):
            break
        keep = (sub % p != 0) | (sub == p)
        if arr.dtype == object:
            keep = keep.astype(bool)
        idx = idx[keep]
        sub = sub[keep]
    out = np.zeros(n, dtype=bool)
    out[arr == 2] = True
    for i, v in zip(idx.tolist(), sub.tolist()):
        if miller_rabin(int(v)):
            out[i] = True
    return out


def prime_count_between(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE,
                        max_base: int = DEFAULT_MAX_BASE_SIEVE) -> int:
    """Count primes p with lo < p < hi by a windowed segmented sieve."""
    lo, hi = int(lo), int(hi)
    if lo < 0 or hi < lo:
        raise DomainError("need 0 <= lo <= hi")
    if hi - lo < 2:
        return 0
    root = math.isqrt(hi - 1)
    if root > max_base:
        raise CapacityError(f"sqrt({hi}) exceeds base sieve maximum {max_base}")
    base = _simple_odd_primes(root)
    start, stop = lo + 1, hi  # integers in [start, stop)
    total = 1 if start <= 2 < stop else 0
    if start % 2 == 0:
        start += 1
    span = 2 * segment_size
    for seg_lo in range(start, stop, span):
        seg_hi = min(seg_lo + span, stop)
        total += int(_odd_segment(seg_lo, seg_hi, base).sum())
    return total


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation using the shared prime table up to sqrt(n)."""
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    out: dict[int, int] = {}
    root = math.isqrt(n)
    if root >= 2:
        for p in table_with_limit(max(root, 2)).primes.tolist():
            if p * p > n:
                break
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out
