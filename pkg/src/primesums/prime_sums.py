"""Exact partial sums of consecutive primes.

Four related sequences are supported, all indexed from n = 1:

* ``s_prime(n)``: sum of the first n primes,
* plain ``S_n``: sum of the first 2n primes (S_1 = 5),
* offset ``2d + S_n``,
* shifted ``p_{k+1} + ... + p_{k+2n+1}`` (an odd count of primes).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import CapacityError, DomainError
from .primes import first_primes, table_with_count

ACCUMULATOR_MAX = 2**127 - 1
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class Variant:
    """Which prime-sum sequence to generate.

    ``kind`` is one of ``plain``, ``offset`` or ``shifted``; ``param`` is the
    offset d or the shift k.
    """

    kind: str = "plain"
    param: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("plain", "offset", "shifted"):
            raise DomainError(f"unknown variant kind {self.kind!r}")
        if self.kind == "plain" and self.param != 0:
            raise DomainError("plain variant takes no parameter")
        if self.kind == "offset" and self.param < 0:
            raise DomainError("offset d must be >= 0")
        if self.kind == "shifted" and self.param < 1:
            raise DomainError("shift k must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "Variant":
        """Parse ``plain``, ``offset:<d>`` or ``shifted:<k>``."""
        kind, _, arg = text.strip().partition(":")
        if kind == "plain" and not arg:
            return cls()
        if kind in ("offset", "shifted") and arg:
            return cls(kind, int(arg))
        raise DomainError(f"cannot parse variant {text!r}")

    def __str__(self) -> str:
        return self.kind if self.kind == "plain" else f"{self.kind}:{self.param}"

    @property
    def first_prime_offset(self) -> int:
        """Number of primes skipped before the summed run begins."""
        return self.param if self.kind == "shifted" else 0

    def primes_needed(self, n: int) -> int:
        """Count of leading primes required to form term n."""
        if self.kind == "shifted":
            return 2 * n + 1 + self.param
        return 2 * n


def _exact_sum(arr: np.ndarray) -> int:
    if len(arr) == 0:
        return 0
    if int(arr[-1]) * len(arr) < _INT64_SAFE:
        return int(arr.sum(dtype=np.int64))
    return sum(arr.tolist())


def _check_capacity(value: int) -> int:
    if value > ACCUMULATOR_MAX:
        raise CapacityError(f"accumulator {value} exceeds 2**127 - 1")
    return value


def s_prime(n: int) -> int:
    """Sum of the first n primes."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return _check_capacity(_exact_sum(first_primes(n)))


def s(n: int) -> int:
    """Sum of the first 2n primes."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return s_prime(2 * n)


def term(variant: Variant, n: int) -> int:
    """Single exact term of any variant."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if variant.kind == "plain":
        return s(n)
    if variant.kind == "offset":
        return _check_capacity(2 * variant.param + s(n))
    k = variant.param
    run = first_primes(2 * n + 1 + k)[k:]
    return _check_capacity(_exact_sum(run))


def terms(variant: Variant, n_lo: int, n_hi: int) -> np.ndarray:
    """Terms n_lo..n_hi (inclusive) as an array.

    The array is int64 when every value fits, otherwise dtype=object holding
    exact Python integers.
    """
    if n_lo < 1 or n_hi < n_lo:
        raise DomainError("need 1 <= n_lo <= n_hi")
    c = variant.first_prime_offset + (1 if variant.kind == "shifted" else 0)
    primes = first_primes(variant.primes_needed(n_hi))
    # first term covers primes[skip : 2*n_lo + c]
    skip = variant.first_prime_offset
    base = _exact_sum(primes[skip:2 * n_lo + c])
    if variant.kind == "offset":
        base += 2 * variant.param
    a = primes[2 * n_lo + c:2 * n_hi + c:2]
    b = primes[2 * n_lo + c + 1:2 * n_hi + c + 1:2]
    count = n_hi - n_lo + 1
    top = base + 2 * int(primes[-1]) * (count - 1)
    if top < _INT64_SAFE:
        out = np.empty(count, dtype=np.int64)
        out[0] = base
        np.cumsum(a + b, out=out[1:])
        out[1:] += base
        return out
    _check_capacity(base + _exact_sum(primes[2 * n_lo + c:2 * n_hi + c]))
    pairs = (a + b).astype(object)
    out = np.empty(count, dtype=object)
    out[0] = base
    out[1:] = np.cumsum(pairs) + base
    return out


def prefix_sums(count: int) -> np.ndarray:
    """Array P with P[j] = p_1 + ... + p_j for j = 0..count."""
    primes = first_primes(count)
    if _exact_sum(primes) < _INT64_SAFE:
        out = np.zeros(count + 1, dtype=np.int64)
        np.cumsum(primes, out=out[1:])
        return out
    out = np.zeros(count + 1, dtype=object)
    out[1:] = np.cumsum(primes.astype(object))
    return out


@dataclass
class SumState:
    """Sequential cursor over one variant; O(1) work per step."""

    variant: Variant
    index: int = 0
    accumulator: int = 0
    last_primes: tuple[int, int] = (0, 0)
    _primes: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    def _prime(self, j: int) -> int:
        """p_j, extending the shared table on demand."""
        if self._primes is None or j > len(self._primes):
            want = max(j, 2 * len(self._primes) if self._primes is not None else 1024)
            self._primes = table_with_count(want).primes
        return int(self._primes[j - 1])

    def advance(self) -> int:
        """Move to the next index and return the new accumulator."""
        if self.index == 0:
            n = 1
            skip = self.variant.first_prime_offset
            run = [self._prime(j) for j in range(skip + 1, self.variant.primes_needed(1) + 1)]
            acc = sum(run) + (2 * self.variant.param if self.variant.kind == "offset" else 0)
            last = (run[-2], run[-1])
        else:
            n = self.index + 1
            j = self.variant.primes_needed(n)
            last = (self._prime(j - 1), self._prime(j))
            acc = self.accumulator + last[0] + last[1]
        self.index, self.accumulator, self.last_primes = n, _check_capacity(acc), last
        return acc


def stream(variant: Variant, n_max: int) -> Iterator[tuple[int, int]]:
    """Yield (n, term) for n = 1..n_max in order."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    state = SumState(variant)
    state._primes = table_with_count(variant.primes_needed(n_max)).primes
    for _ in range(n_max):
        yield state.index + 1, state.advance()
