"""Find the prime terms of a prime-sum sequence.

A scan walks n = 1..n_max in blocks of consecutive indices. Term values for a
block are rebuilt from prefix sums (cheap) and the primality work is farmed
out to worker processes; blocks are merged in index order so the hit list is
identical for any worker count.
"""
from __future__ import annotations

import csv
import io
import json
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DigestMismatchError, DomainError
from .prime_sums import Variant, prefix_sums, term, terms
from .primes import primality_mask, table_with_count

DEFAULT_BLOCK = 50_000
DEFAULT_CADENCE = 100_000

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class PrimeHit:
    """The k-th prime of the sequence, equal to the term at index m."""

    k: int
    m: int
    q: int


@dataclass(frozen=True)
class PiCheckpointRow:
    n: int
    pi_n: int
    q_max: int | None
    m_of_q_max: int | None


@dataclass(frozen=True)
class Checkpoint:
    variant: Variant
    n_last: int
    accumulator: int
    hits_so_far: int
    digest: int

    def to_json(self) -> str:
        # integers as decimal strings so 64-bit consumers don't truncate
        return json.dumps({
            "variant": str(self.variant),
            "n_last": str(self.n_last),
            "accumulator": str(self.accumulator),
            "hits_so_far": str(self.hits_so_far),
            "digest": str(self.digest),
        }, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Checkpoint":
        try:
            raw = json.loads(text)
            return cls(
                variant=Variant.parse(raw["variant"]),
                n_last=int(raw["n_last"]),
                accumulator=int(raw["accumulator"]),
                hits_so_far=int(raw["hits_so_far"]),
                digest=int(raw["digest"]),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise DigestMismatchError(f"malformed checkpoint: {exc}") from exc

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Checkpoint":
        return cls.from_json(Path(path).read_text())


class ScanResult(NamedTuple):
    hits: list[PrimeHit]
    rows: list[PiCheckpointRow]


def hits_digest(hits: Iterable[PrimeHit], start: int = _FNV_OFFSET) -> int:
    """64-bit FNV-1a over the decimal text of each (m, q) pair."""
    h = start
    for hit in hits:
        for byte in f"{hit.m},{hit.q};".encode():
            h ^= byte
            h = (h * _FNV_PRIME) & _MASK64
    return h


def _block_primes(values: np.ndarray) -> list[tuple[int, int]]:
    """(offset, value) for each prime in a block of term values."""
    return [(i, int(values[i])) for i in np.flatnonzero(primality_mask(values)).tolist()]


def _block_ranges(n_lo: int, n_hi: int, block: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + block - 1, n_hi)) for lo in range(n_lo, n_hi + 1, block)]


def _rows_for(hits: Sequence[PrimeHit], points: Iterable[int]) -> list[PiCheckpointRow]:
    ms = [h.m for h in hits]
    rows = []
    for n in points:
        k = bisect_right(ms, n)
        last = hits[k - 1] if k else None
        rows.append(PiCheckpointRow(n, k, last.q if last else None, last.m if last else None))
    return rows


def _scan_range(variant: Variant, n_lo: int, n_hi: int, k0: int, workers: int, block: int,
                on_block: Callable[[int, list[PrimeHit]], None] | None) -> list[PrimeHit]:
    table_with_count(variant.primes_needed(n_hi))  # grow once, before forking
    ranges = _block_ranges(n_lo, n_hi, block)
    hits: list[PrimeHit] = []
    k = k0

    def blocks() -> Iterable[np.ndarray]:
        for lo, hi in ranges:
            yield terms(variant, lo, hi)

    if workers > 1 and len(ranges) > 1:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_block_primes, blocks())
    else:
        pool = None
        results = map(_block_primes, blocks())
    try:
        for (lo, hi), found in zip(ranges, results):
            for i, q in found:
                k += 1
                hits.append(PrimeHit(k, lo + i, q))
            if on_block is not None:
                on_block(hi, hits)
    finally:
        if pool is not None:
            pool.shutdown()
    return hits


def scan(variant: Variant | str, n_max: int, checkpoints: Iterable[int] = (), *,
         workers: int = 1, block: int = DEFAULT_BLOCK,
         cadence: int | None = None,
         on_checkpoint: Callable[[Checkpoint, list[PrimeHit]], None] | None = None) -> ScanResult:
    """Scan terms 1..n_max for primes.

    Returns the hits sorted by index and one :class:`PiCheckpointRow` per
    requested n. ``on_checkpoint`` is called every ``cadence`` indices (and at
    n_max) with a resumable :class:`Checkpoint` and the hits so far.
    """
    return _run(Variant.parse(variant) if isinstance(variant, str) else variant,
                n_max, list(checkpoints), [], 0, workers, block, cadence, on_checkpoint)


def resume(checkpoint: Checkpoint, n_max: int, prior_hits: Sequence[PrimeHit],
           checkpoints: Iterable[int] = (), *, workers: int = 1, block: int = DEFAULT_BLOCK,
           cadence: int | None = None,
           on_checkpoint: Callable[[Checkpoint, list[PrimeHit]], None] | None = None) -> ScanResult:
    """Continue a scan from ``checkpoint``; output matches a cold scan to n_max.

    ``prior_hits`` are the hits recorded up to ``checkpoint.n_last``; they are
    validated against the checkpoint's count and digest.
    """
    validate_checkpoint(checkpoint, prior_hits)
    if n_max < checkpoint.n_last:
        raise DomainError("n_max is below the checkpoint index")
    return _run(checkpoint.variant, n_max, list(checkpoints), list(prior_hits),
                checkpoint.n_last, workers, block, cadence, on_checkpoint)


def validate_checkpoint(checkpoint: Checkpoint, prior_hits: Sequence[PrimeHit]) -> None:
    if checkpoint.n_last < 0 or len(prior_hits) != checkpoint.hits_so_far:
        raise DigestMismatchError("hit count does not match checkpoint")
    if hits_digest(prior_hits) != checkpoint.digest:
        raise DigestMismatchError("hit digest does not match checkpoint")
    if any(h.m > checkpoint.n_last for h in prior_hits):
        raise DigestMismatchError("hits extend past the checkpoint index")
    if checkpoint.n_last and term(checkpoint.variant, checkpoint.n_last) != checkpoint.accumulator:
        raise DigestMismatchError("accumulator does not match the variant at n_last")


def _run(variant: Variant, n_max: int, points: list[int], hits: list[PrimeHit], n_done: int,
         workers: int, block: int, cadence: int | None,
         on_checkpoint: Callable[[Checkpoint, list[PrimeHit]], None] | None) -> ScanResult:
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if workers < 1 or block < 1:
        raise DomainError("workers and block must be >= 1")
    if any(p < 1 or p > n_max for p in points):
        raise DomainError("checkpoint indices must lie in 1..n_max")
    cadence = cadence or DEFAULT_CADENCE
    if on_checkpoint is not None:
        # align blocks with the checkpoint cadence
        block = min(block, cadence)
    next_cp = (n_done // cadence + 1) * cadence
    done_hits = list(hits)

    def on_block(hi: int, new_hits: list[PrimeHit]) -> None:
        nonlocal next_cp
        if on_checkpoint is None:
            return
        if hi >= next_cp or hi == n_max:
            all_hits = done_hits + new_hits
            on_checkpoint(Checkpoint(variant, hi, term(variant, hi), len(all_hits),
                                     hits_digest(all_hits)), all_hits)
            next_cp = (hi // cadence + 1) * cadence

    if n_done < n_max:
        new = _scan_range(variant, n_done + 1, n_max, len(hits), workers, block, on_block)
        hits = done_hits + new
    return ScanResult(hits, _rows_for(hits, points))


def first_prime_indices(n_max: int) -> list[int]:
    """Indices n <= n_max for which the sum of the first n primes is prime."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    sums = prefix_sums(n_max)[1:]
    return (np.flatnonzero(primality_mask(sums)) + 1).tolist()


def pi_counts(hits: Sequence[PrimeHit], n_max: int) -> np.ndarray:
    """Array c with c[i] = number of hits with m <= i, for i = 0..n_max."""
    marks = np.zeros(n_max + 1, dtype=np.int64)
    for h in hits:
        if h.m <= n_max:
            marks[h.m] += 1
    return np.cumsum(marks)


def write_hits_csv(hits: Iterable[PrimeHit], path: str | Path | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "k", "q"])
    for h in hits:
        w.writerow([h.m, h.k, h.q])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_hits_csv(path: str | Path) -> list[PrimeHit]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["m", "k", "q"]:
            raise DomainError(f"{path}: expected header m,k,q")
        return [PrimeHit(int(r["k"]), int(r["m"]), int(r["q"])) for r in reader]
