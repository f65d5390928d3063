"""Independent reference implementations used only by the tests.

Nothing here imports primesums; every value is rebuilt from scratch with
trial division or plain quadrature.
"""
from __future__ import annotations

import math


def is_prime_td(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_td(count: int) -> list[int]:
    out, c = [], 2
    while len(out) < count:
        if is_prime_td(c):
            out.append(c)
        c += 1
    return out


def brute_hits(n_max: int, shift: int = 0) -> list[tuple[int, int, int]]:
    """(k, m, q) for prime terms, summing 2n primes (2n+1 after a shift)."""
    need = 2 * n_max + 1 + shift
    ps = primes_td(need)
    hits, acc, k = [], 0, 0
    for n in range(1, n_max + 1):
        if shift:
            acc = sum(ps[shift:shift + 2 * n + 1]) if n == 1 else acc + ps[shift + 2 * n - 1] + ps[shift + 2 * n]
        else:
            acc += ps[2 * n - 2] + ps[2 * n - 1]
        if is_prime_td(acc):
            k += 1
            hits.append((k, n, acc))
    return hits


def li_trapezoid(x: float, steps: int = 2_000_000) -> float:
    """Integral of 1/ln t over [2, x] on a uniform grid in u = ln t."""
    a, b = math.log(2.0), math.log(x)
    h = (b - a) / steps
    # dt/ln t = e^u/u du, which is smooth on [ln 2, ln x]
    total = 0.5 * (math.exp(a) / a + math.exp(b) / b)
    for i in range(1, steps):
        u = a + i * h
        total += math.exp(u) / u
    return total * h
