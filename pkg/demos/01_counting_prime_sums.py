"""How often is the sum of the first 2n primes itself prime?

Scans the sequence S_n = p_1 + ... + p_2n and compares the number of prime
terms among S_1..S_n with n / ln n, the count one would guess if the terms
behaved like random integers of their size.

    python demos/01_counting_prime_sums.py [n_max]
"""
import math
import sys

from primesums import scan
from primesums.analysis import li
from primesums.primes import table_with_limit

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
points = [p for p in (10, 100, 1000, 10_000, 100_000, 1_000_000) if p <= n_max]

result = scan("plain", n_max, points)
table = table_with_limit(n_max)

print(f"{'n':>8} {'pi_n':>7} {'pi(n)':>7} {'n/ln n':>9} {'li(n)':>9}  largest prime term")
for row in result.rows:
    n = row.n
    print(f"{n:>8} {row.pi_n:>7} {table.pi(n):>7} {n / math.log(n):>9.1f} {li(n):>9.1f}  "
          f"{row.q_max} (= S_{row.m_of_q_max})")

# first few hits, to make the sequence concrete
print("\nfirst prime terms:", ", ".join(f"S_{h.m}={h.q}" for h in result.hits[:8]))
