"""Normalising the k-th prime term q_k.

q_k grows roughly like 2 k^2 ln^3 k. The constant M_k solves
2 M^5 k^2 ln^2 k (ln k + ln ln k + 2 ln M) = q_k exactly; this demo prints
it next to the two explicit upper bounds and a few normalised deviations.
"""
from primesums.analysis import hits_upto, mk_refined, mk_upper, q_diagnostics, solve_mk

hits = hits_upto(100_000)

print(f"{'k':>6} {'m':>7} {'q_k':>14} {'M_k':>9} {'refined':>9} {'upper':>9} {'Q':>8} {'V':>8}")
for k in (23, 141, 1098, 8350):
    h = hits[k - 1]
    d = q_diagnostics(h)
    print(f"{k:>6} {h.m:>7} {h.q:>14} {solve_mk(k, h.q).m_k:>9.5f} {mk_refined(k):>9.5f} "
          f"{mk_upper(k):>9.5f} {d.Q:>8.4f} {d.V:>8.4f}")

# where the simple bound M_k <= t_k breaks: only small k
bad = [h.k for h in hits[2:] if solve_mk(h.k, h.q).m_k > mk_upper(h.k)]
print(f"\nM_k > t_k happens {len(bad)} times, largest k = {max(bad)}")
