"""Exhaustive checks of classical prime-sum inequalities.

Each rule is evaluated at every n in its range. Integer-only rules compare
exactly; mixed rules use binary64 with a small ulp guard, and anything inside
the guard is reported as inconclusive rather than passed.
"""
from primesums.bounds import RULES, check_dusart_interval, scan_hits, scan_rule
from primesums.analysis import hits_upto

HI = 100_000
for name, rule in RULES.items():
    if rule.min_n > HI:
        continue
    rep = scan_rule(name, rule.min_n, HI)
    print(f"{name:<22} [{rep.lo:>6}, {HI}]  violations={len(rep.violations):<3} "
          f"tightest margin {rep.min_margin:.4g} at n={rep.argmin}")

c = check_dusart_interval(1_000_000)
print(f"\nshort interval at n=1e6: {c.rhs} primes inside ({c.note})")

print("\nper-hit rules on hits up to 1e5:")
for rep in scan_hits(hits_upto(HI)):
    extra = f" soft={rep.soft_failures}" if rep.soft_failures else ""
    print(f"  {rep.rule:<18} checked={rep.checked:<5} violations={rep.violations[:8]}{extra}")
