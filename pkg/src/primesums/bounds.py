"""Named inequalities about primes and prime sums, evaluated as predicates.

Every rule is written as ``lhs < rhs`` (or ``lhs <= rhs``) so that the margin
``rhs - lhs`` is positive exactly when the rule holds. Rules whose two sides
are integers are decided in exact integer arithmetic. Rules with a real side
are evaluated in binary64 and a margin within 4 ulps of zero is reported as
``inconclusive`` rather than certified either way.

Each rule has a lower range gate. The single-point ``check_*`` functions raise
:class:`DomainError` below it; the per-hit and per-row batteries report the
rule as ``not-applicable`` instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from .analysis import root_k0, root_k1, root_k2, solve_mk
from .errors import DomainError
from .prime_sums import prefix_sums
from .primes import first_primes, nth_prime, prime_count_between, table_with_limit
from .scanner import PiCheckpointRow, PrimeHit, pi_counts

ULP_GUARD = 4
_INT64_SAFE = 2**62


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"
    NOT_APPLICABLE = "not-applicable"
    INFO = "info"


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of one rule at one index.

    ``margin`` is ``rhs - lhs`` so a positive value means the rule holds.
    ``holds`` follows the sign of the margin (``>= 0`` for non-strict rules);
    ``status`` additionally distinguishes float ties and range gates.
    """

    name: str
    n_or_k: int
    lhs: int | float
    rhs: int | float
    holds: bool
    margin: float
    status: Status
    strict: bool = True
    note: str = ""

    @property
    def ok(self) -> bool:
        """True unless the rule was applicable and failed."""
        return self.status is not Status.FAILS


# ---------------------------------------------------------------- rule table

class _Data:
    """Exact prime and prime-sum arrays indexed by n, built once per range."""

    def __init__(self, n_hi: int):
        self.p = np.concatenate(([0], first_primes(2 * n_hi))).astype(np.int64)
        self.sp = prefix_sums(2 * n_hi)
        self.big = self.sp.dtype == object or int(self.p[-1]) * n_hi * 100_000 >= _INT64_SAFE

    def ints(self, arr: np.ndarray) -> np.ndarray:
        return arr.astype(object) if self.big else arr.astype(np.int64)


@dataclass(frozen=True)
class Rule:
    name: str
    min_n: int
    strict: bool
    exact: bool
    sides: Callable[[np.ndarray, _Data], tuple[np.ndarray, np.ndarray]]
    scale: int = 1  # exact sides are stored multiplied by this
    description: str = ""


def _ratio(n: np.ndarray, d: _Data) -> np.ndarray:
    sums = d.sp[2 * n]
    sums = sums.astype(np.float64) if sums.dtype != object else np.array([float(x) for x in sums])
    nf = n.astype(np.float64)
    return sums / (2 * nf * nf * np.log(nf))


def _logs(n: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    nf = n.astype(np.float64)
    L = np.log(nf)
    with np.errstate(invalid="ignore", divide="ignore"):
        LL = np.log(L)
    return nf, L, LL


def _pf(n: np.ndarray, d: _Data) -> np.ndarray:
    return d.p[n].astype(np.float64)


def _sf(n: np.ndarray, d: _Data) -> np.ndarray:
    v = d.sp[2 * n]
    return np.array([float(x) for x in v]) if v.dtype == object else v.astype(np.float64)


def _mandl(n, d):
    return 2 * d.ints(d.sp[n]), d.ints(n) * d.ints(d.p[n])


def _mandl_s(n, d):
    return d.ints(d.sp[2 * n]), d.ints(n) * d.ints(d.p[2 * n])


def _robin(n, d):
    return d.ints(n) * d.ints(d.p[n // 2]), d.ints(d.sp[n])


def _hassani(n, d):
    # 0.01659 n^2 < (n/2) p_n - S'_n, scaled by 10^5
    ni = d.ints(n)
    return 1659 * ni * ni, 50_000 * (ni * d.ints(d.p[n]) - 2 * d.ints(d.sp[n]))


def _ratio_lower(n, d):
    return np.ones(len(n)), _ratio(n, d)


def _ratio_upper(n, d):
    _, L, _ = _logs(n)
    return _ratio(n, d), 1 + (math.log(2) + np.log(np.log(2.0 * n))) / L


def _sun(n, d):
    nf, L, _ = _logs(n)
    return 2 + 2 * nf * nf * (L + math.log(2) - 0.5), _sf(n, d)


def _dusart_lower(n, d):
    nf, L, LL = _logs(n)
    return nf * (L + LL - 1), _pf(n, d)


def _dusart_upper(n, d):
    nf, L, LL = _logs(n)
    return _pf(n, d), nf * (L + LL)


def _dusart_lower_refined(n, d):
    nf, L, LL = _logs(n)
    return nf * (L + LL - 1 + (LL - 2.2) / L), _pf(n, d)


def _dusart_upper_refined(n, d):
    nf, L, LL = _logs(n)
    return _pf(n, d), nf * (L + LL - 1 + (LL - 2) / L)


def _refined_lower(n, d):
    _, L, LL = _logs(n)
    return 1 + (LL - 1) / L + (LL - 2.2) / (L * L), _ratio(n, d)


def _refined_upper(n, d):
    nf, L, _ = _logs(n)
    L2 = np.log(2 * nf)
    LL2 = np.log(L2)
    return _ratio(n, d), 1 + (LL2 + math.log(2) - 1) / L + (LL2 - 2) / (L * L2)


RULES: dict[str, Rule] = {r.name: r for r in (
    Rule("mandl", 9, True, True, _mandl, description="2 S'_n < n p_n"),
    Rule("mandl_s", 5, True, True, _mandl_s, description="S_n < n p_2n"),
    Rule("robin", 2, False, True, _robin, description="n p_[n/2] <= S'_n"),
    Rule("hassani", 10, True, True, _hassani, 100_000, "0.01659 n^2 < (n/2) p_n - S'_n"),
    Rule("ratio_lower", 3, False, False, _ratio_lower, description="1 <= S_n/(2n^2 ln n)"),
    Rule("ratio_upper", 3, True, False, _ratio_upper,
         description="S_n/(2n^2 ln n) < 1 + (ln 2 + ln ln 2n)/ln n"),
    Rule("sun_lower", 3, True, False, _sun, description="2 + 2n^2(ln n + ln 2 - 1/2) < S_n"),
    Rule("dusart_lower", 2, True, False, _dusart_lower, description="n(ln n + ln ln n - 1) < p_n"),
    Rule("dusart_upper", 6, True, False, _dusart_upper, description="p_n < n(ln n + ln ln n)"),
    Rule("dusart_lower_refined", 3, False, False, _dusart_lower_refined,
         description="n(ln n + ln ln n - 1 + (ln ln n - 2.2)/ln n) <= p_n"),
    Rule("dusart_upper_refined", 688383, False, False, _dusart_upper_refined,
         description="p_n <= n(ln n + ln ln n - 1 + (ln ln n - 2)/ln n)"),
    Rule("refined_ratio_lower", 3, False, False, _refined_lower,
         description="1 + (ln ln n - 1)/ln n + (ln ln n - 2.2)/ln^2 n <= S_n/(2n^2 ln n)"),
    Rule("refined_ratio_upper", 344192, False, False, _refined_upper,
         description="S_n/(2n^2 ln n) <= 1 + (ln ln 2n + ln 2 - 1)/ln n + (ln ln 2n - 2)/(ln n ln 2n)"),
)}


@dataclass(frozen=True)
class RangeReport:
    """Summary of one rule over every n in [lo, hi]."""

    rule: str
    lo: int
    hi: int
    checked: int
    violations: list[int] = field(default_factory=list)
    inconclusive: list[int] = field(default_factory=list)
    min_margin: float = math.inf
    argmin: int | None = None

    @property
    def clean(self) -> bool:
        return not self.violations


def _decide(rule: Rule, lhs: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(margin as float, holds, fails, inconclusive) arrays."""
    if rule.exact:
        diff = rhs - lhs
        holds = (diff > 0) if rule.strict else (diff >= 0)
        holds = np.asarray(holds, dtype=bool)
        margin = np.array([d / rule.scale for d in diff.tolist()], dtype=np.float64)
        return margin, holds, ~holds, np.zeros(len(holds), dtype=bool)
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    margin = rhs - lhs
    tol = ULP_GUARD * np.spacing(np.maximum(np.abs(lhs), np.abs(rhs)))
    holds = margin > 0 if rule.strict else margin >= 0
    tie = np.abs(margin) <= tol
    return margin, holds, (~holds) & ~tie, tie


def _status(holds: bool, fails: bool, tie: bool) -> Status:
    if tie:
        return Status.INCONCLUSIVE
    return Status.FAILS if fails else Status.HOLDS


def _scalar(x, scale: int) -> int | float:
    if isinstance(x, (int, np.integer)) and scale == 1:
        return int(x)
    return float(x) / scale if scale != 1 else float(x)


def evaluate(rule_name: str, lo: int, hi: int | None = None) -> list[BoundCheck]:
    """One :class:`BoundCheck` per n in [lo, hi] (hi defaults to lo)."""
    rule = _rule(rule_name)
    hi = lo if hi is None else hi
    if lo < rule.min_n:
        raise DomainError(f"{rule.name} applies for n >= {rule.min_n}")
    if hi < lo:
        raise DomainError("need lo <= hi")
    n = np.arange(lo, hi + 1, dtype=np.int64)
    lhs, rhs = rule.sides(n, _Data(hi))
    margin, holds, fails, tie = _decide(rule, lhs, rhs)
    return [BoundCheck(rule.name, int(n[i]), _scalar(lhs[i], rule.scale), _scalar(rhs[i], rule.scale),
                       bool(holds[i]), float(margin[i]), _status(holds[i], fails[i], tie[i]), rule.strict)
            for i in range(len(n))]


def scan_rule(rule_name: str, lo: int, hi: int, chunk: int = 1 << 18) -> RangeReport:
    """Evaluate a rule over [lo, hi] and summarise violations."""
    rule = _rule(rule_name)
    lo = max(lo, rule.min_n)
    if hi < lo:
        raise DomainError(f"{rule.name}: empty range after applying the gate n >= {rule.min_n}")
    data = _Data(hi)
    bad: list[int] = []
    ties: list[int] = []
    best, arg = math.inf, None
    for c_lo in range(lo, hi + 1, chunk):
        n = np.arange(c_lo, min(c_lo + chunk - 1, hi) + 1, dtype=np.int64)
        lhs, rhs = rule.sides(n, data)
        margin, _, fails, tie = _decide(rule, lhs, rhs)
        bad.extend(n[fails].tolist())
        ties.extend(n[tie].tolist())
        i = int(np.argmin(margin))
        if margin[i] < best:
            best, arg = float(margin[i]), int(n[i])
    return RangeReport(rule.name, lo, hi, hi - lo + 1, bad, ties, best, arg)


def _rule(name: str) -> Rule:
    try:
        return RULES[name]
    except KeyError:
        raise DomainError(f"unknown rule {name!r}") from None


def _tightest(checks: Sequence[BoundCheck], name: str, note: str = "") -> BoundCheck:
    """Combine several sides into one check carrying the smallest margin."""
    worst = min(checks, key=lambda c: c.margin)
    if any(c.status is Status.FAILS for c in checks):
        status = Status.FAILS
    elif any(c.status is Status.INCONCLUSIVE for c in checks):
        status = Status.INCONCLUSIVE
    else:
        status = Status.HOLDS
    return BoundCheck(name, worst.n_or_k, worst.lhs, worst.rhs, all(c.holds for c in checks),
                      worst.margin, status, worst.strict, note or worst.name)


# ---------------------------------------------------------------- single points

def check_mandl(n: int) -> BoundCheck:
    """2 S'_n < n p_n, exactly."""
    return evaluate("mandl", n)[0]


def check_mandl_s(n: int) -> BoundCheck:
    """S_n < n p_{2n}, the same inequality at 2n written for S_n."""
    return evaluate("mandl_s", n)[0]


def check_robin(n: int) -> BoundCheck:
    return evaluate("robin", n)[0]


def check_hassani(n: int) -> BoundCheck:
    return evaluate("hassani", n)[0]


def check_prop312(n: int) -> BoundCheck:
    """Both sides of 1 <= S_n/(2n^2 ln n) < 1 + (ln 2 + ln ln 2n)/ln n."""
    sides = evaluate("ratio_lower", n) + evaluate("ratio_upper", n)
    return _tightest(sides, "ratio_band")


def check_sun_lower(n: int) -> BoundCheck:
    return evaluate("sun_lower", n)[0]


_DUSART_FORMS = ("dusart_lower", "dusart_upper", "dusart_lower_refined", "dusart_upper_refined")


def check_dusart_pn(n: int) -> BoundCheck:
    """All applicable two-sided estimates of p_n; the tightest is returned.

    Forms whose gate lies above n are named in ``note``.
    """
    if n < 2:
        raise DomainError("p_n estimates need n >= 2")
    live = [f for f in _DUSART_FORMS if n >= RULES[f].min_n]
    skipped = [f for f in _DUSART_FORMS if f not in live]
    checks = [evaluate(f, n)[0] for f in live]
    worst = _tightest(checks, "dusart_pn")
    note = worst.note + (f"; not applicable: {', '.join(skipped)}" if skipped else "")
    return BoundCheck(worst.name, n, worst.lhs, worst.rhs, worst.holds, worst.margin, worst.status,
                      worst.strict, note)


def dusart_interval(n: int) -> tuple[float, float]:
    """Real endpoints of the interval the refined p_n estimates bracket."""
    L = math.log(n)
    LL = math.log(L)
    return n * (L + LL - 1 + (LL - 2.2) / L), n * (L + LL - 1 + (LL - 2) / L)


def check_dusart_interval(n: int) -> BoundCheck:
    """At least one prime in the refined interval; the length is reported in ``note``."""
    if n < RULES["dusart_upper_refined"].min_n:
        raise DomainError("the interval statement applies for n >= 688383")
    a, b = dusart_interval(n)
    count = prime_count_between(math.ceil(a) - 1, math.floor(b) + 1)
    note = f"interval [{a:.3f}, {b:.3f}], length {b - a:.6g} vs 0.2n/ln n = {0.2 * n / math.log(n):.6g}"
    return BoundCheck("dusart_interval", n, 0, count, count > 0, float(count),
                      Status.HOLDS if count > 0 else Status.FAILS, True, note)


def check_prop315(n: int) -> BoundCheck:
    """Refined bounds on S_n/(2n^2 ln n); the upper form only from its gate."""
    if n < 3:
        raise DomainError("the refined ratio bounds need n >= 3")
    sides = evaluate("refined_ratio_lower", n)
    if n >= RULES["refined_ratio_upper"].min_n:
        sides += evaluate("refined_ratio_upper", n)
        return _tightest(sides, "refined_ratio")
    c = sides[0]
    return BoundCheck("refined_ratio", n, c.lhs, c.rhs, c.holds, c.margin, c.status, c.strict,
                      "upper form not applicable below n = 344192")


# ---------------------------------------------------------------- per-hit rules

def _floor_guarded_arr(x: np.ndarray) -> np.ndarray:
    r = np.round(x)
    return np.where(np.abs(x - r) < 1e-9, r, np.floor(x)).astype(np.int64)


class _HitData:
    """Arrays over a batch of hits plus the prefix sums the rules need."""

    def __init__(self, hits: Sequence[PrimeHit]):
        self.hits = list(hits)
        self.k = np.array([h.k for h in self.hits], dtype=np.int64)
        self.m = np.array([h.m for h in self.hits], dtype=np.int64)
        self.q = np.array([float(h.q) for h in self.hits])
        kf = self.k.astype(np.float64)
        with np.errstate(all="ignore"):
            self.L = np.log(kf)
            self.LL = np.log(self.L)
        self.kf = kf
        self.j = np.where(self.k > 1, _floor_guarded_arr(kf * self.L), 1)
        top = int(max(self.k.max(), self.j.max())) if len(self.k) else 1
        self.P = prefix_sums(2 * top)
        self.p = np.concatenate(([0], first_primes(max(top, 1)))).astype(np.float64)
        self._mk: np.ndarray | None = None

    def t_at(self, idx: np.ndarray) -> np.ndarray:
        sums = self.P[2 * idx]
        sums = np.array([float(x) for x in sums]) if sums.dtype == object else sums.astype(np.float64)
        nf = idx.astype(np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            return sums / (2 * nf * nf * np.log(nf))

    @property
    def mk(self) -> np.ndarray:
        if self._mk is None:
            self._mk = np.array([solve_mk(h.k, h.q).m_k if h.k >= 3 else math.nan for h in self.hits])
        return self._mk


def q_lower_bound(k: int) -> float:
    """2k^2 ln^2 k (ln k + ln ln k)."""
    L = math.log(k)
    return 2.0 * k * k * L * L * (L + math.log(L))


def q_interval(k: int) -> tuple[float, float]:
    """Interval expected to contain the k-th prime term."""
    return _q_interval_arr(np.array([float(k)]))[0][0], _q_interval_arr(np.array([float(k)]))[1][0]


def _q_interval_arr(kf: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    L = np.log(kf)
    LL = np.log(L)
    c = 1 + np.log(2 * np.log(2 * kf)) / L
    base = 2 * kf * kf * L * L
    return base * (L + LL), base * c**5 * (L + LL + 2 * np.log(c))


def kpk_bound(k: int) -> float:
    """2k p_k ln^2 k."""
    return 2.0 * k * nth_prime(k) * math.log(k) ** 2


@dataclass(frozen=True)
class HitRule:
    name: str
    gate: int      # smallest k the claim is made for
    domain: int    # smallest k the formula is defined for
    strict: bool
    exact: bool
    sides: Callable[[_HitData], tuple[np.ndarray, np.ndarray]]
    soft: bool = False  # a failure is reported as info, not as a violation
    description: str = ""


def _h_index_lower(d):
    return np.where(d.k > 1, d.j + 1, 1), d.m


def _h_index_upper(d):
    return d.m, _floor_guarded_arr(1.4 * d.kf * d.L)


def _h_q_lower(d):
    return 2 * d.kf**2 * d.L**2 * (d.L + d.LL), d.q


def _h_q_lower_m(d):
    mf = d.m.astype(np.float64)
    return 2 * mf * mf * np.sqrt(mf) * np.log(mf) / np.sqrt(d.kf * d.L), d.q


def _h_kpk(d):
    return 2 * d.kf * d.p[d.k] * d.L**2, d.q


def _h_interval_lo(d):
    return _q_interval_arr(d.kf)[0], d.q


def _h_interval_hi(d):
    return d.q, _q_interval_arr(d.kf)[1]


def _h_mk_upper(d):
    return d.mk, d.t_at(d.k)


def _h_mk_refined(d):
    return d.mk, d.t_at(d.j)


def _h_mk_below_t_m(d):
    mf = d.m.astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        return d.mk, d.q / (2 * mf * mf * np.log(mf))


HIT_RULES: dict[str, HitRule] = {r.name: r for r in (
    HitRule("index_lower", 1, 1, False, True, _h_index_lower, description="floor(k ln k) + 1 <= m"),
    HitRule("index_upper", 10_000, 2, False, True, _h_index_upper,
            description="m <= floor(1.4 k ln k)"),
    HitRule("q_lower", 2, 2, True, False, _h_q_lower, description="q_k > 2k^2 ln^2 k (ln k + ln ln k)"),
    HitRule("q_lower_m", 252_028, 2, True, False, _h_q_lower_m,
            description="q_k > 2m^2 sqrt(m) ln m / sqrt(k ln k)"),
    HitRule("q_lower_kpk", 2, 2, True, False, _h_kpk, soft=True,
            description="q_k > 2k p_k ln^2 k (claimed beyond an unspecified k_0)"),
    HitRule("q_interval_lower", 2, 2, False, False, _h_interval_lo,
            description="q_k at or above the lower end of its predicted interval"),
    HitRule("q_interval_upper", 2, 2, False, False, _h_interval_hi,
            description="q_k at or below the upper end of its predicted interval"),
    HitRule("mk_upper", 3, 3, False, False, _h_mk_upper, description="M_k <= t_k"),
    HitRule("mk_refined", 50_000_000, 3, False, False, _h_mk_refined,
            description="M_k <= t_floor(k ln k)"),
    HitRule("mk_below_t_m", 4_000_000, 3, True, False, _h_mk_below_t_m,
            description="M_k < q_k/(2m^2 ln m)"),
)}

HIT_GATES = {name: r.gate for name, r in HIT_RULES.items()}


def _hit_arrays(rule: HitRule, data: _HitData):
    """(lhs, rhs, margin, holds, status codes) over the batch."""
    live = data.k >= rule.domain
    n = len(data.k)
    if live.any():
        with np.errstate(all="ignore"):  # entries outside the domain are masked below
            lhs, rhs = rule.sides(data)
    else:
        lhs = rhs = np.full(n, np.nan)
    lhs = np.where(live, lhs, np.nan) if not rule.exact else lhs
    rhs = np.where(live, rhs, np.nan) if not rule.exact else rhs
    exact = rule.exact and bool(live.any())
    if exact:
        diff = np.asarray(rhs, dtype=np.int64) - np.asarray(lhs, dtype=np.int64)
        margin = diff.astype(np.float64)
        holds = diff > 0 if rule.strict else diff >= 0
        tie = np.zeros(n, dtype=bool)
    else:
        lhs = np.asarray(lhs, dtype=np.float64)
        rhs = np.asarray(rhs, dtype=np.float64)
        margin = rhs - lhs
        with np.errstate(invalid="ignore"):
            holds = margin > 0 if rule.strict else margin >= 0
            tie = np.abs(margin) <= ULP_GUARD * np.spacing(np.maximum(np.abs(lhs), np.abs(rhs)))
    gated = data.k >= rule.gate
    status = np.where(~(gated & live), "na", np.where(tie, "tie", np.where(holds, "ok", "bad")))
    return lhs, rhs, margin, holds & live, status


def _to_check(rule: HitRule, k: int, lhs, rhs, margin: float, holds: bool, code: str) -> BoundCheck:
    note = ""
    if code == "na":
        status = Status.NOT_APPLICABLE
        note = f"applies for k >= {rule.gate}"
    elif code == "tie":
        status = Status.INCONCLUSIVE
    elif code == "ok":
        status = Status.HOLDS
    elif rule.soft:
        status, note = Status.INFO, "fails here; claimed only beyond some k_0"
    else:
        status = Status.FAILS
    if rule.exact and math.isfinite(lhs) and math.isfinite(rhs):
        lhs, rhs = int(lhs), int(rhs)
    else:
        lhs, rhs = float(lhs), float(rhs)
    return BoundCheck(rule.name, k, lhs, rhs, bool(holds), float(margin), status, rule.strict, note)


def check_hit_conjectures(hit: PrimeHit, pi_table: object = None) -> list[BoundCheck]:
    """Evaluate every per-hit rule at ``hit``.

    Rules below their index gate come back ``not-applicable``; their sides are
    still filled in when the formula is defined. ``q_lower_kpk`` is claimed
    only from an unspecified k_0 on, so a failure is reported as ``info``
    (see :func:`kpk_threshold`). ``pi_table`` is accepted for interface
    symmetry with :func:`check_pi_conjectures` and is not needed.
    """
    data = _HitData([hit])
    out = []
    for rule in HIT_RULES.values():
        lhs, rhs, margin, holds, code = _hit_arrays(rule, data)
        out.append(_to_check(rule, hit.k, lhs[0], rhs[0], margin[0], holds[0], code[0]))
    return out


@dataclass(frozen=True)
class HitScanReport:
    rule: str
    checked: int
    not_applicable: int
    violations: list[int] = field(default_factory=list)   # k values
    inconclusive: list[int] = field(default_factory=list)
    soft_failures: list[int] = field(default_factory=list)
    min_margin: float = math.inf
    argmin: int | None = None


def scan_hits(hits: Sequence[PrimeHit], rules: Iterable[str] | None = None) -> list[HitScanReport]:
    """Evaluate per-hit rules over a whole hit list."""
    data = _HitData(hits)
    out = []
    for name in (rules or HIT_RULES):
        rule = HIT_RULES[name] if name in HIT_RULES else None
        if rule is None:
            raise DomainError(f"unknown hit rule {name!r}")
        _, _, margin, _, code = _hit_arrays(rule, data)
        applicable = code != "na"
        bad = data.k[code == "bad"].tolist()
        ties = data.k[code == "tie"].tolist()
        best, arg = math.inf, None
        if applicable.any():
            i = int(np.nanargmin(np.where(applicable, margin, np.inf)))
            best, arg = float(margin[i]), int(data.k[i])
        out.append(HitScanReport(rule.name, int(applicable.sum()), int((~applicable).sum()),
                                 [] if rule.soft else bad, ties, bad if rule.soft else [],
                                 best, arg))
    return out


def kpk_threshold(hits: Sequence[PrimeHit]) -> int | None:
    """Smallest k from which q_k > 2k p_k ln^2 k holds for every later hit given.

    None if the last hit violates it. Only meaningful relative to the
    scanned range.
    """
    hits = [h for h in hits if h.k >= 2]
    if not hits:
        return None
    _, _, _, holds, _ = _hit_arrays(HIT_RULES["q_lower_kpk"], _HitData(hits))
    if not holds[-1]:
        return None
    bad = np.flatnonzero(~holds)
    return hits[int(bad[-1]) + 1].k if len(bad) else hits[0].k


# ---------------------------------------------------------------- per-row rules

def _float_check(name: str, n: int, lhs: float, rhs: float, strict: bool, gate: int) -> BoundCheck:
    margin = rhs - lhs
    holds = margin > 0 if strict else margin >= 0
    note = ""
    if n < gate:
        status, note = Status.NOT_APPLICABLE, f"applies for n >= {gate}"
    elif abs(margin) <= ULP_GUARD * math.ulp(max(abs(lhs), abs(rhs))):
        status = Status.INCONCLUSIVE
    else:
        status = Status.HOLDS if holds else Status.FAILS
    return BoundCheck(name, n, lhs, rhs, holds, margin, status, strict, note)


def _int_check(name: str, n: int, lhs: int, rhs: int, strict: bool, gate: int) -> BoundCheck:
    holds = rhs > lhs if strict else rhs >= lhs
    if n < gate:
        status, note = Status.NOT_APPLICABLE, f"applies for n >= {gate}"
    else:
        status, note = (Status.HOLDS if holds else Status.FAILS), ""
    return BoundCheck(name, n, lhs, rhs, holds, float(rhs - lhs), status, strict, note)


PI_GATES = {
    "pi_below_prime_pi": 10_000,
    "pi_below_n_over_log": 100_000,
    "pi_at_least_x0": 4_000_000,
    "pi_at_least_y0": 4_000_000,
    "pi_below_sqrt_k1k2": 100_000,
}


def check_pi_conjectures(row: PiCheckpointRow, prime_table: object = None) -> list[BoundCheck]:
    """Rules about the count pi_n of prime terms among the first n.

    Every rule is evaluated; those below their gate are labelled
    ``not-applicable``. The last entry is the empirical Chebyshev band
    pi_n ln n / n, reported as ``info``.
    """
    n, pi_n = row.n, row.pi_n
    if n < 10:
        raise DomainError("count rules need n >= 10")
    g = PI_GATES
    table = prime_table if prime_table is not None else table_with_limit(n)
    out = [
        _int_check("pi_below_prime_pi", n, pi_n, table.pi(n), True, g["pi_below_prime_pi"]),
        _float_check("pi_below_n_over_log", n, float(pi_n), n / math.log(n), True,
                     g["pi_below_n_over_log"]),
        _int_check("pi_at_least_x0", n, root_k0(n), pi_n, False, g["pi_at_least_x0"]),
        _int_check("pi_at_least_y0", n, root_k1(n), pi_n, False, g["pi_at_least_y0"]),
        _int_check("pi_below_sqrt_k1k2", n, pi_n, math.isqrt(root_k1(n) * root_k2(n)), True,
                   g["pi_below_sqrt_k1k2"]),
    ]
    band = pi_n * math.log(n) / n
    out.append(BoundCheck("chebyshev_band", n, band, band, True, 0.0, Status.INFO, False,
                          "pi_n ln n / n"))
    return out


def pi_conjecture_sweep(rows: Iterable[PiCheckpointRow]) -> list[BoundCheck]:
    out: list[BoundCheck] = []
    rows = list(rows)
    if rows:
        table = table_with_limit(max(r.n for r in rows))
        for r in rows:
            out += check_pi_conjectures(r, table)
    return out


def scan_pi_rule(rule: str, hits: Sequence[PrimeHit], n_max: int, lo: int | None = None) -> RangeReport:
    """Check a count rule at every n in [gate, n_max] using the hit list.

    ``rule`` is ``pi_below_prime_pi`` or ``pi_below_n_over_log``.
    """
    if rule not in ("pi_below_prime_pi", "pi_below_n_over_log"):
        raise DomainError(f"range scans support only the two count rules, not {rule!r}")
    lo = max(PI_GATES[rule], lo or 0)
    if n_max < lo:
        raise DomainError(f"{rule} applies for n >= {lo}")
    counts = pi_counts(hits, n_max)[lo:]
    n = np.arange(lo, n_max + 1, dtype=np.int64)
    if rule == "pi_below_prime_pi":
        primes = table_with_limit(n_max).primes
        margin = (np.searchsorted(primes, n, side="right") - counts).astype(np.float64)
        bad = margin <= 0
        tie = np.zeros(len(n), dtype=bool)
    else:
        bound = n / np.log(n.astype(np.float64))
        margin = bound - counts
        tie = np.abs(margin) <= ULP_GUARD * np.spacing(bound)
        bad = (margin <= 0) & ~tie
    i = int(np.argmin(margin))
    return RangeReport(rule, lo, n_max, len(n), n[bad].tolist(), n[tie].tolist(),
                       float(margin[i]), int(n[i]))
