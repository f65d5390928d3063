"""Tables and verification suites built on top of the library.

Every cell is recomputed from exact prime sums and the scanned hits; nothing
is copied from reference values. Formatting rules: reals print with six
significant digits, exact integers in full, and the approximate ``q`` column
of table 1 in three-digit scientific notation.
"""
from __future__ import annotations

import csv
import io
import json
import math
from bisect import bisect_right
from dataclasses import asdict, dataclass, field, fields
from importlib import resources
from typing import Callable, Iterable, Sequence

from .analysis import (mk_refined, mk_upper, monotonicity_scan, q_diagnostics, root_k0, root_k1,
                       root_k2, solve_mk, table5_ratios)
from .bounds import (HIT_RULES, PI_GATES, RULES, BoundCheck, HitScanReport, RangeReport, Status,
                     check_dusart_interval, check_pi_conjectures, kpk_threshold, scan_hits,
                     scan_pi_rule, scan_rule)
from .errors import DomainError, InsufficientDataError
from .prime_sums import Variant
from .primes import table_with_limit
from .scanner import PiCheckpointRow, PrimeHit, scan

DEFAULTS_VERSION = 1


def load_defaults() -> dict:
    """Sample points shipped with the package (versioned)."""
    text = resources.files("primesums").joinpath("data/defaults.json").read_text()
    data = json.loads(text)
    if data.get("version") != DEFAULTS_VERSION:
        raise DomainError(f"defaults file version {data.get('version')} != {DEFAULTS_VERSION}")
    return data


# ---------------------------------------------------------------- hit source

@dataclass
class HitSet:
    """Hits of the plain sequence known to cover indices 1..covered."""

    hits: list[PrimeHit]
    covered: int

    @classmethod
    def scanned(cls, n_max: int, workers: int = 1) -> "HitSet":
        return cls(scan(Variant(), n_max, workers=workers).hits, n_max)

    def row(self, n: int) -> PiCheckpointRow:
        if n > self.covered:
            raise InsufficientDataError(f"hits cover n <= {self.covered}, need n = {n} "
                                        "(pass --max-n or --checkpoint to state the scan bound)")
        ms = [h.m for h in self.hits]
        k = bisect_right(ms, n)
        last = self.hits[k - 1] if k else None
        return PiCheckpointRow(n, k, last.q if last else None, last.m if last else None)

    def last_hit(self, n: int) -> PrimeHit:
        r = self.row(n)
        if r.pi_n == 0:
            raise InsufficientDataError(f"no prime term up to n = {n}")
        return self.hits[r.pi_n - 1]


# ---------------------------------------------------------------- table rows

@dataclass(frozen=True)
class Table1Row:
    n: int
    k: int
    q: int
    q_approx: str
    n_minus_m: int
    M_k: float
    M_k_refined: float
    M_k_upper: float
    ratio_klogk_over_m: float
    ratio_lastcol: float


@dataclass(frozen=True)
class Table2Row:
    n: int
    pi_n: int
    prime_pi: int
    ratio_n_over_log: float
    ratio_prime_pi: float


@dataclass(frozen=True)
class Table3Row:
    n: int
    k: int
    m: int
    q: int
    ratio_2k2log3k: float
    V: float
    Q: float
    Q1: float
    Q2: float


@dataclass(frozen=True)
class Table4Row:
    n: int
    k: int
    k0: int
    k_minus_k0: int


@dataclass(frozen=True)
class Table5Row:
    n: int
    k: int
    k0: int
    delta0: float
    k1: int
    delta1: float
    k2: int
    delta2: float
    eta: float
    xi: float


def sci3(x: int | float) -> str:
    """Three significant digits in scientific notation, e.g. 2.12e+10."""
    return f"{float(x):.2e}"


def table1(hs: HitSet, points: Iterable[int]) -> list[Table1Row]:
    out = []
    for n in points:
        h = hs.last_hit(n)
        k, m, q = h.k, h.m, h.q
        lk = math.log(k)
        out.append(Table1Row(
            n, k, q, sci3(q), n - m, solve_mk(k, q).m_k, mk_refined(k), mk_upper(k),
            k * lk / m, q * math.sqrt(k * lk) / (2 * m**2.5 * math.log(m))))
    return out


def table2(hs: HitSet, points: Iterable[int]) -> list[Table2Row]:
    points = list(points)
    table = table_with_limit(max(points))
    out = []
    for n in points:
        r = hs.row(n)
        pi = table.pi(n)
        out.append(Table2Row(n, r.pi_n, pi, r.pi_n * math.log(n) / n, r.pi_n / pi))
    return out


def table3(hs: HitSet, points: Iterable[int]) -> list[Table3Row]:
    out = []
    for n in points:
        h = hs.last_hit(n)
        d = q_diagnostics(h)
        out.append(Table3Row(n, h.k, h.m, h.q, d.ratio_2k2log3k, d.V, d.Q, d.Q1, d.Q2))
    return out


def table4(hs: HitSet, points: Iterable[int]) -> list[Table4Row]:
    out = []
    for n in points:
        k = hs.row(n).pi_n
        k0 = root_k0(n)
        out.append(Table4Row(n, k, k0, k - k0))
    return out


def table5(hs: HitSet, points: Iterable[int]) -> list[Table5Row]:
    out = []
    for n in points:
        k = hs.row(n).pi_n
        k0, k1, k2 = root_k0(n), root_k1(n), root_k2(n)
        r = table5_ratios(n, k, k0, k1, k2)
        out.append(Table5Row(n, k, k0, r.delta0, k1, r.delta1, k2, r.delta2, r.eta, r.xi))
    return out


TABLES: dict[int, Callable[[HitSet, Iterable[int]], list]] = {
    1: table1, 2: table2, 3: table3, 4: table4, 5: table5,
}

# displayed columns in the reference order: (header, attribute)
COLUMNS: dict[int, list[tuple[str, str]]] = {
    1: [("n", "n"), ("k", "k"), ("q_approx", "q_approx"), ("n-m", "n_minus_m"), ("M_k", "M_k"),
        ("M_k^(l)", "M_k_refined"), ("M_k^(u)", "M_k_upper"), ("klogk/m", "ratio_klogk_over_m"),
        ("S_m*sqrt(klogk)/(2m^(5/2)logm)", "ratio_lastcol")],
    2: [("n", "n"), ("pi_n/(n/logn)", "ratio_n_over_log"), ("pi_n/pi(n)", "ratio_prime_pi")],
    3: [("n", "n"), ("k", "k"), ("q_k", "q"), ("q_k/(2k^2log^3k)", "ratio_2k2log3k"),
        ("q_k/(2m^2logm)", "V"), ("Q_k", "Q"), ("Q_k'", "Q1"), ("Q_k''", "Q2")],
    4: [("n", "n"), ("k", "k"), ("k-k0", "k_minus_k0")],
    5: [("n", "n"), ("k0", "k0"), ("delta0", "delta0"), ("k1", "k1"), ("delta1", "delta1"),
        ("k2", "k2"), ("delta2", "delta2"), ("eta", "eta"), ("xi", "xi")],
}


def cell(value: object) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    return "" if value is None else str(value)


def render(which: int, rows: Sequence, fmt: str = "csv") -> str:
    """Serialise table rows as csv, markdown or json."""
    cols = COLUMNS[which]
    if fmt == "json":
        return json.dumps({"table": which, "rows": [_jsonable(asdict(r)) for r in rows]}, indent=1) + "\n"
    body = [[cell(getattr(r, attr)) for _, attr in cols] for r in rows]
    heads = [h for h, _ in cols]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(heads)
        w.writerows(body)
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(heads) + " |", "|" + "---|" * len(heads)]
        lines += ["| " + " | ".join(b) + " |" for b in body]
        return "\n".join(lines) + "\n"
    raise DomainError(f"unknown format {fmt!r}")


def _jsonable(d: dict) -> dict:
    # exact integers stay integers; json has no 128-bit limit in Python
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in d.items()}


# ---------------------------------------------------------------- verification

@dataclass
class SuiteResult:
    suite: str
    n_max: int
    checks: list[BoundCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(c.status is Status.FAILS for c in self.checks)

    def counts(self) -> dict[str, int]:
        out = {s.value: 0 for s in Status}
        for c in self.checks:
            out[c.status.value] += 1
        return out


class VerifyContext:
    """Lazily scanned hits shared by the suites of one verify run."""

    def __init__(self, n_max: int, hits: HitSet | None = None, workers: int = 1,
                 points: Sequence[int] | None = None):
        self.n_max = n_max
        self.workers = workers
        self._hits = hits
        base = points if points is not None else load_defaults()["checkpoints"]
        self.points = sorted({p for p in base if 10 <= p <= n_max} | {n_max})

    @property
    def hits(self) -> HitSet:
        if self._hits is None:
            self._hits = HitSet.scanned(self.n_max, self.workers)
        if self._hits.covered < self.n_max:
            raise InsufficientDataError(f"hits cover n <= {self._hits.covered}, need {self.n_max}")
        return self._hits


def _range_check(rep: RangeReport, strict_gate_note: str = "") -> BoundCheck:
    """Collapse a range scan into one summary check (sides left as NaN)."""
    bad = len(rep.violations)
    note = (f"n in [{rep.lo}, {rep.hi}]: {rep.checked} checked, min margin {rep.min_margin:.6g}"
            f" at n={rep.argmin}")
    if rep.inconclusive:
        note += f", inconclusive at {rep.inconclusive[:10]}"
    if bad:
        note += f", violations at {rep.violations[:10]}"
    status = Status.FAILS if bad else (Status.INCONCLUSIVE if rep.inconclusive else Status.HOLDS)
    return BoundCheck(rep.rule, rep.hi, math.nan, math.nan, bad == 0, rep.min_margin, status,
                      RULES[rep.rule].strict if rep.rule in RULES else True, note + strict_gate_note)


def _gated(rule: str, gate: int, n_max: int) -> BoundCheck:
    return BoundCheck(rule, n_max, math.nan, math.nan, False, math.nan, Status.NOT_APPLICABLE, True,
                      f"applies for n >= {gate}")


def _rules_suite(names: Sequence[str]) -> Callable[[VerifyContext], list[BoundCheck]]:
    def run(ctx: VerifyContext) -> list[BoundCheck]:
        out = []
        for name in names:
            gate = RULES[name].min_n
            if ctx.n_max < gate:
                out.append(_gated(name, gate, ctx.n_max))
            else:
                out.append(_range_check(scan_rule(name, gate, ctx.n_max)))
        return out
    return run


def _mono_suite(seq: str, threshold: int | None) -> Callable[[VerifyContext], list[BoundCheck]]:
    """threshold None: no exception allowed; else every exception must be < threshold."""
    def run(ctx: VerifyContext) -> list[BoundCheck]:
        rep = monotonicity_scan(seq, ctx.n_max)
        idx = rep.exception_indices
        note = (f"{rep.count} exceptions on [{rep.start}, {ctx.n_max}], max {rep.max_exception}"
                + (f"; indices {idx}" if 0 < len(idx) <= 60 else ""))
        if threshold is None:
            return [BoundCheck(f"{seq}_monotone", ctx.n_max, rep.count, 0, rep.count == 0,
                               float(-rep.count), Status.HOLDS if rep.count == 0 else Status.FAILS,
                               False, note)]
        top = rep.max_exception or 0
        holds = top < threshold
        return [BoundCheck(f"{seq}_monotone_from_{threshold}", ctx.n_max, top, threshold, holds,
                           float(threshold - top), Status.HOLDS if holds else Status.FAILS, True, note)]
    return run


def _hit_check(rep: HitScanReport, n_max: int, extra: str = "") -> BoundCheck:
    if rep.checked == 0:
        return BoundCheck(rep.rule, n_max, math.nan, math.nan, False, math.nan,
                          Status.NOT_APPLICABLE, True,
                          f"applies for k >= {HIT_RULES[rep.rule].gate}; no hit that large up to n = {n_max}")
    bad = len(rep.violations)
    note = (f"{rep.checked} hits checked ({rep.not_applicable} below gate), min margin "
            f"{rep.min_margin:.6g} at k={rep.argmin}")
    if rep.violations:
        note += f", violations at k={rep.violations[:12]}" + (" ..." if bad > 12 else "")
    if rep.soft_failures:
        note += f", fails at k={rep.soft_failures[:12]}" + (" ..." if len(rep.soft_failures) > 12 else "")
    if rep.inconclusive:
        note += f", inconclusive at k={rep.inconclusive[:10]}"
    if bad:
        status = Status.FAILS
    elif rep.soft_failures:
        status = Status.INFO
    elif rep.inconclusive:
        status = Status.INCONCLUSIVE
    else:
        status = Status.HOLDS
    return BoundCheck(rep.rule, n_max, math.nan, math.nan, bad == 0, rep.min_margin, status,
                      HIT_RULES[rep.rule].strict, note + extra)


def _hits_suite(names: Sequence[str]) -> Callable[[VerifyContext], list[BoundCheck]]:
    def run(ctx: VerifyContext) -> list[BoundCheck]:
        hits = ctx.hits.hits
        out = []
        for rep in scan_hits(hits, names):
            extra = ""
            if rep.rule == "q_lower_kpk":
                k0 = kpk_threshold(hits)
                extra = f"; holds for every hit from k = {k0}" if k0 else "; fails at the last hit"
            out.append(_hit_check(rep, ctx.n_max, extra))
        return out
    return run


def _rows_suite(names: Sequence[str], ranged: bool = False) -> Callable[[VerifyContext], list[BoundCheck]]:
    def run(ctx: VerifyContext) -> list[BoundCheck]:
        hs = ctx.hits
        table = table_with_limit(ctx.n_max)
        out = []
        for n in ctx.points:
            out += [c for c in check_pi_conjectures(hs.row(n), table) if c.name in names]
        if ranged:
            for name in names:
                if ctx.n_max >= PI_GATES[name]:
                    out.append(_range_check(scan_pi_rule(name, hs.hits, ctx.n_max)))
        return out
    return run


def _dusart_interval_suite(ctx: VerifyContext) -> list[BoundCheck]:
    gate = RULES["dusart_upper_refined"].min_n
    pts = sorted({gate} | {p for p in load_defaults()["checkpoints"] if gate < p <= max(ctx.n_max, gate)}
                 | ({ctx.n_max} if ctx.n_max > gate else set()))
    return [check_dusart_interval(n) for n in pts]


def _dusart_suite(ctx: VerifyContext) -> list[BoundCheck]:
    return _rules_suite(["dusart_lower", "dusart_upper", "dusart_lower_refined",
                         "dusart_upper_refined"])(ctx)


SUITES: dict[str, tuple[str, Callable[[VerifyContext], list[BoundCheck]]]] = {
    "prop-5.1": ("S_n/(2n^2) increases for n >= 2", _mono_suite("v", None)),
    "rem-5.2": ("2S'_n/n^2 increases for n >= 4", _mono_suite("vprime", None)),
    "conj-5.3": ("S_n/(2n^2 ln n) decreases from n = 1100", _mono_suite("t", 1100)),
    "rem-5.4": ("2S'_n/(n^2 ln(n/2)) decreases from n = 2199", _mono_suite("tprime", 2199)),
    "conj-4.12": ("pi_n < pi(n) (n >= 10^4) and pi_n < n/ln n (n >= 10^5)",
                  _rows_suite(["pi_below_prime_pi", "pi_below_n_over_log"], ranged=True)),
    "conj-6.9": ("pi_n >= floor(x_0(n)) for n >= 4*10^6", _rows_suite(["pi_at_least_x0"])),
    "conj-6.10": ("pi_n >= floor(y_0(n)) for n >= 4*10^6", _rows_suite(["pi_at_least_y0"])),
    "conj-6.12": ("pi_n < floor(sqrt(k_1 k_2)) for n >= 10^5", _rows_suite(["pi_below_sqrt_k1k2"])),
    "mandl": ("2S'_n < n p_n and S_n < n p_2n", _rules_suite(["mandl", "mandl_s"])),
    "robin": ("n p_[n/2] <= S'_n", _rules_suite(["robin"])),
    "hassani": ("(n/2) p_n - S'_n > 0.01659 n^2", _rules_suite(["hassani"])),
    "prop-3.12": ("1 <= S_n/(2n^2 ln n) < 1 + (ln 2 + ln ln 2n)/ln n",
                  _rules_suite(["ratio_lower", "ratio_upper"])),
    "sun": ("S_n > 2 + 2n^2(ln n + ln 2 - 1/2)", _rules_suite(["sun_lower"])),
    "dusart": ("explicit bounds on p_n", _dusart_suite),
    "prop-3.15": ("refined bounds on S_n/(2n^2 ln n)",
                  _rules_suite(["refined_ratio_lower", "refined_ratio_upper"])),
    "dusart-interval": ("a prime in the refined p_n interval", _dusart_interval_suite),
    "conj-4.6": ("floor(k ln k) + 1 <= m, and m <= floor(1.4 k ln k) for k >= 10^4",
                 _hits_suite(["index_lower", "index_upper"])),
    "cor-4.7": ("q_k > 2k^2 ln^2 k (ln k + ln ln k)", _hits_suite(["q_lower"])),
    "conj-4.9": ("q_k > 2m^2 sqrt(m) ln m / sqrt(k ln k) for k >= 252028", _hits_suite(["q_lower_m"])),
    "conj-4.10": ("q_k > 2k p_k ln^2 k from some k_0", _hits_suite(["q_lower_kpk"])),
    "conj-5.7": ("M_k <= t_k", _hits_suite(["mk_upper"])),
    "conj-5.13": ("M_k <= t_floor(k ln k) for k >= 5*10^7", _hits_suite(["mk_refined"])),
    "cor-5.14": ("q_k inside its predicted interval", _hits_suite(["q_interval_lower", "q_interval_upper"])),
    "conj-6.5": ("M_k < q_k/(2m^2 ln m) for k >= 4*10^6", _hits_suite(["mk_below_t_m"])),
}

BOUND_SUITES = ("mandl", "robin", "hassani", "prop-3.12", "sun", "dusart", "prop-3.15", "dusart-interval")
HIT_SUITES = ("conj-4.6", "cor-4.7", "conj-4.9", "conj-4.10", "conj-5.7", "conj-5.13", "cor-5.14", "conj-6.5")
GROUPS = {
    "bounds": BOUND_SUITES,
    "hits": HIT_SUITES,
    "monotonicity": ("prop-5.1", "rem-5.2", "conj-5.3", "rem-5.4"),
    "counts": ("conj-4.12", "conj-6.9", "conj-6.10", "conj-6.12"),
}
GROUPS["all"] = tuple(s for g in ("monotonicity", "bounds", "counts", "hits") for s in GROUPS[g])


def suite_names(name: str) -> tuple[str, ...]:
    if name in SUITES:
        return (name,)
    if name in GROUPS:
        return GROUPS[name]
    raise DomainError(f"unknown suite {name!r}; choose from {', '.join(list(SUITES) + list(GROUPS))}")


def run_suite(name: str, ctx: VerifyContext) -> list[SuiteResult]:
    return [SuiteResult(s, ctx.n_max, SUITES[s][1](ctx)) for s in suite_names(name)]


def _num(x: object) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "-"
    return cell(x)


def format_results(results: Sequence[SuiteResult]) -> str:
    lines = []
    for res in results:
        lines.append(f"suite {res.suite}: {SUITES[res.suite][0]}  (n_max = {res.n_max})")
        live = [c for c in res.checks if c.status is not Status.NOT_APPLICABLE]
        gated = [c for c in res.checks if c.status is Status.NOT_APPLICABLE]
        for c in live:
            head = f"  {c.status.value.upper():<12} {c.name} @ {c.n_or_k}: "
            if isinstance(c.lhs, float) and math.isnan(c.lhs):
                lines.append(head + c.note)
            else:
                lines.append(head + f"lhs={_num(c.lhs)} rhs={_num(c.rhs)} margin={_num(c.margin)}"
                             + (f"  [{c.note}]" if c.note else ""))
        if gated:
            lines.append("  not applicable:")
            for c in gated:
                vals = "" if isinstance(c.lhs, float) and math.isnan(c.lhs) else \
                    f" lhs={_num(c.lhs)} rhs={_num(c.rhs)} (would {'hold' if c.holds else 'fail'})"
                lines.append(f"    {c.name} @ {c.n_or_k}:{vals}  [{c.note}]")
        n = res.counts()
        lines.append(f"  result: {'PASS' if res.passed else 'FAIL'} ({n['holds']} holds, {n['fails']} fails, "
                     f"{n['inconclusive']} inconclusive, {n['info']} info, {n['not-applicable']} not applicable)")
    return "\n".join(lines) + "\n"


def results_json(results: Sequence[SuiteResult]) -> str:
    out = []
    for res in results:
        out.append({"suite": res.suite, "n_max": res.n_max, "passed": res.passed,
                    "checks": [_jsonable({**asdict(c), "status": c.status.value}) for c in res.checks]})
    return json.dumps(out, indent=1) + "\n"


def check_fields() -> list[str]:
    return [f.name for f in fields(BoundCheck)]
