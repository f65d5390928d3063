"""``primesums`` command line.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
3 capacity or data error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import analysis, bounds, report
from .errors import (CapacityError, DigestMismatchError, DomainError, InsufficientDataError,
                     NoRootError, OutOfProvenRangeError, PrimeSumsError)
from .prime_sums import Variant
from .scanner import Checkpoint, PrimeHit, read_hits_csv, resume, scan, write_hits_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3
MIN_CADENCE = 1000


@dataclass(frozen=True)
class RunConfig:
    command: str
    variant: Variant
    n_max: int
    checkpoint_path: Path | None
    resume: bool
    thread_count: int
    output_path: Path | None
    output_format: str
    checkpoint_cadence: int

    def __post_init__(self) -> None:
        if self.thread_count < 1:
            raise DomainError("--threads must be >= 1")
        if self.checkpoint_cadence < MIN_CADENCE:
            raise DomainError(f"--cadence must be >= {MIN_CADENCE}")
        if self.n_max < 1:
            raise DomainError("--max-n must be >= 1")


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        variant=Variant.parse(args.variant),
        n_max=args.max_n,
        checkpoint_path=Path(args.checkpoint) if args.checkpoint else None,
        resume=args.resume,
        thread_count=args.threads,
        output_path=Path(args.emit) if args.emit else None,
        output_format=args.format,
        checkpoint_cadence=args.cadence,
    )


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        _write_atomic(path, text)


# ---------------------------------------------------------------- commands

def cmd_scan(cfg: RunConfig) -> int:
    points = [p for p in report.load_defaults()["checkpoints"] if p <= cfg.n_max]
    points = sorted(set(points) | {cfg.n_max})

    def on_checkpoint(cp: Checkpoint, hits: list[PrimeHit]) -> None:
        # hits first, then the checkpoint that vouches for them
        if cfg.output_path is not None:
            _write_atomic(cfg.output_path, write_hits_csv(hits))
        if cfg.checkpoint_path is not None:
            _write_atomic(cfg.checkpoint_path, cp.to_json() + "\n")

    kw = dict(workers=cfg.thread_count, cadence=cfg.checkpoint_cadence, on_checkpoint=on_checkpoint)
    if cfg.resume:
        if cfg.checkpoint_path is None or cfg.output_path is None:
            raise DomainError("--resume needs --checkpoint and --emit")
        cp = Checkpoint.load(cfg.checkpoint_path)
        if cp.variant != cfg.variant:
            raise DomainError(f"checkpoint is for variant {cp.variant}, not {cfg.variant}")
        prior = read_hits_csv(cfg.output_path)[:cp.hits_so_far]
        result = resume(cp, cfg.n_max, prior, points, **kw)
    else:
        result = scan(cfg.variant, cfg.n_max, points, **kw)
    rows = [{"n": r.n, "pi_n": r.pi_n, "q_max": r.q_max, "m_of_q_max": r.m_of_q_max} for r in result.rows]
    if cfg.output_format == "json":
        sys.stdout.write(json.dumps({"variant": str(cfg.variant), "hits": len(result.hits), "rows": rows}) + "\n")
    else:
        sys.stdout.write(f"variant {cfg.variant}: {len(result.hits)} prime terms for n <= {cfg.n_max}\n")
        for r in rows:
            sys.stdout.write(f"  pi_{r['n']} = {r['pi_n']}" +
                             (f"  (largest q = {r['q_max']} at m = {r['m_of_q_max']})\n" if r["q_max"] else "\n"))
    return EXIT_OK


def _hitset(args: argparse.Namespace, need: int) -> report.HitSet:
    if args.hits:
        hits = read_hits_csv(args.hits)
        if args.max_n:
            covered = args.max_n
        elif args.checkpoint:
            covered = Checkpoint.load(args.checkpoint).n_last
        else:
            covered = hits[-1].m if hits else 0
        return report.HitSet(hits, covered)
    return report.HitSet.scanned(max(need, args.max_n or 0), args.threads)


def cmd_table(args: argparse.Namespace) -> int:
    which = args.which
    hs = _hitset(args, 0) if args.hits else None
    if args.points:
        points = args.points
    else:
        # default points: the shipped list, clipped to what the data covers
        limit = hs.covered if hs is not None else args.max_n or 1_000_000
        points = [p for p in report.load_defaults()[f"table{which}"] if p <= limit]
    if not points:
        raise InsufficientDataError("no sample points within range")
    if hs is None:
        hs = _hitset(args, max(points))
    rows = report.TABLES[which](hs, points)
    _emit(report.render(which, rows, args.format), Path(args.emit) if args.emit else None)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    names = report.suite_names(args.suite)
    hs = None
    if args.hits:
        hits = read_hits_csv(args.hits)
        hs = report.HitSet(hits, args.max_n)
    ctx = report.VerifyContext(args.max_n, hs, args.threads)
    results = [res for name in names for res in report.run_suite(name, ctx)]
    text = report.results_json(results) if args.format == "json" else report.format_results(results)
    _emit(text, Path(args.emit) if args.emit else None)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_solve_mk(args: argparse.Namespace) -> int:
    sol = analysis.solve_mk(args.k, args.q)
    if args.format == "json":
        print(json.dumps({"k": sol.k, "q": sol.q, "M_k": sol.m_k, "residual": sol.residual}))
    else:
        print(f"M_{sol.k} = {sol.m_k:.6f}  (q = {sol.q}, relative residual {sol.residual:.2e})")
    return EXIT_OK


def cmd_series(args: argparse.Namespace) -> int:
    kind = args.kind.replace("-", "_")
    if args.hits:
        hits = read_hits_csv(args.hits)
        covered = args.max_n or (hits[-1].m if hits else 0)
    else:
        n = args.max_n or _series_scan_bound(kind, args.upto)
        hits, covered = analysis.hits_upto(n, args.threads), n
    led = analysis.series_partial(kind, args.upto, hits, eps=args.eps, n_covered=covered)
    if args.format == "json":
        print(json.dumps({"kind": led.kind.value, "upto": led.upto, "partial_sum": led.partial_sum,
                          "comparator": led.comparator}))
    else:
        print(f"{led.kind.value} up to {led.upto}: partial sum {led.partial_sum:.6g}, "
              f"comparator {led.comparator:.6g}")
    return EXIT_OK


def _series_scan_bound(kind: str, upto: int) -> int:
    if kind == "inv_pi":
        return upto
    # q_k sits near index k ln k; scan with room to spare
    return max(100, int(2 * upto * math.log(max(upto, 3))) + 100)


def cmd_li(args: argparse.Namespace) -> int:
    value = analysis.li(args.x)
    print(json.dumps({"x": args.x, "li": value}) if args.format == "json" else f"{value:.10g}")
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    if args.list:
        for name, rule in bounds.RULES.items():
            print(f"{name:<22} n >= {rule.min_n:<8} {rule.description}")
        return EXIT_OK
    if not args.rule:
        raise DomainError("bounds needs --rule (or --list)")
    if args.n is not None:
        checks = bounds.evaluate(args.rule, args.n)
        c = checks[0]
        if args.format == "json":
            print(json.dumps({**{k: getattr(c, k) for k in ("name", "n_or_k", "holds", "margin", "strict")},
                              "lhs": c.lhs, "rhs": c.rhs, "status": c.status.value}))
        else:
            print(f"{c.name} @ {c.n_or_k}: {c.status.value}  lhs={report.cell(c.lhs)} "
                  f"rhs={report.cell(c.rhs)} margin={report.cell(c.margin)}")
        return EXIT_OK if c.ok else EXIT_FAIL
    lo = args.lo if args.lo is not None else bounds.RULES[args.rule].min_n if args.rule in bounds.RULES else 1
    hi = args.hi if args.hi is not None else args.max_n
    if hi is None:
        raise DomainError("give --n, or a range with --hi/--max-n")
    rep = bounds.scan_rule(args.rule, lo, hi)
    if args.format == "json":
        print(json.dumps({"rule": rep.rule, "lo": rep.lo, "hi": rep.hi, "checked": rep.checked,
                          "violations": rep.violations, "inconclusive": rep.inconclusive,
                          "min_margin": rep.min_margin, "argmin": rep.argmin}))
    else:
        print(f"{rep.rule} on [{rep.lo}, {rep.hi}]: {rep.checked} checked, {len(rep.violations)} violations, "
              f"{len(rep.inconclusive)} inconclusive, min margin {rep.min_margin:.6g} at n={rep.argmin}")
        if rep.violations:
            print(f"  violations at {rep.violations[:20]}")
    return EXIT_OK if rep.clean else EXIT_FAIL


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-n", type=int, default=None, help="largest sequence index to cover")
    common.add_argument("--variant", default="plain", help="plain | offset:<d> | shifted:<k>")
    common.add_argument("--threads", type=int, default=1, help="worker processes for scanning")
    common.add_argument("--checkpoint", help="checkpoint JSON path")
    common.add_argument("--resume", action="store_true", help="continue from --checkpoint")
    common.add_argument("--emit", help="output path (hits CSV for scan, table/report otherwise)")
    common.add_argument("--format", choices=("csv", "markdown", "json"), default="csv")
    common.add_argument("--cadence", type=int, default=100_000, help="checkpoint every this many indices")
    common.add_argument("--hits", help="existing hits CSV to read instead of scanning")

    p = argparse.ArgumentParser(prog="primesums", description="Primes among sums of consecutive primes.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("scan", parents=[common], help="scan a sequence for prime terms")
    t = sub.add_parser("table", parents=[common], help="emit one of the five reference tables")
    t.add_argument("which", type=int, choices=range(1, 6))
    t.add_argument("--points", type=int, nargs="+", help="sample points (default: shipped list)")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", required=True)
    s = sub.add_parser("solve-mk", parents=[common], help="solve for M_k")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    se = sub.add_parser("series", parents=[common], help="partial sums of the series over prime terms")
    se.add_argument("--kind", required=True, choices=("inv-pi", "k-log2-over-q", "k-log2eps-over-q"))
    se.add_argument("--upto", type=int, required=True)
    se.add_argument("--eps", type=float, default=0.5)
    li = sub.add_parser("li", parents=[common], help="logarithmic integral from 2")
    li.add_argument("--x", type=float, required=True)
    b = sub.add_parser("bounds", parents=[common], help="evaluate one inequality at n or over a range")
    b.add_argument("--rule")
    b.add_argument("--n", type=int)
    b.add_argument("--lo", type=int)
    b.add_argument("--hi", type=int)
    b.add_argument("--list", action="store_true")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "scan":
            if args.max_n is None:
                raise DomainError("scan needs --max-n")
            return cmd_scan(_config(args))
        if args.threads < 1:
            raise DomainError("--threads must be >= 1")
        if args.command == "table":
            return cmd_table(args)
        if args.command == "verify":
            if args.max_n is None:
                raise DomainError("verify needs --max-n")
            return cmd_verify(args)
        if args.command == "solve-mk":
            return cmd_solve_mk(args)
        if args.command == "series":
            return cmd_series(args)
        if args.command == "li":
            return cmd_li(args)
        return cmd_bounds(args)
    except (CapacityError, InsufficientDataError, DigestMismatchError, OutOfProvenRangeError,
            NoRootError, OSError) as exc:
        print(f"primesums: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DomainError, ValueError, PrimeSumsError) as exc:
        print(f"primesums: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
