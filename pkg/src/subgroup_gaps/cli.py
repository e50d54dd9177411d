"""Command-line front end: subgroup/gap-check/rc primitives and the
verification sweeps, with json, csv, and human output.

Exit codes: 0 = success / no violations, 1 = violations found,
2 = usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional

from .field import PrimeField
from .setops import rep_profile, subgroup
from .verifier import (
    SweepReport,
    chen_yan_sweep,
    classify_subgroup,
    doubling_sweep,
    gmr_random_suite,
    hasse_weil_sweep,
    hp_direct_sum_sweep,
    mattarei_sweep,
    no_pair_sum_spotcheck,
    rc_sweep,
    theorem_sweep,
)

SUITES = (
    "theorem",
    "rc",
    "doubling",
    "chen-yan",
    "hp",
    "gmr",
    "hasse-weil",
    "mattarei",
    "lemma55",
    "all",
)

# fixed csv column order per suite / subcommand
SUITE_COLUMNS = {
    "theorem": [
        "p", "k", "t", "is_gap", "expected", "agrees", "method",
        "witness_a", "witness_diffs", "witness_lengths", "csum_c", "csum_r", "ok",
    ],
    "rc": ["p", "k", "t", "max_c", "max_r", "bound", "ok"],
    "doubling": ["p", "k", "t", "sum_size", "expected_size", "ok"],
    "chen-yan": ["p", "k", "t", "decompositions", "ok"],
    "hp": ["p", "k", "t", "decompositions", "nondirect", "ok"],
    "gmr": ["case", "p", "n", "sizes", "total_size", "lhs", "rhs", "ok"],
    "hasse-weil": [
        "p", "k", "t", "genus", "c_count", "hw_violations", "corr_violations",
        "mod_violations", "exact_violations", "n_min", "n_max", "ok",
    ],
    "mattarei": ["p", "k", "t", "max_c", "max_r", "lhs", "rhs", "ok"],
    "lemma55": ["p", "k", "t", "peel_failed", "max_c", "max_r", "bound", "ok"],
    "all": ["suite", "entries", "violations", "seconds"],
}


@dataclass
class OutputConfig:
    format: str = "human"
    output_path: Optional[str] = None
    verbosity: int = 0


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _entries_csv(columns: list[str], entries: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for e in entries:
        writer.writerow([_cell(e.get(col, "")) for col in columns])
    return buf.getvalue()


def _emit(text: str, cfg: OutputConfig) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _entry_line(columns: list[str], entry: dict) -> str:
    return " ".join(f"{c}={_cell(entry[c])}" for c in columns if c in entry)


def render_report(report: SweepReport, cfg: OutputConfig) -> str:
    columns = SUITE_COLUMNS[report.suite]
    if cfg.format == "json":
        return json.dumps(report.to_json_dict(), sort_keys=True, indent=2)
    if cfg.format == "csv":
        return _entries_csv(columns, report.entries)
    lines = [f"suite: {report.suite}"]
    lines.append("params: " + " ".join(f"{k}={v}" for k, v in report.params.items()))
    lines.append(f"entries: {len(report.entries)}  violations: {len(report.violations)}")
    lines.append(f"status: {'PASS' if report.ok else 'FAIL'}")
    show = report.entries if cfg.verbosity > 0 else report.violations
    label = "entry" if cfg.verbosity > 0 else "violation"
    for e in show:
        lines.append(f"{label}: " + _entry_line(columns, e))
    return "\n".join(lines)


def _out_config(args) -> OutputConfig:
    return OutputConfig(args.format, args.out, args.verbose)


def cmd_subgroup(args) -> int:
    field = PrimeField.of(args.prime)
    a_k = subgroup(field, args.exponent)
    cfg = _out_config(args)
    doc = {
        "p": field.p,
        "k": args.exponent,
        "t": len(a_k),
        "elements": list(a_k.elements),
    }
    if cfg.format == "json":
        _emit(json.dumps(doc, sort_keys=True, indent=2), cfg)
    elif cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["p", "k", "t", "elements"])
        writer.writerow([doc["p"], doc["k"], doc["t"], " ".join(map(str, doc["elements"]))])
        _emit(buf.getvalue().rstrip("\n"), cfg)
    else:
        _emit(" ".join(map(str, doc["elements"])), cfg)
    return 0


def cmd_gap_check(args) -> int:
    field = PrimeField.of(args.prime)
    verdict = classify_subgroup(field, args.exponent)
    cfg = _out_config(args)
    entry = verdict.entry()
    if cfg.format == "json":
        _emit(json.dumps(entry, sort_keys=True, indent=2), cfg)
    elif cfg.format == "csv":
        cols = [c for c in SUITE_COLUMNS["theorem"] if c in entry]
        _emit(_entries_csv(cols, [entry]).rstrip("\n"), cfg)
    else:
        lines = [
            f"p={verdict.p} k={verdict.k} t={verdict.t}",
            f"is_gap={_cell(verdict.is_gap)} expected={_cell(verdict.expected)} "
            f"agrees={_cell(verdict.agrees)} method={verdict.method}",
        ]
        if verdict.witness is not None:
            w = verdict.witness
            lines.append(
                f"witness: a={w.a} diffs=[{' '.join(map(str, w.diffs))}] "
                f"lengths=[{' '.join(map(str, w.lengths))}] proper={_cell(w.proper)}"
            )
        _emit("\n".join(lines), cfg)
    return 0 if verdict.agrees else 1


def cmd_rc(args) -> int:
    field = PrimeField.of(args.prime)
    a_k = subgroup(field, args.exponent)
    profile = rep_profile(a_k)
    nonzero = [(c, r) for c, r in enumerate(profile.counts) if r > 0]
    best_c, best_r = 1, 0
    for c, r in nonzero:
        if c != 0 and r > best_r:
            best_c, best_r = c, r
    cfg = _out_config(args)
    if cfg.format == "json":
        doc = {
            "p": field.p,
            "k": args.exponent,
            "t": len(a_k),
            "r0": profile.counts[0],
            "max_c": best_c,
            "max_r": best_r,
            "counts": {str(c): r for c, r in nonzero},
        }
        _emit(json.dumps(doc, sort_keys=True, indent=2), cfg)
    elif cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["c", "r"])
        for c, r in nonzero:
            writer.writerow([c, r])
        _emit(buf.getvalue().rstrip("\n"), cfg)
    else:
        lines = [
            f"p={field.p} k={args.exponent} t={len(a_k)}",
            f"r(0)={profile.counts[0]}",
            f"max nonzero r={best_r} at c={best_c}",
        ]
        if cfg.verbosity > 0:
            lines.append("counts: " + " ".join(f"r({c})={r}" for c, r in nonzero))
        _emit("\n".join(lines), cfg)
    return 0


_RC_PMAX_DEFAULT = {8: 6560, 16: 100_000, 32: 100_000}
_DOUBLING_PMAX_DEFAULT = {4: 2000, 8: 8000}


def _run_suite(suite: str, args) -> SweepReport:
    jobs = args.jobs
    if suite == "theorem":
        return theorem_sweep(args.p_max or 499, jobs=jobs)
    if suite == "rc":
        t = args.t or 8
        return rc_sweep(t, args.p_max or _RC_PMAX_DEFAULT.get(t, 100_000), jobs=jobs)
    if suite == "doubling":
        t = args.t or 4
        p_min = args.p_min or 3**t + 1
        p_max = args.p_max or _DOUBLING_PMAX_DEFAULT.get(t, 3**t + 2000)
        return doubling_sweep(t, p_min, p_max, jobs=jobs)
    if suite == "chen-yan":
        return chen_yan_sweep(args.p_max or 199, jobs=jobs)
    if suite == "hp":
        return hp_direct_sum_sweep(args.p_max or 43, jobs=jobs)
    if suite == "gmr":
        return gmr_random_suite(args.count, args.p_max or 101, args.seed, jobs=jobs)
    if suite == "hasse-weil":
        return hasse_weil_sweep(args.p_max or 101, args.k_max, jobs=jobs)
    if suite == "mattarei":
        return mattarei_sweep(args.p_max or 500, jobs=jobs)
    if suite == "lemma55":
        return no_pair_sum_spotcheck(args.p_max or 500, jobs=jobs)
    raise ValueError(f"unknown suite {suite!r}")


def cmd_verify(args) -> int:
    cfg = _out_config(args)
    if args.suite != "all":
        report = _run_suite(args.suite, args)
        _emit(render_report(report, cfg), cfg)
        return 0 if report.ok else 1
    t0 = time.perf_counter()
    runs: list[tuple[str, SweepReport]] = []
    args.p_max = None
    runs.append(("theorem", _run_suite("theorem", args)))
    for t in (8, 16, 32):
        args.t = t
        args.p_max = None
        runs.append(("rc", _run_suite("rc", args)))
    for t in (4, 8):
        args.t = t
        args.p_min = None
        args.p_max = None
        runs.append(("doubling", _run_suite("doubling", args)))
    for name in ("chen-yan", "hp", "gmr", "hasse-weil", "mattarei", "lemma55"):
        args.p_max = None
        runs.append((name, _run_suite(name, args)))
    summary = []
    violations = []
    for name, report in runs:
        summary.append(
            {
                "suite": name,
                "entries": len(report.entries),
                "violations": len(report.violations),
                "seconds": report.timing["seconds"],
                "ok": report.ok,
            }
        )
        for v in report.violations:
            violations.append(dict(v, suite=name))
    combined = SweepReport(
        suite="all",
        params={"jobs": args.jobs, "seed": args.seed},
        entries=summary,
        violations=violations,
        timing={"seconds": round(time.perf_counter() - t0, 6)},
    )
    _emit(render_report(combined, cfg), cfg)
    return 0 if combined.ok else 1


def _add_output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("json", "csv", "human"), default="human")
    sub.add_argument("--out", metavar="PATH", default=None, help="write output to PATH")
    sub.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subgroup-gaps",
        description="Additive structure of multiplicative subgroups of Z_p*: "
        "sumsets, decompositions, GAP recognition, and verification sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sub = sub.add_parser("subgroup", help="print the k-th power subgroup of Z_p*")
    p_sub.add_argument("-p", "--prime", type=int, required=True)
    p_sub.add_argument("-k", "--exponent", type=int, required=True)
    _add_output_flags(p_sub)
    p_sub.set_defaults(func=cmd_subgroup)

    p_gap = sub.add_parser(
        "gap-check",
        help="classify one subgroup: GAP or not, with witness and method",
    )
    p_gap.add_argument("-p", "--prime", type=int, required=True)
    p_gap.add_argument("-k", "--exponent", type=int, required=True)
    _add_output_flags(p_gap)
    p_gap.set_defaults(func=cmd_gap_check)

    p_rc = sub.add_parser("rc", help="representation counts r(c) over a subgroup")
    p_rc.add_argument("-p", "--prime", type=int, required=True)
    p_rc.add_argument("-k", "--exponent", type=int, required=True)
    _add_output_flags(p_rc)
    p_rc.set_defaults(func=cmd_rc)

    p_ver = sub.add_parser(
        "verify",
        help="run a verification sweep; exit 0 iff no violations",
        description="Suites: theorem (GAP classification), rc (max nonzero "
        "representation count < t/2 for t in {8,16,32}), doubling (exact "
        "|A+A| = t^2/2+1 above 3^t), chen-yan (no small part decomposes the "
        "quadratic residues), hp (every 2-decomposition of a k>1 subgroup "
        "is direct), gmr (leave-one-out sumset size inequality on random "
        "parts), hasse-weil (curve point counts: bound, k^2-to-1 map, exact "
        "genus-0 counts), mattarei (4 r^3 <= 27 t^2), lemma55 (spot checks: "
        "large power-of-2 subgroups admit no all-2 decomposition), all.",
    )
    p_ver.add_argument("suite", choices=SUITES)
    p_ver.add_argument("--p-max", dest="p_max", type=int, default=None)
    p_ver.add_argument("--p-min", dest="p_min", type=int, default=None)
    p_ver.add_argument("--t", dest="t", type=int, default=None)
    p_ver.add_argument("--k-max", dest="k_max", type=int, default=10)
    p_ver.add_argument("--count", type=int, default=1000, help="random cases (gmr)")
    p_ver.add_argument("--seed", type=int, default=0, help="RNG seed (gmr)")
    p_ver.add_argument("--jobs", type=int, default=1, help="parallel workers")
    _add_output_flags(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
