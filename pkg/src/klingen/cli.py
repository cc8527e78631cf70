"""Command-line surface: compute, enumerate, verify, and emit tables.

Four subcommands over the library:

  dim        one dimension query, both routes, with the family breakdown
  enumerate  the support table at a level (counts and per-family dims)
  verify     named verification suites with machine-readable failures
  table      a dimension grid over lists of q and n

Exit codes: 0 success, 1 usage error, 2 mathematical disagreement or
failed verification, 3 resource bound exceeded.  Identical flags (and
seed) produce byte-identical output.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .chartab import dim_fixed_family, family_from_name
from .cosets import (
    SKEW_CASES,
    enumerate_small_reps,
    enumerate_supp,
    row_of,
    skew_brute_count,
    skew_closed_count,
    table1_brute_count,
    table1_count,
)
from .dims import (
    ORIGIN_K,
    ORIGIN_PARAMODULAR,
    DimRequest,
    corollary_value,
    dim_klingen,
)
from .errors import (
    DisagreementError,
    DixonBoundExceeded,
    KlingenError,
    MismatchReport,
    NonConvergence,
    ResourceBound,
)
from .groupfq import named_subgroup
from .padic import estimate_Rg
from .verify_lemmas import verify_char_lemmas

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DISAGREE = 2
EXIT_RESOURCE = 3

FORMATS = ("json", "csv", "markdown", "plain")

SCHEMA = "1"


class UsageError(Exception):
    """Bad flags or bad flag values; reported on stderr, exit code 1."""


@dataclass(frozen=True)
class Config:
    """Run-wide knobs shared by every subcommand."""

    seed: int = 0
    precision_slack: int = 2
    closure_bound: int = 10**6
    group_bound: int = 10**5
    output: str = "plain"

    def __post_init__(self):
        for name in ("precision_slack", "closure_bound", "group_bound"):
            if getattr(self, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.output not in FORMATS:
            raise UsageError(f"--output must be one of {', '.join(FORMATS)}")


# ---------------------------------------------------------------------------
# flag parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def _default_seed() -> int:
    raw = os.environ.get("KLINGEN_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"KLINGEN_SEED must be an integer, got {raw!r}")


def parse_int_list(text: str, what: str) -> List[int]:
    """Comma-separated integers with .. ranges: "2,3", "1..8", "1..4,7"."""
    out: List[int] = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if ".." in piece:
            lo_txt, _, hi_txt = piece.partition("..")
            try:
                lo, hi = int(lo_txt), int(hi_txt)
            except ValueError:
                raise UsageError(f"bad {what} range {piece!r}")
            if hi < lo:
                raise UsageError(f"empty {what} range {piece!r}")
            out.extend(range(lo, hi + 1))
        else:
            try:
                out.append(int(piece))
            except ValueError:
                raise UsageError(f"bad {what} value {piece!r}")
    if not out:
        raise UsageError(f"{what} list is empty")
    return out


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--output", "-o", default="plain", choices=FORMATS,
                     help="output format (default plain)")
    sub.add_argument("--seed", type=int, default=None,
                     help="RNG seed (default: KLINGEN_SEED or 0)")
    sub.add_argument("--precision-slack", type=int, default=2,
                     help="guard digits beyond the minimum precision")
    sub.add_argument("--closure-bound", type=int, default=10**6,
                     help="cap on generated subgroup size")
    sub.add_argument("--group-bound", type=int, default=10**5,
                     help="cap on whole-group enumeration size")


def build_parser() -> _Parser:
    p = _Parser(
        prog="klingen",
        description="Fixed-vector dimensions at Klingen level for "
                    "depth-zero supercuspidal representations of GSp(4)",
    )
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dim", help="one dimension, both routes")
    d.add_argument("--q", type=int, required=True, help="residue field size")
    d.add_argument("--n", type=int, required=True, help="level exponent")
    d.add_argument("--sigma", required=True,
                   help="family: chi5, chi4 (even q), x4, x5 (odd q), "
                        "typeI, typeII, nongeneric")
    d.add_argument("--origin", default=ORIGIN_K,
                   choices=(ORIGIN_K, ORIGIN_PARAMODULAR))
    d.add_argument("--mode", default="both", choices=("sum", "formula", "both"))
    _add_common(d)

    e = sub.add_parser("enumerate", help="support table at one level")
    e.add_argument("--q", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    _add_common(e)

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("suite", choices=("all", "chartab", "counts", "rg", "theorem"))
    v.add_argument("--q", default=None,
                   help="comma-separated residue field sizes")
    v.add_argument("--n-max", type=int, default=None)
    v.add_argument("--budget", type=int, default=500,
                   help="sample budget for the rg suite")
    _add_common(v)

    t = sub.add_parser("table", help="dimension grid over q and n lists")
    t.add_argument("--q", required=True, help="comma list, e.g. 2,3")
    t.add_argument("--n", required=True, help="comma list with ranges, e.g. 1..8")
    t.add_argument("--sigma", required=True)
    _add_common(t)
    return p


def _config_from(args: argparse.Namespace) -> Config:
    seed = args.seed if args.seed is not None else _default_seed()
    return Config(
        seed=seed,
        precision_slack=args.precision_slack,
        closure_bound=args.closure_bound,
        group_bound=args.group_bound,
        output=args.output,
    )


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _emit_json(payload: Dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _emit_csv(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    import csv as _csv

    buf = io.StringIO()
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _emit_markdown(headers: Sequence[str], rows: Sequence[Sequence],
                   notes: Sequence[str]) -> str:
    out = ["| " + " | ".join(str(h) for h in headers) + " |",
           "|" + "|".join(" --- " for _ in headers) + "|"]
    for row in rows:
        out.append("| " + " | ".join(str(x) for x in row) + " |")
    for note in notes:
        out.append("")
        out.append(note)
    return "\n".join(out) + "\n"


def _emit_plain(headers: Sequence[str], rows: Sequence[Sequence],
                notes: Sequence[str]) -> str:
    cols = [headers] + [[str(x) for x in row] for row in rows]
    widths = [max(len(str(r[k])) for r in cols) for k in range(len(headers))]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(headers, widths))]
    for row in rows:
        lines.append("  ".join(str(x).ljust(w) for x, w in zip(row, widths)))
    lines.extend(notes)
    return "\n".join(lines) + "\n"


def _render(cfg: Config, payload: Dict, headers: Sequence[str],
            rows: Sequence[Sequence], notes: Sequence[str]) -> str:
    if cfg.output == "json":
        return _emit_json(payload)
    if cfg.output == "csv":
        return _emit_csv(headers, rows)
    if cfg.output == "markdown":
        return _emit_markdown(headers, rows, notes)
    return _emit_plain(headers, rows, notes)


# ---------------------------------------------------------------------------
# dim
# ---------------------------------------------------------------------------

def cmd_dim(args: argparse.Namespace, cfg: Config, out) -> int:
    try:
        family = family_from_name(args.sigma, args.q)
        req = DimRequest(q=args.q, n=args.n, sigma=family, origin=args.origin)
    except ValueError as exc:
        raise UsageError(str(exc))
    report = dim_klingen(req, mode=args.mode)
    payload = {
        "schema": SCHEMA,
        "command": "dim",
        "q": args.q,
        "n": args.n,
        "sigma": args.sigma,
        "kind": family.kind,
        "origin": args.origin,
        "mode": args.mode,
        "total": report.total,
        "formula": report.formula_value,
        "agree": report.agree,
        "by_family": [
            {"family": f, "count": c, "per_coset_dim": tag, "subtotal": s}
            for f, c, tag, s in report.by_family
        ],
    }
    headers = ("family", "count", "per_coset_dim", "subtotal")
    rows = [list(r) for r in report.by_family]
    notes = [
        f"total {report.total}",
        f"formula {report.formula_value}",
        f"agree {'true' if report.agree else 'false'}",
    ]
    out.write(_render(cfg, payload, headers, rows, notes))
    return EXIT_OK if report.agree else EXIT_DISAGREE


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------

def cmd_enumerate(args: argparse.Namespace, cfg: Config, out) -> int:
    if args.n < 0:
        raise UsageError(f"--n must be >= 0, got {args.n}")
    if args.q < 2:
        raise UsageError(f"--q must be a prime power >= 2, got {args.q}")
    type_i = family_from_name("typeI")
    type_ii = family_from_name("typeII")
    rows_out: List[Dict] = []
    if args.n >= 1:
        for fc in enumerate_supp(args.q, args.n):
            d1 = dim_fixed_family(fc.row, type_i, args.q)
            d2 = dim_fixed_family(fc.row, type_ii, args.q)
            rows_out.append({
                "family": fc.family,
                "count": fc.count,
                "dim_typeI": d1,
                "dim_typeII": d2,
                "subtotal_typeI": fc.count * d1,
                "subtotal_typeII": fc.count * d2,
            })
    total_i = sum(r["subtotal_typeI"] for r in rows_out)
    total_ii = sum(r["subtotal_typeII"] for r in rows_out)
    payload = {
        "schema": SCHEMA,
        "command": "enumerate",
        "q": args.q,
        "n": args.n,
        "rows": rows_out,
        "total_typeI": total_i,
        "total_typeII": total_ii,
    }
    notes = [f"total typeI {total_i}", f"total typeII {total_ii}"]
    if args.n == 0:
        payload["note"] = "dimension 0"
        notes = ["dimension 0"]
    headers = ("family", "count", "dim_typeI", "dim_typeII",
               "subtotal_typeI", "subtotal_typeII")
    rows = [[r[h] for h in headers] for r in rows_out]
    out.write(_render(cfg, payload, headers, rows, notes))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _suite_counts(qs: List[int], n_max: int) -> Tuple[int, List[Dict]]:
    checks = 0
    failures: List[Dict] = []

    def check(name, expected, actual):
        nonlocal checks
        checks += 1
        if expected != actual:
            failures.append({"name": name, "expected": str(expected),
                             "actual": str(actual)})

    for q in qs:
        for n in range(1, n_max + 1):
            for row in range(1, 8):
                check(f"q={q} n={n} row{row}",
                      table1_brute_count(row, n), table1_count(row, n))
            for case in SKEW_CASES:
                check(f"q={q} n={n} {case}",
                      skew_brute_count(case, n, q), skew_closed_count(case, n, q))
        if n_max >= 8:
            check(f"q={q} zEQxy_unit witness n=8",
                  q - 2, skew_closed_count("zEQxy_unit", 8, q))
    return checks, failures


def _suite_rg(qs: List[int], n_max: int, budget: int, seed: int,
              slack: int, closure_bound: int) -> Tuple[int, List[Dict]]:
    if n_max > 7:
        raise UsageError(
            "the rg suite enumerates representatives of the polynomial rows "
            "only (levels up to 7); use --n-max <= 7"
        )
    checks = 0
    failures: List[Dict] = []
    for q in qs:
        for n in range(2, n_max + 1):
            for rep in enumerate_small_reps(n):
                checks += 1
                row = row_of(rep, n)
                pred = named_subgroup(f"Row{row}", q)
                est = estimate_Rg(rep, n, q, budget=budget, seed=seed,
                                  slack=slack, closure_bound=closure_bound)
                name = f"q={q} n={n} {rep!r}"
                if not est.is_subset_of(pred):
                    failures.append({"name": name,
                                     "expected": "contained in prediction",
                                     "actual": "not contained"})
                elif est.order != pred.order:
                    failures.append({"name": name,
                                     "expected": f"order {pred.order}",
                                     "actual": f"order {est.order}"})
    return checks, failures


def _suite_chartab(group_bound: int) -> Tuple[int, List[Dict]]:
    q = 2
    order = q**4 * (q**2 - 1) * (q**4 - 1) * (q - 1)
    if order > group_bound:
        raise ResourceBound(
            f"|GSp(4,{q})| = {order} exceeds --group-bound {group_bound}"
        )
    report = verify_char_lemmas(q)
    failures = [
        {"name": name, "expected": str(exp), "actual": str(act)}
        for name, exp, act in report.failures()
    ]
    return len(report.checks), failures


def _suite_theorem(qs: List[int], n_max: int) -> Tuple[int, List[Dict]]:
    checks = 0
    failures: List[Dict] = []

    def check(name, expected, actual):
        nonlocal checks
        checks += 1
        if expected != actual:
            failures.append({"name": name, "expected": str(expected),
                             "actual": str(actual)})

    type_i = family_from_name("typeI")
    type_ii = family_from_name("typeII")
    nongen = family_from_name("nongeneric")
    for q in qs:
        for n in range(0, n_max + 1):
            try:
                r1 = dim_klingen(DimRequest(q, n, type_i), mode="both")
                r2 = dim_klingen(DimRequest(q, n, type_ii), mode="both")
            except DisagreementError as exc:
                checks += 1
                failures.append({"name": f"q={q} n={n} route agreement",
                                 "expected": str(exc.formula_value),
                                 "actual": str(exc.sum_value)})
                continue
            check(f"q={q} n={n} typeI agree", True, r1.agree)
            check(f"q={q} n={n} typeII agree", True, r2.agree)
            check(f"q={q} n={n} family gap", 2 * ((n - 1) // 2) if n >= 1 else 0,
                  r2.total - r1.total)
            check(f"q={q} n={n} nongeneric", 0,
                  dim_klingen(DimRequest(q, n, nongen)).total)
            check(f"q={q} n={n} paramodular origin", 0,
                  dim_klingen(
                      DimRequest(q, n, type_i, origin=ORIGIN_PARAMODULAR)
                  ).total)
            if q in (2, 3) and n >= 1:
                check(f"q={q} n={n} corollary", r1.total, corollary_value(q, n))
    return checks, failures


def cmd_verify(args: argparse.Namespace, cfg: Config, out) -> int:
    chosen = (args.suite,) if args.suite != "all" else (
        "chartab", "counts", "rg", "theorem"
    )
    suites: List[Dict] = []
    for name in sorted(chosen):
        if name == "counts":
            qs = parse_int_list(args.q, "--q") if args.q else [2, 3]
            n_max = args.n_max if args.n_max is not None else 14
            checks, failures = _suite_counts(qs, n_max)
        elif name == "rg":
            qs = parse_int_list(args.q, "--q") if args.q else [2]
            n_max = args.n_max if args.n_max is not None else 5
            checks, failures = _suite_rg(
                qs, n_max, args.budget, cfg.seed,
                cfg.precision_slack, cfg.closure_bound,
            )
        elif name == "chartab":
            checks, failures = _suite_chartab(cfg.group_bound)
        else:
            qs = parse_int_list(args.q, "--q") if args.q else [2, 3, 4, 5, 7]
            n_max = args.n_max if args.n_max is not None else 40
            checks, failures = _suite_theorem(qs, n_max)
        suites.append({
            "suite": name,
            "passed": not failures,
            "checks": checks,
            "failures": failures,
        })
    all_pass = all(s["passed"] for s in suites)
    payload = {
        "schema": SCHEMA,
        "command": "verify",
        "suite": args.suite,
        "suites": suites,
        "passed": all_pass,
    }
    headers = ("suite", "passed", "checks", "failures")
    rows = [[s["suite"], "true" if s["passed"] else "false",
             s["checks"], len(s["failures"])] for s in suites]
    notes = []
    for s in suites:
        for f in s["failures"]:
            notes.append(
                f"FAIL {s['suite']} {f['name']}: "
                f"expected {f['expected']}, got {f['actual']}"
            )
    notes.append("pass" if all_pass else "fail")
    out.write(_render(cfg, payload, headers, rows, notes))
    return EXIT_OK if all_pass else EXIT_DISAGREE


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------

def cmd_table(args: argparse.Namespace, cfg: Config, out) -> int:
    q_list = parse_int_list(args.q, "--q")
    n_list = parse_int_list(args.n, "--n")
    try:
        families = {q: family_from_name(args.sigma, q) for q in q_list}
        grid = []
        for n in n_list:
            row = []
            for q in q_list:
                req = DimRequest(q=q, n=n, sigma=families[q])
                row.append(dim_klingen(req, mode="both").total)
            grid.append(row)
    except ValueError as exc:
        raise UsageError(str(exc))
    kind = families[q_list[0]].kind
    payload = {
        "schema": SCHEMA,
        "command": "table",
        "sigma": args.sigma,
        "kind": kind,
        "q": q_list,
        "n": n_list,
        "grid": grid,
    }
    headers = ["n"] + [f"q={q}" for q in q_list]
    rows = [[n] + grid[k] for k, n in enumerate(n_list)]
    out.write(_render(cfg, payload, headers, rows, []))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

_COMMANDS = {
    "dim": cmd_dim,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "table": cmd_table,
}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from(args)
        return _COMMANDS[args.command](args, cfg, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except DisagreementError as exc:
        err.write(f"disagreement: {exc}\n")
        return EXIT_DISAGREE
    except MismatchReport as exc:
        err.write(f"verification mismatch: {exc}\n")
        return EXIT_DISAGREE
    except (ResourceBound, NonConvergence, DixonBoundExceeded) as exc:
        err.write(f"resource bound: {exc}\n")
        return EXIT_RESOURCE
    except ValueError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
