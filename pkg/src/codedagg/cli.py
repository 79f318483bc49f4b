"""Command-line front end.

Exit codes: 0 success, 1 infeasible parameters (or empty sweep range),
2 unreadable or malformed config, 3 round aborted.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Sequence

from .errors import ConfigError, InvalidParameters, RoundAborted
from .protocol import check_bounds, load_scenario, report_to_json, run_round, validate_params
from .protocol.params import warnings_for
from .protocol.report import aborted_to_json

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_CONFIG = 2
EXIT_ABORTED = 3

SWEEP_COLUMNS = [
    "K", "R_user_theory", "R_user_measured", "R_server_theory", "R_server_measured",
    "commit_per_user", "commit_total", "brea_R_user", "brea_R_server", "brea_commit_total",
]


def _load(path: str):
    try:
        return load_scenario(path)
    except ConfigError as exc:
        where = f"{path}:{exc.line}" if exc.line is not None else path
        print(f"error: {where}: {exc.message}", file=sys.stderr)
        return None


def cmd_validate(args) -> int:
    sc = _load(args.config)
    if sc is None:
        return EXIT_CONFIG
    checks = check_bounds(sc.params)
    for c in checks:
        print(c)
    for w in warnings_for(sc.params):
        print(f"warning: {w}")
    bad = [c for c in checks if not c.ok]
    print(f"{len(bad)} violation(s)" if bad else "all bounds satisfied")
    return EXIT_INFEASIBLE if bad else EXIT_OK


def cmd_run(args) -> int:
    sc = _load(args.config)
    if sc is None:
        return EXIT_CONFIG
    out = Path(args.out)
    try:
        report = run_round(sc.params, sc.behaviors, sc.updates())
    except InvalidParameters as exc:
        for c in exc.violations:
            print(c, file=sys.stderr)
        return EXIT_INFEASIBLE
    except RoundAborted as exc:
        out.write_text(aborted_to_json(sc.params, exc))
        print(f"round aborted at step {exc.step}: {exc.cause}", file=sys.stderr)
        return EXIT_ABORTED
    out.write_text(report_to_json(report))
    flagged = sorted(report.flagged_users)
    print(f"selected: {list(report.selected)}")
    print(f"flagged: {flagged}")
    print(f"R_server = {float(report.loads.measured.server):.4f}  R_user = {float(report.loads.measured.user):.4f}")
    print(f"report written to {out}")
    return EXIT_OK


def _sweep_row(sc, K: int) -> dict | None:
    pp = sc.params.replace(K=K)
    if validate_params(pp):
        return None
    report = run_round(pp, sc.behaviors, sc.updates())
    lr = report.loads
    return {
        "K": K,
        "R_user_theory": lr.theoretical.user,
        "R_user_measured": lr.measured.user,
        "R_server_theory": lr.theoretical.server,
        "R_server_measured": lr.measured.server,
        "commit_per_user": lr.commit_size_per_user,
        "commit_total": lr.measured.commitments,
        "brea_R_user": lr.brea.user,
        "brea_R_server": lr.brea.server,
        "brea_commit_total": lr.brea.commitments,
    }


def _fmt(x) -> str:
    return str(x) if isinstance(x, int) else f"{float(x):.4f}"


def cmd_sweep(args) -> int:
    sc = _load(args.config)
    if sc is None:
        return EXIT_CONFIG
    rows, skipped = [], []
    for K in range(args.k_min, args.k_max + 1):
        try:
            row = _sweep_row(sc, K)
        except RoundAborted as exc:
            print(f"K={K}: round aborted at step {exc.step}: {exc.cause}", file=sys.stderr)
            return EXIT_ABORTED
        (rows.append(row) if row else skipped.append(K))
    if skipped:
        print(f"excluded (infeasible): K in {skipped}")
    if not rows:
        print(f"no feasible K in [{args.k_min}, {args.k_max}]", file=sys.stderr)
        return EXIT_INFEASIBLE
    cells = [[_fmt(r[c]) for c in SWEEP_COLUMNS] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(SWEEP_COLUMNS)]
    print("  ".join(c.rjust(w) for c, w in zip(SWEEP_COLUMNS, widths)))
    for row in cells:
        print("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for r in rows:
            writer.writerow([r[c] if isinstance(r[c], int) else f"{float(r[c]):.6f}" for c in SWEEP_COLUMNS])
    print(f"table written to {args.out}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_all

    results = run_all()
    for r in results:
        mark = "PASS" if r.ok else "FAIL"
        extra = f" ({r.detail})" if r.detail else ""
        print(f"{mark}  {r.name}: {r.cases} cases, {r.seconds:.2f}s{extra}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codedagg", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario's parameters against every bound")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="simulate one round and write a JSON report")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="loads for each feasible K in a range")
    p.add_argument("--config", required=True)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="exhaustive tiny-field checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
