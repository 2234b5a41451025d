#!/usr/bin/env python3
"""
Decide whether the spin structure of a sphere is invariant under each
transitive, effective group action on it, and reproduce the classification
table with the claimed isotropy representation of every row.

Usage examples:
  # One action
  python spin_invariance_report.py classify --family sp-u1 --n 1

  # The whole table, printed
  python spin_invariance_report.py table

  # A subset as JSON, four worker processes
  python spin_invariance_report.py table --families so,u --n-max 6 --format json --out table.json --jobs 4

  # Spreadsheet with a records sheet and a meta sheet
  python spin_invariance_report.py table --format excel --out spin_table.xlsx

  # Verification suites
  python spin_invariance_report.py verify --suite all --seed 7
  python spin_invariance_report.py verify-appendix

Environment variables (optional):
  SPHERE_SPIN_STEPS  default for --steps (256)
  SPHERE_SPIN_SEED   default for --seed (0x5EED)
  SPHERE_SPIN_JOBS   default for --jobs (1)

Exit codes:
  0  every row matches and all methods agree, or every identity holds
  1  bad arguments
  2  parity methods disagree, or a verdict / isotropy check misses the known table
  3  numerical failure (tracking, step size, undecided parity, invariance)
  4  a verification identity failed

Requires: numpy, scipy, pandas, openpyxl
  pip install -r requirements.txt
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from characters import claimed_isotropy_label, table1_isotropy_check
from lifting import ClassificationRecord, classify, expected_verdict
from run_config import (
    DEFAULT_TOL,
    FAMILY_ORDER,
    ISOTROPY_TRIALS,
    POLE_TOL,
    SUPPORTED_RANGES,
    TRACK_TOL,
    RunConfig,
)
from sphere_actions import CLI_NAMES, EXCEPTIONAL_FAMILIES, ActionSpec, Family, parse_family
from spin_errors import (
    EXIT_BAD_ARGUMENTS,
    EXIT_DISAGREEMENT,
    EXIT_OK,
    SpinInvarianceError,
    UnsupportedFamilyError,
    exit_code_for,
)
from verify_suites import SUITES, require_all, run_suite

logger = logging.getLogger("spin_invariance_report")

FORMATS = ("table", "json", "csv", "excel")
DEFAULT_EXCEL_FILE = "spin_invariance_report.xlsx"


class ReportArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_BAD_ARGUMENTS."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"ERROR: {message}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_ARGUMENTS)


@dataclass
class RowOutcome:
    """Result of one (family, n) row, or the error that stopped it."""

    family: str
    n: int
    record: Optional[ClassificationRecord] = None
    isotropy: str = ""
    isotropy_residual: float = float("nan")
    isotropy_passed: bool = False
    error: str = ""
    exit_code: int = EXIT_OK

    @property
    def spec(self) -> ActionSpec:
        return ActionSpec(Family(self.family), self.n)

    @property
    def ok(self) -> bool:
        return self.record is not None and self.record.match and self.isotropy_passed


@dataclass
class Report:
    """Classification records in table order plus the run metadata."""

    records: List[ClassificationRecord]
    config: RunConfig
    isotropy: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        per_record = {}
        for record in self.records:
            label = record.spec.label
            per_record[label] = {**record.meta(), **self.isotropy.get(label, {})}
        return {
            "meta": {
                "steps": self.config.steps,
                "seed": self.config.seed,
                "tolerances": {"path": self.config.tol, "tracking": TRACK_TOL, "pole": POLE_TOL},
                "records": per_record,
            },
            "records": [record.to_dict() for record in self.records],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Report":
        meta = data["meta"]
        extras = meta.get("records", {})
        records = []
        isotropy = {}
        for item in data["records"]:
            label = f"{item['family']}/{item['n']}"
            row_meta = extras.get(label, {})
            records.append(ClassificationRecord.from_dict(item, row_meta))
            iso = {k: row_meta[k] for k in ("isotropy", "isotropy_residual") if k in row_meta}
            if iso:
                isotropy[label] = iso
        config = RunConfig(steps=meta["steps"], tol=meta["tolerances"]["path"], seed=meta["seed"])
        return cls(records, config, isotropy)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([record.to_row() for record in self.records])

    def meta_frame(self) -> pd.DataFrame:
        rows = []
        for label, values in self.to_dict()["meta"]["records"].items():
            rows.append({"record": label, **values})
        frame = pd.DataFrame(rows)
        frame["steps"] = self.config.steps
        frame["tol"] = self.config.tol
        frame["seed"] = self.config.seed
        return frame


def compute_row(family: str, n: int, config: RunConfig, isotropy_trials: int = ISOTROPY_TRIALS) -> RowOutcome:
    """Classify one action and check its isotropy column; errors come back inside the outcome."""
    spec = ActionSpec(Family(family), n)
    try:
        record = classify(spec, config)
        rng = np.random.default_rng([config.seed, FAMILY_ORDER.index(family), n])
        check = table1_isotropy_check(spec, isotropy_trials, rng)
    except SpinInvarianceError as e:
        logger.debug("%s failed: %r", spec.label, e)
        return RowOutcome(family, n, error=str(e), exit_code=exit_code_for(e))
    return RowOutcome(family, n, record, check.label, check.residual, check.passed)


def _compute_row_args(args: Tuple[str, int, RunConfig]) -> RowOutcome:
    return compute_row(*args)


def run_rows(rows: Sequence[Tuple[str, int]], config: RunConfig) -> List[RowOutcome]:
    """Compute every row, in parallel when config.jobs > 1, returned in input order."""
    tasks = [(family, n, config) for family, n in rows]
    if config.jobs <= 1 or len(tasks) <= 1:
        return [_compute_row_args(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        return list(pool.map(_compute_row_args, tasks))


def check_supported(family: Family, n: int) -> None:
    lo, hi = SUPPORTED_RANGES[family.value]
    if not lo <= n <= hi:
        if family in EXCEPTIONAL_FAMILIES:
            raise UnsupportedFamilyError(f"{family.value} has no family parameter; use --n 0, got {n}")
        raise UnsupportedFamilyError(f"n={n} is outside the supported range [{lo}, {hi}] for {family.value}")


def table_rows(families: Sequence[Family], n_max: Optional[int] = None) -> List[Tuple[str, int]]:
    """(family, n) pairs in table order: family order first, then ascending n."""
    rows = []
    for name in FAMILY_ORDER:
        fam = Family(name)
        if fam not in families:
            continue
        lo, hi = SUPPORTED_RANGES[name]
        if n_max is not None and fam not in EXCEPTIONAL_FAMILIES:
            hi = min(hi, n_max)
        rows.extend((name, n) for n in range(lo, hi + 1))
    return rows


def build_report(outcomes: Sequence[RowOutcome], config: RunConfig) -> Report:
    records = [o.record for o in outcomes if o.record is not None]
    isotropy = {
        o.spec.label: {"isotropy": o.isotropy, "isotropy_residual": o.isotropy_residual}
        for o in outcomes
        if o.record is not None
    }
    return Report(records, config, isotropy)


def render_table(outcomes: Sequence[RowOutcome]) -> str:
    rows = []
    for o in outcomes:
        spec = o.spec
        record = o.record
        if record is None:
            iso = claimed_isotropy_label(spec)
            verdict, status = "ERROR", "error"
        else:
            iso = f"{o.isotropy} ({'ok' if o.isotropy_passed else f'residual {o.isotropy_residual:.1e}'})"
            verdict, status = record.verdict, "yes" if record.match else "NO"
        rows.append({
            "group": spec.group_name,
            "sphere": f"S^{spec.sphere_dim}",
            "stabilizer": spec.stabilizer_name,
            "isotropy representation": iso,
            "invariant": verdict,
            "expected": expected_verdict(spec.family, spec.n),
            "match": status,
        })
    return pd.DataFrame(rows).to_string(index=False)


def render_footer(outcomes: Sequence[RowOutcome]) -> str:
    total = len(outcomes)
    good = sum(o.ok for o in outcomes)
    if good == total:
        return f"All {total} rows match the known classification; the three parity computations agree on every row."
    lines = [f"{good}/{total} rows match the known classification."]
    for o in outcomes:
        if o.record is None:
            lines.append(f"  {o.spec.label}: {o.error}")
        elif not o.record.match:
            lines.append(f"  {o.spec.label}: verdict {o.record.verdict}, expected {o.record.expected}")
        elif not o.isotropy_passed:
            lines.append(f"  {o.spec.label}: isotropy {o.isotropy} off by {o.isotropy_residual:.3e}")
    return "\n".join(lines)


def _write_text(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text if text.endswith("\n") else text + "\n")
        print(f"Wrote report to {out}", file=sys.stderr)
    else:
        print(text)


def export_to_excel(report: Report, filename: str = DEFAULT_EXCEL_FILE) -> None:
    with pd.ExcelWriter(filename, engine="openpyxl") as writer:
        report.to_frame().to_excel(writer, index=False, sheet_name="records")
        report.meta_frame().to_excel(writer, index=False, sheet_name="meta")
    print(f"Exported {len(report.records)} records to {filename}", file=sys.stderr)


def write_output(outcomes: Sequence[RowOutcome], config: RunConfig, fmt: str, out: Optional[str]) -> None:
    report = build_report(outcomes, config)
    if fmt == "table":
        _write_text(render_table(outcomes) + "\n\n" + render_footer(outcomes), out)
    elif fmt == "json":
        _write_text(report.to_json(), out)
    elif fmt == "csv":
        if out:
            report.to_frame().to_csv(out, index=False)
            print(f"Exported {len(report.records)} records to {out}", file=sys.stderr)
        else:
            print(report.to_frame().to_csv(index=False), end="")
    elif fmt == "excel":
        export_to_excel(report, out or DEFAULT_EXCEL_FILE)
    else:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def outcome_exit_code(outcomes: Sequence[RowOutcome]) -> int:
    codes = [o.exit_code for o in outcomes if o.record is None]
    if any(o.record is not None and not o.ok for o in outcomes):
        codes.append(EXIT_DISAGREEMENT)
    return max(codes, default=EXIT_OK)


def _report_errors(outcomes: Sequence[RowOutcome]) -> None:
    for o in outcomes:
        if o.record is None:
            print(f"ERROR: {o.spec.label}: {o.error}", file=sys.stderr)


def _config(args) -> RunConfig:
    return RunConfig(steps=args.steps, tol=args.tol, seed=args.seed, jobs=args.jobs)


def cmd_classify(args) -> int:
    family = parse_family(args.family)
    n = args.n if args.n is not None else (0 if family in EXCEPTIONAL_FAMILIES else None)
    if n is None:
        raise UnsupportedFamilyError(f"--n is required for {family.value}")
    check_supported(family, n)
    config = _config(args)
    outcomes = run_rows([(family.value, n)], config)
    _report_errors(outcomes)
    if outcomes[0].record is not None:
        write_output(outcomes, config, args.format, args.out)
    return outcome_exit_code(outcomes)


def _parse_families(text: str) -> List[Family]:
    try:
        return [parse_family(part) for part in text.split(",") if part.strip()]
    except UnsupportedFamilyError as e:
        raise argparse.ArgumentTypeError(str(e))


def cmd_table(args) -> int:
    families = args.families or [Family(name) for name in FAMILY_ORDER]
    rows = table_rows(families, args.n_max)
    if not rows:
        raise UnsupportedFamilyError(f"no rows selected by --families/--n-max {args.n_max}")
    config = _config(args)
    if args.format == "table":
        print(f"Classifying {len(rows)} actions ({config.steps} steps, {config.jobs} worker(s))...")
    outcomes = run_rows(rows, config)
    _report_errors(outcomes)
    write_output(outcomes, config, args.format, args.out)
    return outcome_exit_code(outcomes)


def cmd_verify(args) -> int:
    results = run_suite(args.suite, args.seed)
    for r in results:
        print(r.line())
    passed = sum(r.passed for r in results)
    print(f"\n{passed}/{len(results)} checks passed (suite {args.suite}, seed {args.seed:#x})")
    require_all(results)
    return EXIT_OK


def _seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer (decimal or 0x-hex), got {text!r}")


def build_parser(defaults: RunConfig) -> argparse.ArgumentParser:
    parser = ReportArgumentParser(
        description="Decide G-invariance of the spin structure on spheres with transitive G-actions."
    )
    logging_opts = argparse.ArgumentParser(add_help=False)
    logging_opts.add_argument("-v", "--verbose", action="count", default=0,
                              help="-v for progress logging, -vv for numerical diagnostics")

    run_opts = argparse.ArgumentParser(add_help=False)
    run_opts.add_argument("--steps", type=int, default=defaults.steps,
                          help=f"samples per generator loop (default: {defaults.steps})")
    run_opts.add_argument("--tol", type=float, default=DEFAULT_TOL,
                          help=f"orthogonality / closure tolerance for paths (default: {DEFAULT_TOL:g})")
    run_opts.add_argument("--seed", type=_seed, default=defaults.seed,
                          help=f"seed for the isotropy character samples (default: {defaults.seed:#x})")
    run_opts.add_argument("--jobs", type=int, default=defaults.jobs,
                          help=f"worker processes (default: {defaults.jobs})")
    run_opts.add_argument("--format", choices=FORMATS, default="table",
                          help="output format (default: table)")
    run_opts.add_argument("--out", help=f"output file; stdout when omitted (excel defaults to {DEFAULT_EXCEL_FILE})")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[run_opts, logging_opts], help="classify one action")
    p.add_argument("--family", required=True, help=f"one of: {', '.join(CLI_NAMES)}")
    p.add_argument("--n", type=int, help="family parameter (omit for g2, spin7, spin9)")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("table", parents=[run_opts, logging_opts], help="reproduce the classification table")
    p.add_argument("--families", type=_parse_families,
                   help="comma-separated subset, e.g. so,u,sp-u1 (default: all nine)")
    p.add_argument("--n-max", type=int, help="cap the family parameter of the classical rows")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("verify", parents=[logging_opts], help="run a verification suite")
    p.add_argument("--suite", choices=list(SUITES) + ["all"], default="all", help="suite to run (default: all)")
    p.add_argument("--seed", type=_seed, default=defaults.seed, help=f"sampling seed (default: {defaults.seed:#x})")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("verify-appendix", parents=[logging_opts], help="same as verify --suite appendix")
    p.add_argument("--seed", type=_seed, default=defaults.seed, help=f"sampling seed (default: {defaults.seed:#x})")
    p.set_defaults(handler=cmd_verify, suite="appendix")
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        defaults = RunConfig.from_env()
    except ValueError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_BAD_ARGUMENTS

    parser = build_parser(defaults)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_BAD_ARGUMENTS
    configure_logging(args.verbose)

    try:
        return args.handler(args)
    except (SpinInvarianceError, ValueError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
