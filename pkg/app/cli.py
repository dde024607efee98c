"""
Command-Line Front End

Subcommands:
  expand       expand a theta, false theta or eta-product spec
  verify       check catalogued identities to a truncation
  scan         mine progression congruences c(An+B) ≡ 0 (mod m)
  asymptotics  growth ratio of c_t, bounding roots for t = 2
  mex          M_k table: generating function, enumeration, pentagonal difference
  conjectures  check the empirical conjecture tables
  acceptance   run the acceptance scoreboard (also --seed-acceptance)

stdout carries the report (text, JSON or CSV); logging goes to stderr.
Exit status: 0 all verified, 1 a check failed, 2 usage or input error.
"""

import argparse
import csv
import io
import json
import logging
import re
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import QSeriesError
from app.models.schemas import (
    CommandName,
    ExpandPayload,
    OutputFormat,
    ProgressionPayload,
    RunConfig,
    ScanPayload,
    ScoreboardPayload,
)

try:
    from openpyxl import Workbook
    from openpyxl.styles import Font, PatternFill
    EXCEL_SUPPORT = True
except ImportError:
    EXCEL_SUPPORT = False

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

_THETA_PREFIX = re.compile(r"^\s*(psi|f)\s*\(")


class Outcome:
    """What a subcommand hands back: exit code, JSON payload, text and CSV renderings."""

    def __init__(self, code: int, payload: Any, text: str, rows: Optional[List[List[Any]]] = None):
        self.code = code
        self.payload = payload
        self.text = text
        self.rows = rows


# ============== Subcommands ==============

def _expand(config: RunConfig) -> Outcome:
    from app.tools.series import dumps_series
    from app.tools.theta import eta_product, expand_theta, parse_eta_spec, parse_theta_spec

    trunc = settings.DEFAULT_TRUNC if config.trunc is None else config.trunc
    if _THETA_PREFIX.match(config.spec):
        spec = parse_theta_spec(config.spec)
        series = expand_theta(spec, trunc, config.modulus)
    else:
        spec = parse_eta_spec(config.spec)
        series = eta_product(spec, trunc, config.modulus)
    payload = ExpandPayload(spec=str(spec), trunc=trunc, modulus=config.modulus, coefficients=list(series.coeffs))
    rows = [["exponent", "coefficient"]] + [[n, c] for n, c in enumerate(series.coeffs)]
    if config.excel_output:
        save_excel_table(rows, config.excel_output, str(spec))
    return Outcome(EXIT_OK, payload.model_dump(), dumps_series(series), rows)


def _verify(config: RunConfig) -> Outcome:
    from app.tools.identities import registry_ids, verify_all, verify_registry_identity

    if config.target == "all":
        overrides = {i: config.trunc for i in registry_ids()} if config.trunc is not None else None
        if config.modulus is not None:
            reports = [verify_registry_identity(i, config.trunc, config.modulus) for i in registry_ids()]
        else:
            reports = verify_all(overrides)
    else:
        reports = [verify_registry_identity(config.target, config.trunc, config.modulus)]
    payload = [r.to_dict() for r in reports]
    rows = [["identity", "trunc", "modulus", "status", "first_mismatch"]]
    lines = []
    for r in payload:
        rows.append([r["identity"], r["trunc"], r["modulus"], r["status"], r["first_mismatch"]])
        miss = "" if r["first_mismatch"] is None else f"  first mismatch q^{r['first_mismatch']}"
        lines.append(f"{r['identity']:<30} {r['status']:<9} trunc={r['trunc']} mod={r['modulus']}{miss}")
    failed = any(not r.is_verified for r in reports)
    return Outcome(EXIT_FAILED if failed else EXIT_OK, payload, "\n".join(lines), rows)


def _scan(config: RunConfig) -> Outcome:
    from app.tools.identities import c_t_series
    from app.tools.scanner import scan_progressions
    from app.tools.series import ModSeries, loads_series

    min_hits = settings.SCAN_MIN_HITS if config.min_hits is None else config.min_hits
    a_max = config.a_max or 16
    if config.from_file:
        series = loads_series(Path(config.from_file).read_text(encoding="utf-8"))
        source = config.from_file
    else:
        trunc = a_max * min_hits - 1 if config.trunc is None else config.trunc
        series = c_t_series(config.t, trunc, config.modulus)
        source = f"c_{config.t}"
    found = scan_progressions(series, a_max, min_hits, config.modulus)
    modulus = config.modulus or (series.modulus if isinstance(series, ModSeries) else None)
    payload = ScanPayload(
        source=source,
        trunc=series.trunc,
        modulus=modulus,
        a_max=a_max,
        min_hits=min_hits,
        progressions=[ProgressionPayload(**p.to_dict()) for p in found],
    )
    rows = [["A", "B", "mod", "verified_upto"]] + [[p.A, p.B, p.modulus, p.verified_upto] for p in found]
    text = "\n".join(f"{source}({p.A}n+{p.B}) ≡ 0 (mod {p.modulus}) to q^{p.verified_upto}" for p in found)
    return Outcome(EXIT_OK, payload.model_dump(), text or "no progressions", rows)


def _asymptotics(config: RunConfig) -> Outcome:
    from app.tools.asymptotics import asymptotics_summary

    summary = asymptotics_summary(config.t or 2, 2000 if config.n is None else config.n)
    data = summary.to_dict()
    rows = [["key", "value"]] + [[k, v] for k, v in data.items()]
    text = "\n".join(f"{k:<14} {v}" for k, v in data.items())
    ok = summary.sandwich_ok is not False and summary.difference_ok is not False
    return Outcome(EXIT_OK if ok else EXIT_FAILED, data, text, rows)


def _mex(config: RunConfig) -> Outcome:
    from app.tools.mex_partitions import mex_table

    k = config.k or 1
    table = mex_table(k, 30 if config.n is None else config.n)
    rows = [["n", "gf_coeff", "oracle_count", "diff_sum"]] + [
        [r["n"], r["gf_coeff"], r["oracle_count"], r["diff_sum"]] for r in table
    ]
    text = "\n".join(f"{r['n']:>4} {r['gf_coeff']:>8} {r['oracle_count']:>8} {r['diff_sum']:>8}" for r in table)
    agree = all(r["gf_coeff"] == r["oracle_count"] for r in table)
    return Outcome(EXIT_OK if agree else EXIT_FAILED, table, f"   n   M_{k} gf   oracle  p-diff\n{text}", rows)


def _conjectures(config: RunConfig) -> Outcome:
    from app.knowledge import get_registry_manager
    from app.tools.scanner import check_conjecture

    ids = [t.id for t in get_registry_manager().list_conjectures()] if config.target == "all" else [config.target]
    outcomes = [check_conjecture(i, config.trunc) for i in ids]
    rows = [["conjecture", "label", "status", "witness"]]
    lines = []
    for o in outcomes:
        for r in o["rows"]:
            rows.append([o["conjecture"], r["label"], r["status"], r["witness"]])
            lines.append(f"{r['label']:<28} {r['status']} ({o['label']}, to q^{o['trunc']})")
    failed = any(not o["all_pass"] for o in outcomes)
    return Outcome(EXIT_FAILED if failed else EXIT_OK, outcomes, "\n".join(lines), rows)


def _acceptance(config: RunConfig) -> Outcome:
    from app.services.acceptance import run_acceptance

    board = run_acceptance(quick=config.quick)
    payload = ScoreboardPayload(**board.to_dict())
    rows = [["criterion", "status", "failed_checks"]] + [
        [r.checkpoint_name, r.status.value, "; ".join(r.checks_failed)] for r in board.results
    ]
    return Outcome(EXIT_OK if board.all_passed else EXIT_FAILED, payload.model_dump(), board.render_text(), rows)


_COMMANDS = {
    CommandName.EXPAND: _expand,
    CommandName.VERIFY: _verify,
    CommandName.SCAN: _scan,
    CommandName.ASYMPTOTICS: _asymptotics,
    CommandName.MEX: _mex,
    CommandName.CONJECTURES: _conjectures,
    CommandName.ACCEPTANCE: _acceptance,
}


# ============== Output ==============

def render(outcome: Outcome, fmt: OutputFormat) -> str:
    if fmt == OutputFormat.JSON:
        return json.dumps(outcome.payload, ensure_ascii=False, indent=2, default=str) + "\n"
    if fmt == OutputFormat.CSV:
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(outcome.rows or [])
        return buffer.getvalue()
    return outcome.text if outcome.text.endswith("\n") else outcome.text + "\n"


def save_excel_table(rows: Sequence[Sequence[Any]], excel_file: str, sheet_name: str) -> bool:
    """Write a header-plus-rows table to one sheet; returns False when openpyxl is missing."""
    if not EXCEL_SUPPORT:
        logger.warning("openpyxl not installed, skipping Excel export")
        return False
    wb = Workbook()
    ws = wb.active
    # sheet titles may not contain these characters
    ws.title = re.sub(r"[\[\]\*\?/\\:]", "_", sheet_name)[:31] or "series"
    header_fill = PatternFill(start_color="E0E0E0", end_color="E0E0E0", fill_type="solid")
    for r, row in enumerate(rows, start=1):
        for c, value in enumerate(row, start=1):
            cell = ws.cell(row=r, column=c, value=value)
            if r == 1:
                cell.font = Font(bold=True)
                cell.fill = header_fill
    wb.save(excel_file)
    logger.info(f"Excel table written to {excel_file}")
    return True


# ============== Entry ==============

def run(config: RunConfig) -> Tuple[int, str]:
    """Execute a validated config; returns (exit code, rendered report)."""
    outcome = _COMMANDS[config.command](config)
    return outcome.code, render(outcome, config.output)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", choices=[f.value for f in OutputFormat], default=None, help="Report format")
    p.add_argument("--json", action="store_true", help="Shorthand for --output json")
    p.add_argument("--output-file", help="Write the report to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qseries",
        description="Exact truncated q-series toolkit for false theta reciprocals",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  qseries expand "psi(-q^2,q)" --trunc 26
  qseries expand "f3^3/f1" --trunc 100 --mod 2 --output csv
  qseries verify c5_32n_31_mod4 --trunc 10000
  qseries verify all --json
  qseries scan --t 5 --mod 2 --amax 16 --trunc 1000 --json
  qseries asymptotics --t 2 --n 2000 --json
  qseries mex --k 2 --n 30
  qseries conjectures all --trunc 20000
  qseries --seed-acceptance --quick
        """,
    )
    parser.add_argument("--seed-acceptance", action="store_true", help="Run the acceptance scoreboard")
    parser.add_argument("--quick", action="store_true", help="Reduced truncations for the scoreboard")
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.APP_VERSION}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("expand", help="Expand a theta / eta-product spec")
    p.add_argument("spec", help="e.g. 'psi(-q^2,q)', 'f(q,q^2)', 'q*f1^2*f10^6'")
    p.add_argument("--trunc", type=int)
    p.add_argument("--mod", type=int, dest="modulus")
    p.add_argument("--excel-output", help="Also write the coefficient table to this .xlsx file")
    _add_output_flags(p)

    p = sub.add_parser("verify", help="Verify catalogued identities")
    p.add_argument("target", help="Identity id or 'all'")
    p.add_argument("--trunc", type=int)
    p.add_argument("--mod", type=int, dest="modulus")
    _add_output_flags(p)

    p = sub.add_parser("scan", help="Scan for progression congruences")
    p.add_argument("--t", type=int)
    p.add_argument("--from-file")
    p.add_argument("--mod", type=int, dest="modulus")
    p.add_argument("--amax", type=int, dest="a_max")
    p.add_argument("--trunc", type=int)
    p.add_argument("--min-hits", type=int)
    _add_output_flags(p)

    p = sub.add_parser("asymptotics", help="Growth of c_t")
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--n", type=int)
    _add_output_flags(p)

    p = sub.add_parser("mex", help="M_k table")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int)
    _add_output_flags(p)

    p = sub.add_parser("conjectures", help="Check empirical conjecture tables")
    p.add_argument("target", help="Table id or 'all'")
    p.add_argument("--trunc", type=int)
    _add_output_flags(p)

    p = sub.add_parser("acceptance", help="Run the acceptance scoreboard")
    p.add_argument("--quick", action="store_true", dest="sub_quick")
    _add_output_flags(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    command = CommandName.ACCEPTANCE if args.seed_acceptance else CommandName(args.command)
    values: Dict[str, Any] = {
        key: getattr(args, key, None)
        for key in ("trunc", "modulus", "spec", "target", "t", "from_file", "a_max", "min_hits", "n", "k",
                    "output_file", "excel_output")
    }
    output = getattr(args, "output", None)
    if getattr(args, "json", False):
        output = OutputFormat.JSON.value
    return RunConfig(
        command=command,
        output=output or OutputFormat.TEXT.value,
        quick=args.quick or getattr(args, "sub_quick", False),
        **{k: v for k, v in values.items() if v is not None},
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command and not args.seed_acceptance:
        parser.print_help()
        return EXIT_USAGE

    try:
        config = config_from_args(args)
        code, report = run(config)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except QSeriesError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return EXIT_FAILED
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_FAILED

    if config.output_file:
        Path(config.output_file).write_text(report, encoding="utf-8")
        logger.info(f"Report written to {config.output_file}")
    else:
        sys.stdout.write(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
