"""
Acceptance Scoreboard

Each acceptance criterion is a checkpoint: a list of checks that passed, a
list that failed, and warnings for places where the printed source differs
from what is verified. Criteria run as independent jobs under the
FALSETHETA_THREADS cap and are reported in criterion order.
"""

from typing import Any, Callable, Dict, List, Optional
from dataclasses import dataclass
from enum import Enum
import logging
import random

from app.knowledge import get_registry_manager
from app.services.parallel import ParallelExecutor
from app.tools.asymptotics import asymptotics_summary, growth_ratio, pentagonal_compositions
from app.tools.identities import (
    IdentityReport,
    c_t_series,
    dissect,
    verify_dissection,
    verify_registry_identity,
)
from app.tools.mex_partitions import (
    dominance_counterexample,
    mex_count_by_differences,
    mex_gf,
    nonnegativity_check,
    partition_numbers,
    statistics_table,
    verify_tpn_theorem,
)
from app.tools.scanner import (
    QuadFormSpec,
    check_conjecture,
    quadform_scan_consistency,
    representability_progressions,
    scan_progressions,
)
from app.tools.series import IntSeries, frobenius_congruence
from app.tools.theta import ThetaSpec

logger = logging.getLogger(__name__)

DEG7_ROOT = 1.54522
DEG26_ROOT = 1.53623
ROOT_PRECISION = 1e-4
RESIDUE_PRIMES = (5, 7, 11, 13)
C9_PROGRESSIONS = [(16, 12), (24, 12), (56, 20), (56, 28), (56, 44)]
REQUIRED_DISCREPANCIES = (
    "c5_progression_label",
    "c9_missing_q_factor",
    "rank_zero_sign",
    "lost_notebook_psi_argument",
)


class CheckpointStatus(Enum):
    """Criterion outcome."""
    PASSED = "passed"
    FAILED = "failed"
    WARNING = "warning"


@dataclass
class CheckpointResult:
    """Result of one acceptance criterion."""
    status: CheckpointStatus
    checkpoint_name: str
    checks_passed: List[str]
    checks_failed: List[str]
    warnings: List[str]
    details: Dict[str, Any]

    @property
    def is_passed(self) -> bool:
        return self.status != CheckpointStatus.FAILED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "checkpoint_name": self.checkpoint_name,
            "checks_passed": self.checks_passed,
            "checks_failed": self.checks_failed,
            "warnings": self.warnings,
            "details": self.details
        }


class _Checkpoint:
    """Collects checks for one criterion, then settles its status."""

    def __init__(self, name: str):
        self.name = name
        self.passed: List[str] = []
        self.failed: List[str] = []
        self.warnings: List[str] = []
        self.details: Dict[str, Any] = {}

    def check(self, ok: bool, label: str, failure: Optional[str] = None) -> bool:
        if ok:
            self.passed.append(label)
        else:
            self.failed.append(f"{label}: {failure}" if failure else label)
        return ok

    def report(self, report: IdentityReport) -> bool:
        """Fold an IdentityReport in; its discrepancy notes become warnings."""
        for note in report.source_note:
            warning = f"{report.identity_id}: printed source differs ({note})"
            if warning not in self.warnings:
                self.warnings.append(warning)
        return self.check(
            report.is_verified,
            f"{report.identity_id} to q^{report.trunc}",
            f"first mismatch at q^{report.first_mismatch} in {report.details.get('failed_check')}",
        )

    def result(self) -> CheckpointResult:
        if self.failed:
            status = CheckpointStatus.FAILED
        elif self.warnings:
            status = CheckpointStatus.WARNING
        else:
            status = CheckpointStatus.PASSED
        return CheckpointResult(status, self.name, self.passed, self.failed, self.warnings, self.details)


# ============== Criteria ==============

def criterion_c5_mod2(quick: bool) -> CheckpointResult:
    cp = _Checkpoint("1. c_5 odd part mod 2 and its progressions")
    trunc = 2000 if quick else 20000
    cp.report(verify_registry_identity("c5_odd_part_mod2", trunc))
    found = scan_progressions(c_t_series(5, trunc, 2), 26, min_hits=trunc // 30)
    missing = quadform_scan_consistency(QuadFormSpec(3, -2), RESIDUE_PRIMES, (2, 1), found)
    pairs = [(p.A, p.B) for p in found]
    cp.details["progressions"] = pairs
    for expected in ((8, 5), (10, 5), (10, 9)):
        cp.check(expected in pairs, f"c_5({expected[0]}n+{expected[1]}) = 0 mod 2 found by scan")
    cp.check(not missing, f"avoided residues of 3n^2 - 2n mod {RESIDUE_PRIMES} covered by the scan", f"missing {missing}")
    return cp.result()


def criterion_c5_mod4(quick: bool) -> CheckpointResult:
    cp = _Checkpoint("2. c_5(32n+31) mod 4")
    cp.report(verify_registry_identity("c5_32n_31_mod4", 2000 if quick else 20000))
    return cp.result()


def criterion_c9(quick: bool) -> CheckpointResult:
    cp = _Checkpoint("3. c_9(8n+4) mod 2, eta identity and representability progressions")
    trunc = 2004 if quick else 16004
    cp.report(verify_registry_identity("c9_8n_4_mod2", trunc))
    cp.report(verify_registry_identity("c9_eta_quotient_mod2", 500 if quick else 2000))
    found = representability_progressions(
        QuadFormSpec(10, -4), (8, 4), (2, 3, 7), c_t_series(9, trunc, 2)
    )
    pairs = [(p.A, p.B) for p in found]
    cp.details["progressions"] = pairs
    cp.check(pairs == C9_PROGRESSIONS, "progressions from 10k^2 - 4k avoided residues", f"got {pairs}")
    return cp.result()


def criterion_dissection(quick: bool) -> CheckpointResult:
    cp = _Checkpoint("4. false theta two-dissection grid")
    bound, trunc = (6, 100) if quick else (15, 400)
    failures, split_errors, count = [], [], 0
    for a in range(bound + 1):
        for b in range(bound + 1):
            if a == b:
                continue
            for sa in (1, -1):
                for sb in (1, -1):
                    spec = ThetaSpec.psi(sa, a, sb, b)
                    count += 1
                    if not verify_dissection(spec, trunc).is_verified:
                        failures.append(str(spec))
                    if dissect(spec).even_odd_split != (a % 2 == 1 and b % 2 == 1):
                        split_errors.append(str(spec))
    cp.details["specs_checked"] = count
    cp.check(not failures, f"{count} dissections exact to q^{trunc}", f"failed: {failures[:5]}")
    cp.check(not split_errors, "even/odd split flag iff a, b both odd", f"wrong flag: {split_errors[:5]}")
    return cp.result()


def criterion_growth(quick: bool) -> CheckpointResult:
    cp = _Checkpoint("5. c_2 growth bounds")
    summary = asymptotics_summary(2, 2000, (500, 1000))
    cp.details.update(summary.to_dict())
    cp.check(abs(summary.root_deg7 - DEG7_ROOT) <= ROOT_PRECISION, "degree-7 root", f"got {summary.root_deg7}")
    cp.check(abs(summary.root_deg26 - DEG26_ROOT) <= ROOT_PRECISION, "degree-26 root", f"got {summary.root_deg26}")
    cp.check(summary.sandwich_ok, "b(n) <= c_2(n) <= a(n) for n <= 2000")
    cp.check(summary.difference_ok, "difference bounds for gaps 1..7")
    inside = float(summary.ratio_lo) > DEG26_ROOT and float(summary.ratio_hi) < DEG7_ROOT
    cp.check(inside, "c_2 ratio on (500,1000) inside the root bracket",
             f"[{summary.ratio_lo}, {summary.ratio_hi}]")
    return cp.result()


def criterion_mex(quick: bool) -> CheckpointResult:
    cp = _Checkpoint("6. truncated pentagonal theorem and M_k oracles")
    cp.report(verify_tpn_theorem(80 if quick else 200))
    n_max = 25 if quick else 60
    stats = statistics_table(n_max)
    p_table = partition_numbers(n_max)
    gf_bad = [
        (k, n) for k in range(1, 7)
        for n, c in enumerate(mex_gf(k, n_max).coeffs)
        if c != stats[n].mex_counts.get(k, 0)
    ]
    diff_bad = [
        (k, n) for k in range(1, 5) for n in range(n_max + 1)
        if mex_count_by_differences(k, n, p_table) != stats[n].mex_counts.get(k, 0)
    ]
    cp.check(not gf_bad, f"mex_gf = enumeration for k <= 6, n <= {n_max}", f"first (k, n): {gf_bad[:3]}")
    cp.check(not diff_bad, f"pentagonal differences = ±M_k for k <= 4, n <= {n_max}", f"first (k, n): {diff_bad[:3]}")
    return cp.result()


def criterion_toolkit(quick: bool, seed: int = 0) -> CheckpointResult:
    cp = _Checkpoint("7. jacobi cube, f1 f5, frobenius congruence, triple product")
    trunc = 500 if quick else 2000
    cp.report(verify_registry_identity("jacobi_cube", trunc))
    cp.report(verify_registry_identity("f1_f5_mod2", trunc))
    cp.report(verify_registry_identity("jtp_factorization", 100 if quick else 300))
    rng = random.Random(seed)
    failures = []
    samples = 20 if quick else 100
    for i in range(samples):
        n = rng.randint(8, 64)
        s = IntSeries.from_list([rng.randint(-9, 9) for _ in range(n + 1)])
        for p in (2, 3, 5):
            for k in (1, 2):
                if not frobenius_congruence(s, p, k).holds:
                    failures.append((i, p, k))
    cp.check(not failures, f"frobenius congruence on {samples} random series", f"failed (sample, p, k): {failures[:3]}")
    return cp.result()


def criterion_lost_notebook(quick: bool) -> CheckpointResult:
    cp = _Checkpoint("8. lost notebook false theta expansion")
    report = verify_registry_identity("psi_q3_q_expansion", 100 if quick else 300)
    cp.report(report)
    cp.details.update(report.details)
    return cp.result()


def criterion_conjectures(quick: bool) -> CheckpointResult:
    cp = _Checkpoint("9. conjecture tables and growth surveys (empirical)")
    for conjecture_id in ("c9_c13_c17_mod2", "c5_mod4_mod8"):
        outcome = check_conjecture(conjecture_id, None if quick else 20000)
        failed = [r["label"] for r in outcome["rows"] if r["status"] == "fail"]
        cp.details[conjecture_id] = {"trunc": outcome["trunc"], "label": outcome["label"], "rows": len(outcome["rows"])}
        cp.check(outcome["all_pass"], f"{conjecture_id} (empirical, to q^{outcome['trunc']})", f"failed: {failed}")
    ratio3 = growth_ratio(c_t_series(3, 1001).coeffs, (500, 1000))
    cp.details["c3_ratio"] = [str(ratio3.lo), str(ratio3.hi)]
    cp.check(float(ratio3.lo) >= 1.35 and float(ratio3.hi) <= 1.39, "1/Psi(-q^3,q) ratio about 1.37",
             f"[{ratio3.lo}, {ratio3.hi}]")
    comp = pentagonal_compositions(1000, (500, 1000)).ratio
    cp.details["composition_ratio"] = [str(comp.lo), str(comp.hi)]
    cp.check(float(comp.lo) > 1.618 and float(comp.hi) < 2, "pentagonal compositions ratio in (1.618, 2)",
             f"[{comp.lo}, {comp.hi}]")
    return cp.result()


def criterion_discrepancies(quick: bool) -> CheckpointResult:
    cp = _Checkpoint("10. source discrepancy ledger")
    rm = get_registry_manager()
    ledger = rm.discrepancies()
    catalogue = {e.id for e in rm.list_identities()}
    present = {d.id for d in ledger}
    for note in REQUIRED_DISCREPANCIES:
        cp.check(note in present, f"discrepancy '{note}' emitted")
    for d in ledger:
        unknown = [a for a in d.affects if a not in catalogue]
        cp.check(not unknown, f"'{d.id}' affects catalogued identities", f"unknown ids {unknown}")
        cp.warnings.append(f"{d.id}: {d.title}")
    cp.details["discrepancies"] = [d.to_warning() for d in ledger]
    return cp.result()


def criterion_dominance(quick: bool) -> CheckpointResult:
    cp = _Checkpoint("11. M_{4k-2} >= M_{4k} refuted; (q;q)_inf/Psi(-q^2,q) nonnegative")
    cp.check(dominance_counterexample(60) is None, "no dominance failure for n <= 60")
    witness = dominance_counterexample(4000)
    cp.details["witness"] = witness._asdict() if witness else None
    cp.check(witness is not None, "dominance fails for some n <= 4000")
    scan = nonnegativity_check(500 if quick else 2000)
    cp.details["zero_coefficients"] = scan.zero_indices[:20]
    cp.check(scan.first_negative is None, f"nonnegative to q^{scan.trunc}", f"negative at q^{scan.first_negative}")
    return cp.result()


CRITERIA: List[Callable[[bool], CheckpointResult]] = [
    criterion_c5_mod2,
    criterion_c5_mod4,
    criterion_c9,
    criterion_dissection,
    criterion_growth,
    criterion_mex,
    criterion_toolkit,
    criterion_lost_notebook,
    criterion_conjectures,
    criterion_discrepancies,
    criterion_dominance,
]


# ============== Scoreboard ==============

@dataclass
class Scoreboard:
    results: List[CheckpointResult]

    @property
    def all_passed(self) -> bool:
        return all(r.is_passed for r in self.results)

    def count(self, status: CheckpointStatus) -> int:
        return sum(1 for r in self.results if r.status == status)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.count(CheckpointStatus.PASSED),
            "failed": self.count(CheckpointStatus.FAILED),
            "warnings": self.count(CheckpointStatus.WARNING),
            "criteria": [r.to_dict() for r in self.results],
            "discrepancies": [d.to_warning() for d in get_registry_manager().discrepancies()],
        }

    def render_text(self) -> str:
        lines = []
        for r in self.results:
            lines.append(f"[{r.status.value.upper():7}] {r.checkpoint_name}")
            lines.extend(f"    ok   {c}" for c in r.checks_passed)
            lines.extend(f"    FAIL {c}" for c in r.checks_failed)
            lines.extend(f"    note {w}" for w in r.warnings)
        lines.append(
            f"{self.count(CheckpointStatus.PASSED)} passed, {self.count(CheckpointStatus.WARNING)} passed with "
            f"warnings, {self.count(CheckpointStatus.FAILED)} failed"
        )
        return "\n".join(lines)


def run_acceptance(
    quick: bool = False,
    max_workers: Optional[int] = None,
    criteria: Optional[List[Callable[[bool], CheckpointResult]]] = None,
) -> Scoreboard:
    """Run the criteria as parallel jobs; a criterion that raises is scored as failed."""
    selected = CRITERIA if criteria is None else criteria
    jobs = [(fn.__name__, (lambda fn=fn: fn(quick))) for fn in selected]
    outcomes = ParallelExecutor(max_workers).run_jobs(jobs)
    results = []
    for fn, outcome in zip(selected, outcomes):
        if outcome["success"]:
            results.append(outcome["result"])
        else:
            results.append(CheckpointResult(
                CheckpointStatus.FAILED, fn.__name__, [], [f"raised: {outcome['error']}"], [], {}
            ))
    board = Scoreboard(results)
    logger.info(f"Acceptance: {board.count(CheckpointStatus.FAILED)} of {len(results)} criteria failed")
    return board
