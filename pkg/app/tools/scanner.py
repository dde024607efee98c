"""
Progression Scanner

Mines congruences c(An+B) ≡ 0 (mod m) from a truncated series, checks the
empirical conjecture tables from the registry, and derives progressions
from the residues a quadratic form αn² + βn never attains.

Everything here certifies "holds up to N" and nothing more.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

import sympy
from sympy.ntheory.residue_ntheory import is_quad_residue

from app.core.config import settings
from app.core.exceptions import QSeriesError, TruncationError
from app.knowledge import get_registry_manager
from app.knowledge.schemas import ConjectureRow
from app.services.parallel import ParallelExecutor
from app.tools.identities import c_t_series
from app.tools.series import ModSeries, Series

logger = logging.getLogger(__name__)


# ============== Types ==============

@dataclass(frozen=True)
class Progression:
    """
    A congruence c(An+B) ≡ 0 (mod modulus), checked on every index An+B <= verified_upto.
    """
    A: int
    B: int
    modulus: int
    verified_upto: int

    def __post_init__(self):
        if self.A < 1 or not 0 <= self.B < self.A:
            raise QSeriesError(f"progression needs A >= 1 and 0 <= B < A, got ({self.A},{self.B})")
        if self.modulus < 2:
            raise QSeriesError(f"modulus must be >= 2, got {self.modulus}")

    @property
    def hits(self) -> int:
        """Number of indices checked."""
        if self.verified_upto < self.B:
            return 0
        return (self.verified_upto - self.B) // self.A + 1

    def to_dict(self) -> Dict[str, int]:
        return {"A": self.A, "B": self.B, "mod": self.modulus, "verified_upto": self.verified_upto}

    def __str__(self) -> str:
        return f"({self.A}n+{self.B}) mod {self.modulus}"


@dataclass(frozen=True)
class QuadFormSpec:
    """n -> alpha·n² + beta·n."""
    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha == 0:
            raise QSeriesError("quadratic form needs alpha != 0")

    def __call__(self, n: int) -> int:
        return self.alpha * n * n + self.beta * n

    def __str__(self) -> str:
        sign = "-" if self.beta < 0 else "+"
        return f"{self.alpha}n^2 {sign} {abs(self.beta)}n"


class ProgressionCheck(NamedTuple):
    """Outcome of one direct re-check; witness is the first index An+B that fails."""
    holds: bool
    witness: Optional[int]
    progression: Optional[Progression]


class ResidueAnalysis(NamedTuple):
    modulus: int
    attained: List[int]
    avoided: List[int]
    criterion: Optional[Dict[int, bool]]


# ============== Direct Checks ==============

def _modulus_for(series: Series, modulus: Optional[int]) -> int:
    if modulus is not None:
        if modulus < 2:
            raise QSeriesError(f"modulus must be >= 2, got {modulus}")
        if isinstance(series, ModSeries) and series.modulus % modulus != 0:
            raise QSeriesError(f"series mod {series.modulus} says nothing mod {modulus}")
        return modulus
    if isinstance(series, ModSeries):
        return series.modulus
    raise QSeriesError("an integer series needs an explicit modulus")


def verify_progression(series: Series, A: int, B: int, modulus: Optional[int] = None) -> ProgressionCheck:
    """Check every coefficient at An+B <= series.trunc against 0 mod m."""
    m = _modulus_for(series, modulus)
    if A < 1 or not 0 <= B < A:
        raise QSeriesError(f"progression needs A >= 1 and 0 <= B < A, got ({A},{B})")
    for index in range(B, series.trunc + 1, A):
        if series.coeffs[index] % m:
            return ProgressionCheck(False, index, None)
    return ProgressionCheck(True, None, Progression(A, B, m, series.trunc))


def _zero_residues(coeffs: Sequence[int], A: int, m: int) -> List[int]:
    return [B for B in range(A) if all(c % m == 0 for c in coeffs[B::A])]


def scan_progressions(
    series: Series,
    A_max: int,
    min_hits: Optional[int] = None,
    modulus: Optional[int] = None,
    max_workers: Optional[int] = None,
) -> List[Progression]:
    """
    Every (A, B) with A <= A_max whose coefficients vanish mod m to trunc.

    A progression is left out when a reported one with a smaller A' dividing
    A and B ≡ B' (mod A') already covers it. Output is sorted by (A, B).

    Raises:
        TruncationError: trunc too small to give min_hits indices to every candidate
        QSeriesError: the series is identically zero mod m
    """
    m = _modulus_for(series, modulus)
    hits = settings.SCAN_MIN_HITS if min_hits is None else min_hits
    if A_max < 1 or hits < 1:
        raise QSeriesError("scan needs A_max >= 1 and min_hits >= 1")
    required = A_max * hits - 1
    if series.trunc < required:
        raise TruncationError(
            f"scan to A={A_max} with {hits} hits needs trunc >= {required}, got {series.trunc}",
            required=required,
        )
    coeffs = series.coeffs
    if all(c % m == 0 for c in coeffs):
        raise QSeriesError(f"series is identically zero mod {m}; every progression would match")

    executor = ParallelExecutor(max_workers)
    per_A = executor.map_ordered(lambda A: _zero_residues(coeffs, A, m), range(1, A_max + 1))

    found: List[Progression] = []
    kept: Set[Tuple[int, int]] = set()
    for A, residues in zip(range(1, A_max + 1), per_A):
        for B in residues:
            if any((d, B % d) in kept for d in range(1, A) if A % d == 0):
                continue
            kept.add((A, B))
            found.append(Progression(A, B, m, series.trunc))
    logger.info(f"Scan mod {m} to A={A_max}, trunc={series.trunc}: {len(found)} progressions")
    return found


# ============== Quadratic Forms ==============

def quadform_residue_analysis(form: QuadFormSpec, p: int) -> ResidueAnalysis:
    """
    Residues mod p attained and avoided by alpha·n² + beta·n.

    n mod p fixes the value mod p, so p need not be prime for the attained
    set. For an odd prime with gcd(alpha, p) = 1 the completed-square test is
    reported too: j is attained iff 4·alpha·j + beta² is a square mod p.
    """
    if p < 2:
        raise QSeriesError(f"residue analysis needs p >= 2, got {p}")
    attained = sorted({form(n) % p for n in range(p)})
    avoided = [j for j in range(p) if j not in attained]
    criterion: Optional[Dict[int, bool]] = None
    if p > 2 and sympy.isprime(p) and gcd(form.alpha, p) == 1:
        criterion = {j: is_quad_residue((4 * form.alpha * j + form.beta ** 2) % p, p) for j in range(p)}
    return ResidueAnalysis(p, attained, avoided, criterion)


def representability_progressions(
    form: QuadFormSpec,
    outer: Tuple[int, int],
    moduli: Iterable[int],
    series: Series,
    modulus: Optional[int] = None,
) -> List[Progression]:
    """
    Inside the progression A0·n + B0, whose survivors are indexed by the form,
    every residue j the form avoids mod m gives A0·m·n + (A0·j + B0).
    Each candidate is re-checked against series before it is emitted.
    """
    A0, B0 = outer
    out: List[Progression] = []
    for m in moduli:
        for j in quadform_residue_analysis(form, m).avoided:
            check = verify_progression(series, A0 * m, A0 * j + B0, modulus)
            if check.holds:
                out.append(check.progression)
            else:
                logger.warning(f"({A0 * m}n+{A0 * j + B0}) derived from {form} fails at index {check.witness}")
    return out


def quadform_scan_consistency(
    form: QuadFormSpec, primes: Iterable[int], outer: Tuple[int, int], found: Iterable[Progression]
) -> List[Tuple[int, int]]:
    """
    Progressions implied by avoided residues (index outer_A·(pn+j) + outer_B)
    that a scan failed to cover; empty when the scan agrees.
    """
    A0, B0 = outer
    covered = [(p.A, p.B) for p in found]
    missing: List[Tuple[int, int]] = []
    for p in primes:
        for j in quadform_residue_analysis(form, p).avoided:
            A, B = A0 * p, A0 * j + B0
            if not any(A % a == 0 and B % a == b for a, b in covered):
                missing.append((A, B))
    return missing


# ============== Conjecture Tables ==============

def check_rows(rows: Iterable[ConjectureRow], trunc: int) -> List[Dict[str, Any]]:
    """Check table rows against c_t mod m, one series per distinct (t, m)."""
    rows = list(rows)
    cache: Dict[Tuple[int, int], Series] = {}
    results = []
    for row in rows:
        key = (row.t, row.modulus)
        if key not in cache:
            cache[key] = c_t_series(row.t, trunc, row.modulus)
        check = verify_progression(cache[key], row.A, row.B)
        results.append({
            "label": row.label(),
            "t": row.t,
            "modulus": row.modulus,
            "A": row.A,
            "B": row.B,
            "status": "pass" if check.holds else "fail",
            "witness": check.witness,
            "hits": (trunc - row.B) // row.A + 1 if trunc >= row.B else 0,
        })
    return results


def check_conjecture(conjecture_id: str, trunc: Optional[int] = None) -> Dict[str, Any]:
    """
    Check a registry conjecture table to trunc (default 10·max A).

    Raises:
        RegistryError: unknown table id
        TruncationError: trunc below 10·max A
    """
    table = get_registry_manager().conjecture_table(conjecture_id)
    required = 10 * table.max_A
    n = required if trunc is None else trunc
    if n < required:
        raise TruncationError(f"{conjecture_id} needs trunc >= {required}, got {n}", required=required)
    results = check_rows(table.rows, n)
    failed = [r for r in results if r["status"] == "fail"]
    logger.info(f"{conjecture_id} to q^{n}: {len(results) - len(failed)}/{len(results)} pass")
    return {
        "conjecture": conjecture_id,
        "trunc": n,
        "label": "empirical",
        "all_pass": not failed,
        "rows": results,
    }


# ============== Surveys ==============

def residue_class_survey(
    t_values: Sequence[int],
    moduli: Sequence[int],
    A_max: int,
    trunc: Optional[int] = None,
    min_hits: Optional[int] = None,
    max_workers: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """
    scan_progressions for every (t, m) pair, one parallel job per pair.

    A pair with no progression is recorded as absent at the bound; series
    that vanish identically mod m are reported with their error.
    """
    hits = settings.SCAN_MIN_HITS if min_hits is None else min_hits
    n = A_max * hits - 1 if trunc is None else trunc
    pairs = [(t, m) for t in t_values for m in moduli]

    def job(t: int, m: int):
        return lambda: scan_progressions(c_t_series(t, n, m), A_max, hits, max_workers=1)

    executor = ParallelExecutor(max_workers)
    outcomes = executor.run_jobs([(f"c{t}_mod{m}", job(t, m)) for t, m in pairs])
    table = []
    for (t, m), outcome in zip(pairs, outcomes):
        row: Dict[str, Any] = {"t": t, "t_mod_4": t % 4, "modulus": m, "A_max": A_max, "trunc": n}
        if outcome["success"]:
            found = outcome["result"]
            row.update(count=len(found), progressions=[(p.A, p.B) for p in found])
        else:
            row.update(count=None, error=outcome["error"])
        table.append(row)
    return table
