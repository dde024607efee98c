"""
Mex Partition Statistics

Generating functions for M_k(n), the number of partitions of n whose mex
(least missing part) is k and which have more parts above k than below.
Every generating-function result here has a brute-force counterpart that
enumerates partitions, plus the p(n)-difference form that comes from
cutting Euler's pentagonal recurrence after 2k terms.

Also home to the rank-0 generating function, the dominance search
M_{4k-2}(n) >= M_{4k}(n) and the positivity scan of (q;q)_inf/Psi(-q^2,q).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from app.core.exceptions import QSeriesError
from app.services.parallel import ParallelExecutor
from app.tools.identities import Comparison, IdentityReport, evaluate_comparisons
from app.tools.series import (
    IntSeries,
    Series,
    add,
    div_linear_factor,
    first_difference,
    mul,
    one,
    reciprocal,
    scale,
    shift,
    sub,
    zero,
)
from app.tools.theta import (
    GaussTable,
    ThetaSpec,
    eta_factor,
    expand_theta,
    gaussian_binomial,
    gaussian_binomial_column,
    partition_gf,
    pentagonal_terms,
    pochhammer,
)

logger = logging.getLogger(__name__)

PSI_TPN = ThetaSpec.psi(-1, 2, 1, 1)
PSI_RANK_PRINTED = ThetaSpec.psi(-1, 2, -1, 1)


# ============== Partitions ==============

@dataclass(frozen=True)
class Partition:
    """
    A partition of n with parts in weakly decreasing order.

    Attributes:
        parts: Positive parts, largest first; empty for n = 0
    """
    parts: Tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise QSeriesError(f"partition parts must be positive: {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise QSeriesError(f"partition parts must be weakly decreasing: {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def rank(self) -> int:
        """Largest part minus number of parts (0 for the empty partition)."""
        if not self.parts:
            return 0
        return self.parts[0] - len(self.parts)

    @property
    def mex(self) -> int:
        present = set(self.parts)
        k = 1
        while k in present:
            k += 1
        return k

    def count_above(self, k: int) -> int:
        return sum(1 for p in self.parts if p > k)

    def count_below(self, k: int) -> int:
        return sum(1 for p in self.parts if p < k)

    def __str__(self) -> str:
        return "+".join(str(p) for p in self.parts) or "()"


def _descending_partitions(n: int) -> Iterator[Tuple[int, ...]]:
    """
    Partitions of n as descending tuples, in reverse lexicographic order.

    Iterative form of the descending-parts recursion: x[1..h] holds the parts
    greater than 1 and x[h+1..m] the trailing ones.
    """
    if n < 0:
        return
    if n == 0:
        yield ()
        return
    x = [1] * (n + 1)
    x[1] = n
    m, h = 1, 1
    yield (n,)
    while x[1] != 1:
        if x[h] == 2:
            m += 1
            x[h] = 1
            h -= 1
        else:
            r = x[h] - 1
            t = m - h + 1
            x[h] = r
            while t >= r:
                h += 1
                x[h] = r
                t -= r
            if t == 0:
                m = h
            else:
                m = h + 1
                if t > 1:
                    h += 1
                    x[h] = t
        yield tuple(x[1:m + 1])


def partitions(n: int) -> Iterator[Partition]:
    """All partitions of n, largest parts first."""
    for parts in _descending_partitions(n):
        yield Partition(parts)


class PartitionStatistics(NamedTuple):
    """Per-n enumeration summary."""
    n: int
    total: int
    rank_zero: int
    mex_counts: Dict[int, int]


def partition_statistics(n: int) -> PartitionStatistics:
    """
    One enumeration pass over the partitions of n.

    mex_counts[k] counts partitions with mex exactly k and more parts above k
    than below k; each partition has one mex, so it lands in at most one bucket.
    """
    total = rank_zero = 0
    mex_counts: Dict[int, int] = {}
    for parts in _descending_partitions(n):
        total += 1
        if parts and parts[0] == len(parts):
            rank_zero += 1
        k, below = 1, 0
        for p in reversed(parts):
            if p == k:
                below += 1
                k += 1
            elif p < k:
                below += 1
            else:
                break
        if len(parts) - below > below:
            mex_counts[k] = mex_counts.get(k, 0) + 1
    return PartitionStatistics(n, total, rank_zero, mex_counts)


def statistics_table(n_max: int, max_workers: Optional[int] = None) -> List[PartitionStatistics]:
    """partition_statistics for n = 0..n_max, enumerated in parallel over n."""
    if n_max < 0:
        raise QSeriesError(f"n_max must be non-negative, got {n_max}")
    executor = ParallelExecutor(max_workers)
    return executor.map_ordered(partition_statistics, range(n_max + 1))


def mex_count_oracle(k: int, n: int) -> int:
    """M_k(n) by exhaustive enumeration."""
    if k < 1:
        raise QSeriesError(f"mex needs k >= 1, got {k}")
    if n < 0:
        raise QSeriesError(f"n must be non-negative, got {n}")
    return partition_statistics(n).mex_counts.get(k, 0)


# ============== Generating Functions ==============

def _mex_min_exponent(k: int, n: int) -> int:
    return k * (k - 1) // 2 + (k + 1) * n


def mex_gf(k: int, trunc: int) -> IntSeries:
    """
    sum_{n>=k} q^(C(k,2)+(k+1)n) / (q;q)_n · [n-1 choose k-1]_q, exact to trunc.

    Each summand is built from a fresh Pochhammer reciprocal and an exact
    Gaussian polynomial; the q-Pascal rows are shared across summands
    through a table local to this call.
    """
    if k < 1:
        raise QSeriesError(f"mex needs k >= 1, got {k}")
    table: GaussTable = {}
    total = zero(trunc)
    n = k
    while _mex_min_exponent(k, n) <= trunc:
        inv = reciprocal(pochhammer(1, 1, 1, n, trunc))
        gauss = IntSeries.from_list(gaussian_binomial(n - 1, k - 1, table).coeffs, trunc)
        total = add(total, shift(mul(inv, gauss), _mex_min_exponent(k, n)))
        n += 1
    return total


def tpn_double_sum(trunc: int) -> IntSeries:
    """
    sum_{j>=1} (-1)^(j+1) sum_{n>=2j} q^(C(2j,2)+(2j+1)n)/(q;q)_n [n-1 choose 2j-1]_q,
    stepped with incremental 1/(q;q)_n and the Gaussian column recurrence.
    """
    n_top = trunc // 3 + 1
    inverses = [one(trunc)]
    for n in range(1, n_top + 1):
        inverses.append(div_linear_factor(inverses[-1], -1, n))

    total = zero(trunc)
    j = 1
    while _mex_min_exponent(2 * j, 2 * j) <= trunc:
        k = 2 * j
        inner = zero(trunc)
        for m, gauss in gaussian_binomial_column(k - 1, n_top - 1, trunc):
            e = _mex_min_exponent(k, m + 1)
            if e > trunc:
                break
            inner = add(inner, shift(mul(inverses[m + 1], gauss), e))
        total = add(total, inner) if j % 2 else sub(total, inner)
        j += 1
    return total


def _alternating_even_mex(trunc: int, flip: Optional[int]) -> Series:
    """M_2 - M_4 + M_6 - ..., optionally with the sign of M_{2·flip} reversed."""
    total = zero(trunc)
    j = 1
    while _mex_min_exponent(2 * j, 2 * j) <= trunc:
        sign = 1 if j % 2 else -1
        if flip == j:
            sign = -sign
        total = add(total, scale(mex_gf(2 * j, trunc), sign))
        j += 1
    return total


def tpn_rhs(trunc: int, form: str = "mex", flip: Optional[int] = None) -> Series:
    """(q;q)_inf (1 - 2·S), S from mex_gf ("mex") or the explicit double sum."""
    if form == "mex":
        inner = _alternating_even_mex(trunc, flip)
    elif form == "double_sum":
        inner = tpn_double_sum(trunc)
    else:
        raise QSeriesError(f"unknown form '{form}', expected mex or double_sum")
    return mul(eta_factor(1, trunc), sub(one(trunc), scale(inner, 2)))


TPN_FORMS = ("mex", "double_sum")


def tpn_comparisons(
    trunc: int, details: Dict[str, Any], forms: Sequence[str] = TPN_FORMS, flip: Optional[int] = None
) -> Iterator[Comparison]:
    lhs = expand_theta(PSI_TPN, trunc)
    details["forms"] = list(forms)
    details["even_mex_terms"] = sum(1 for j in range(1, trunc + 1) if _mex_min_exponent(2 * j, 2 * j) <= trunc)
    if flip is not None:
        details["flipped_term"] = f"M_{2 * flip}"
    for form in forms:
        yield Comparison(f"{PSI_TPN} = (q;q)_inf (1 - 2 {form})", lhs, tpn_rhs(trunc, form, flip))


def verify_tpn_theorem(
    trunc: int, forms: Sequence[str] = TPN_FORMS, flip: Optional[int] = None
) -> IdentityReport:
    """
    Psi(-q^2,q) = (q;q)_inf (1 - 2(M_2 - M_4 + M_6 - ...)), exact to trunc.

    Args:
        forms: Right-hand sides to check, from TPN_FORMS
        flip: Reverse the sign of M_{2·flip}; a negative control
    """
    def build(n: int, details: Dict[str, Any]) -> Iterator[Comparison]:
        yield from tpn_comparisons(n, details, forms, flip)

    return evaluate_comparisons("truncated_pentagonal", trunc, build)


# ============== Pentagonal Differences ==============

PTable = Union[Series, Sequence[int]]


def _p(p_table: PTable, m: int) -> int:
    return p_table[m] if m >= 0 else 0


def truncated_pentagonal_diff(k: int, n: int, p_table: PTable) -> int:
    """
    The first 2k terms of p(n) - p(n-1) - p(n-2) + p(n-5) + p(n-7) - ...,
    with p of a negative argument taken as 0.
    """
    if k < 1:
        raise QSeriesError(f"truncation index must be >= 1, got {k}")
    terms = [(0, 1)] + pentagonal_terms(n)
    return sum(sign * _p(p_table, n - g) for g, sign in terms[:2 * k])


def mex_count_by_differences(k: int, n: int, p_table: PTable) -> int:
    """M_k(n) = (-1)^(k-1) times the truncated difference, for n >= 1."""
    if n == 0:
        return 0
    sign = 1 if k % 2 else -1
    return sign * truncated_pentagonal_diff(k, n, p_table)


def partition_numbers(n_max: int) -> IntSeries:
    """p(0..n_max)."""
    return partition_gf(n_max)


def mex_table(k: int, n_max: int) -> List[Dict[str, int]]:
    """Rows {n, gf_coeff, oracle_count, diff_sum} for n = 0..n_max."""
    gf = mex_gf(k, n_max)
    p_table = partition_numbers(n_max)
    stats = statistics_table(n_max)
    return [
        {
            "n": n,
            "gf_coeff": gf[n],
            "oracle_count": stats[n].mex_counts.get(k, 0),
            "diff_sum": truncated_pentagonal_diff(k, n, p_table),
        }
        for n in range(n_max + 1)
    ]


# ============== Rank Zero ==============

def rank_zero_series(trunc: int) -> IntSeries:
    """sum N(0,n) q^n from enumeration; the empty partition is not counted."""
    counts = [0] + [s.rank_zero for s in statistics_table(trunc)[1:]]
    return IntSeries.from_list(counts, trunc)


def rank_zero_variant(spec: ThetaSpec, trunc: int) -> Series:
    """(spec - 1)/(q;q)_inf."""
    return mul(sub(expand_theta(spec, trunc), one(trunc)), partition_gf(trunc))


RANK_VARIANTS = (PSI_RANK_PRINTED, PSI_TPN)


def rank_zero_comparisons(trunc: int, details: Dict[str, Any]) -> Iterator[Comparison]:
    oracle = rank_zero_series(trunc)
    variants: Dict[str, Optional[int]] = {}
    for spec in RANK_VARIANTS:
        variants[str(spec)] = first_difference(rank_zero_variant(spec, trunc), oracle)
    details["variants"] = variants
    details["matching_variants"] = [name for name, diff in variants.items() if diff is None]

    yield Comparison(
        f"({PSI_RANK_PRINTED} - 1)/(q;q)_inf = sum N(0,n) q^n",
        rank_zero_variant(PSI_RANK_PRINTED, trunc),
        oracle,
    )
    nonzero_rank = sub(sub(partition_gf(trunc), oracle), one(trunc))
    yield Comparison("p(n) - N(0,n) ≡ 0 for n >= 1", nonzero_rank, zero(trunc), 2)


def rank_zero_check(trunc: int) -> IdentityReport:
    """Rank-0 generating function against enumeration, plus the parity corollary."""
    return evaluate_comparisons("rank_zero", trunc, rank_zero_comparisons)


# ============== Dominance and Positivity ==============

class DominanceWitness(NamedTuple):
    """M_{4k-2}(n) < M_{4k}(n)."""
    k: int
    n: int
    lower_index_count: int
    higher_index_count: int


def dominance_counterexample(n_max: int = 4000) -> Optional[DominanceWitness]:
    """
    Smallest n (then k) with M_{4k-2}(n) < M_{4k}(n), searched through the
    p(n)-difference form of M_k, or None up to n_max.
    """
    p_table = partition_numbers(n_max).coeffs
    terms = [(0, 1)] + pentagonal_terms(n_max)
    ks: List[int] = []
    k = 1
    while _mex_min_exponent(4 * k - 2, 4 * k - 2) <= n_max:
        ks.append(k)
        k += 1
    for n in range(1, n_max + 1):
        partial: List[int] = []
        running = 0
        for g, sign in terms:
            running += sign * _p(p_table, n - g)
            partial.append(running)
        for k in ks:
            if _mex_min_exponent(4 * k - 2, 4 * k - 2) > n:
                break
            # M_j(n) = (-1)^(j-1) times the sum of the first 2j terms
            low = -partial[min(2 * (4 * k - 2), len(partial)) - 1]
            high = -partial[min(8 * k, len(partial)) - 1]
            if low < high:
                logger.info(f"M_{4 * k - 2}({n}) = {low} < M_{4 * k}({n}) = {high}")
                return DominanceWitness(k, n, low, high)
    logger.info(f"No dominance failure for n <= {n_max}")
    return None


class PositivityScan(NamedTuple):
    trunc: int
    first_negative: Optional[int]
    zero_indices: List[int]


def nonnegativity_check(trunc: int = 2000) -> PositivityScan:
    """Coefficients of (q;q)_inf / Psi(-q^2,q): first negative index and the zeros."""
    s = mul(eta_factor(1, trunc), reciprocal(expand_theta(PSI_TPN, trunc)))
    first_negative = next((n for n, c in enumerate(s.coeffs) if c < 0), None)
    zeros = [n for n, c in enumerate(s.coeffs) if c == 0]
    return PositivityScan(trunc, first_negative, zeros)
