"""
Growth of False Theta Reciprocals

c_2(n), the coefficients of 1/Psi(-q^2,q), satisfy an infinite recurrence
over the generalized pentagonal numbers. Cutting that recurrence after an
even number of sign blocks gives finite recurrences whose solutions bound
c_2 from above and below; the largest real roots of their characteristic
polynomials bracket the exponential growth rate.

Ratios are computed with exact integer arithmetic and rounded outward.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import sympy

from app.core.config import settings
from app.core.exceptions import NoSignChangeError, QSeriesError
from app.services.parallel import ParallelExecutor
from app.tools.identities import c_t_series
from app.tools.series import first_difference, make_series, reciprocal
from app.tools.theta import ThetaKind, ThetaSpec, eta_factor, expand_theta, pentagonal_terms

logger = logging.getLogger(__name__)

# Psi(-q^2,q) signs over the ascending pentagonal exponents
FALSE_SIGN_PERIOD = (-1, -1, 1, -1, 1, 1, -1, 1)

UPPER_LAGS = 4
LOWER_LAGS = 8


# ============== Sign Tables ==============

@dataclass(frozen=True)
class PentagonalTable:
    """
    Nonzero exponents of (q;q)_inf and Psi(-q^2,q) below a limit.

    Attributes:
        exponents: 1, 2, 5, 7, 12, 15, ... ascending
        signs_pent: signs in (q;q)_inf (period -,-,+,+)
        signs_false: signs in Psi(-q^2,q) (period 8)
    """
    exponents: Tuple[int, ...]
    signs_pent: Tuple[int, ...]
    signs_false: Tuple[int, ...]

    @classmethod
    def build(cls, limit: int) -> "PentagonalTable":
        terms = pentagonal_terms(limit)
        return cls(
            exponents=tuple(g for g, _ in terms),
            signs_pent=tuple(s for _, s in terms),
            signs_false=tuple(FALSE_SIGN_PERIOD[i % 8] for i in range(len(terms))),
        )

    def reproduces_series(self, trunc: int) -> bool:
        """Both sign columns rebuild their series exactly to trunc."""
        pent = make_series([(0, 1)] + list(zip(self.exponents, self.signs_pent)), trunc)
        false = make_series([(0, 1)] + list(zip(self.exponents, self.signs_false)), trunc)
        psi = expand_theta(ThetaSpec.psi(-1, 2, 1, 1), trunc)
        return first_difference(pent, eta_factor(1, trunc)) is None and first_difference(false, psi) is None

    def lags(self) -> List[Tuple[int, int]]:
        """(lag, sign) of the c_2 recurrence: c(n) = sum sign·c(n - lag)."""
        return [(g, -s) for g, s in zip(self.exponents, self.signs_false)]


@dataclass(frozen=True)
class RecurrenceSpec:
    """
    Finite linear recurrence x(n) = sum sign·x(n - lag).

    char_poly holds x^d - sum sign·x^(d-lag), highest degree first.
    """
    terms: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        lags = [lag for lag, _ in self.terms]
        if not lags or lags[0] < 1 or any(a >= b for a, b in zip(lags, lags[1:])):
            raise QSeriesError(f"recurrence lags must be positive and strictly increasing: {lags}")

    @property
    def degree(self) -> int:
        return self.terms[-1][0]

    @property
    def char_poly(self) -> Tuple[int, ...]:
        d = self.degree
        coeffs = [0] * (d + 1)
        coeffs[0] = 1
        for lag, sign in self.terms:
            coeffs[lag] -= sign
        return tuple(coeffs)

    def as_poly(self) -> sympy.Poly:
        return sympy.Poly(list(self.char_poly), sympy.Symbol("x"))


def recurrence_spec(lag_count: int) -> RecurrenceSpec:
    """The c_2 recurrence cut after its first lag_count lags."""
    if lag_count < 1:
        raise QSeriesError(f"need at least one lag, got {lag_count}")
    limit = 1
    table = PentagonalTable.build(limit)
    while len(table.exponents) < lag_count:
        limit *= 2
        table = PentagonalTable.build(limit)
    return RecurrenceSpec(tuple(table.lags()[:lag_count]))


# ============== Sequences ==============

def c2_by_recurrence(N: int) -> List[int]:
    """c_2(0..N) from the full pentagonal recurrence (lags past n contribute nothing)."""
    if N < 0:
        raise QSeriesError(f"N must be non-negative, got {N}")
    lags = PentagonalTable.build(N).lags()
    c = [1] + [0] * N
    for n in range(1, N + 1):
        total = 0
        for lag, sign in lags:
            if lag > n:
                break
            total += sign * c[n - lag]
        c[n] = total
    return c


def run_recurrence(spec: RecurrenceSpec, initial: Sequence[int], N: int) -> List[int]:
    """Extend initial (length = degree) to indices 0..N."""
    d = spec.degree
    if len(initial) < d:
        raise QSeriesError(f"recurrence of degree {d} needs {d} initial values, got {len(initial)}")
    x = list(initial[:d])
    for n in range(d, N + 1):
        x.append(sum(sign * x[n - lag] for lag, sign in spec.terms))
    return x[:N + 1]


def bounding_sequences(N: int) -> Tuple[List[int], List[int]]:
    """
    (a, b): the 4-lag and 8-lag truncations of the c_2 recurrence, started
    from the same initial values as c_2.
    """
    upper, lower = recurrence_spec(UPPER_LAGS), recurrence_spec(LOWER_LAGS)
    if N < lower.degree:
        raise QSeriesError(f"bounding sequences need N >= {lower.degree}, got {N}")
    c = c2_by_recurrence(N)
    return run_recurrence(upper, c, N), run_recurrence(lower, c, N)


def sandwich_holds(a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> bool:
    return all(lo <= mid <= hi for lo, mid, hi in zip(b, c, a))


def difference_bounds_hold(a: Sequence[int], c: Sequence[int], max_gap: int = 7) -> bool:
    """a(n) - a(n-z) >= c(n) - c(n-z) for 1 <= z <= max_gap."""
    n_top = min(len(a), len(c))
    return all(
        a[n] - a[n - z] >= c[n] - c[n - z]
        for z in range(1, max_gap + 1)
        for n in range(z, n_top)
    )


# ============== Roots ==============

def _horner(coeffs: Sequence[int], x: Fraction) -> Fraction:
    value = Fraction(0)
    for c in coeffs:
        value = value * x + c
    return value


def largest_real_root(
    poly: Sequence[int],
    lo: float = 1.0,
    hi: float = 2.0,
    tol: Optional[float] = None,
    cells: int = 1000,
) -> float:
    """
    Largest root of poly (coefficients highest degree first) in [lo, hi].

    Scans a uniform grid downward from hi for the first cell with a sign
    change, then bisects it in exact rationals until its width is below tol.

    Raises:
        NoSignChangeError: no cell changes sign
    """
    eps = Fraction(settings.ROOT_TOL if tol is None else tol)
    if eps <= 0 or cells < 1:
        raise QSeriesError("root search needs tol > 0 and at least one cell")
    left, right = Fraction(lo), Fraction(hi)
    if left >= right:
        raise QSeriesError(f"empty interval [{lo}, {hi}]")
    step = (right - left) / cells
    upper = right
    f_upper = _horner(poly, upper)
    if f_upper == 0:
        return float(upper)
    for i in range(cells - 1, -1, -1):
        lower = left + step * i
        f_lower = _horner(poly, lower)
        if f_lower == 0:
            return float(lower)
        if (f_lower < 0) != (f_upper < 0):
            break
        upper, f_upper = lower, f_lower
    else:
        raise NoSignChangeError(f"no sign change of degree-{len(poly) - 1} polynomial on [{lo}, {hi}]")

    while upper - lower > eps:
        mid = (lower + upper) / 2
        f_mid = _horner(poly, mid)
        if f_mid == 0:
            return float(mid)
        if (f_mid < 0) == (f_lower < 0):
            lower, f_lower = mid, f_mid
        else:
            upper = mid
    return float((lower + upper) / 2)


# ============== Ratios ==============

class RatioInterval(NamedTuple):
    lo: Decimal
    hi: Decimal

    def contains(self, x: float) -> bool:
        return self.lo <= Decimal(repr(x)) <= self.hi


def _floor_decimal(q: Fraction, digits: int) -> Decimal:
    return Decimal(q.numerator * 10 ** digits // q.denominator).scaleb(-digits)


def _ceil_decimal(q: Fraction, digits: int) -> Decimal:
    return Decimal(-(-q.numerator * 10 ** digits // q.denominator)).scaleb(-digits)


def growth_ratio(
    seq: Sequence[int], window: Tuple[int, int], digits: Optional[int] = None
) -> RatioInterval:
    """
    min and max of seq(n+1)/seq(n) for n0 <= n < n1, rounded outward.

    Raises:
        QSeriesError: window outside seq, or a non-positive entry in it
    """
    n0, n1 = window
    d = settings.RATIO_DIGITS if digits is None else digits
    if not 0 <= n0 < n1 < len(seq):
        raise QSeriesError(f"window {window} does not fit a sequence of length {len(seq)}")
    if any(seq[n] <= 0 for n in range(n0, n1 + 1)):
        raise QSeriesError(f"sequence is not positive on window {window}")
    ratios = [Fraction(seq[n + 1], seq[n]) for n in range(n0, n1)]
    return RatioInterval(_floor_decimal(min(ratios), d), _ceil_decimal(max(ratios), d))


class CompositionGrowth(NamedTuple):
    counts: List[int]
    ratio: Optional[RatioInterval]


def pentagonal_compositions(N: int, window: Optional[Tuple[int, int]] = None) -> CompositionGrowth:
    """Coefficients of 1/(1 - sum_g q^g) over generalized pentagonal g, with their ratio."""
    if N < 0:
        raise QSeriesError(f"N must be non-negative, got {N}")
    parts = [g for g, _ in pentagonal_terms(N)]
    counts = [1] + [0] * N
    for n in range(1, N + 1):
        counts[n] = sum(counts[n - g] for g in parts if g <= n)
    w = window or (N // 2, N)
    ratio = growth_ratio(counts, w) if N >= 2 and w[1] <= N else None
    return CompositionGrowth(counts, ratio)


# ============== Surveys ==============

def growth_survey(
    t_values: Sequence[int], window: Tuple[int, int] = (500, 1000), max_workers: Optional[int] = None
) -> List[Dict[str, Any]]:
    """Ratio interval of c_t on window for each t; sign trouble is recorded, not raised."""
    def survey_one(t: int) -> Dict[str, Any]:
        coeffs = c_t_series(t, window[1] + 1).coeffs
        try:
            ratio = growth_ratio(coeffs, window)
        except QSeriesError as e:
            return {"t": t, "error": str(e)}
        return {"t": t, "ratio_lo": str(ratio.lo), "ratio_hi": str(ratio.hi)}

    return ParallelExecutor(max_workers).map_ordered(survey_one, t_values)


def sign_variant_table(
    a: int, b: int, trunc: int, window: Optional[Tuple[int, int]] = None
) -> List[Dict[str, Any]]:
    """
    For every sign choice in f(±q^a, ±q^b) and Psi(±q^a, ±q^b): negative
    coefficients of the reciprocal in the window and, when none, its ratio.
    Descriptive only.
    """
    w = window or (trunc // 2, trunc - 1)
    rows = []
    for kind in (ThetaKind.THETA, ThetaKind.FALSE_THETA):
        for sa in (1, -1):
            for sb in (1, -1):
                spec = ThetaSpec(kind, sa, a, sb, b)
                coeffs = reciprocal(expand_theta(spec, trunc)).coeffs
                negatives = sum(1 for n in range(w[0], w[1] + 1) if coeffs[n] < 0)
                row: Dict[str, Any] = {"spec": str(spec), "kind": kind.value, "negatives": negatives}
                if negatives == 0 and all(coeffs[n] > 0 for n in range(w[0], w[1] + 1)):
                    ratio = growth_ratio(coeffs, w)
                    row.update(ratio_lo=str(ratio.lo), ratio_hi=str(ratio.hi))
                rows.append(row)
    return rows


@dataclass
class AsymptoticsSummary:
    t: int
    n: int
    window: Tuple[int, int]
    ratio_lo: str
    ratio_hi: str
    root_deg7: Optional[float] = None
    root_deg26: Optional[float] = None
    sandwich_ok: Optional[bool] = None
    difference_ok: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["window"] = list(self.window)
        return data


def asymptotics_summary(t: int = 2, n: int = 2000, window: Optional[Tuple[int, int]] = None) -> AsymptoticsSummary:
    """
    Ratio interval of c_t on window (default (n/4, n/2)); for t = 2 also the
    bounding roots and the sandwich checks.
    """
    w = window or (n // 4, n // 2)
    if t == 2:
        c = c2_by_recurrence(n)
    else:
        c = list(c_t_series(t, n).coeffs)
    ratio = growth_ratio(c, w)
    summary = AsymptoticsSummary(t, n, w, str(ratio.lo), str(ratio.hi))
    if t == 2:
        a, b = bounding_sequences(n)
        summary.root_deg7 = largest_real_root(recurrence_spec(UPPER_LAGS).char_poly)
        summary.root_deg26 = largest_real_root(recurrence_spec(LOWER_LAGS).char_poly)
        summary.sandwich_ok = sandwich_holds(a, b, c)
        summary.difference_ok = difference_bounds_hold(a, c)
    logger.info(f"c_{t} growth on {w}: [{summary.ratio_lo}, {summary.ratio_hi}]")
    return summary
