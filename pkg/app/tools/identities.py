"""
Identities and Dissections

Executable two-dissections of theta and false theta functions, and the
catalogue of named identities and congruences. Every catalogue entry is
bound here to a builder that yields the (lhs, rhs) pairs to compare; the
comparison runner turns them into an IdentityReport.

Identities are checked numerically to a truncation bound. A report records
the bound, so a claim is reproducible and falsifiable, never proved.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional

from app.core.exceptions import QSeriesError, RegistryError
from app.knowledge import get_registry_manager
from app.services.parallel import ParallelExecutor
from app.tools.series import (
    IntSeries,
    ModSeries,
    Series,
    add,
    congruent,
    div_linear_factor,
    extract_progression,
    first_difference,
    mul,
    mul_linear_factor,
    neg,
    one,
    power,
    reciprocal,
    scale,
    shift,
    sub,
    substitute_qk,
    zero,
)
from app.tools.theta import (
    EtaProductSpec,
    ThetaKind,
    ThetaSpec,
    eta_factor,
    eta_product,
    expand_theta,
    jtp_product,
    partial_theta_series,
    quadratic_form_series,
    theta_f,
    triangular_series,
)

logger = logging.getLogger(__name__)


# ============== Dissections ==============

@dataclass(frozen=True)
class Dissection:
    """
    source = even_part + odd_sign · q^odd_prefactor_exp · odd_part.

    Attributes:
        source: The dissected spec
        even_part: Spec built from the even-indexed terms of source
        odd_part: Spec built from the odd-indexed terms
        odd_sign: ±1
        odd_prefactor_exp: Power of q in front of odd_part
        even_odd_split: True when the two pieces live on even and odd exponents
            respectively (exactly when both source exponents are odd)
    """
    source: ThetaSpec
    even_part: ThetaSpec
    odd_part: ThetaSpec
    odd_sign: int
    odd_prefactor_exp: int
    even_odd_split: bool

    def odd_term(self, trunc: int, modulus: Optional[int] = None) -> Series:
        """odd_sign · q^p · odd_part, truncated."""
        body = expand_theta(self.odd_part, trunc, modulus)
        return scale(shift(body, self.odd_prefactor_exp), self.odd_sign)

    def expand(self, trunc: int, modulus: Optional[int] = None) -> Series:
        return add(expand_theta(self.even_part, trunc, modulus), self.odd_term(trunc, modulus))

    def __str__(self) -> str:
        p = self.odd_prefactor_exp
        prefix = "" if p == 0 else ("q*" if p == 1 else f"q^{p}*")
        op = "+" if self.odd_sign > 0 else "-"
        return f"{self.even_part} {op} {prefix}{self.odd_part}"


def _halves(spec: ThetaSpec):
    eps = spec.sign_a * spec.sign_b
    a, b = spec.exp_a, spec.exp_b
    split = a % 2 == 1 and b % 2 == 1
    return eps, a, b, split


def dissect_false_theta(spec: ThetaSpec) -> Dissection:
    """
    Split Psi(±q^a, ±q^b) by the parity of the summation index.

    With ε = sign_a·sign_b the even-index terms always give
    Psi(εq^(3a+b), εq^(a+3b)); the odd-index terms give
    -sign_b·q^b·Psi(εq^(3a+5b), εq^(a-b)) when a > b and
    sign_a·q^a·Psi(εq^(5a+3b), εq^(b-a)) when b > a.

    Raises:
        QSeriesError: a == b, or spec is not a false theta spec
    """
    if spec.kind != ThetaKind.FALSE_THETA:
        raise QSeriesError(f"dissect_false_theta needs a psi spec, got {spec}")
    eps, a, b, split = _halves(spec)
    if a == b:
        raise QSeriesError(f"{spec}: equal exponents leave a constant argument in the odd part")
    even = ThetaSpec.psi(eps, 3 * a + b, eps, a + 3 * b)
    if a > b:
        odd = ThetaSpec.psi(eps, 3 * a + 5 * b, eps, a - b)
        return Dissection(spec, even, odd, -spec.sign_b, b, split)
    odd = ThetaSpec.psi(eps, 5 * a + 3 * b, eps, b - a)
    return Dissection(spec, even, odd, spec.sign_a, a, split)


def dissect_theta(spec: ThetaSpec) -> Dissection:
    """
    Two-dissection of f(±q^a, ±q^b):
    f = f(εq^(3a+b), εq^(a+3b)) + sign_b·q^b·f(εq^(3a+5b), εq^(a-b)) for a >= b,
    and the mirror image for b > a.
    """
    if spec.kind != ThetaKind.THETA:
        raise QSeriesError(f"dissect_theta needs a theta spec, got {spec}")
    eps, a, b, split = _halves(spec)
    if a >= b:
        even = ThetaSpec.theta(eps, 3 * a + b, eps, a + 3 * b)
        odd = ThetaSpec.theta(eps, 3 * a + 5 * b, eps, a - b)
        return Dissection(spec, even, odd, spec.sign_b, b, split)
    even = ThetaSpec.theta(eps, a + 3 * b, eps, 3 * a + b)
    odd = ThetaSpec.theta(eps, 5 * a + 3 * b, eps, b - a)
    return Dissection(spec, even, odd, spec.sign_a, a, split)


def dissect(spec: ThetaSpec) -> Dissection:
    if spec.kind == ThetaKind.THETA:
        return dissect_theta(spec)
    return dissect_false_theta(spec)


@dataclass
class DissectionNode:
    """One node of an iterated dissection; leaves have no dissection."""
    spec: ThetaSpec
    dissection: Optional[Dissection] = None
    even: Optional["DissectionNode"] = None
    odd: Optional["DissectionNode"] = None

    def series(self, trunc: int, modulus: Optional[int] = None) -> Series:
        """Rebuild the node's series from its leaves."""
        if self.dissection is None:
            return expand_theta(self.spec, trunc, modulus)
        d = self.dissection
        odd = scale(shift(self.odd.series(trunc, modulus), d.odd_prefactor_exp), d.odd_sign)
        return add(self.even.series(trunc, modulus), odd)

    def leaves(self) -> List[ThetaSpec]:
        if self.dissection is None:
            return [self.spec]
        return self.even.leaves() + self.odd.leaves()

    def to_dict(self) -> Dict[str, Any]:
        if self.dissection is None:
            return {"spec": str(self.spec)}
        return {
            "spec": str(self.spec),
            "odd_sign": self.dissection.odd_sign,
            "odd_prefactor_exp": self.dissection.odd_prefactor_exp,
            "even": self.even.to_dict(),
            "odd": self.odd.to_dict(),
        }


def iterate_dissection(spec: ThetaSpec, depth: int) -> DissectionNode:
    """Dissect, then dissect both parts, down to the given depth."""
    if depth < 0:
        raise QSeriesError("dissection depth must be non-negative")
    if depth == 0 or (spec.kind == ThetaKind.FALSE_THETA and spec.exp_a == spec.exp_b):
        return DissectionNode(spec)
    d = dissect(spec)
    return DissectionNode(
        spec,
        d,
        iterate_dissection(d.even_part, depth - 1),
        iterate_dissection(d.odd_part, depth - 1),
    )


# ============== Reports ==============

class ReportStatus(str, Enum):
    VERIFIED = "verified"
    FAILED = "failed"


@dataclass
class IdentityReport:
    """
    Outcome of comparing both sides of an identity to a bound.

    Attributes:
        identity_id: Catalogue id (or a descriptive label for ad-hoc checks)
        trunc: Requested truncation
        modulus: m for congruence checks, None for exact comparison
        status: verified or failed
        first_mismatch: Smallest differing exponent of the failed check
        elapsed: Wall-clock seconds (not part of to_dict)
        source_note: Discrepancy ledger ids relevant to the identity
        details: Check count, failing check label, variant outcomes
    """
    identity_id: str
    trunc: int
    modulus: Optional[int]
    status: ReportStatus
    first_mismatch: Optional[int] = None
    elapsed: float = 0.0
    source_note: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if (self.status == ReportStatus.FAILED) != (self.first_mismatch is not None):
            raise QSeriesError("a report fails exactly when it carries a first mismatch")

    @property
    def is_verified(self) -> bool:
        return self.status == ReportStatus.VERIFIED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "identity": self.identity_id,
            "trunc": self.trunc,
            "modulus": self.modulus if self.modulus is not None else "exact",
            "status": self.status.value,
            "first_mismatch": self.first_mismatch,
            "details": self.details,
        }


class Comparison(NamedTuple):
    """One lhs/rhs pair; modulus None means exact equality."""
    label: str
    lhs: Series
    rhs: Series
    modulus: Optional[int] = None


ComparisonBuilder = Callable[[int, Dict[str, Any]], Iterable[Comparison]]


def _effective_modulus(own: Optional[int], override: Optional[int]) -> Optional[int]:
    if override is None:
        return own
    if own is None or own % override == 0:
        return override
    raise QSeriesError(f"a congruence mod {own} says nothing mod {override}")


def _mismatch(c: Comparison, modulus: Optional[int]) -> Optional[int]:
    upto = min(c.lhs.trunc, c.rhs.trunc)
    if modulus is None:
        return first_difference(c.lhs, c.rhs, upto)
    return congruent(c.lhs, c.rhs, modulus, upto).first_mismatch


def evaluate_comparisons(
    identity_id: str,
    trunc: int,
    builder: ComparisonBuilder,
    modulus: Optional[int] = None,
    report_modulus: Optional[int] = None,
    source_note: Iterable[str] = (),
) -> IdentityReport:
    """
    Run a builder's comparisons in order and stop at the first failure.

    Args:
        identity_id: Label for the report
        trunc: Truncation handed to the builder
        builder: (trunc, details) -> comparisons
        modulus: Override; exact comparisons are then checked mod this value
        report_modulus: Modulus shown in the report when no override is given
        source_note: Discrepancy ids to attach
    """
    if trunc < 0:
        raise QSeriesError(f"trunc must be non-negative, got {trunc}")
    started = time.perf_counter()
    details: Dict[str, Any] = {}
    status, mismatch, checks = ReportStatus.VERIFIED, None, 0
    for comparison in builder(trunc, details):
        checks += 1
        index = _mismatch(comparison, _effective_modulus(comparison.modulus, modulus))
        if index is not None:
            status, mismatch = ReportStatus.FAILED, index
            details["failed_check"] = comparison.label
            break
    details["checks"] = checks
    elapsed = time.perf_counter() - started
    logger.info(f"{identity_id} to q^{trunc}: {status.value} after {checks} checks ({elapsed:.2f}s)")
    return IdentityReport(
        identity_id=identity_id,
        trunc=trunc,
        modulus=modulus if modulus is not None else report_modulus,
        status=status,
        first_mismatch=mismatch,
        elapsed=elapsed,
        source_note=list(source_note),
        details=details,
    )


def _parity_projection(s: Series, parity: int) -> Series:
    """s with the coefficients of the other exponent parity zeroed."""
    out = [c if n % 2 == parity else 0 for n, c in enumerate(s.coeffs)]
    if isinstance(s, ModSeries):
        return ModSeries.from_list(out, s.modulus, s.trunc)
    return IntSeries.from_list(out, s.trunc)


def dissection_comparisons(spec: ThetaSpec, trunc: int) -> Iterator[Comparison]:
    """Exact reassembly, plus the support checks when the split is even/odd."""
    d = dissect(spec)
    yield Comparison(f"{spec} = {d}", expand_theta(spec, trunc), d.expand(trunc))
    if d.even_odd_split:
        even = expand_theta(d.even_part, trunc)
        odd = d.odd_term(trunc)
        yield Comparison(f"{d.even_part} on even exponents", even, _parity_projection(even, 0))
        yield Comparison(f"{spec} odd part on odd exponents", odd, _parity_projection(odd, 1))


def verify_dissection(spec: ThetaSpec, trunc: int) -> IdentityReport:
    """Expand both sides of a single dissection and compare them exactly."""
    d = dissect(spec)

    def build(n: int, details: Dict[str, Any]) -> Iterator[Comparison]:
        details["dissection"] = str(d)
        details["even_odd_split"] = d.even_odd_split
        yield from dissection_comparisons(spec, n)

    return evaluate_comparisons(f"dissection {spec}", trunc, build)


# ============== Series of Interest ==============

def c_t_series(t: int, trunc: int, modulus: Optional[int] = None) -> Series:
    """1/Psi(-q^t, q) = sum c_t(n) q^n, optionally over Z/mZ."""
    if t < 1:
        raise QSeriesError(f"c_t needs t >= 1, got {t}")
    return reciprocal(expand_theta(ThetaSpec.psi(-1, t, 1, 1), trunc, modulus))


def lost_notebook_sum(trunc: int) -> IntSeries:
    """
    sum_{n>=0} (q;q^2)_n q^n / (-q;q^2)_{n+1}.

    The ratio of consecutive summands (without q^n) is
    (1 - q^(2n-1)) / (1 + q^(2n+1)), so each step is O(trunc).
    """
    total = zero(trunc)
    term = div_linear_factor(one(trunc), 1, 1)
    n = 0
    while n <= trunc:
        total = add(total, shift(term, n))
        n += 1
        term = div_linear_factor(mul_linear_factor(term, -1, 2 * n - 1), 1, 2 * n + 1)
    return total


@dataclass
class SquareComponents:
    """
    Pieces of the mod-4 argument for c_5.

    Psi(-q^5,q) = A(q^8) - qB(q^4), B = F(q^8) + qG(q^4), G = F(q^8) - qG(q^4),
    F^2 ≡ H(q^2) + 2qI(q^2) (mod 4) with H reduced mod 4 and I mod 2.
    """
    A: IntSeries
    B: IntSeries
    F: IntSeries
    G: IntSeries
    H: IntSeries
    I: IntSeries


def c5_square_components(trunc: int) -> SquareComponents:
    def psi(sa: int, a: int, sb: int, b: int) -> IntSeries:
        return expand_theta(ThetaSpec.psi(sa, a, sb, b), trunc)

    F = psi(1, 2, 1, 1)
    square = mul(F, F)
    even = extract_progression(square, 2, 0)
    odd = extract_progression(square, 2, 1) if trunc >= 1 else zero(0)
    H = IntSeries.from_list([c % 4 for c in even.coeffs])
    I = IntSeries.from_list([(c // 2) % 2 for c in odd.coeffs])
    return SquareComponents(
        A=psi(-1, 2, -1, 1),
        B=psi(-1, 5, -1, 1),
        F=F,
        G=psi(1, 5, 1, 1),
        H=H,
        I=I,
    )


@dataclass
class NineComponents:
    """
    Pieces of the argument for c_9:
    Psi(-q^9,q) = A(q^4) - qB(q^8) and A = C(q^8) + q^3 D(q^4).
    """
    A: Series
    B: Series
    C: Series
    D: Series


def c9_components(trunc: int, modulus: Optional[int] = None) -> NineComponents:
    def psi(sa: int, a: int, sb: int, b: int) -> Series:
        return expand_theta(ThetaSpec.psi(sa, a, sb, b), trunc, modulus)

    return NineComponents(
        A=psi(-1, 7, -1, 3),
        B=psi(-1, 4, -1, 1),
        C=psi(1, 3, 1, 2),
        D=psi(1, 9, 1, 1),
    )


def _c9_bracket(parts: NineComponents, trunc: int) -> Series:
    """C(q^4)B(q^4) + q D(q^2) A(q^2)."""
    first = mul(substitute_qk(parts.C, 4, trunc), substitute_qk(parts.B, 4, trunc))
    second = shift(mul(substitute_qk(parts.D, 2, trunc), substitute_qk(parts.A, 2, trunc)), 1)
    return add(first, second)


def telescoped_parts(spec: ThetaSpec, levels: int, trunc: int, modulus: Optional[int] = None):
    """
    Write spec = X - Z from its dissection and return
    (prod_{i<levels} (X^(2^i) + Z^(2^i)),  X^(2^levels) - Z^(2^levels)).
    """
    if levels < 1:
        raise QSeriesError("telescoping needs at least one level")
    d = dissect_false_theta(spec)
    x = expand_theta(d.even_part, trunc, modulus)
    z = neg(d.odd_term(trunc, modulus))
    numerator = one(trunc, modulus)
    for _ in range(levels):
        numerator = mul(numerator, add(x, z))
        x, z = mul(x, x), mul(z, z)
    return numerator, sub(x, z)


def _telescoped_comparisons(spec: ThetaSpec, levels: int, modulus: Optional[int], trunc: int):
    source = expand_theta(spec, trunc, modulus)
    numerator, denominator = telescoped_parts(spec, levels, trunc, modulus)
    yield Comparison(f"{spec} times the telescoped numerator", mul(source, numerator), denominator, modulus)
    yield Comparison(
        f"1/{spec} as numerator over the 2^{levels}-th power difference",
        reciprocal(source),
        mul(numerator, reciprocal(denominator)),
        modulus,
    )


def telescoped_inverse_check(
    spec: ThetaSpec, levels: int, modulus: Optional[int], trunc: int
) -> IdentityReport:
    """
    Check 1/(X - Z) = prod (X^(2^i) + Z^(2^i)) / (X^(2^L) - Z^(2^L)) for the
    dissection of spec, mod m (or exactly when modulus is None).

    Raises:
        NonUnitError: the power difference has a non-invertible constant term
    """
    return evaluate_comparisons(
        f"telescoped inverse {spec}, {levels} levels",
        trunc,
        lambda n, details: _telescoped_comparisons(spec, levels, modulus, n),
        report_modulus=modulus,
    )


# ============== Catalogue Builders ==============

_BUILDERS: Dict[str, ComparisonBuilder] = {}


def _builder(identity_id: str):
    def register(fn: ComparisonBuilder) -> ComparisonBuilder:
        _BUILDERS[identity_id] = fn
        return fn
    return register


def _eta(factors, trunc: int, modulus: Optional[int] = None, prefactor: int = 0) -> Series:
    return eta_product(EtaProductSpec(prefactor, tuple(sorted(factors))), trunc, modulus)


@_builder("psi_q3_q_expansion")
def _lost_notebook(trunc: int, details: Dict[str, Any]):
    total = lost_notebook_sum(trunc)
    printed = expand_theta(ThetaSpec.psi(1, 3, 1, 1), trunc)
    details["printed_form_first_difference"] = first_difference(total, printed)
    yield Comparison("sum = sum (-1)^n q^(2n(n+1))", total, partial_theta_series(2, 2, trunc))


@_builder("jacobi_cube")
def _jacobi_cube(trunc: int, details: Dict[str, Any]):
    cube = power(eta_factor(1, trunc), 3)
    yield Comparison("f1^3 exact", cube, triangular_series(trunc, signed=True))
    yield Comparison("f1^3 mod 2", cube, triangular_series(trunc), 2)


@_builder("f1_f5_mod2")
def _f1_f5(trunc: int, details: Dict[str, Any]):
    lhs = _eta([(1, 1), (5, 1)], trunc, 2)
    rhs = add(_eta([(1, 6)], trunc, 2), _eta([(5, 6)], trunc, 2, prefactor=1))
    yield Comparison("f1 f5 ≡ f1^6 + q f5^6", lhs, rhs, 2)


@_builder("three_core_split_mod2")
def _three_core_split(trunc: int, details: Dict[str, Any]):
    lhs = _eta([(1, -1), (3, 3)], trunc, 2)
    rhs = add(_eta([(1, 8)], trunc, 2), _eta([(1, -4), (3, 12)], trunc, 2, prefactor=1))
    yield Comparison("f3^3/f1 ≡ f1^8 + q f3^12/f1^4", lhs, rhs, 2)


@_builder("three_core_theta_mod2")
def _three_core_theta(trunc: int, details: Dict[str, Any]):
    yield Comparison(
        "f3^3/f1 ≡ sum q^(n(3n-2))",
        _eta([(1, -1), (3, 3)], trunc, 2),
        quadratic_form_series(3, -2, trunc),
        2,
    )


_GRID = range(16)


@_builder("theta_two_dissection")
def _theta_grid(trunc: int, details: Dict[str, Any]):
    specs = [ThetaSpec.theta(1, a, 1, b) for a in _GRID for b in _GRID if a != b]
    details["specs"] = len(specs)
    for spec in specs:
        yield from dissection_comparisons(spec, trunc)


@_builder("false_theta_dissection")
def _false_theta_grid(trunc: int, details: Dict[str, Any]):
    specs = [
        ThetaSpec.psi(sa, a, sb, b)
        for a in _GRID for b in _GRID if a != b
        for sa in (1, -1) for sb in (1, -1)
    ]
    details["specs"] = len(specs)
    details["even_odd_splits"] = sum(1 for s in specs if s.exp_a % 2 and s.exp_b % 2)
    for spec in specs:
        yield from dissection_comparisons(spec, trunc)


@_builder("jtp_factorization")
def _jtp_grid(trunc: int, details: Dict[str, Any]):
    specs = [
        ThetaSpec.theta(sa, a, sb, b)
        for a in range(13) for b in range(13) if a + b > 0
        for sa in (1, -1) for sb in (1, -1)
    ]
    details["specs"] = len(specs)
    for spec in specs:
        yield Comparison(f"{spec} triple product", theta_f(spec, trunc), jtp_product(spec, trunc))


@_builder("c5_odd_part_mod2")
def _c5_odd_part(trunc: int, details: Dict[str, Any]):
    c5 = c_t_series(5, trunc, 2)
    odd = extract_progression(c5, 2, 1)
    yield Comparison("c5(2n+1) ≡ sum q^(n(3n-2))", odd, quadratic_form_series(3, -2, odd.trunc), 2)
    yield Comparison("c5(2n+1) ≡ f3^3/f1", odd, _eta([(1, -1), (3, 3)], odd.trunc, 2), 2)
    for A, B in ((8, 5), (10, 5), (10, 9)):
        section = extract_progression(c5, A, B)
        yield Comparison(f"c5({A}n+{B}) ≡ 0", section, zero(section.trunc), 2)


@_builder("c5_32n_31_mod4")
def _c5_mod4(trunc: int, details: Dict[str, Any]):
    section = extract_progression(c_t_series(5, trunc, 4), 32, 31)
    details["indices_checked"] = section.trunc + 1
    yield Comparison("c5(32n+31) ≡ 0", section, zero(section.trunc), 4)


@_builder("c5_square_stability_mod4")
def _c5_squares(trunc: int, details: Dict[str, Any]):
    parts = c5_square_components(trunc)
    psi5 = expand_theta(ThetaSpec.psi(-1, 5, 1, 1), trunc)
    yield Comparison(
        "Psi(-q^5,q) = A(q^8) - qB(q^4)",
        psi5,
        sub(substitute_qk(parts.A, 8, trunc), shift(substitute_qk(parts.B, 4, trunc), 1)),
    )
    f8 = substitute_qk(parts.F, 8, trunc)
    qg4 = shift(substitute_qk(parts.G, 4, trunc), 1)
    yield Comparison("B = F(q^8) + qG(q^4)", parts.B, add(f8, qg4))
    yield Comparison("G = F(q^8) - qG(q^4)", parts.G, sub(f8, qg4))
    yield Comparison("A^2 ≡ F^2", mul(parts.A, parts.A), mul(parts.F, parts.F), 4)
    yield Comparison("B^2 ≡ G^2", mul(parts.B, parts.B), mul(parts.G, parts.G), 4)
    if trunc >= 1:
        split = add(
            substitute_qk(parts.H, 2, trunc),
            scale(shift(substitute_qk(parts.I, 2, trunc - 1), 1), 2),
        )
        yield Comparison("F^2 ≡ H(q^2) + 2qI(q^2)", mul(parts.F, parts.F), split, 4)


@_builder("c5_telescoped_inverse_mod4")
def _c5_telescoped(trunc: int, details: Dict[str, Any]):
    details["levels"] = 5
    yield from _telescoped_comparisons(ThetaSpec.psi(-1, 5, 1, 1), 5, 4, trunc)


@_builder("c9_bridge_mod2")
def _c9_bridge(trunc: int, details: Dict[str, Any]):
    parts = c9_components(trunc, 2)
    yield Comparison("C(q^4)B(q^4) + qD(q^2)A(q^2) ≡ A D", _c9_bracket(parts, trunc), mul(parts.A, parts.D), 2)


@_builder("c9_eta_quotient_mod2")
def _c9_eta(trunc: int, details: Dict[str, Any]):
    lhs = add(
        _eta([(4, 2), (5, 2), (20, 1)], trunc, 2),
        _eta([(1, 2), (10, 6)], trunc, 2, prefactor=1),
    )
    yield Comparison("f4^2 f5^2 f20 + q f1^2 f10^6 ≡ f1 f2 f5 f10^3", lhs, _eta([(1, 1), (2, 1), (5, 1), (10, 3)], trunc, 2), 2)


def _c9_section(trunc: int) -> Series:
    return extract_progression(c_t_series(9, trunc, 2), 8, 4)


@_builder("c9_extraction_mod2")
def _c9_extraction(trunc: int, details: Dict[str, Any]):
    section = _c9_section(trunc)
    n = section.trunc
    parts = c9_components(n, 2)
    psi9 = expand_theta(ThetaSpec.psi(-1, 9, 1, 1), n, 2)
    rhs = mul(mul(parts.A, _c9_bracket(parts, n)), reciprocal(psi9))
    yield Comparison("sum c9(8n+4) q^n ≡ A [C(q^4)B(q^4) + qD(q^2)A(q^2)] / Psi(-q^9,q)", section, rhs, 2)


@_builder("c9_8n_4_mod2")
def _c9_main(trunc: int, details: Dict[str, Any]):
    section = _c9_section(trunc)
    details["section_trunc"] = section.trunc
    yield Comparison(
        "sum c9(8n+4) q^n ≡ Psi(-q^14,-q^6)",
        section,
        expand_theta(ThetaSpec.psi(-1, 14, -1, 6), section.trunc, 2),
        2,
    )


@_builder("truncated_pentagonal")
def _truncated_pentagonal(trunc: int, details: Dict[str, Any]):
    from app.tools.mex_partitions import tpn_comparisons

    yield from tpn_comparisons(trunc, details)


@_builder("rank_zero")
def _rank_zero(trunc: int, details: Dict[str, Any]):
    from app.tools.mex_partitions import rank_zero_comparisons

    yield from rank_zero_comparisons(trunc, details)


# ============== Registry Verification ==============

def registry_ids() -> List[str]:
    """Identity ids that have a bound builder."""
    return list(_BUILDERS)


def verify_registry_identity(
    identity_id: str, trunc: Optional[int] = None, modulus: Optional[int] = None
) -> IdentityReport:
    """
    Verify a catalogued identity to trunc (catalogue default when omitted).

    Raises:
        RegistryError: identity_id unknown to the catalogue or unbound
    """
    entry = get_registry_manager().identity(identity_id)
    builder = _BUILDERS.get(identity_id)
    if builder is None:
        raise RegistryError(f"No verifier bound to identity id: {identity_id}")
    for note in entry.discrepancies:
        logger.warning(f"{identity_id}: printed source differs, see discrepancy '{note}'")
    return evaluate_comparisons(
        identity_id,
        entry.default_trunc if trunc is None else trunc,
        builder,
        modulus=modulus,
        report_modulus=entry.modulus,
        source_note=entry.discrepancies,
    )


def verify_all(
    trunc_overrides: Optional[Dict[str, int]] = None, max_workers: Optional[int] = None
) -> List[IdentityReport]:
    """Every catalogue identity, in parallel, reported in catalogue order."""
    overrides = trunc_overrides or {}
    entries = get_registry_manager().list_identities()
    executor = ParallelExecutor(max_workers)
    return executor.map_ordered(lambda e: verify_registry_identity(e.id, overrides.get(e.id)), entries)
