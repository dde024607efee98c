"""
Theta-Type Series Constructors

Ramanujan's theta function f(a,b), the false theta function Psi(a,b), the
Jacobi triple product, Pochhammer symbols, eta-products f_k = (q^k;q^k)_inf,
Gaussian binomials and the partition generating function, all for monomial
arguments a = ±q^A, b = ±q^B.

Also parses the surface syntax used on the command line:
    "psi(-q^5,q)", "f(q^5, q)", "f(-1,q^2)"
    "q^1 * f1^2 * f10^6", "f3^3 / f1", "f1^-4"
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import isqrt
from typing import Dict, Iterator, List, Optional, Tuple
import logging

from app.core.exceptions import QSeriesError, SpecParseError
from app.tools.series import (
    IntSeries,
    Series,
    _build,
    div_linear_factor,
    mul,
    mul_linear_factor,
    one,
    power,
    reciprocal,
    scale,
    shift,
)

logger = logging.getLogger(__name__)


# ============== Specs ==============

class ThetaKind(str, Enum):
    """Bilateral sum flavour."""
    THETA = "theta"
    FALSE_THETA = "false_theta"


_KIND_KEYWORD = {ThetaKind.THETA: "f", ThetaKind.FALSE_THETA: "psi"}


def _render_arg(sign: int, exp: int) -> str:
    body = "1" if exp == 0 else ("q" if exp == 1 else f"q^{exp}")
    return ("-" if sign < 0 else "") + body


@dataclass(frozen=True)
class ThetaSpec:
    """
    f(sign_a·q^a, sign_b·q^b) or Psi(sign_a·q^a, sign_b·q^b).

    Attributes:
        kind: theta or false_theta
        sign_a, exp_a: first argument ±q^a
        sign_b, exp_b: second argument ±q^b
    """
    kind: ThetaKind
    sign_a: int
    exp_a: int
    sign_b: int
    exp_b: int

    def __post_init__(self):
        if self.sign_a not in (1, -1) or self.sign_b not in (1, -1):
            raise QSeriesError("theta argument signs must be +1 or -1")
        if self.exp_a < 0 or self.exp_b < 0:
            raise QSeriesError("theta argument exponents must be non-negative")
        if self.exp_a + self.exp_b == 0:
            raise QSeriesError("a + b must be positive, otherwise the bilateral sum diverges")

    @classmethod
    def theta(cls, sign_a: int, exp_a: int, sign_b: int, exp_b: int) -> "ThetaSpec":
        return cls(ThetaKind.THETA, sign_a, exp_a, sign_b, exp_b)

    @classmethod
    def psi(cls, sign_a: int, exp_a: int, sign_b: int, exp_b: int) -> "ThetaSpec":
        return cls(ThetaKind.FALSE_THETA, sign_a, exp_a, sign_b, exp_b)

    def swapped(self) -> "ThetaSpec":
        return ThetaSpec(self.kind, self.sign_b, self.exp_b, self.sign_a, self.exp_a)

    def __str__(self) -> str:
        return (f"{_KIND_KEYWORD[self.kind]}({_render_arg(self.sign_a, self.exp_a)},"
                f"{_render_arg(self.sign_b, self.exp_b)})")


@dataclass(frozen=True)
class EtaProductSpec:
    """
    q^prefactor_exp · prod f_k^e over the listed (k, e) factors.

    Attributes:
        prefactor_exp: Non-negative power of q in front
        factors: Tuple of (k, e) with distinct k >= 1 and e != 0, sorted by k
    """
    prefactor_exp: int = 0
    factors: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.prefactor_exp < 0:
            raise QSeriesError("eta-product prefactor exponent must be non-negative")
        ks = [k for k, _ in self.factors]
        if len(set(ks)) != len(ks):
            raise QSeriesError("eta-product factors must have distinct k")
        for k, e in self.factors:
            if k < 1:
                raise QSeriesError(f"f_k needs k >= 1, got {k}")
            if e == 0:
                raise QSeriesError(f"f_{k} has exponent 0")

    def __str__(self) -> str:
        parts = []
        if self.prefactor_exp:
            parts.append(f"q^{self.prefactor_exp}")
        for k, e in self.factors:
            parts.append(f"f{k}" if e == 1 else f"f{k}^{e}")
        return " * ".join(parts) if parts else "1"


# ============== Bilateral Sums ==============

def _tri(n: int) -> int:
    """C(n+1, 2) for any integer n."""
    return n * (n + 1) // 2


def term_sign(spec: ThetaSpec, n: int) -> int:
    """sign_a^C(n+1,2) · sign_b^C(n,2): the single place theta signs are resolved."""
    sign = 1
    if spec.sign_a < 0 and _tri(n) % 2:
        sign = -sign
    if spec.sign_b < 0 and _tri(n - 1) % 2:
        sign = -sign
    return sign


def term_exponent(spec: ThetaSpec, n: int) -> int:
    return spec.exp_a * _tri(n) + spec.exp_b * _tri(n - 1)


def bilateral_terms(spec: ThetaSpec, trunc: int) -> Iterator[Tuple[int, int, int]]:
    """
    Yield (n, sign, exponent) for all n with exponent <= trunc.

    Exponents are nondecreasing in |n| along each direction, so each
    direction stops at its first exponent beyond trunc.
    """
    for start, step in ((0, 1), (-1, -1)):
        n = start
        while True:
            e = term_exponent(spec, n)
            if e > trunc:
                break
            yield n, term_sign(spec, n), e
            n += step


def _expand(spec: ThetaSpec, trunc: int, modulus: Optional[int]) -> Series:
    if trunc < 0:
        raise QSeriesError(f"trunc must be non-negative, got {trunc}")
    backward = 1 if spec.kind == ThetaKind.THETA else -1
    coeffs = [0] * (trunc + 1)
    for n, sign, e in bilateral_terms(spec, trunc):
        coeffs[e] += sign if n >= 0 else backward * sign
    return _build(coeffs, trunc, modulus)


def theta_f(spec: ThetaSpec, trunc: int, modulus: Optional[int] = None) -> Series:
    """f(a,b) = sum over all n of a^C(n+1,2) b^C(n,2)."""
    if spec.kind != ThetaKind.THETA:
        raise QSeriesError(f"theta_f needs a theta spec, got {spec}")
    return _expand(spec, trunc, modulus)


def false_theta_psi(spec: ThetaSpec, trunc: int, modulus: Optional[int] = None) -> Series:
    """Psi(a,b): the theta summand with the n <= -1 terms subtracted."""
    if spec.kind != ThetaKind.FALSE_THETA:
        raise QSeriesError(f"false_theta_psi needs a psi spec, got {spec}")
    return _expand(spec, trunc, modulus)


def expand_theta(spec: ThetaSpec, trunc: int, modulus: Optional[int] = None) -> Series:
    """Dispatch on spec.kind."""
    return _expand(spec, trunc, modulus)


# ============== Products ==============

def _apply_factor(s: Series, c: int, e: int) -> Series:
    """s·(1 + c·q^e); e = 0 degenerates to a constant factor."""
    if e == 0:
        return scale(s, 1 + c)
    return mul_linear_factor(s, c, e)


def pochhammer(
    base_sign: int,
    base_exp: int,
    step: int,
    n: Optional[int],
    trunc: int,
    modulus: Optional[int] = None,
) -> Series:
    """
    (base_sign·q^j; q^k)_n = prod_{i<n} (1 - base_sign·q^(j+ik)).

    n=None means the infinite product, which stops once j+ik exceeds trunc.
    """
    if base_sign not in (1, -1):
        raise QSeriesError("pochhammer base sign must be +1 or -1")
    if base_exp < 1 or step < 1:
        raise QSeriesError("pochhammer needs positive base exponent and step")
    if n is not None and n < 0:
        raise QSeriesError("pochhammer length must be non-negative")
    result = one(trunc, modulus)
    i = 0
    while n is None or i < n:
        e = base_exp + i * step
        if e > trunc:
            break
        result = mul_linear_factor(result, -base_sign, e)
        i += 1
    return result


def eta_factor(k: int, trunc: int, modulus: Optional[int] = None) -> Series:
    """f_k = (q^k; q^k)_inf."""
    return pochhammer(1, k, k, None, trunc, modulus)


def eta_product(spec: EtaProductSpec, trunc: int, modulus: Optional[int] = None) -> Series:
    """q^s · prod f_k^e, exact to trunc (or reduced mod m throughout)."""
    result = one(trunc, modulus)
    for k, e in spec.factors:
        base = eta_factor(k, trunc, modulus)
        if e < 0:
            base = reciprocal(base)
        result = mul(result, power(base, abs(e)))
    return shift(result, spec.prefactor_exp)


def jtp_factors(spec: ThetaSpec, trunc: int) -> List[Tuple[int, int]]:
    """
    (c, e) pairs with f(a,b) = prod (1 + c·q^e), from
    f(a,b) = (-a;ab)_inf (-b;ab)_inf (ab;ab)_inf.
    """
    sa, A, sb, B = spec.sign_a, spec.exp_a, spec.sign_b, spec.exp_b
    s_ab, step = sa * sb, A + B
    factors: List[Tuple[int, int]] = []
    for sign, start in ((sa, A), (sb, B)):
        i = 0
        while start + i * step <= trunc:
            factors.append((sign * s_ab ** i, start + i * step))
            i += 1
    i = 1
    while i * step <= trunc:
        factors.append((-(s_ab ** i), i * step))
        i += 1
    return factors


def jtp_product(spec: ThetaSpec, trunc: int, modulus: Optional[int] = None) -> Series:
    """The triple-product side of f(a,b), built factor by factor."""
    if spec.kind != ThetaKind.THETA:
        raise QSeriesError(f"jtp_product needs a theta spec, got {spec}")
    result = one(trunc, modulus)
    for c, e in jtp_factors(spec, trunc):
        result = _apply_factor(result, c, e)
    return result


def pentagonal_terms(limit: int) -> List[Tuple[int, int]]:
    """
    (g, sign) for the nonzero terms of (q;q)_inf with 0 < g <= limit, ascending:
    g = m(3m-1)/2 over m = 1, -1, 2, -2, ... with sign (-1)^m.
    """
    terms: List[Tuple[int, int]] = []
    m = 1
    while m * (3 * m - 1) // 2 <= limit:
        sign = -1 if m % 2 else 1
        for g in (m * (3 * m - 1) // 2, m * (3 * m + 1) // 2):
            if g <= limit:
                terms.append((g, sign))
        m += 1
    return terms


def partition_gf(trunc: int, modulus: Optional[int] = None) -> Series:
    """1/(q;q)_inf = sum p(n) q^n."""
    return reciprocal(eta_factor(1, trunc, modulus))


# ============== Gaussian Binomials ==============

GaussTable = Dict[Tuple[int, int], Tuple[int, ...]]


def _gauss_lookup(table: GaussTable, n: int, k: int) -> Tuple[int, ...]:
    if k < 0 or k > n:
        return (0,)
    if k == 0 or k == n:
        return (1,)
    return table[(n, k)]


def _gauss_coeffs(n: int, k: int, table: GaussTable) -> Tuple[int, ...]:
    """q-Pascal: [n,k] = [n-1,k-1] + q^k [n-1,k], filled row by row into table."""
    if k <= 0 or k >= n or (n, k) in table:
        return _gauss_lookup(table, n, k)
    for m in range(2, n + 1):
        # only the band of row m that [n,k] depends on
        for j in range(max(1, k - (n - m)), min(k, m - 1) + 1):
            if (m, j) in table:
                continue
            left = _gauss_lookup(table, m - 1, j - 1)
            right = _gauss_lookup(table, m - 1, j)
            out = [0] * (j * (m - j) + 1)
            for i, c in enumerate(left):
                out[i] += c
            for i, c in enumerate(right):
                out[i + j] += c
            table[(m, j)] = tuple(out)
    return table[(n, k)]


def gaussian_binomial(n: int, k: int, table: Optional[GaussTable] = None) -> IntSeries:
    """
    [n choose k]_q as an exact polynomial (IntSeries truncated at its degree).

    Pass the same table across calls to reuse rows already built; without
    one the memo lives only for this call.
    """
    if n < 0:
        raise QSeriesError(f"gaussian binomial needs n >= 0, got {n}")
    coeffs = _gauss_coeffs(n, k, {} if table is None else table)
    return IntSeries(len(coeffs) - 1, coeffs)


def gaussian_binomial_column(k: int, n_max: int, trunc: int) -> Iterator[Tuple[int, Series]]:
    """
    Yield (n, [n choose k]_q truncated at trunc) for n = k..n_max, stepping
    with [n,k] = [n-1,k]·(1 - q^n)/(1 - q^(n-k)).
    """
    current = one(trunc)
    for n in range(k, n_max + 1):
        if n > k:
            current = div_linear_factor(mul_linear_factor(current, -1, n), -1, n - k)
        yield n, current


# ============== Oracle Series ==============

def triangular_series(trunc: int, signed: bool = False) -> IntSeries:
    """sum (-1)^n (2n+1) q^C(n+1,2) when signed, else sum q^C(n+1,2)."""
    coeffs = [0] * (trunc + 1)
    n = 0
    while _tri(n) <= trunc:
        coeffs[_tri(n)] += ((-1) ** n) * (2 * n + 1) if signed else 1
        n += 1
    return IntSeries(trunc, tuple(coeffs))


def partial_theta_series(alpha: int, beta: int, trunc: int, sign: int = -1) -> IntSeries:
    """One-sided sum over n >= 0 of sign^n q^(alpha n^2 + beta n)."""
    if alpha <= 0 or beta < 0:
        raise QSeriesError("partial theta series needs alpha > 0 and beta >= 0")
    coeffs = [0] * (trunc + 1)
    n = 0
    while alpha * n * n + beta * n <= trunc:
        coeffs[alpha * n * n + beta * n] += sign ** n
        n += 1
    return IntSeries(trunc, tuple(coeffs))


def quadratic_form_series(alpha: int, beta: int, trunc: int) -> IntSeries:
    """sum over all integers n of q^(alpha n^2 + beta n)."""
    if alpha <= 0:
        raise QSeriesError("quadratic form series needs alpha > 0")
    bound = (abs(beta) + isqrt(beta * beta + 4 * alpha * trunc) + 1) // (2 * alpha) + 1
    coeffs = [0] * (trunc + 1)
    for n in range(-bound, bound + 1):
        e = alpha * n * n + beta * n
        if e < 0:
            raise QSeriesError(f"{alpha}n^2 + {beta}n is negative at n={n}")
        if e <= trunc:
            coeffs[e] += 1
    return IntSeries(trunc, tuple(coeffs))


# ============== Spec Parsing ==============

class _Cursor:
    """Character cursor with position-annotated errors."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, message: str) -> SpecParseError:
        return SpecParseError(message, self.text, min(self.pos, len(self.text)))

    def expect(self, literal: str) -> None:
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            raise self.error(f"expected {literal!r}")
        self.pos += len(literal)

    def accept(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def integer(self, allow_sign: bool = False) -> int:
        self.skip_ws()
        start = self.pos
        if allow_sign and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_monomial_arg(cur: _Cursor) -> Tuple[int, int]:
    sign = 1
    if cur.accept("-"):
        sign = -1
    else:
        cur.accept("+")
    if cur.accept("q"):
        if cur.accept("^"):
            return sign, cur.integer()
        return sign, 1
    if cur.accept("1"):
        return sign, 0
    raise cur.error("expected 'q', 'q^N' or '1'")


def parse_theta_spec(text: str) -> ThetaSpec:
    """Parse 'f(±q^a,±q^b)' or 'psi(±q^a,±q^b)'."""
    cur = _Cursor(text)
    if cur.accept("psi"):
        kind = ThetaKind.FALSE_THETA
    elif cur.accept("f"):
        kind = ThetaKind.THETA
    else:
        raise cur.error("expected 'f' or 'psi'")
    cur.expect("(")
    sign_a, exp_a = _parse_monomial_arg(cur)
    cur.expect(",")
    sign_b, exp_b = _parse_monomial_arg(cur)
    cur.expect(")")
    if not cur.at_end():
        raise cur.error("unexpected trailing input")
    if exp_a + exp_b == 0:
        raise SpecParseError("a + b must be positive", text, 0)
    return ThetaSpec(kind, sign_a, exp_a, sign_b, exp_b)


def parse_eta_spec(text: str) -> EtaProductSpec:
    """Parse products like 'q^1 * f1^2 * f10^6' or 'f3^3 / f1'."""
    cur = _Cursor(text)
    prefactor = 0
    exponents: Dict[int, int] = {}
    divide = False
    while True:
        cur.skip_ws()
        term_start = cur.pos
        if cur.accept("q"):
            e = cur.integer() if cur.accept("^") else 1
            if divide:
                cur.pos = term_start
                raise cur.error("q may not appear in a denominator")
            prefactor += e
        elif cur.accept("f"):
            k = cur.integer()
            if k < 1:
                cur.pos = term_start
                raise cur.error("f_k needs k >= 1")
            e = cur.integer(allow_sign=True) if cur.accept("^") else 1
            exponents[k] = exponents.get(k, 0) + (-e if divide else e)
        elif cur.accept("1"):
            pass
        else:
            raise cur.error("expected 'q', 'fK' or '1'")
        if cur.at_end():
            break
        if cur.accept("*"):
            divide = False
        elif cur.accept("/"):
            divide = True
        else:
            raise cur.error("expected '*' or '/'")
    factors = tuple(sorted((k, e) for k, e in exponents.items() if e != 0))
    return EtaProductSpec(prefactor, factors)
