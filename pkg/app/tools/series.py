"""
Truncated Power Series

Exact dense power series in q, truncated at a fixed order, over the integers
(IntSeries) and over Z/mZ (ModSeries). Every binary operation narrows to the
smaller truncation so no coefficient is ever reported beyond what both
operands certify.

Products use Kronecker substitution: coefficient vectors are packed into
fixed-width byte slots of one Python integer, multiplied with CPython's
big-integer multiplication, and unpacked again. Short or very sparse operands
fall back to the schoolbook convolution, which is also exposed for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union
import logging

from app.core.exceptions import NonUnitError, QSeriesError, TruncationError

logger = logging.getLogger(__name__)

MAX_MODULUS = 1 << 63

# schoolbook when the sparser operand has at most this many nonzero terms
_SPARSE_OUTER_LIMIT = 24
# products whose shorter operand is below this length skip Kronecker packing
_SCHOOLBOOK_CUTOFF = 32


# ============== Series Types ==============

class _SeriesOps:
    """Operator sugar shared by IntSeries and ModSeries."""

    coeffs: Tuple[int, ...]
    trunc: int

    def __getitem__(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.trunc:
            raise TruncationError(f"coefficient q^{n} requested from a series exact only to q^{self.trunc}")
        return self.coeffs[n]

    def __add__(self, other: "Series") -> "Series":
        return add(self, other)

    def __sub__(self, other: "Series") -> "Series":
        return sub(self, other)

    def __mul__(self, other: "Series") -> "Series":
        return mul(self, other)

    def __neg__(self) -> "Series":
        return neg(self)

    def __pow__(self, e: int) -> "Series":
        return power(self, e)

    def nonzero_terms(self) -> Iterator[Tuple[int, int]]:
        """Yield (exponent, coefficient) for every nonzero coefficient, ascending."""
        for n, c in enumerate(self.coeffs):
            if c:
                yield n, c

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> List[int]:
        return [n for n, c in enumerate(self.coeffs) if c]


@dataclass(frozen=True, eq=True)
class IntSeries(_SeriesOps):
    """
    Integer power series exact on exponents 0..trunc.

    Attributes:
        trunc: Highest certified exponent
        coeffs: Tuple of length trunc+1; index n holds the coefficient of q^n
    """
    trunc: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if self.trunc < 0:
            raise QSeriesError(f"trunc must be non-negative, got {self.trunc}")
        if len(self.coeffs) != self.trunc + 1:
            raise QSeriesError(f"expected {self.trunc + 1} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_list(cls, coeffs: Sequence[int], trunc: Optional[int] = None) -> "IntSeries":
        if trunc is None:
            trunc = len(coeffs) - 1
        values = list(coeffs[:trunc + 1])
        values.extend([0] * (trunc + 1 - len(values)))
        return cls(trunc, tuple(values))


@dataclass(frozen=True, eq=True)
class ModSeries(_SeriesOps):
    """
    Power series over Z/mZ exact on exponents 0..trunc.

    Attributes:
        trunc: Highest certified exponent
        modulus: m with 2 <= m < 2^63
        coeffs: Residues in [0, m)
    """
    trunc: int
    modulus: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if self.trunc < 0:
            raise QSeriesError(f"trunc must be non-negative, got {self.trunc}")
        _check_modulus(self.modulus)
        if len(self.coeffs) != self.trunc + 1:
            raise QSeriesError(f"expected {self.trunc + 1} coefficients, got {len(self.coeffs)}")
        m = self.modulus
        if any(c < 0 or c >= m for c in self.coeffs):
            raise QSeriesError(f"ModSeries coefficients must lie in [0, {m})")

    @classmethod
    def from_list(cls, coeffs: Sequence[int], modulus: int, trunc: Optional[int] = None) -> "ModSeries":
        if trunc is None:
            trunc = len(coeffs) - 1
        values = [c % modulus for c in coeffs[:trunc + 1]]
        values.extend([0] * (trunc + 1 - len(values)))
        return cls(trunc, modulus, tuple(values))


Series = Union[IntSeries, ModSeries]


class Congruence(NamedTuple):
    """Outcome of a coefficientwise comparison."""
    holds: bool
    first_mismatch: Optional[int]


# ============== Internal Helpers ==============

def _check_modulus(m: int) -> None:
    if not isinstance(m, int) or m < 2 or m >= MAX_MODULUS:
        raise QSeriesError(f"modulus must be an integer with 2 <= m < 2^63, got {m!r}")


def _check_trunc(trunc: int) -> None:
    if trunc < 0:
        raise QSeriesError(f"trunc must be non-negative, got {trunc}")


def _modulus_of(s: Series) -> Optional[int]:
    return s.modulus if isinstance(s, ModSeries) else None


def _build(coeffs: List[int], trunc: int, modulus: Optional[int]) -> Series:
    if modulus is None:
        return IntSeries(trunc, tuple(coeffs))
    return ModSeries(trunc, modulus, tuple(c % modulus for c in coeffs))


def _common_modulus(a: Series, b: Series) -> Optional[int]:
    ma, mb = _modulus_of(a), _modulus_of(b)
    if ma is not None and mb is not None and ma != mb:
        raise QSeriesError(f"cannot combine series mod {ma} with series mod {mb}")
    return ma if ma is not None else mb


def _trim(values: Sequence[int]) -> List[int]:
    end = len(values)
    while end and not values[end - 1]:
        end -= 1
    return list(values[:end])


def _conv_schoolbook(a: Sequence[int], b: Sequence[int], n: int) -> List[int]:
    """Truncated Cauchy product; the sparser operand drives the outer loop."""
    out = [0] * (n + 1)
    sparse_a = [(i, x) for i, x in enumerate(a[:n + 1]) if x]
    sparse_b = [(j, y) for j, y in enumerate(b[:n + 1]) if y]
    if len(sparse_b) < len(sparse_a):
        a, b, sparse_a = b, a, sparse_b
    for i, x in sparse_a:
        row = b[:n + 1 - i]
        if not row:
            continue
        end = i + len(row)
        out[i:end] = [o + x * y for o, y in zip(out[i:end], row)]
    return out


def _pack(values: Sequence[int], width: int) -> int:
    return int.from_bytes(b"".join(v.to_bytes(width, "little") for v in values), "little")


def _pack_signed(values: Sequence[int], width: int) -> int:
    packed = _pack([v if v > 0 else 0 for v in values], width)
    if any(v < 0 for v in values):
        packed -= _pack([-v if v < 0 else 0 for v in values], width)
    return packed


def _unpack_signed(value: int, width: int, total: int, count: int) -> List[int]:
    """Split ``value`` into ``count`` signed slot digits, given ``total`` slots in all."""
    half = 1 << (8 * width - 1)
    bias = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * total, "little")
    raw = (value + bias).to_bytes(width * total, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") - half for i in range(count)]


def _conv_kronecker(a: List[int], b: List[int], n: int) -> List[int]:
    bound = min(len(a), len(b)) * max(map(abs, a)) * max(map(abs, b))
    width = (bound.bit_length() + 2 + 7) // 8
    total = len(a) + len(b) - 1
    logger.debug(f"kronecker product: {len(a)}x{len(b)} terms, slot width {width} bytes")
    product = _pack_signed(a, width) * _pack_signed(b, width)
    count = min(n + 1, total)
    digits = _unpack_signed(product, width, total, count)
    digits.extend([0] * (n + 1 - count))
    return digits


def _convolve(a: Sequence[int], b: Sequence[int], n: int) -> List[int]:
    """Exact truncated product of two integer coefficient vectors, length n+1."""
    ta = _trim(a[:n + 1])
    tb = _trim(b[:n + 1])
    if not ta or not tb:
        return [0] * (n + 1)
    nnz = min(sum(1 for x in ta if x), sum(1 for y in tb if y))
    if nnz <= _SPARSE_OUTER_LIMIT or min(len(ta), len(tb)) <= _SCHOOLBOOK_CUTOFF:
        return _conv_schoolbook(ta, tb, n)
    return _conv_kronecker(ta, tb, n)


def _reciprocal_coeffs(c: Sequence[int], n: int, modulus: Optional[int]) -> List[int]:
    s0 = c[0]
    if modulus is None:
        if s0 not in (1, -1):
            raise NonUnitError(f"reciprocal needs constant term +1 or -1, got {s0}")
        inv0 = s0
    else:
        if gcd(s0, modulus) != 1:
            raise NonUnitError(f"constant term {s0} is not invertible mod {modulus}")
        inv0 = pow(s0, -1, modulus)

    terms = [(k, v) for k, v in enumerate(c[1:n + 1], start=1) if v]
    if len(terms) <= 4 * isqrt(n) + 64:
        return _reciprocal_sparse(terms, inv0, n, modulus)
    return _reciprocal_newton(list(c[:n + 1]), inv0, n, modulus)


def _reciprocal_sparse(terms: List[Tuple[int, int]], inv0: int, n: int, modulus: Optional[int]) -> List[int]:
    r = [0] * (n + 1)
    r[0] = inv0
    for i in range(1, n + 1):
        acc = 0
        for k, v in terms:
            if k > i:
                break
            acc += v * r[i - k]
        r[i] = -inv0 * acc if modulus is None else (-inv0 * acc) % modulus
    return r


def _reciprocal_newton(c: List[int], inv0: int, n: int, modulus: Optional[int]) -> List[int]:
    r = [inv0]
    prec = 1
    while prec < n + 1:
        prec = min(2 * prec, n + 1)
        err = _convolve(c[:prec], r, prec - 1)
        err[0] -= 1
        if modulus is not None:
            err = [e % modulus for e in err]
        corr = _convolve(r, err, prec - 1)
        r = [(r[i] if i < len(r) else 0) - corr[i] for i in range(prec)]
        if modulus is not None:
            r = [x % modulus for x in r]
        logger.debug(f"newton reciprocal precision {prec}/{n + 1}")
    return r


# ============== Construction ==============

def make_series(pairs: Iterable[Tuple[int, int]], trunc: int) -> IntSeries:
    """Build an IntSeries from (exponent, coefficient) pairs; duplicates are summed."""
    _check_trunc(trunc)
    coeffs = [0] * (trunc + 1)
    for e, c in pairs:
        if e < 0:
            raise QSeriesError(f"negative exponent {e} in series pairs")
        if e <= trunc:
            coeffs[e] += c
    return IntSeries(trunc, tuple(coeffs))


def one(trunc: int, modulus: Optional[int] = None) -> Series:
    _check_trunc(trunc)
    return _build([1] + [0] * trunc, trunc, modulus)


def zero(trunc: int, modulus: Optional[int] = None) -> Series:
    _check_trunc(trunc)
    return _build([0] * (trunc + 1), trunc, modulus)


def monomial(coeff: int, exp: int, trunc: int, modulus: Optional[int] = None) -> Series:
    """coeff·q^exp truncated at trunc."""
    _check_trunc(trunc)
    coeffs = [0] * (trunc + 1)
    if 0 <= exp <= trunc:
        coeffs[exp] = coeff
    return _build(coeffs, trunc, modulus)


def with_trunc(s: Series, trunc: int) -> Series:
    """Narrow a series to a smaller truncation (widening is never allowed)."""
    _check_trunc(trunc)
    if trunc > s.trunc:
        raise TruncationError(f"cannot widen a series exact to q^{s.trunc} to q^{trunc}", required=trunc)
    return _build(list(s.coeffs[:trunc + 1]), trunc, _modulus_of(s))


# ============== Ring Operations ==============

def add(a: Series, b: Series) -> Series:
    modulus = _common_modulus(a, b)
    n = min(a.trunc, b.trunc)
    return _build([x + y for x, y in zip(a.coeffs[:n + 1], b.coeffs[:n + 1])], n, modulus)


def sub(a: Series, b: Series) -> Series:
    modulus = _common_modulus(a, b)
    n = min(a.trunc, b.trunc)
    return _build([x - y for x, y in zip(a.coeffs[:n + 1], b.coeffs[:n + 1])], n, modulus)


def neg(s: Series) -> Series:
    return _build([-c for c in s.coeffs], s.trunc, _modulus_of(s))


def scale(s: Series, c: int) -> Series:
    return _build([c * x for x in s.coeffs], s.trunc, _modulus_of(s))


def shift(s: Series, k: int) -> Series:
    """Multiply by q^k, keeping the truncation."""
    if k < 0:
        raise QSeriesError("shift exponent must be non-negative (no Laurent series)")
    coeffs = ([0] * k + list(s.coeffs))[:s.trunc + 1]
    return _build(coeffs, s.trunc, _modulus_of(s))


def mul(a: Series, b: Series) -> Series:
    """Exact Cauchy product truncated at min(a.trunc, b.trunc)."""
    modulus = _common_modulus(a, b)
    n = min(a.trunc, b.trunc)
    return _build(_convolve(a.coeffs, b.coeffs, n), n, modulus)


def mul_schoolbook(a: Series, b: Series) -> Series:
    """Reference O(N^2) product, kept for cross-checking mul()."""
    modulus = _common_modulus(a, b)
    n = min(a.trunc, b.trunc)
    out = [0] * (n + 1)
    for i, x in enumerate(a.coeffs[:n + 1]):
        for j in range(n + 1 - i):
            out[i + j] += x * b.coeffs[j]
    return _build(out, n, modulus)


def mul_linear_factor(s: Series, c: int, e: int) -> Series:
    """s·(1 + c·q^e) in O(N)."""
    if e <= 0:
        raise QSeriesError("linear factor exponent must be positive")
    out = list(s.coeffs)
    for i in range(s.trunc, e - 1, -1):
        out[i] += c * out[i - e]
    return _build(out, s.trunc, _modulus_of(s))


def div_linear_factor(s: Series, c: int, e: int) -> Series:
    """s / (1 + c·q^e) in O(N)."""
    if e <= 0:
        raise QSeriesError("linear factor exponent must be positive")
    modulus = _modulus_of(s)
    out = list(s.coeffs)
    for i in range(e, s.trunc + 1):
        out[i] -= c * out[i - e]
        if modulus is not None:
            out[i] %= modulus
    return _build(out, s.trunc, modulus)


def reciprocal(s: Series) -> Series:
    """
    Multiplicative inverse to the same truncation.

    Sparse inputs (theta-type series, eta factors) use the coefficient
    recurrence over their nonzero terms; dense inputs use Newton iteration.

    Raises:
        NonUnitError: constant term is not +-1 (or not invertible mod m)
    """
    modulus = _modulus_of(s)
    return _build(_reciprocal_coeffs(s.coeffs, s.trunc, modulus), s.trunc, modulus)


def power(s: Series, e: int) -> Series:
    """e-fold product by binary exponentiation; power(s, 0) is 1."""
    if e < 0:
        raise QSeriesError("power exponent must be non-negative; use reciprocal first")
    result = one(s.trunc, _modulus_of(s))
    base = s
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


# ============== Substitution and Sections ==============

def substitute_qk(s: Series, k: int, trunc: Optional[int] = None) -> Series:
    """
    s(q^k). The result is exact up to k·(s.trunc+1) − 1; ``trunc`` defaults
    to s.trunc and may not exceed that bound.
    """
    if k < 1:
        raise QSeriesError(f"substitution power must be >= 1, got {k}")
    if trunc is None:
        trunc = s.trunc
    _check_trunc(trunc)
    limit = k * (s.trunc + 1) - 1
    if trunc > limit:
        raise TruncationError(f"s(q^{k}) is exact only to q^{limit}, requested q^{trunc}", required=trunc)
    out = [0] * (trunc + 1)
    for i in range(trunc // k + 1):
        out[k * i] = s.coeffs[i]
    return _build(out, trunc, _modulus_of(s))


def extract_progression(s: Series, A: int, B: int) -> Series:
    """Series whose q^n coefficient is the q^(An+B) coefficient of s."""
    if A < 1 or not 0 <= B < A:
        raise QSeriesError(f"progression needs A >= 1 and 0 <= B < A, got A={A}, B={B}")
    if B > s.trunc:
        raise TruncationError(f"residue {B} lies beyond trunc {s.trunc}", required=B)
    trunc = (s.trunc - B) // A
    return _build(list(s.coeffs[B::A]), trunc, _modulus_of(s))


def interleave(parts: Sequence[Series]) -> Series:
    """Inverse of extract_progression over all residues B = 0..A-1."""
    A = len(parts)
    if A < 1:
        raise QSeriesError("interleave needs at least one part")
    modulus = _modulus_of(parts[0])
    trunc = min(A * (p.trunc + 1) + B for B, p in enumerate(parts)) - 1
    out = [0] * (trunc + 1)
    for B, p in enumerate(parts):
        for n, c in enumerate(p.coeffs):
            e = A * n + B
            if e > trunc:
                break
            out[e] = c
    return _build(out, trunc, modulus)


# ============== Congruences ==============

def reduce_mod(s: Series, m: int) -> ModSeries:
    """Coefficientwise floored reduction into [0, m)."""
    _check_modulus(m)
    current = _modulus_of(s)
    if current is not None and current % m:
        raise QSeriesError(f"cannot reduce a series mod {current} to mod {m}")
    return ModSeries(s.trunc, m, tuple(c % m for c in s.coeffs))


def congruent(a: Series, b: Series, m: int, upto: Optional[int] = None) -> Congruence:
    """
    Compare coefficients mod m on exponents 0..upto.

    Raises:
        TruncationError: upto exceeds either operand's truncation
    """
    _check_modulus(m)
    if upto is None:
        upto = min(a.trunc, b.trunc)
    if upto > a.trunc or upto > b.trunc:
        raise TruncationError(
            f"cannot compare to q^{upto}: operands exact to q^{a.trunc} and q^{b.trunc}",
            required=upto,
        )
    for s in (a, b):
        sm = _modulus_of(s)
        if sm is not None and sm % m:
            raise QSeriesError(f"a series known mod {sm} cannot be compared mod {m}")
    for n in range(upto + 1):
        if (a.coeffs[n] - b.coeffs[n]) % m:
            return Congruence(False, n)
    return Congruence(True, None)


def first_difference(a: Series, b: Series, upto: Optional[int] = None) -> Optional[int]:
    """Smallest exponent where two series differ exactly, or None."""
    if upto is None:
        upto = min(a.trunc, b.trunc)
    if upto > a.trunc or upto > b.trunc:
        raise TruncationError(f"cannot compare to q^{upto}", required=upto)
    for n in range(upto + 1):
        if a.coeffs[n] != b.coeffs[n]:
            return n
    return None


def frobenius_congruence(s: IntSeries, p: int, k: int = 1) -> Congruence:
    """s^(p^k) against s(q^p)^(p^(k-1)) mod p^k, to s.trunc."""
    if p < 2 or k < 1:
        raise QSeriesError(f"need p >= 2 and k >= 1, got p={p}, k={k}")
    lhs = power(s, p ** k)
    rhs = power(substitute_qk(s, p), p ** (k - 1))
    return congruent(lhs, rhs, p ** k)


# ============== Text Format ==============

def dumps_series(s: Series) -> str:
    """Render as '#trunc=N' (+ '#modulus=m') followed by 'exponent<TAB>coefficient' lines."""
    lines = [f"#trunc={s.trunc}"]
    if isinstance(s, ModSeries):
        lines.append(f"#modulus={s.modulus}")
    lines.extend(f"{n}\t{c}" for n, c in s.nonzero_terms())
    return "\n".join(lines) + "\n"


def loads_series(text: str) -> Series:
    """Parse the text format produced by dumps_series."""
    header = {}
    pairs: List[Tuple[int, int]] = []
    last = -1
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if not sep or key.strip() not in ("trunc", "modulus"):
                raise QSeriesError(f"line {lineno}: unknown header {line!r}")
            try:
                header[key.strip()] = int(value)
            except ValueError:
                raise QSeriesError(f"line {lineno}: header value {value.strip()!r} is not an integer") from None
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise QSeriesError(f"line {lineno}: expected 'exponent<TAB>coefficient'")
        try:
            e, c = int(fields[0]), int(fields[1])
        except ValueError:
            raise QSeriesError(f"line {lineno}: exponent and coefficient must be integers") from None
        if e <= last:
            raise QSeriesError(f"line {lineno}: exponents must be strictly ascending")
        last = e
        pairs.append((e, c))
    if "trunc" not in header:
        raise QSeriesError("missing '#trunc=N' header")
    trunc = header["trunc"]
    if pairs and pairs[-1][0] > trunc:
        raise TruncationError(f"exponent {pairs[-1][0]} exceeds declared trunc {trunc}")
    s = make_series(pairs, trunc)
    if "modulus" in header:
        return reduce_mod(s, header["modulus"])
    return s
