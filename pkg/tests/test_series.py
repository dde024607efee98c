"""
Tests for the Truncated Series Core

Validates:
1. Ring operations and truncation propagation
2. Reciprocal (sparse recurrence and Newton paths)
3. Substitution, progression extraction and interleaving
4. Congruence comparison and its error cases
5. The text exchange format
"""

import random

import pytest
from pathlib import Path
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))


class TestConstruction:
    """Tests for series values and their validation."""

    def test_from_list_pads_to_trunc(self):
        """Short coefficient lists are padded with zeros."""
        from app.tools.series import IntSeries

        s = IntSeries.from_list([1, 2], trunc=4)
        assert s.coeffs == (1, 2, 0, 0, 0)
        assert s.trunc == 4

    def test_mod_series_reduces(self):
        """ModSeries.from_list stores floored residues."""
        from app.tools.series import ModSeries

        s = ModSeries.from_list([-1, 5, 3], 4)
        assert s.coeffs == (3, 1, 3)

    def test_bad_modulus_rejected(self):
        """Moduli below 2 or at 2^63 are errors."""
        from app.tools.series import ModSeries, zero
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            zero(3, 1)
        with pytest.raises(QSeriesError):
            ModSeries.from_list([1], 1 << 63)

    def test_coefficient_past_trunc_raises(self):
        """Indexing beyond trunc is a TruncationError, negative indices read 0."""
        from app.tools.series import one
        from app.core.exceptions import TruncationError

        s = one(3)
        assert s[-2] == 0
        with pytest.raises(TruncationError):
            s[4]

    def test_negative_trunc_rejected(self):
        from app.tools.series import zero
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            zero(-1)

    def test_make_series_sums_duplicates(self):
        from app.tools.series import make_series

        s = make_series([(0, 1), (2, 3), (2, -1), (9, 7)], 4)
        assert s.coeffs == (1, 0, 2, 0, 0)


class TestRingOperations:
    """Tests for add/sub/mul and truncation rules."""

    def test_result_trunc_is_minimum(self):
        """Binary operations keep the smaller truncation."""
        from app.tools.series import IntSeries, add, mul

        a = IntSeries.from_list([1, 1, 1, 1, 1, 1])
        b = IntSeries.from_list([1, -1, 0])
        assert add(a, b).trunc == 2
        assert mul(a, b).coeffs == (1, 0, 0)

    def test_mixed_moduli_rejected(self):
        from app.tools.series import one, add
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            add(one(3, 2), one(3, 3))

    def test_kronecker_matches_schoolbook(self):
        """Large products agree with the reference product, signs included."""
        from app.tools.series import IntSeries, mul, mul_schoolbook

        rng = random.Random(7)
        a = IntSeries.from_list([rng.randint(-50, 50) for _ in range(300)])
        b = IntSeries.from_list([rng.randint(-50, 50) for _ in range(300)])
        assert mul(a, b) == mul_schoolbook(a, b)

    def test_operator_sugar(self):
        from app.tools.series import IntSeries

        a = IntSeries.from_list([1, 1, 0, 0])
        assert (a * a).coeffs == (1, 2, 1, 0)
        assert (a ** 3).coeffs == (1, 3, 3, 1)
        assert (a - a).is_zero()
        assert (-a).coeffs == (-1, -1, 0, 0)

    def test_shift_keeps_trunc(self):
        from app.tools.series import IntSeries, shift
        from app.core.exceptions import QSeriesError

        s = shift(IntSeries.from_list([1, 2, 3, 4]), 2)
        assert s.coeffs == (0, 0, 1, 2)
        with pytest.raises(QSeriesError):
            shift(s, -1)

    def test_linear_factors_invert(self):
        """div_linear_factor undoes mul_linear_factor."""
        from app.tools.series import IntSeries, mul_linear_factor, div_linear_factor

        s = IntSeries.from_list([1, 4, -2, 0, 5, 1, 0, 3])
        assert div_linear_factor(mul_linear_factor(s, -3, 2), -3, 2) == s


class TestReciprocal:
    """Tests for multiplicative inverses."""

    def test_geometric(self):
        """1/(1-q) = 1 + q + q^2 + ..."""
        from app.tools.series import IntSeries, reciprocal

        assert reciprocal(IntSeries.from_list([1, -1], 6)).coeffs == (1,) * 7

    def test_minus_one_constant(self):
        from app.tools.series import IntSeries, reciprocal

        assert reciprocal(IntSeries.from_list([-1, 1], 3)).coeffs == (-1, -1, -1, -1)

    def test_non_unit_rejected(self):
        """Constant term 2 has no integer inverse; mod 4 it is not a unit either."""
        from app.tools.series import IntSeries, ModSeries, reciprocal
        from app.core.exceptions import NonUnitError

        with pytest.raises(NonUnitError):
            reciprocal(IntSeries.from_list([2, 1]))
        with pytest.raises(NonUnitError):
            reciprocal(ModSeries.from_list([2, 1], 4))

    def test_unit_mod_m(self):
        """2 is a unit mod 5."""
        from app.tools.series import ModSeries, reciprocal, mul, one

        s = ModSeries.from_list([2, 3, 1, 4, 0, 2], 5)
        assert mul(s, reciprocal(s)) == one(5, 5)

    def test_dense_newton_path(self):
        """Dense inputs go through Newton iteration and still invert exactly."""
        from app.tools.series import IntSeries, reciprocal, mul, one

        rng = random.Random(11)
        s = IntSeries.from_list([1] + [rng.randint(-9, 9) for _ in range(400)])
        assert mul(s, reciprocal(s)) == one(400)


class TestSections:
    """Tests for substitution, extraction and interleaving."""

    def test_substitute_bound(self):
        """s(q^k) is exact to k·(trunc+1) - 1 and no further."""
        from app.tools.series import IntSeries, substitute_qk
        from app.core.exceptions import TruncationError

        s = IntSeries.from_list([1, 2, 3])
        t = substitute_qk(s, 2, 5)
        assert t.coeffs == (1, 0, 2, 0, 3, 0)
        with pytest.raises(TruncationError) as exc:
            substitute_qk(s, 2, 6)
        assert exc.value.required == 6

    def test_extract_then_interleave(self):
        from app.tools.series import IntSeries, extract_progression, interleave

        s = IntSeries.from_list(list(range(12)))
        parts = [extract_progression(s, 3, b) for b in range(3)]
        assert parts[1].coeffs == (1, 4, 7, 10)
        assert interleave(parts) == s

    def test_extract_rejects_bad_residue(self):
        from app.tools.series import one, extract_progression
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            extract_progression(one(10), 3, 3)


class TestCongruences:
    """Tests for congruent, first_difference and the Frobenius check."""

    def test_congruent_reports_first_mismatch(self):
        from app.tools.series import IntSeries, congruent

        a = IntSeries.from_list([1, 2, 3, 4])
        b = IntSeries.from_list([3, 4, 4, 4])
        result = congruent(a, b, 2)
        assert not result.holds
        assert result.first_mismatch == 2

    def test_congruent_beyond_trunc(self):
        from app.tools.series import one, congruent
        from app.core.exceptions import TruncationError

        with pytest.raises(TruncationError):
            congruent(one(3), one(5), 2, upto=4)

    def test_incompatible_modulus(self):
        """A series known mod 4 says nothing mod 3."""
        from app.tools.series import one, congruent
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            congruent(one(3, 4), one(3), 3)

    def test_first_difference(self):
        from app.tools.series import IntSeries, first_difference

        a = IntSeries.from_list([1, 0, 5])
        assert first_difference(a, a) is None
        assert first_difference(a, IntSeries.from_list([1, 0, 4])) == 2

    def test_frobenius(self):
        """s^p ≡ s(q^p) mod p, and the prime-power form mod p^2."""
        from app.tools.series import IntSeries, frobenius_congruence

        rng = random.Random(0)
        s = IntSeries.from_list([1] + [rng.randint(-5, 5) for _ in range(60)])
        assert frobenius_congruence(s, 2).holds
        assert frobenius_congruence(s, 3).holds
        assert frobenius_congruence(s, 2, 2).holds


class TestTextFormat:
    """Tests for dumps_series / loads_series."""

    def test_modular_header(self):
        from app.tools.series import ModSeries, dumps_series, loads_series

        s = ModSeries.from_list([1, 0, 3, 2], 4)
        text = dumps_series(s)
        assert text.splitlines()[:2] == ["#trunc=3", "#modulus=4"]
        assert loads_series(text) == s

    def test_missing_header(self):
        from app.tools.series import loads_series
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            loads_series("0\t1\n")

    def test_descending_exponents_rejected(self):
        from app.tools.series import loads_series
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            loads_series("#trunc=5\n3\t1\n1\t1\n")

    @pytest.mark.parametrize("text", ["#trunc=abc\n", "#trunc=4\n0\tx\n", "#trunc=4\n#modulus=\n"])
    def test_non_integer_fields(self, text):
        from app.tools.series import loads_series
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError, match="line"):
            loads_series(text)

    def test_exponent_past_trunc(self):
        from app.tools.series import loads_series
        from app.core.exceptions import TruncationError

        with pytest.raises(TruncationError):
            loads_series("#trunc=2\n0\t1\n3\t1\n")
