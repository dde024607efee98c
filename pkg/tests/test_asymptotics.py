"""
Tests for Growth and Bounding Recurrences

Validates:
1. The pentagonal sign table and the c_2 recurrence
2. Characteristic polynomials of the truncated recurrences
3. Largest real root search
4. Certified ratio intervals
5. The sandwich and difference bounds for c_2
"""

import pytest
from pathlib import Path
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))


class TestPentagonalTable:
    """Tests for PentagonalTable."""

    def test_signs(self):
        from app.tools.asymptotics import PentagonalTable

        table = PentagonalTable.build(26)
        assert table.exponents == (1, 2, 5, 7, 12, 15, 22, 26)
        assert table.signs_pent == (-1, -1, 1, 1, -1, -1, 1, 1)
        assert table.signs_false == (-1, -1, 1, -1, 1, 1, -1, 1)

    def test_reproduces_series(self):
        from app.tools.asymptotics import PentagonalTable

        assert PentagonalTable.build(500).reproduces_series(500)


class TestRecurrence:
    """Tests for the c_2 recurrence and its truncations."""

    def test_first_terms(self):
        from app.tools.asymptotics import c2_by_recurrence

        assert c2_by_recurrence(7) == [1, 1, 2, 3, 5, 7, 11, 17]

    def test_matches_reciprocal(self):
        from app.tools.asymptotics import c2_by_recurrence
        from app.tools.identities import c_t_series

        assert c2_by_recurrence(600) == list(c_t_series(2, 600).coeffs)

    def test_degree7_char_poly(self):
        """x^7 - x^6 - x^5 + x^2 - 1."""
        from app.tools.asymptotics import recurrence_spec, UPPER_LAGS

        spec = recurrence_spec(UPPER_LAGS)
        assert spec.degree == 7
        assert spec.char_poly == (1, -1, -1, 0, 0, 1, 0, -1)

    def test_degree26_char_poly(self):
        from app.tools.asymptotics import recurrence_spec, LOWER_LAGS

        spec = recurrence_spec(LOWER_LAGS)
        assert spec.degree == 26
        expected = [0] * 27
        for lag, coeff in ((0, 1), (1, -1), (2, -1), (5, 1), (7, -1), (12, 1), (15, 1), (22, -1), (26, 1)):
            expected[lag] = coeff
        assert spec.char_poly == tuple(expected)
        assert spec.as_poly().degree() == 26

    def test_lags_must_increase(self):
        from app.tools.asymptotics import RecurrenceSpec
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            RecurrenceSpec(((2, 1), (1, 1)))

    def test_run_recurrence_needs_initial_values(self):
        from app.tools.asymptotics import recurrence_spec, run_recurrence
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            run_recurrence(recurrence_spec(4), [1, 1, 2], 20)


class TestRoots:
    """Tests for largest_real_root."""

    def test_linear(self):
        from app.tools.asymptotics import largest_real_root

        assert largest_real_root((1, -1)) == 1.0

    def test_bounding_roots(self):
        from app.tools.asymptotics import largest_real_root, recurrence_spec

        upper = largest_real_root(recurrence_spec(4).char_poly)
        lower = largest_real_root(recurrence_spec(8).char_poly)
        assert abs(upper - 1.54522) < 1e-4
        assert abs(lower - 1.53623) < 1e-4
        assert lower < upper

    def test_no_sign_change(self):
        from app.tools.asymptotics import largest_real_root
        from app.core.exceptions import NoSignChangeError

        with pytest.raises(NoSignChangeError):
            largest_real_root((1, 0, 1))


class TestRatios:
    """Tests for growth_ratio and composition counts."""

    def test_constant_sequence(self):
        from decimal import Decimal
        from app.tools.asymptotics import growth_ratio

        ratio = growth_ratio([3] * 10, (2, 8))
        assert ratio.lo == Decimal(1)
        assert ratio.hi == Decimal(1)

    def test_outward_rounding(self):
        """2/3 is rounded down for lo and up for hi."""
        from decimal import Decimal
        from app.tools.asymptotics import growth_ratio

        ratio = growth_ratio([3, 2, 2], (0, 2), digits=3)
        assert ratio.lo == Decimal("0.666")
        assert ratio.hi == Decimal("1.000")

    def test_window_outside_sequence(self):
        from app.tools.asymptotics import growth_ratio
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            growth_ratio([1, 2, 3], (0, 3))

    def test_non_positive_entry(self):
        from app.tools.asymptotics import growth_ratio
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            growth_ratio([1, 0, 3, 4], (0, 2))

    def test_compositions(self):
        from app.tools.asymptotics import pentagonal_compositions

        growth = pentagonal_compositions(1000, (500, 1000))
        assert growth.counts[:6] == [1, 1, 2, 3, 5, 9]
        assert growth.ratio.lo > 1.618
        assert growth.ratio.hi < 2


class TestBounds:
    """Tests for the sandwich b <= c_2 <= a and the difference bounds."""

    def test_sandwich(self):
        from app.tools.asymptotics import bounding_sequences, c2_by_recurrence, sandwich_holds

        c = c2_by_recurrence(800)
        a, b = bounding_sequences(800)
        assert sandwich_holds(a, b, c)

    def test_differences(self):
        from app.tools.asymptotics import bounding_sequences, c2_by_recurrence, difference_bounds_hold

        c = c2_by_recurrence(800)
        a, _ = bounding_sequences(800)
        assert difference_bounds_hold(a, c)

    def test_c2_ratio_between_roots(self):
        """The c_2 ratio settles between the two bounding roots."""
        from app.tools.asymptotics import asymptotics_summary

        summary = asymptotics_summary(2, 1001, (500, 1000))
        assert summary.root_deg26 - 1e-3 < float(summary.ratio_lo)
        assert float(summary.ratio_hi) < summary.root_deg7 + 1e-3
        assert summary.sandwich_ok and summary.difference_ok


class TestSurveys:
    """Tests for the descriptive growth tables."""

    def test_growth_survey_order(self):
        from app.tools.asymptotics import growth_survey

        rows = growth_survey([2, 3], window=(200, 400), max_workers=2)
        assert [r["t"] for r in rows] == [2, 3]
        assert 1.5 < float(rows[0]["ratio_lo"]) <= float(rows[0]["ratio_hi"]) < 1.6

    def test_sign_variants(self):
        from app.tools.asymptotics import sign_variant_table

        rows = sign_variant_table(2, 1, 200)
        assert len(rows) == 8
        by_spec = {r["spec"]: r for r in rows}
        c2_row = by_spec["psi(-q^2,q)"]
        assert c2_row["negatives"] == 0
        assert "ratio_lo" in c2_row
