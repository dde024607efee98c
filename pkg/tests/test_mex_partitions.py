"""
Tests for Partitions, mex Counts and the Truncated Pentagonal Theorem

Validates:
1. Partition enumeration and statistics
2. mex generating functions against enumeration
3. Truncated pentagonal differences
4. The truncated pentagonal identity and its negative control
5. Rank-zero generating function variants
6. Dominance search and nonnegativity
"""

import pytest
from pathlib import Path
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))


class TestPartitions:
    """Tests for Partition and the enumerator."""

    def test_enumeration_counts(self):
        from app.tools.mex_partitions import partitions

        assert [sum(1 for _ in partitions(n)) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]

    def test_enumeration_order(self):
        from app.tools.mex_partitions import partitions

        assert [str(p) for p in partitions(4)] == ["4", "3+1", "2+2", "2+1+1", "1+1+1+1"]

    def test_empty_partition(self):
        from app.tools.mex_partitions import partitions

        (empty,) = list(partitions(0))
        assert empty.parts == ()
        assert empty.n == 0
        assert str(empty) == "()"

    def test_invalid_parts(self):
        from app.tools.mex_partitions import Partition
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            Partition((1, 2))
        with pytest.raises(QSeriesError):
            Partition((3, 0))

    def test_statistics_of_one_partition(self):
        from app.tools.mex_partitions import Partition

        p = Partition((3, 1, 1))
        assert p.rank == 0
        assert p.mex == 2
        assert p.count_above(2) == 1
        assert p.count_below(2) == 2

    def test_rank_zero_counts(self):
        from app.tools.mex_partitions import partition_statistics

        assert [partition_statistics(n).rank_zero for n in range(1, 8)] == [1, 0, 1, 1, 1, 1, 3]

    def test_statistics_table(self):
        from app.tools.mex_partitions import statistics_table

        table = statistics_table(12, max_workers=3)
        assert [s.n for s in table] == list(range(13))
        assert table[12].total == 77


class TestMexCounts:
    """Tests for M_k(n)."""

    def test_oracle_values(self):
        from app.tools.mex_partitions import mex_count_oracle

        assert mex_count_oracle(1, 5) == 2
        assert mex_count_oracle(2, 8) == 1
        assert mex_count_oracle(2, 5) == 0
        assert mex_count_oracle(2, 7) == 1

    def test_bad_index(self):
        from app.tools.mex_partitions import mex_count_oracle
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            mex_count_oracle(0, 5)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_gf_matches_enumeration(self, k):
        from app.tools.mex_partitions import mex_gf, mex_count_oracle

        gf = mex_gf(k, 24)
        for n in range(25):
            assert gf[n] == mex_count_oracle(k, n), f"M_{k}({n})"

    def test_differences(self):
        """p(8) - p(7) - p(6) + p(3) = -1, so M_2(8) = 1."""
        from app.tools.mex_partitions import partition_numbers, truncated_pentagonal_diff, mex_count_by_differences

        p = partition_numbers(20)
        assert truncated_pentagonal_diff(2, 8, p) == -1
        assert mex_count_by_differences(2, 8, p) == 1
        assert mex_count_by_differences(2, 0, p) == 0

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_table_columns_agree(self, k):
        from app.tools.mex_partitions import mex_table

        sign = 1 if k % 2 else -1
        for row in mex_table(k, 22)[1:]:
            assert row["gf_coeff"] == row["oracle_count"] == sign * row["diff_sum"], row


class TestTruncatedPentagonal:
    """Tests for Psi(-q^2,q) = (q;q)_inf (1 - 2(M_2 - M_4 + ...))."""

    def test_identity_holds(self):
        from app.tools.mex_partitions import verify_tpn_theorem

        report = verify_tpn_theorem(60)
        assert report.is_verified, report.details
        assert report.details["checks"] == 2

    def test_double_sum_agrees_with_mex_form(self):
        from app.tools.mex_partitions import tpn_rhs

        assert tpn_rhs(80, "mex") == tpn_rhs(80, "double_sum")

    def test_flipped_sign_fails(self):
        """Reversing the sign of M_2 breaks the identity at its first term, q^7."""
        from app.tools.mex_partitions import verify_tpn_theorem

        report = verify_tpn_theorem(40, forms=("mex",), flip=1)
        assert not report.is_verified
        assert report.first_mismatch == 7
        assert report.details["flipped_term"] == "M_2"

    def test_unknown_form(self):
        from app.tools.mex_partitions import tpn_rhs
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            tpn_rhs(10, "closed_form")


class TestRankZero:
    """Tests for the rank-zero generating function."""

    def test_printed_variant_matches(self):
        from app.tools.mex_partitions import rank_zero_check

        report = rank_zero_check(30)
        assert report.is_verified
        assert report.details["matching_variants"] == ["psi(-q^2,-q)"]
        assert report.details["variants"]["psi(-q^2,q)"] is not None

    def test_series_excludes_empty_partition(self):
        from app.tools.mex_partitions import rank_zero_series

        assert rank_zero_series(7).coeffs == (0, 1, 0, 1, 1, 1, 1, 3)


class TestDominanceAndPositivity:
    """Tests for the dominance search and the nonnegativity scan."""

    def test_no_failure_for_small_n(self):
        from app.tools.mex_partitions import dominance_counterexample

        assert dominance_counterexample(60) is None

    def test_nonnegative_quotient(self):
        from app.tools.mex_partitions import nonnegativity_check

        scan = nonnegativity_check(400)
        assert scan.trunc == 400
        assert scan.first_negative is None

    @pytest.mark.slow
    def test_failure_found_eventually(self):
        from app.tools.mex_partitions import dominance_counterexample

        witness = dominance_counterexample(4000)
        assert witness is not None
        assert witness.n > 60
        assert witness.lower_index_count < witness.higher_index_count
