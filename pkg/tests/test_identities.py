"""
Tests for Dissections and the Identity Catalogue

Validates:
1. Two-dissections of theta and false theta functions
2. Iterated dissections and the telescoped inverse
3. Report invariants and modulus overrides
4. Every catalogue identity at a reduced truncation
5. The Lost Notebook sum and its recorded discrepancy
"""

import pytest
from pathlib import Path
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))


# Truncations small enough for the default test run
SMALL_TRUNCS = {
    "psi_q3_q_expansion": 120,
    "jacobi_cube": 300,
    "f1_f5_mod2": 300,
    "three_core_split_mod2": 300,
    "three_core_theta_mod2": 300,
    "theta_two_dissection": 80,
    "false_theta_dissection": 60,
    "jtp_factorization": 60,
    "c5_odd_part_mod2": 1000,
    "c5_32n_31_mod4": 2000,
    "c5_square_stability_mod4": 300,
    "c5_telescoped_inverse_mod4": 200,
    "c9_bridge_mod2": 300,
    "c9_eta_quotient_mod2": 300,
    "c9_extraction_mod2": 404,
    "c9_8n_4_mod2": 1604,
    "truncated_pentagonal": 50,
    "rank_zero": 30,
}


class TestDissection:
    """Tests for single and iterated dissections."""

    def test_c5_dissection_pieces(self):
        """Psi(-q^5,q) = Psi(-q^16,-q^8) - q Psi(-q^20,-q^4)."""
        from app.tools.theta import ThetaSpec
        from app.tools.identities import dissect_false_theta

        d = dissect_false_theta(ThetaSpec.psi(-1, 5, 1, 1))
        assert d.even_part == ThetaSpec.psi(-1, 16, -1, 8)
        assert d.odd_part == ThetaSpec.psi(-1, 20, -1, 4)
        assert d.odd_sign == -1
        assert d.odd_prefactor_exp == 1
        assert d.even_odd_split

    def test_verify_dissection(self):
        from app.tools.theta import ThetaSpec
        from app.tools.identities import verify_dissection

        for spec in (ThetaSpec.psi(-1, 5, 1, 1), ThetaSpec.psi(1, 2, -1, 7), ThetaSpec.theta(-1, 3, 1, 8)):
            report = verify_dissection(spec, 250)
            assert report.is_verified, f"{spec}: {report.details}"

    def test_even_exponent_has_no_split(self):
        from app.tools.theta import ThetaSpec
        from app.tools.identities import dissect

        assert not dissect(ThetaSpec.psi(-1, 2, 1, 1)).even_odd_split

    def test_equal_exponents_rejected(self):
        from app.tools.theta import ThetaSpec
        from app.tools.identities import dissect_false_theta
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            dissect_false_theta(ThetaSpec.psi(1, 3, -1, 3))

    def test_iterated_dissection_rebuilds(self):
        """Reassembling a depth-3 tree from its leaves gives the source back."""
        from app.tools.theta import ThetaSpec, expand_theta
        from app.tools.identities import iterate_dissection

        spec = ThetaSpec.psi(-1, 9, 1, 1)
        tree = iterate_dissection(spec, 3)
        assert len(tree.leaves()) == 8
        assert tree.series(300) == expand_theta(spec, 300)
        assert tree.to_dict()["spec"] == "psi(-q^9,q)"

    def test_negative_depth(self):
        from app.tools.theta import ThetaSpec
        from app.tools.identities import iterate_dissection
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            iterate_dissection(ThetaSpec.psi(-1, 2, 1, 1), -1)

    def test_telescoped_inverse(self):
        """1/Psi(-q^5,q) through the telescoped power difference, mod 4."""
        from app.tools.theta import ThetaSpec
        from app.tools.identities import telescoped_inverse_check

        report = telescoped_inverse_check(ThetaSpec.psi(-1, 5, 1, 1), 3, 4, 200)
        assert report.is_verified
        assert report.modulus == 4


class TestReports:
    """Tests for IdentityReport and modulus handling."""

    def test_failed_needs_mismatch(self):
        from app.tools.identities import IdentityReport, ReportStatus
        from app.core.exceptions import QSeriesError

        with pytest.raises(QSeriesError):
            IdentityReport("x", 10, None, ReportStatus.FAILED)

    def test_to_dict_exact(self):
        from app.tools.identities import IdentityReport, ReportStatus

        data = IdentityReport("x", 10, None, ReportStatus.VERIFIED).to_dict()
        assert data["modulus"] == "exact"
        assert "elapsed" not in data

    def test_failure_stops_at_first_mismatch(self):
        from app.tools.series import IntSeries
        from app.tools.identities import Comparison, evaluate_comparisons

        def build(trunc, details):
            yield Comparison("equal", IntSeries.from_list([1, 2, 3]), IntSeries.from_list([1, 2, 3]))
            yield Comparison("differs", IntSeries.from_list([1, 2, 3]), IntSeries.from_list([1, 0, 3]))
            yield Comparison("never reached", IntSeries.from_list([1]), IntSeries.from_list([0]))

        report = evaluate_comparisons("demo", 2, build)
        assert not report.is_verified
        assert report.first_mismatch == 1
        assert report.details["failed_check"] == "differs"
        assert report.details["checks"] == 2

    def test_modulus_override_must_divide(self):
        """A mod 4 congruence can be checked mod 2 but not mod 3."""
        from app.tools.identities import verify_registry_identity
        from app.core.exceptions import QSeriesError

        assert verify_registry_identity("c5_32n_31_mod4", 640, modulus=2).is_verified
        with pytest.raises(QSeriesError):
            verify_registry_identity("c5_32n_31_mod4", 640, modulus=3)

    def test_unknown_identity(self):
        from app.tools.identities import verify_registry_identity
        from app.core.exceptions import RegistryError

        with pytest.raises(RegistryError):
            verify_registry_identity("no_such_identity", 10)


class TestCatalogue:
    """Every bound identity verifies at a reduced truncation."""

    def test_every_entry_has_a_small_trunc(self):
        from app.tools.identities import registry_ids

        assert set(registry_ids()) == set(SMALL_TRUNCS)

    @pytest.mark.parametrize("identity_id", sorted(SMALL_TRUNCS))
    def test_identity_verifies(self, identity_id):
        from app.tools.identities import verify_registry_identity

        report = verify_registry_identity(identity_id, SMALL_TRUNCS[identity_id])
        assert report.is_verified, f"{identity_id} failed at q^{report.first_mismatch}: {report.details}"

    @pytest.mark.slow
    def test_verify_all_defaults(self):
        from app.tools.identities import verify_all

        reports = verify_all()
        failed = [r.identity_id for r in reports if not r.is_verified]
        assert not failed, f"Failed identities: {failed}"


class TestLostNotebook:
    """Tests for the Lost Notebook sum."""

    def test_sum_leading_terms(self):
        """The sum is 1 - q^4 + q^12 - q^24 + ..."""
        from app.tools.identities import lost_notebook_sum

        s = lost_notebook_sum(30)
        assert s.support() == [0, 4, 12, 24]
        assert [s[n] for n in (0, 4, 12, 24)] == [1, -1, 1, -1]

    def test_printed_form_mismatch_is_recorded(self):
        from app.tools.identities import verify_registry_identity

        report = verify_registry_identity("psi_q3_q_expansion", 60)
        assert report.is_verified
        assert report.details["printed_form_first_difference"] == 1
        assert "lost_notebook_psi_argument" in report.source_note
