"""
Tests for the theorem verifiers and their reports.
"""
import json

import numpy as np
import pytest

from src.combinat.basis import rank_pic
from src.combinat.fcurves import FCurve, curve_family
from src.errors import InvalidAmbientError, InvalidArgumentError, ResourceLimitError
from src.verify.integrality import CDIntVerifier, is_power_of_two, verify_cdint
from src.verify.kapranov import verify_charkap, verify_psi_extremal, verify_psi_identity
from src.verify.knudsen import (
    check_knudsen_subset,
    knudsen_dual_basis,
    triple_curve,
    verify_charknu,
    verify_knu_rank,
    verify_knudual,
    verify_qknu,
    verify_triple,
)
from src.verify.products import (
    projection_curve,
    projection_subsets,
    verify_chargen,
    verify_charproj_certificate,
)
from src.verify.report import REPORT_SCHEMA, ReportStatus, VerificationReport


class TestVerificationReport:
    """Test suite for VerificationReport."""

    def test_empty_report_fails(self):
        """Test a report with no claims does not pass."""
        assert VerificationReport("charkap", 5).status is ReportStatus.FAIL

    def test_mismatch_fails(self):
        """Test one wrong claim fails the report."""
        report = VerificationReport("charkap", 5)
        report.check("kernel_dim", 1, 1)
        assert report.passed
        report.check("span_rank", 4, 3)
        assert not report.passed
        assert report.mismatches() == ["span_rank"]

    def test_json(self):
        """Test the report serializes curves and fractions to plain JSON."""
        report = VerificationReport("psi-identity", 5, params={"i": 5})
        report.check("ok", True, True)
        report.witness("curve", FCurve.parse("1|2,3|4|5"))
        payload = json.loads(report.dumps())
        assert payload["schema"] == REPORT_SCHEMA
        assert payload["status"] == "pass"
        assert payload["witnesses"]["curve"] == "1|2,3|4|5"


class TestKapranov:
    """Test suite for the psi and Kapranov verifiers."""

    @pytest.mark.parametrize("n", [5, 6, 7, 8])
    def test_charkap(self, n):
        """Test the Kapranov kernel is the line through psi_n."""
        report = verify_charkap(n)
        assert report.passed
        assert report.computed["kernel_dim"] == 1
        assert report.computed["span_rank"] == rank_pic(n) - 1

    def test_charkap_needs_n5(self):
        """Test M_0,4 is refused."""
        with pytest.raises(InvalidAmbientError, match="n >= 5"):
            verify_charkap(4)

    @pytest.mark.parametrize("n,i", [(4, 4), (5, 1), (6, 6), (7, 3)])
    def test_psi_extremal(self, n, i):
        """Test psi_i spans the classes vanishing where psi_i vanishes."""
        assert verify_psi_extremal(n, i).passed

    @pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
    def test_psi_identity(self, n):
        """Test the closed psi expansion matches the curve rule."""
        report = verify_psi_identity(n)
        assert report.passed
        assert abs(report.witnesses["coefficient"]) == 1 / 2 ** (n - 4)

    def test_psi_label_checked(self):
        """Test i outside 1..n raises."""
        with pytest.raises(InvalidArgumentError):
            verify_psi_identity(5, 6)


class TestKnudsen:
    """Test suite for the Knudsen family verifiers."""

    @pytest.mark.parametrize("n,kernel", [(5, 2), (6, 9), (7, 27), (8, 68)])
    def test_charknu(self, n, kernel):
        """Test the exact sequence and its rational and integral surjectivity."""
        report = verify_charknu(n)
        assert report.passed
        assert report.computed["kernel_dim"] == kernel
        assert "witness_disagreement" not in report.witnesses

    @pytest.mark.parametrize("n", [5, 6, 7, 8])
    def test_dual_basis_identity(self, n):
        """Test the dual divisors form the identity on the family and are F-nef."""
        certificate = knudsen_dual_basis(n)
        assert certificate.is_identity
        assert certificate.nonnegative
        assert len(certificate.curves) == 2 ** (n - 3) - 1

    def test_dual_basis_n5(self):
        """Test the n=5 levels and weights."""
        certificate = knudsen_dual_basis(5)
        assert [curve.encode() for curve in certificate.curves] == ["1,2|3|4|5", "1,3|2|4|5", "1|2,3|4|5"]
        assert [divisor.encode() for divisor in certificate.divisors] == [
            "D[3]:1,1,2,1,1",
            "D[3]:1,2,1,1,1",
            "D[3]:2,1,1,1,1",
        ]

    def test_dual_basis_levels_n6(self):
        """Test every level is one more than the weight on the smaller-label block."""
        certificate = knudsen_dual_basis(6)
        for curve, weights, divisor in zip(certificate.curves, certificate.weights, certificate.divisors):
            first = [block for block in curve.blocks if block not in ((5,), (6,))][0]
            assert divisor.m == weights.total(first) + 1
            assert divisor.weights[-2:] == (1, 1)

    def test_knudual_report(self):
        """Test the dual-basis report carries a serializable certificate."""
        report = verify_knudual(6)
        assert report.passed
        assert report.witnesses["certificate"]["matrix"] == np.eye(7, dtype=int).tolist()
        json.dumps(report.to_json())

    def test_knudual_needs_n5(self):
        """Test the dual basis is refused for n = 4."""
        with pytest.raises(InvalidArgumentError, match="n >= 5"):
            knudsen_dual_basis(4)

    @pytest.mark.parametrize("size", [0, 1, 2, 3])
    def test_knu_rank_n5(self, size):
        """Test the kernel of restriction to A has rank rank_pic - |A|."""
        curves = curve_family(5, "knu")[:size]
        report = verify_knu_rank(5, curves)
        assert report.passed
        assert report.computed["kernel_dim"] == 5 - size

    def test_knu_rank_full_family_n6(self):
        """Test the whole n=6 family leaves a kernel of dimension 9."""
        report = verify_knu_rank(6, curve_family(6, "knu"))
        assert report.passed
        assert report.computed["kernel_dim"] == 9

    @pytest.mark.parametrize("n,seed", [(6, 0), (6, 1), (7, 0), (7, 1)])
    def test_knu_rank_random_pairs(self, n, seed):
        """Test two randomly chosen Knudsen curves cut the rank by exactly two."""
        family = curve_family(n, "knu")
        chosen = np.random.default_rng(seed).choice(len(family), size=2, replace=False)
        report = verify_knu_rank(n, [family[k] for k in chosen])
        assert report.passed
        assert report.computed["kernel_dim"] == rank_pic(n) - 2

    @pytest.mark.parametrize("size,kernel", [(0, 42), (15, 27)])
    def test_knu_rank_extremes_n7(self, size, kernel):
        """Test A empty and A the whole family on M_0,7."""
        report = verify_knu_rank(7, curve_family(7, "knu")[:size])
        assert report.passed
        assert report.computed["kernel_dim"] == kernel

    def test_knu_rank_accepts_strings(self):
        """Test curves may be given in text form."""
        assert verify_knu_rank(5, ["1,2|3|4|5"]).computed["kernel_dim"] == 4

    def test_knu_subset_rejects_outsiders(self):
        """Test curves outside the family are refused."""
        with pytest.raises(InvalidArgumentError, match="Knudsen family"):
            check_knudsen_subset(5, ["1|2|3|4,5"])

    @pytest.mark.parametrize("n,codim", [(5, 2), (6, 4), (7, 8)])
    def test_triple(self, n, codim):
        """Test the image codimension and the single contracted curve."""
        report = verify_triple(n, 1)
        assert report.passed
        assert report.computed["image_codim"] == codim

    def test_triple_curve(self):
        """Test the contracted curve of the triple product."""
        assert triple_curve(6, 2) == FCurve.parse("1,3,4|2|5|6")

    def test_triple_index_range(self):
        """Test i must avoid n-1 and n."""
        with pytest.raises(InvalidArgumentError, match="i must be in"):
            verify_triple(6, 5)

    @pytest.mark.parametrize("n,s,t", [(5, 4, 5), (6, 1, 3), (6, 5, 6), (7, 6, 7), (7, 2, 5)])
    def test_qknu(self, n, s, t):
        """Test sampled kernel classes vanish on every a with a_s = a_t = 1."""
        report = verify_qknu(n, s, t, samples=100, seed=7)
        assert report.passed
        assert report.computed["violations"] == 0

    def test_qknu_reproducible(self):
        """Test the same seed gives the same report."""
        first = verify_qknu(5, 4, 5, samples=5, seed=3)
        second = verify_qknu(5, 4, 5, samples=5, seed=3)
        assert first.computed == second.computed


class TestProducts:
    """Test suite for the fiber-product verifiers."""

    def test_chargen_projection_case(self):
        """Test S = T = [n-1] on M_0,6."""
        report = verify_chargen(6, range(1, 6), range(1, 6))
        assert report.passed
        assert report.computed["image_dim"] == 5
        assert report.computed["span_dim"] == 11

    def test_chargen_n7(self):
        """Test S = {1..5}, T = {3..7} on M_0,7 spans 32 dimensions."""
        report = verify_chargen(7, range(1, 6), range(3, 8))
        assert report.passed
        assert report.computed["image_dim"] == 10
        assert report.computed["span_dim"] == 32

    def test_chargen_two_projections(self):
        """Test S = [6], T = [7] minus {6} on M_0,7."""
        report = verify_chargen(7, range(1, 7), [1, 2, 3, 4, 5, 7])
        assert report.passed
        assert report.computed["span_dim"] == 15

    def test_chargen_keel(self):
        """Test the Keel case T = {1,2,3,n}."""
        assert verify_chargen(6, range(1, 6), [1, 2, 3, 6]).passed

    def test_chargen_invalid(self):
        """Test S and T need at least 3 labels in 1..n."""
        with pytest.raises(InvalidArgumentError, match="at least 3"):
            verify_chargen(6, [1, 2], [1, 2, 3, 4, 5, 6])
        with pytest.raises(InvalidArgumentError, match="labels in 1..6"):
            verify_chargen(6, [1, 2, 7], [1, 2, 3])

    def test_projection_subsets_order(self):
        """Test subsets come by non-increasing size, then lexicographically."""
        assert projection_subsets(5, 5, 4) == [(1, 2, 3), (1, 2), (1, 3), (2, 3)]

    def test_projection_curve(self):
        """Test F_A = F({i}, {min A}, A minus min A, rest)."""
        assert projection_curve(5, 5, (1, 2)) == FCurve.parse("1|2|3,4|5")

    @pytest.mark.parametrize("n,size", [(5, 4), (6, 11), (7, 26)])
    def test_charproj_certificate(self, n, size):
        """Test the table is unitriangular of size 2^(n-2) - (n-2) - 1."""
        report = verify_charproj_certificate(n, n, n - 1)
        assert report.passed
        assert report.computed["size"] == size

    def test_charproj_table_n5(self):
        """Test the n=5 table is the identity apart from one -1 above the diagonal."""
        table = verify_charproj_certificate(5, 5, 4).witnesses["table"]
        assert table == [[1, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]

    def test_charproj_distinct_labels(self):
        """Test i = j is refused."""
        with pytest.raises(InvalidArgumentError, match="must differ"):
            verify_charproj_certificate(5, 3, 3)


class TestIntegrality:
    """Test suite for the integrality verifier."""

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_part2(self, n):
        """Test the basis divisors have power-of-two elementary divisors."""
        report = verify_cdint(n, part=2)
        assert report.passed
        assert report.computed["rank"] == rank_pic(n)

    @pytest.mark.parametrize("n,minimal", [(4, 2), (5, 3)])
    def test_part1_minimal_level(self, n, minimal):
        """Test the first level at which coinvariant divisors generate Pic over Z."""
        report = verify_cdint(n, part=1)
        assert report.passed
        assert report.witnesses["minimal_m"] == minimal

    def test_part1_n6(self):
        """Test M_0,6 saturates at level 3."""
        report = verify_cdint(6, part=1, m_max=6)
        assert report.passed
        assert report.witnesses["minimal_m"] == 3

    def test_part1_not_reached(self):
        """Test a too small m_max reports a failure, not an error."""
        report = verify_cdint(5, part=1, m_max=2)
        assert not report.passed
        assert report.witnesses["minimal_m"] is None

    def test_part1_budget(self):
        """Test the weight enumeration budget is enforced."""
        with pytest.raises(ResourceLimitError, match="budget"):
            verify_cdint(10, part=1, m_max=9)

    def test_invalid_part(self):
        """Test only parts 1 and 2 exist."""
        with pytest.raises(InvalidArgumentError, match="part must be"):
            CDIntVerifier().run(5, part=3)

    def test_is_power_of_two(self):
        """Test the power-of-two predicate."""
        assert [value for value in range(0, 20) if is_power_of_two(value)] == [1, 2, 4, 8, 16]
