"""
Tests for the pairing matrix, divisor classes, curve functionals and the Picard lattice.
"""
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from src.coinv.divisor import psi_functional
from src.combinat.basis import BasisVector, enum_basis, rank_pic
from src.combinat.fcurves import FCurve, curve_family, enum_fcurves
from src.divisors.classes import (
    CurveFunctional,
    DivisorClass,
    boundary_delta,
    boundary_value,
    class_to_functional,
    expand,
    psi_in_basis,
    pullback_class,
    relabel,
    restriction_kernel,
    restriction_rank,
    supported_span,
)
from src.divisors.lattice import PicardLattice
from src.divisors import pairing as pairing_module
from src.divisors.pairing import PairingCache, clear_pairing_memo, dumps_pairing, loads_pairing, pairing_matrix
from src.errors import AmbientMismatchError, CertificateError, InvalidArgumentError, ResourceLimitError
from src.exactlin.rational import rank
from src.exactlin.smith import elementary_divisors


class TestPairingMatrix:
    """Test suite for pairing_matrix."""

    def test_n4(self):
        """Test M_0,4 pairs its one basis divisor with its one curve in 1."""
        assert pairing_matrix(4).matrix.tolist() == [[1]]

    def test_n5_shape_and_rank(self):
        """Test the n=5 matrix is 5 x 10 of full row rank."""
        pairing = pairing_matrix(5)
        assert pairing.shape == (5, 10)
        assert rank(pairing.matrix) == 5

    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_entries_are_parity(self, n):
        """Test every entry is 1 exactly when all four block sums are odd."""
        pairing = pairing_matrix(n)
        for row, vector in zip(pairing.matrix, pairing.basis):
            for value, curve in zip(row, pairing.curves):
                odd = all(sum(vector.bits[label - 1] for label in block) % 2 for block in curve.blocks)
                assert value == int(odd)

    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_full_row_rank(self, n):
        """Test the basis divisors are independent."""
        assert rank(pairing_matrix(n).matrix) == rank_pic(n)

    def test_read_only(self):
        """Test the shared matrix cannot be modified in place."""
        with pytest.raises(ValueError):
            pairing_matrix(5).matrix[0, 0] = 7

    def test_ceiling(self):
        """Test n above the ceiling is refused before any work."""
        with pytest.raises(ResourceLimitError, match="ceiling"):
            pairing_matrix(9, n_ceiling=8)

    def test_threaded_build_matches(self):
        """Test the chunked multi-threaded build gives the same matrix."""
        from src.divisors.pairing import _build
        assert np.array_equal(_build(7, workers=3).matrix, pairing_matrix(7).matrix)

    def test_unknown_curve_column(self):
        """Test columns() refuses curves from another ambient."""
        with pytest.raises(InvalidArgumentError, match="not an F-curve"):
            pairing_matrix(5).columns([FCurve.parse("1|2|3|4")])


class TestPairingCache:
    """Test suite for the pairing serialization and on-disk cache."""

    def test_dumps_header(self):
        """Test the versioned header and row/column labels."""
        lines = dumps_pairing(pairing_matrix(5)).splitlines()
        assert lines[0] == "# mzn-pairing v1 n=5"
        assert lines[1].startswith("basis,")
        assert lines[2].startswith("01111,")
        assert len(lines) == 2 + 5

    def test_loads_restores_matrix(self):
        """Test the text form reproduces the matrix."""
        pairing = pairing_matrix(6)
        restored = loads_pairing(dumps_pairing(pairing), 6)
        assert np.array_equal(restored.matrix, pairing.matrix)
        assert restored.curves == pairing.curves

    def test_loads_wrong_n(self):
        """Test a header for another n is rejected."""
        with pytest.raises(InvalidArgumentError, match="header"):
            loads_pairing(dumps_pairing(pairing_matrix(5)), 6)

    def test_store_and_load(self, tmp_path):
        """Test the cache writes one file per n and reads it back."""
        cache = PairingCache(tmp_path)
        path = cache.store(pairing_matrix(5))
        assert path == tmp_path / "pairing-v1-n5.csv"
        assert np.array_equal(cache.load(5).matrix, pairing_matrix(5).matrix)
        assert list(tmp_path.glob("*.tmp")) == []

    def test_missing_file(self, tmp_path):
        """Test a cache miss returns None."""
        assert PairingCache(tmp_path).load(6) is None

    def test_corrupt_file_ignored(self, tmp_path):
        """Test a damaged cache file is treated as a miss."""
        cache = PairingCache(tmp_path)
        cache.path(5).write_text("# mzn-pairing v1 n=5\nbasis,x\n01111,2\n")
        assert cache.load(5) is None

    def test_pairing_matrix_fills_cache(self, tmp_path):
        """Test pairing_matrix writes through to a fresh cache directory."""
        cache = PairingCache(tmp_path)
        pairing_matrix(5, cache=cache)
        assert cache.path(5).exists()

    def test_leading_zeros_survive(self, tmp_path):
        """Test basis labels such as 01111 are read back as text."""
        cache = PairingCache(tmp_path)
        cache.store(pairing_matrix(6))
        loaded = cache.load(6)
        assert loaded is not None
        assert loaded.basis == pairing_matrix(6).basis
        assert loaded.basis[0].encode().startswith("0")

    def test_cache_hit_skips_build(self, tmp_path, monkeypatch):
        """Test a stored matrix is served from disk without rebuilding."""
        cache = PairingCache(tmp_path)
        cache.store(pairing_matrix(5))
        clear_pairing_memo()

        def fail(n, workers):
            raise AssertionError(f"rebuilt n={n}")

        monkeypatch.setattr(pairing_module, "_build", fail)
        try:
            assert np.array_equal(pairing_matrix(5, cache=cache).matrix, cache.load(5).matrix)
        finally:
            clear_pairing_memo()

    def test_build_locks_per_n(self):
        """Test each n has its own build lock."""
        assert pairing_module._build_lock(5) is pairing_module._build_lock(5)
        assert pairing_module._build_lock(5) is not pairing_module._build_lock(6)


class TestDivisorClass:
    """Test suite for DivisorClass."""

    def test_coordinate_count(self):
        """Test the coordinate vector must have rank_pic(n) entries."""
        with pytest.raises(InvalidArgumentError, match="needs 5 coordinates"):
            DivisorClass(5, (1, 2, 3))

    def test_arithmetic(self):
        """Test addition and scaling are coordinatewise."""
        a = DivisorClass.basis_class(BasisVector.parse("01111"))
        b = DivisorClass.basis_class(BasisVector.parse("11110"))
        total = (a + b).scaled(Fraction(1, 2))
        assert total.coords == (Fraction(1, 2), 0, 0, 0, Fraction(1, 2))
        assert (a + a.scaled(-1)).is_zero()

    def test_add_mismatch(self):
        """Test classes on different ambients cannot be added."""
        with pytest.raises(AmbientMismatchError):
            DivisorClass.zero(5) + DivisorClass.zero(6)

    def test_json_round_trip(self):
        """Test the JSON form keeps exact rationals."""
        x = psi_in_basis(6, 2)
        payload = x.to_json()
        assert payload["basis"] == "sl2-level1"
        assert DivisorClass.from_json(payload) == x

    def test_json_rejects_foreign_basis(self):
        """Test classes in another basis are refused."""
        payload = DivisorClass.zero(5).to_json()
        payload["basis"] = "boundary"
        with pytest.raises(InvalidArgumentError, match="Unsupported basis"):
            DivisorClass.from_json(payload)


class TestCurveFunctional:
    """Test suite for CurveFunctional."""

    def test_from_mapping_defaults_to_zero(self):
        """Test curves left out of the mapping take the value 0."""
        functional = CurveFunctional.from_mapping(5, {FCurve.parse("1|2,3|4|5"): 3})
        assert functional.value(FCurve.parse("1|2,3|4|5")) == 3
        assert sum(functional.values) == 3

    def test_from_mapping_rejects_foreign_curve(self):
        """Test curves of another ambient are refused."""
        with pytest.raises(AmbientMismatchError):
            CurveFunctional.from_mapping(5, {FCurve.parse("1|2|3|4"): 1})

    def test_from_json(self):
        """Test the JSON functional format with rational values."""
        payload = {"n": 5, "values": [{"curve": "1|2,3|4|5", "value": "1/2"}]}
        functional = CurveFunctional.from_json(payload)
        assert functional.value(FCurve.parse("1|2,3|4|5")) == Fraction(1, 2)

    def test_wrong_length(self):
        """Test a value vector of the wrong length raises."""
        with pytest.raises(InvalidArgumentError, match="needs 10 values"):
            CurveFunctional(5, (0,) * 9)


class TestExpand:
    """Test suite for expand and class_to_functional."""

    def test_psi_n5(self):
        """Test psi_5 on M_0,5 has coordinates (1/2, 1/2, 1/2, 1/2, -1/2)."""
        functional = CurveFunctional.from_mapping(5, psi_functional(5, 5))
        half = Fraction(1, 2)
        assert expand(functional).coords == (half, half, half, half, -half)

    def test_psi_n6_coefficients(self):
        """Test every psi coordinate on M_0,6 is +-1/4."""
        x = expand(CurveFunctional.from_mapping(6, psi_functional(6, 3)))
        assert set(x.coords) == {Fraction(1, 4), Fraction(-1, 4)}

    @pytest.mark.parametrize("n", [5, 6, 7, 8])
    def test_psi_closed_form(self, n):
        """Test the closed form agrees with expanding the psi functional for every i."""
        for i in range(1, n + 1):
            assert expand(CurveFunctional.from_mapping(n, psi_functional(n, i))) == psi_in_basis(n, i)

    def test_single_curve_not_realizable(self):
        """Test the indicator of one F-curve of M_0,5 is not the degree of any class."""
        functional = CurveFunctional.from_mapping(5, {enum_fcurves(5)[0]: 1})
        assert expand(functional) is None

    @pytest.mark.parametrize("n", [5, 6])
    def test_basis_round_trip(self, n):
        """Test expanding the functional of each basis divisor returns that divisor."""
        for vector in enum_basis(n):
            x = DivisorClass.basis_class(vector)
            assert expand(class_to_functional(x)) == x

    def test_pairing_mismatch(self):
        """Test a pairing matrix for another n is refused."""
        with pytest.raises(AmbientMismatchError, match="Pairing matrix is for n=6"):
            expand(CurveFunctional(5, (0,) * 10), pairing_matrix(6))


class TestBoundary:
    """Test suite for boundary_value and boundary_delta."""

    @pytest.mark.parametrize("curve,S,expected", [
        ("1|2|3|4", [1, 2], 1),
        ("1|2,3|4|5", [1, 4], 1),
        ("1|2,3|4|5", [2, 3], -1),
        ("1|2,3|4|5", [1, 2, 3, 4], -1),
        ("1|2,3|4|5", [1, 2], 0),
        ("1|2,3|4|5", [4, 5], 1),
    ])
    def test_values(self, curve, S, expected):
        """Test the two-block, one-block and split cases."""
        assert boundary_value(FCurve.parse(curve), frozenset(S)) == expected

    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_realizable(self, n):
        """Test every boundary divisor expands and pairs back to itself."""
        # S or its complement contains 1, so these subsets reach every boundary divisor
        subsets = [
            [1, *rest]
            for size in range(1, n - 2)
            for rest in combinations(range(2, n + 1), size)
        ]
        for S in subsets:
            delta = boundary_delta(n, S)
            assert delta.realizable
            assert class_to_functional(expand(delta)).values == delta.values

    def test_complement_symmetry(self):
        """Test delta_S and delta_{S^c} are the same functional."""
        assert boundary_delta(6, [1, 2]).values == boundary_delta(6, [3, 4, 5, 6]).values

    def test_small_subsets(self):
        """Test |S| < 2 or |S^c| < 2 is refused."""
        with pytest.raises(InvalidArgumentError, match="Boundary subsets"):
            boundary_delta(5, [1])
        with pytest.raises(InvalidArgumentError, match="Boundary subsets"):
            boundary_delta(5, [1, 2, 3, 4])

    def test_unrealizable_raises(self, monkeypatch):
        """Test a boundary functional that fails to expand raises a certificate error."""
        import src.divisors.classes as classes
        monkeypatch.setattr(classes, "expand", lambda functional, pairing=None: None)
        with pytest.raises(CertificateError, match="not realizable"):
            boundary_delta(5, [1, 2])


class TestClassMaps:
    """Test suite for pullback_class and relabel."""

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_pullback_projection_compatibility(self, n):
        """Test pi^*x . F = x . pi_*F, which is 0 when F is contracted."""
        for vector in enum_basis(n):
            x = DivisorClass.basis_class(vector)
            base = class_to_functional(x)
            lifted = class_to_functional(pullback_class(x, n + 1))
            for curve, value in zip(enum_fcurves(n + 1), lifted.values):
                image = curve.forget(n + 1)
                assert value == (0 if image is None else base.value(image))

    def test_pullback_psi_correction(self):
        """Test psi_i pulls back to psi_i minus the diagonal delta_{i,n+1}."""
        lifted = class_to_functional(pullback_class(psi_in_basis(5, 1), 6))
        psi = CurveFunctional.from_mapping(6, psi_functional(6, 1))
        delta = boundary_delta(6, [1, 6])
        assert lifted.values == tuple(a - b for a, b in zip(psi.values, delta.values))

    def test_pullback_position(self):
        """Test the insert position is range-checked."""
        with pytest.raises(InvalidArgumentError, match="Insert position"):
            pullback_class(DivisorClass.zero(5), 7)

    def test_relabel_equivariance(self):
        """Test (sigma x) . (sigma F) = x . F."""
        sigma = {1: 3, 2: 1, 3: 2, 4: 6, 5: 4, 6: 5}
        x = psi_in_basis(6, 2) + DivisorClass.basis_class(enum_basis(6)[3])
        base = class_to_functional(x)
        moved = class_to_functional(relabel(x, sigma))
        for curve in enum_fcurves(6):
            assert moved.value(curve.relabel(sigma)) == base.value(curve)

    def test_relabel_psi(self):
        """Test relabeling psi_i gives psi_sigma(i)."""
        sigma = {1: 2, 2: 3, 3: 4, 4: 5, 5: 1}
        assert relabel(psi_in_basis(5, 1), sigma) == psi_in_basis(5, 2)


class TestRestriction:
    """Test suite for restriction kernels and ranks."""

    def test_all_curves(self):
        """Test the full curve set detects every class."""
        pairing = pairing_matrix(6)
        assert restriction_kernel(pairing, pairing.curves) == []
        assert restriction_rank(pairing, pairing.curves) == rank_pic(6)

    def test_empty_set(self):
        """Test the empty curve set restricts nothing."""
        pairing = pairing_matrix(5)
        assert len(restriction_kernel(pairing, [])) == 5
        assert restriction_rank(pairing, []) == 0

    def test_kernel_pairs_to_zero(self):
        """Test kernel vectors pair to zero with the chosen curves."""
        pairing = pairing_matrix(6)
        curves = curve_family(6, "kap")
        block = pairing.columns(curves).astype(object)
        for vector in restriction_kernel(pairing, curves):
            assert not any(np.array(vector, dtype=object).dot(block))

    def test_rank_plus_kernel(self):
        """Test rank and kernel dimension add up to rank_pic."""
        pairing = pairing_matrix(6)
        curves = curve_family(6, "knu")
        assert restriction_rank(pairing, curves) + len(restriction_kernel(pairing, curves)) == rank_pic(6)

    def test_supported_span(self):
        """Test selecting basis vectors supported on [n-1]."""
        pairing = pairing_matrix(6)
        assert len(supported_span(pairing, [range(1, 6)])) == rank_pic(5)


class TestPicardLattice:
    """Test suite for PicardLattice."""

    @pytest.mark.parametrize("n", [5, 6])
    def test_divisors_match_pairing(self, n):
        """Test the column lattice has the elementary divisors of the pairing matrix."""
        lattice = PicardLattice(pairing_matrix(n))
        assert lattice.rank == rank_pic(n)
        assert lattice.elementary_divisors() == elementary_divisors(pairing_matrix(n).matrix)

    def test_restriction_matrix_shape(self):
        """Test one row per curve and one column per lattice generator."""
        lattice = PicardLattice(pairing_matrix(5))
        curves = curve_family(5, "knu")
        assert lattice.restriction_matrix(curves).shape == (3, 5)

    def test_surjectivity(self):
        """Test the Knudsen curves are integrally independent but all ten curves are not."""
        pairing = pairing_matrix(5)
        lattice = PicardLattice(pairing)
        assert lattice.restriction_surjective(curve_family(5, "knu"))
        assert not lattice.restriction_surjective(pairing.curves)
        assert lattice.restriction_surjective([])
