"""Tests for projective.py — sheaf cohomology and regularity."""

from unittest import mock

import pytest

from errors import PreconditionError, ZeroSheafError
from fields import QQ
from groebner import Submodule
from homology import PresentedModule, betti_table, ext_module, graded_dims
from polynomials import NEG_INF, MonomialOrder, PolyRing
from projective import (
    DualityData,
    euler_characteristic,
    is_m_regular,
    multiplication_rank,
    regularity,
    regularity_properties_check,
    saturated_module,
    serre_duality_defect,
    sheaf_cohomology_dim,
    sheaf_cohomology_table,
    torsion_free_part,
)


def _ring(*names):
    return PolyRing(QQ, names, MonomialOrder.grevlex())


def _line():
    return _ring("x0", "x1")


def _twisted_cubic():
    A = _ring("x0", "x1", "x2", "x3")
    x0, x1, x2, x3 = A.gens()
    C = Submodule.ideal(A, [x0 * x2 - x1 ** 2, x0 * x3 - x1 * x2, x1 * x3 - x2 ** 2])
    return PresentedModule.quotient(C)


class TestSheafCohomology:
    """Test h^p(M~(l)) through local cohomology."""

    def test_structure_sheaf_of_line(self):
        A = _line()
        table = sheaf_cohomology_table(PresentedModule.free(A), (-3, 1))
        assert [table[0, l] for l in range(-3, 2)] == [0, 0, 0, 1, 2]
        assert [table[1, l] for l in range(-3, 2)] == [2, 1, 0, 0, 0]

    def test_euler_characteristic_is_linear(self):
        A = _line()
        table = sheaf_cohomology_table(PresentedModule.free(A), (-3, 1))
        assert [table.euler_characteristic(l) for l in range(-3, 2)] == [-2, -1, 0, 1, 2]

    def test_out_of_range_index_reads_zero(self):
        A = _line()
        table = sheaf_cohomology_table(PresentedModule.free(A), (0, 0))
        assert table[2, 0] == 0

    def test_single_entry(self):
        A = _line()
        assert sheaf_cohomology_dim(PresentedModule.free(A), 1, -3) == 2
        assert sheaf_cohomology_dim(PresentedModule.free(A), 0, 1) == 2

    def test_index_outside_range(self):
        A = _line()
        with pytest.raises(PreconditionError):
            sheaf_cohomology_dim(PresentedModule.free(A), 2, 0)

    def test_euler_of_plane(self):
        A = _ring("x", "y", "z")
        assert euler_characteristic(PresentedModule.free(A), 1) == 3

    def test_table_json(self):
        A = _line()
        data = sheaf_cohomology_table(PresentedModule.free(A), (-2, 0)).to_json()
        assert data["n"] == 1
        assert data["rows"] == [[0, 0, 0, 1], [1, 1, 0, 0]]
        assert data["euler"] == [-1, 0, 1]


class TestSerreDuality:
    """Test the duality defect."""

    def test_dualizing_twist(self):
        assert DualityData(2).canonical_twist == -3

    def test_line_has_no_defect(self):
        A = _line()
        assert serre_duality_defect(PresentedModule.free(A), 1, -3) == 0

    def test_cubic_has_no_defect(self):
        assert serre_duality_defect(_twisted_cubic(), 1, -1) == 0

    def test_index_zero_rejected(self):
        A = _line()
        with pytest.raises(PreconditionError):
            serre_duality_defect(PresentedModule.free(A), 0, 0)


class TestRegularity:
    """Test Castelnuovo-Mumford regularity."""

    def test_twisted_cubic_is_one_regular(self):
        M = _twisted_cubic()
        assert is_m_regular(M, 1)
        assert not is_m_regular(M, 0)
        assert regularity(M) == 1

    @pytest.mark.parametrize("d", range(6))
    def test_twisted_line_bundle(self, d):
        A = _line()
        assert regularity(PresentedModule.free(A, (d,))) == d

    def test_point_sheaf(self):
        A = _line()
        x0, x1 = A.gens()
        assert regularity(PresentedModule.quotient(Submodule.ideal(A, [x1]))) is NEG_INF

    def test_zero_sheaf(self):
        A = _line()
        k = PresentedModule.quotient(Submodule.ideal(A, A.gens()))
        with pytest.raises(ZeroSheafError):
            regularity(k)


class TestSaturation:
    """Test the module of twisted global sections."""

    def test_torsion_removed(self):
        A = _ring("x", "y")
        x, y = A.gens()
        M = torsion_free_part(PresentedModule.quotient(Submodule.ideal(A, [x ** 2, x * y])))
        assert graded_dims(M, (0, 3)).as_dict() == {0: 1, 1: 1, 2: 1, 3: 1}

    def test_maximal_ideal_saturates_to_ring(self):
        A = _line()
        m = PresentedModule.ideal_module(Submodule.ideal(A, A.gens()))
        S = saturated_module(m, (0, 2))
        assert graded_dims(S, (0, 2)).as_dict() == {0: 1, 1: 2, 2: 3}


class TestRegularityProperties:
    """Test the consequences of m-regularity."""

    def test_plane_is_zero_regular(self):
        A = _ring("x", "y", "z")
        report = regularity_properties_check(PresentedModule.free(A), 0, 1)
        assert report.ok
        assert [row.l for row in report.rows] == [0, 1]
        assert report.to_json()["ok"] is True

    def test_requires_regularity(self):
        A = _ring("x", "y", "z")
        with pytest.raises(PreconditionError):
            regularity_properties_check(PresentedModule.free(A), -1, 1)


class TestEulerMatchesHilbertPolynomial:
    """chi(M~(l)) equals the Hilbert polynomial at every twist."""

    @pytest.mark.parametrize("l", range(-2, 3))
    def test_plane_conic(self, l):
        A = _ring("x", "y", "z")
        x, y, z = A.gens()
        M = PresentedModule.quotient(Submodule.ideal(A, [x * z - y ** 2]))
        assert euler_characteristic(M, l) == 2 * l + 1

    @pytest.mark.parametrize("l", range(-3, 2))
    def test_embedded_point_in_line(self, l):
        A = _line()
        x0, x1 = A.gens()
        M = PresentedModule.quotient(Submodule.ideal(A, [x0 ** 2, x0 * x1]))
        assert euler_characteristic(M, l) == 1


class TestSerreDualitySuite:
    """The duality defect vanishes on the plane."""

    @pytest.mark.parametrize("p, l", [(1, -2), (1, 0), (2, -3), (2, -4), (2, 1)])
    def test_plane(self, p, l):
        A = _ring("x", "y", "z")
        assert serre_duality_defect(PresentedModule.free(A), p, l) == 0


def _quotient(A, gens):
    return PresentedModule.quotient(Submodule.ideal(A, gens(*A.gens())))


def _plane_conic():
    return _quotient(_ring("x", "y", "z"), lambda x, y, z: [x * z - y ** 2])


def _plane_cubic():
    return _quotient(_ring("x", "y", "z"), lambda x, y, z: [x ** 3 + y ** 3 + z ** 3])


DUALITY_CASES = {
    "line-O": (lambda: PresentedModule.free(_line()), (-8, 8)),
    "line-O(2)": (lambda: PresentedModule.free(_line(), (-2,)), (-8, 8)),
    "line-O+O(1)": (lambda: PresentedModule.free(_line(), (0, -1)), (-8, 8)),
    "line-two-points": (lambda: _quotient(_line(), lambda a, b: [a * b]), (-8, 8)),
    "line-double-point": (lambda: _quotient(_line(), lambda a, b: [a ** 2]), (-8, 8)),
    "plane-O": (lambda: PresentedModule.free(_ring("x", "y", "z")), (-5, 3)),
    "plane-conic": (_plane_conic, (-5, 3)),
    "space-O": (lambda: PresentedModule.free(_ring("x0", "x1", "x2", "x3")), (-4, 2)),
}


class TestSerreDualityTables:
    """h^p(M~(l)) equals dim Ext^{n-p}(M, A(-n-1))_{-l} across a window."""

    @pytest.mark.parametrize("name", list(DUALITY_CASES))
    def test_table_matches_ext(self, name):
        build, (lo, hi) = DUALITY_CASES[name]
        M = build()
        table = sheaf_cohomology_table(M, (lo, hi), power_cap=16)
        omega = DualityData(table.n).dualizing_module(M.ring)
        for p in range(1, table.n + 1):
            ext = graded_dims(ext_module(table.n - p, M, omega), (-hi, -lo))
            assert [table[p, l] for l in range(lo, hi + 1)] == [ext[-l] for l in range(lo, hi + 1)], p


class TestRegularityPropertiesSuite:
    """Every row holds for saturated modules at their regularity."""

    CASES = {
        "line": (lambda: PresentedModule.free(_line()), 0),
        "plane": (lambda: PresentedModule.free(_ring("x", "y", "z")), 0),
        "line-O+O(-1)": (lambda: PresentedModule.free(_line(), (0, 1)), 1),
        "conic": (_plane_conic, 1),
        "cubic": (_plane_cubic, 2),
    }

    @pytest.mark.parametrize("name", list(CASES))
    def test_all_rows_hold(self, name):
        build, m = self.CASES[name]
        report = regularity_properties_check(build(), m, 5)
        assert [row.l for row in report.rows] == list(range(m, m + 6))
        assert report.ok

    def test_generation_checks_higher_degrees(self):
        A = _ring("x", "y", "z")

        def fails_in_degree_one(S, l):
            return (0, 1) if l == 1 else multiplication_rank(S, l)

        with mock.patch("projective.multiplication_rank", side_effect=fails_in_degree_one):
            report = regularity_properties_check(PresentedModule.free(A), 0, 1)
        first, second = report.rows
        assert first.multiplication_surjective
        assert not first.globally_generated
        assert not second.multiplication_surjective


class TestRegularityMatchesBetti:
    """For saturated modules of depth >= 2 the sheaf and Betti regularities agree."""

    CASES = {
        "line": (lambda: PresentedModule.free(_line()), 0),
        "line-O+O(-1)": (lambda: PresentedModule.free(_line(), (0, 1)), 1),
        "conic": (_plane_conic, 1),
        "twisted-cubic": (_twisted_cubic, 1),
        "plane-cubic": (_plane_cubic, 2),
    }

    @pytest.mark.parametrize("name", list(CASES))
    def test_equal(self, name):
        build, expected = self.CASES[name]
        M = build()
        assert regularity(M) == expected
        assert betti_table(M).regularity() == expected
