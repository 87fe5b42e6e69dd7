"""Tests for homology.py — presentations, resolutions, Ext, Tor and Hilbert functions."""

import pytest

from errors import GradingError, NonHomogeneousError
from fields import QQ
from groebner import FreeElement, Submodule
from homology import (
    NumericalPolynomial,
    PresentedModule,
    betti_table,
    ext_module,
    graded_dims,
    hilbert_polynomial,
    hilbert_series,
    is_zero,
    krull_dimension,
    minimal_free_resolution,
    minimal_presentation,
    projective_dimension,
    tor_module,
)
from polynomials import NEG_INF, MonomialOrder, PolyRing


def _ring(*names, weights=()):
    return PolyRing(QQ, names, MonomialOrder.grevlex(), weights)


def _twisted_cubic():
    A = _ring("x0", "x1", "x2", "x3")
    x0, x1, x2, x3 = A.gens()
    C = Submodule.ideal(A, [x0 * x2 - x1 ** 2, x0 * x3 - x1 * x2, x1 * x3 - x2 ** 2])
    return A, PresentedModule.quotient(C)


def _residue_field(A):
    return PresentedModule.quotient(Submodule.ideal(A, A.gens()))


class TestPresentations:
    """Test module construction and minimal presentations."""

    def test_quotient_has_one_generator(self):
        _, M = _twisted_cubic()
        assert M.twists == (0,)
        assert len(M.relations) == 3

    def test_unit_relation_pruned(self):
        A = _ring("x", "y")
        x, y = A.gens()
        # e0 = -x e1 makes the first generator redundant
        rel = FreeElement.from_components(A, [A.one(), x])
        M = minimal_presentation(PresentedModule.cokernel(A, [1, 0], [rel]))
        assert M.twists == (0,)
        assert M.relations == ()

    def test_zero_module(self):
        A = _ring("x")
        assert is_zero(PresentedModule.quotient(Submodule.ideal(A, [A.one()])))
        assert is_zero(PresentedModule.zero(A))
        assert not is_zero(PresentedModule.free(A))

    def test_non_homogeneous_relation(self):
        A = _ring("x", "y")
        x, y = A.gens()
        with pytest.raises(NonHomogeneousError):
            PresentedModule.quotient(Submodule.ideal(A, [x ** 2 + y]))

    def test_ideal_module(self):
        A = _ring("x", "y")
        x, y = A.gens()
        M = PresentedModule.ideal_module(Submodule.ideal(A, [x, y]))
        assert M.twists == (1, 1)
        assert graded_dims(M, (0, 2)).as_dict() == {1: 2, 2: 3}

    def test_twist_shifts_degrees(self):
        A = _ring("x")
        M = PresentedModule.free(A).twist(2)
        assert graded_dims(M, (-3, 0)).as_dict() == {-2: 1, -1: 1, 0: 1}


class TestResolutions:
    """Test minimal free resolutions and Betti tables."""

    def test_twisted_cubic_betti(self):
        _, M = _twisted_cubic()
        table = betti_table(M)
        assert table.as_dict() == {(0, 0): 1, (1, 2): 3, (2, 3): 2}
        assert table.regularity() == 1
        assert table.length == 2

    def test_resolution_is_minimal(self):
        _, M = _twisted_cubic()
        res = minimal_free_resolution(M)
        assert res.is_minimal()
        assert [F.rank for F in res.modules] == [1, 3, 2]

    def test_koszul_resolution(self):
        A = _ring("x", "y", "z")
        table = betti_table(_residue_field(A))
        assert table.ranks() == [1, 3, 3, 1]
        assert table[(3, 3)] == 1

    def test_truncation(self):
        A = _ring("x", "y", "z")
        assert minimal_free_resolution(_residue_field(A), 1).length == 1

    def test_projective_dimension(self):
        _, M = _twisted_cubic()
        assert projective_dimension(M) == 2

    def test_free_module_pd(self):
        A = _ring("x", "y")
        assert projective_dimension(PresentedModule.free(A, (0, 3))) == 0

    def test_zero_module_pd(self):
        A = _ring("x")
        assert projective_dimension(PresentedModule.zero(A)) is NEG_INF

    def test_betti_format(self):
        A = _ring("x", "y")
        text = betti_table(_residue_field(A)).format()
        assert "total:" in text
        assert text.splitlines()[1].split()[1:] == ["1", "2", "1"]


class TestExtTor:
    """Test Ext and Tor."""

    def test_ext_top_of_residue_field(self):
        A = _ring("x", "y")
        E = ext_module(2, _residue_field(A), PresentedModule.free(A))
        assert graded_dims(E, (-3, 0)).as_dict() == {-2: 1}

    def test_ext_below_depth_vanishes(self):
        A = _ring("x", "y")
        k = _residue_field(A)
        assert is_zero(ext_module(0, k, PresentedModule.free(A)))
        assert is_zero(ext_module(1, k, PresentedModule.free(A)))

    def test_ext_beyond_resolution(self):
        A = _ring("x", "y")
        assert is_zero(ext_module(5, _residue_field(A), PresentedModule.free(A)))

    def test_tor_of_residue_field(self):
        A = _ring("x", "y")
        k = _residue_field(A)
        T = tor_module(1, k, k)
        assert graded_dims(T, (0, 2)).as_dict() == {1: 2}

    def test_tor_zero_is_tensor(self):
        A = _ring("x", "y")
        x, y = A.gens()
        Mx = PresentedModule.quotient(Submodule.ideal(A, [x]))
        My = PresentedModule.quotient(Submodule.ideal(A, [y]))
        T0 = tor_module(0, Mx, My)
        assert graded_dims(T0, (0, 2)).as_dict() == {0: 1}
        assert is_zero(tor_module(1, Mx, My))

    def test_negative_index(self):
        A = _ring("x")
        with pytest.raises(ValueError):
            ext_module(-1, PresentedModule.free(A), PresentedModule.free(A))


class TestHilbertFunctions:
    """Test graded dimensions, Hilbert series and polynomials."""

    def test_graded_dims(self):
        _, M = _twisted_cubic()
        assert graded_dims(M, (0, 3)).as_dict() == {0: 1, 1: 4, 2: 7, 3: 10}

    def test_window_lookup(self):
        _, M = _twisted_cubic()
        dims = graded_dims(M, (0, 1))
        assert dims[1] == 4
        with pytest.raises(KeyError):
            dims[2]

    def test_hilbert_series(self):
        _, M = _twisted_cubic()
        series = hilbert_series(M)
        assert series.reduced_numerator == {0: 1, 1: 2}
        assert series.dimension == 2

    def test_hilbert_series_matches_dims(self):
        _, M = _twisted_cubic()
        assert hilbert_series(M).expand((0, 5)) == graded_dims(M, (0, 5))

    def test_hilbert_polynomial(self):
        _, M = _twisted_cubic()
        phi = hilbert_polynomial(M)
        assert phi.to_json() == [1, 3]
        assert phi(10) == 31
        assert phi.format() == "3*t + 1"

    def test_hilbert_polynomial_step(self):
        _, M = _twisted_cubic()
        assert hilbert_polynomial(M, 2)(1) == 7

    def test_artinian_polynomial_is_zero(self):
        A = _ring("x", "y")
        assert hilbert_polynomial(_residue_field(A)).is_zero()

    def test_krull_dimension(self):
        _, M = _twisted_cubic()
        assert krull_dimension(M) == 2
        A = _ring("x")
        assert krull_dimension(PresentedModule.zero(A)) is NEG_INF

    def test_weighted_series(self):
        A = _ring("x", "y", weights=(1, 2))
        series = hilbert_series(PresentedModule.free(A))
        assert series.expand((0, 4)).as_dict() == {0: 1, 1: 1, 2: 2, 3: 2, 4: 3}

    def test_weighted_polynomial_rejected(self):
        A = _ring("x", "y", weights=(1, 2))
        with pytest.raises(GradingError):
            hilbert_polynomial(PresentedModule.free(A))


class TestNumericalPolynomial:
    """Test binomial-basis polynomials."""

    def test_from_function(self):
        p = NumericalPolynomial.from_function(lambda t: t * t, 2)
        assert [p(t) for t in range(-2, 4)] == [4, 1, 0, 1, 4, 9]

    def test_binomial_shift(self):
        p = NumericalPolynomial.binomial_shift(2, 2)
        assert p(0) == 1 and p(1) == 3 and p(-1) == 0

    def test_arithmetic(self):
        a = NumericalPolynomial((1, 2))
        b = NumericalPolynomial((1, 2))
        assert (a - b).is_zero()
        assert (a + b).coeffs == (2, 4)


def _module_suite():
    A = _ring("x", "y", "z")
    x, y, z = A.gens()
    quotients = [
        [x],
        [x, y],
        [x * y],
        [x ** 2, x * y],
        [x * y, y * z, x * z],
        [x ** 2, y ** 2, z ** 2],
        [x * z - y ** 2],
        [x ** 2, y ** 3],
        [x * y * z],
        [x, y ** 2, z ** 3],
    ]
    modules = [PresentedModule.quotient(Submodule.ideal(A, q)) for q in quotients]
    modules.append(PresentedModule.free(A, (0, 1)))
    modules.append(PresentedModule.ideal_module(Submodule.ideal(A, [x, y])))
    modules.append(_residue_field(A))
    return A, modules


class TestProjectiveDimensionCriterion:
    """pd(M) is the last p with Ext^p(M, k) != 0."""

    @pytest.mark.parametrize("index", range(13))
    def test_ext_against_residue_field(self, index):
        A, modules = _module_suite()
        M = modules[index]
        k = _residue_field(A)
        pd = projective_dimension(M)
        assert not is_zero(ext_module(pd, M, k))
        assert is_zero(ext_module(pd + 1, M, k))
