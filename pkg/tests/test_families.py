"""Tests for families.py — flatness and fiber invariants over the parameter line."""

import random

import pytest

from errors import GradingError, PreconditionError
from fields import QQ
from groebner import Submodule
from homology import NumericalPolynomial, PresentedModule, hilbert_polynomial, monomials_of_degree
from families import (
    FamilyModule,
    fiber_cohomology,
    fiber_hilbert_profile,
    flat_over_line,
    hypersurface_hilbert_polynomial,
)
from polynomials import MonomialOrder, PolyRing


def _family_ring(*names):
    return FamilyModule.family_ring(PolyRing(QQ, names, MonomialOrder.grevlex()))


def _conics():
    """xz - t*y^2: a smooth conic degenerating to a line pair."""
    R = _family_ring("x", "y", "z")
    t, x, y, z = R.gens()
    return FamilyModule.from_ideal(R, [x * z - t * y ** 2])


def _collapsing_line():
    """t*x: the whole plane at t = 0, a point elsewhere."""
    R = _family_ring("x", "y")
    t, x, y = R.gens()
    return FamilyModule.from_ideal(R, [t * x])


class TestFamilyModule:
    """Test family rings and fibers."""

    def test_parameter_in_front(self):
        R = _family_ring("x", "y")
        assert R.variables == ("t", "x", "y")
        assert R.weights == (0, 1, 1)

    def test_fiber_ring_drops_parameter(self):
        assert _collapsing_line().fiber_ring.variables == ("x", "y")

    def test_parameter_needs_weight_zero(self):
        R = PolyRing(QQ, ("t", "x"), MonomialOrder.grevlex())
        with pytest.raises(GradingError):
            FamilyModule(PresentedModule.free(R))

    def test_fiber_specializes_parameter(self):
        F = _collapsing_line()
        assert F.fiber(0).relations == ()
        assert len(F.fiber(2).relations) == 1


class TestFlatness:
    """Test k[t]-torsion detection."""

    def test_conic_family_is_flat(self):
        report = flat_over_line(_conics())
        assert report.flat
        assert report.witness is None

    def test_collapsing_family_has_torsion(self):
        F = _collapsing_line()
        t = F.ring.gen("t")
        report = flat_over_line(F)
        assert not report.flat
        assert report.torsion_polynomial == t
        assert report.to_json(QQ)["torsion_polynomial"] == "t"

    def test_flat_away_from_special_point(self):
        F = _collapsing_line()
        assert flat_over_line(F, at=1).flat
        report = flat_over_line(F, at=0)
        assert not report.flat
        assert report.to_json(QQ)["at"] == 0

    def test_free_family_is_flat(self):
        R = _family_ring("x", "y")
        assert flat_over_line(FamilyModule(PresentedModule.free(R))).flat


class TestFiberProfile:
    """Test sampled Hilbert polynomials."""

    def test_flat_family_is_constant(self):
        profile = fiber_hilbert_profile(_conics(), [0, 1, 2])
        assert profile.constant
        assert profile.generic == NumericalPolynomial((1, 2))
        assert len(profile.strata) == 1

    def test_jump_at_special_fiber(self):
        profile = fiber_hilbert_profile(_collapsing_line(), [0, 1, 2])
        assert not profile.constant
        assert dict(profile.samples)[0] == NumericalPolynomial((1, 1))
        assert dict(profile.samples)[1] == NumericalPolynomial((1,))
        assert profile.generic == NumericalPolynomial((1,))
        assert len(profile.strata) == 2

    def test_euler_characteristics(self):
        profile = fiber_hilbert_profile(_conics(), [0, 3])
        assert profile.euler() == [(0, 1), (3, 1)]

    def test_parallel_matches_serial(self):
        F = _collapsing_line()
        serial = fiber_hilbert_profile(F, [0, 1, 2, 3], workers=1)
        parallel = fiber_hilbert_profile(F, [0, 1, 2, 3], workers=3)
        assert serial.samples == parallel.samples

    def test_duplicate_samples_rejected(self):
        with pytest.raises(PreconditionError):
            fiber_hilbert_profile(_conics(), [1, 1])

    def test_to_json(self):
        data = fiber_hilbert_profile(_collapsing_line(), [0, 1]).to_json(QQ)
        assert data["constant"] is False
        assert data["generic"] == [1]
        assert data["samples"][0] == [0, [1, 1], 1]


class TestFiberCohomology:
    """Test semicontinuity of fiber cohomology."""

    def test_sections_jump_up(self):
        result = fiber_cohomology(_collapsing_line(), 0, 1, [0, 1, 2])
        assert dict(result.values) == {0: 2, 1: 1, 2: 1}
        assert result.generic == 1
        assert result.semicontinuous

    def test_duplicate_samples_rejected(self):
        with pytest.raises(PreconditionError):
            fiber_cohomology(_collapsing_line(), 0, 0, [2, 2])


class TestHypersurfaces:
    """Test the closed-form hypersurface Hilbert polynomial."""

    def test_plane_conic(self):
        assert hypersurface_hilbert_polynomial(2, 2) == NumericalPolynomial((1, 2))

    def test_plane_in_space(self):
        assert hypersurface_hilbert_polynomial(3, 1) == NumericalPolynomial((1, 2, 1))

    def test_matches_conic_family(self):
        assert fiber_hilbert_profile(_conics(), [5]).generic == hypersurface_hilbert_polynomial(2, 2)

    @pytest.mark.parametrize("n, d", [(0, 2), (2, 0)])
    def test_degenerate_input(self, n, d):
        with pytest.raises(PreconditionError):
            hypersurface_hilbert_polynomial(n, d)


class TestHypersurfaceSuite:
    """The closed form agrees with the computed Hilbert polynomial."""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_random_form(self, n, d):
        names = [f"x{i}" for i in range(n + 1)]
        A = PolyRing(QQ, names, MonomialOrder.grevlex())
        rng = random.Random(n * 10 + d)
        f = sum(
            (A.one().mul_term(e, QQ(rng.randint(1, 9))) for e in monomials_of_degree(A.weights, d)),
            A.zero(),
        )
        assert f.degree() == d
        M = PresentedModule.quotient(Submodule.ideal(A, [f]))
        assert hilbert_polynomial(M) == hypersurface_hilbert_polynomial(n, d)


class TestFlatDichotomy:
    """Flat families have one fiber polynomial; the collapsing one has two."""

    SAMPLES = [0, 1, 2, -1, 3]

    def test_flat_family(self):
        profile = fiber_hilbert_profile(_conics(), self.SAMPLES)
        assert flat_over_line(_conics()).flat
        assert profile.distinct_polynomials == {profile.generic}

    def test_non_flat_family(self):
        F = _collapsing_line()
        profile = fiber_hilbert_profile(F, self.SAMPLES)
        report = flat_over_line(F)
        assert len(profile.distinct_polynomials) >= 2
        assert not report.flat
        assert not report.witness.is_zero()
