"""Tests for local_cohomology.py — Ext-limits, depth and duality checks."""

import pytest

from errors import (
    ComputationCancelled,
    DepthUndefinedError,
    SaturationLimitError,
    StabilizationError,
    ZeroModuleError,
)
from fields import QQ
from groebner import Submodule
from homology import PresentedModule, graded_dims
from local_cohomology import (
    CancellationToken,
    annihilating_power,
    cm_test,
    depth,
    generators_killed_by,
    h0_local,
    irrelevant_ideal,
    local_cohomology_dims,
    local_duality_defect,
    local_duality_sides,
    mayer_vietoris_check,
)
from polynomials import MonomialOrder, PolyRing


def _ring(*names, weights=()):
    return PolyRing(QQ, names, MonomialOrder.grevlex(), weights)


def _plane():
    A = _ring("x", "y")
    return A, A.gens()


PLANE_MODULES = [
    lambda A, x, y: PresentedModule.free(A),
    lambda A, x, y: PresentedModule.free(A, (-1,)),
    lambda A, x, y: PresentedModule.free(A, (0, 1)),
    lambda A, x, y: PresentedModule.quotient(Submodule.ideal(A, [x])),
    lambda A, x, y: PresentedModule.quotient(Submodule.ideal(A, [x * y])),
    lambda A, x, y: PresentedModule.quotient(Submodule.ideal(A, [x ** 2, x * y])),
    lambda A, x, y: PresentedModule.quotient(Submodule.ideal(A, [x ** 2, y ** 2])),
    lambda A, x, y: PresentedModule.quotient(Submodule.ideal(A, [x, y])),
    lambda A, x, y: PresentedModule.quotient(Submodule.ideal(A, [x ** 3, x * y, y ** 3])),
    lambda A, x, y: PresentedModule.ideal_module(Submodule.ideal(A, [x, y])),
]
PLANE_MODULE_IDS = [
    "free", "twist-up", "free-sum", "line", "two-lines", "embedded-point",
    "complete-intersection", "residue-field", "fat-point", "maximal-ideal",
]


class TestH0:
    """Test I-power torsion."""

    def test_embedded_point(self):
        A, (x, y) = _plane()
        M = PresentedModule.quotient(Submodule.ideal(A, [x ** 2, x * y]))
        H = h0_local(irrelevant_ideal(A), M)
        assert graded_dims(H, (0, 3)).as_dict() == {1: 1}

    def test_torsion_free(self):
        A, _ = _plane()
        H = h0_local(irrelevant_ideal(A), PresentedModule.free(A))
        assert graded_dims(H, (0, 3)).is_zero()

    def test_unit_ideal_gives_zero(self):
        A, (x, y) = _plane()
        M = PresentedModule.quotient(Submodule.ideal(A, [x]))
        H = h0_local(Submodule.ideal(A, [A.one()]), M)
        assert graded_dims(H, (0, 3)).is_zero()


class TestExtLimit:
    """Test windowed local cohomology."""

    def test_top_cohomology_of_plane(self):
        A, _ = _plane()
        result = local_cohomology_dims(2, irrelevant_ideal(A), PresentedModule.free(A), (-3, 0))
        assert result.dims.as_dict() == {-3: 2, -2: 1}

    def test_lower_cohomology_vanishes(self):
        A, _ = _plane()
        m = irrelevant_ideal(A)
        for p in (0, 1):
            assert local_cohomology_dims(p, m, PresentedModule.free(A), (-3, 1)).dims.is_zero()

    def test_h0_agrees_with_torsion(self):
        A, (x, y) = _plane()
        M = PresentedModule.quotient(Submodule.ideal(A, [x ** 2, x * y]))
        result = local_cohomology_dims(0, irrelevant_ideal(A), M, (0, 2))
        assert result.dims.as_dict() == {1: 1}

    def test_power_cap_exceeded(self):
        A, _ = _plane()
        with pytest.raises(StabilizationError):
            local_cohomology_dims(2, irrelevant_ideal(A), PresentedModule.free(A), (-3, 0), power_cap=2)

    def test_cancellation(self):
        A, _ = _plane()
        token = CancellationToken()
        token.cancel()
        with pytest.raises(ComputationCancelled):
            local_cohomology_dims(2, irrelevant_ideal(A), PresentedModule.free(A), (-2, 0), token=token)

    def test_negative_index(self):
        A, _ = _plane()
        with pytest.raises(ValueError):
            local_cohomology_dims(-1, irrelevant_ideal(A), PresentedModule.free(A), (0, 1))

    def test_to_json(self):
        A, _ = _plane()
        result = local_cohomology_dims(2, irrelevant_ideal(A), PresentedModule.free(A), (-2, -2))
        data = result.to_json()
        assert data["p"] == 2
        assert data["dims"] == {"window": [-2, -2], "dims": [[-2, 1]]}


class TestDepth:
    """Test depth certificates and the Cohen-Macaulay test."""

    def test_twisted_cubic_is_cm(self):
        A = _ring("x0", "x1", "x2", "x3")
        x0, x1, x2, x3 = A.gens()
        C = Submodule.ideal(A, [x0 * x2 - x1 ** 2, x0 * x3 - x1 * x2, x1 * x3 - x2 ** 2])
        report = cm_test(PresentedModule.quotient(C), seed=0)
        assert report.is_cm
        assert report.depth == 2
        assert report.dim == 2
        assert report.certificate.complete
        assert len(report.certificate.regular_sequence) == 2

    def test_depth_zero_with_embedded_point(self):
        A, (x, y) = _plane()
        M = PresentedModule.quotient(Submodule.ideal(A, [x ** 2, x * y]))
        cert = depth(irrelevant_ideal(A), M)
        assert cert.depth == 0
        assert cert.regular_sequence == []
        assert not cm_test(M).is_cm

    def test_depth_of_polynomial_ring(self):
        A, _ = _plane()
        cert = depth(irrelevant_ideal(A), PresentedModule.free(A))
        assert cert.depth == 2
        assert cert.ext_witness[0] == 2

    def test_depth_undefined(self):
        A, (x, y) = _plane()
        with pytest.raises(DepthUndefinedError):
            depth(Submodule.ideal(A, [A.one()]), PresentedModule.free(A))

    def test_cm_test_zero_module(self):
        A, _ = _plane()
        with pytest.raises(ZeroModuleError):
            cm_test(PresentedModule.zero(A))


class TestDualityChecks:
    """Test Mayer-Vietoris and local duality."""

    def test_local_duality(self):
        A, _ = _plane()
        lhs, rhs = local_duality_sides(PresentedModule.free(A), 2, (-3, 0))
        assert lhs == rhs
        assert lhs.as_dict() == {-3: 2, -2: 1}

    def test_local_duality_defect_on_quotient(self):
        A, (x, y) = _plane()
        M = PresentedModule.quotient(Submodule.ideal(A, [x ** 2, x * y]))
        assert local_duality_defect(M, 0, (-1, 2)).is_zero()

    def test_mayer_vietoris_primary_ideals(self):
        A, (x, y) = _plane()
        I = Submodule.ideal(A, [x, y ** 2])
        J = Submodule.ideal(A, [x ** 2, y])
        report = mayer_vietoris_check(I, J, PresentedModule.free(A), 2, (-2, -1))
        assert report.ok
        assert report.complete
        assert report.groups["sum"][2].as_dict() == {-2: 1}


class TestDepthAgreement:
    """Ext depth, regular sequence length and first local cohomology agree."""

    @pytest.mark.parametrize("gens, expected", [
        (lambda x, y, z: [x], 2),
        (lambda x, y, z: [x, y], 1),
        (lambda x, y, z: [x ** 2, x * y], 1),
        (lambda x, y, z: [x * y, y * z, x * z], 1),
        (lambda x, y, z: [x ** 2, y ** 2, z ** 2], 0),
        (lambda x, y, z: [x * y], 2),
        (lambda x, y, z: [x ** 2], 2),
        (lambda x, y, z: [x * y * z], 2),
        (lambda x, y, z: [x ** 2, y], 1),
        (lambda x, y, z: [x, y, z], 0),
    ])
    def test_three_ways(self, gens, expected):
        A = _ring("x", "y", "z")
        M = PresentedModule.quotient(Submodule.ideal(A, gens(*A.gens())))
        m = irrelevant_ideal(A)
        cert = depth(m, M)
        assert cert.depth == expected
        assert len(cert.regular_sequence) == expected
        first = next(
            p for p in range(4)
            if not local_cohomology_dims(p, m, M, (-2, 0)).dims.is_zero()
        )
        assert first == expected

    def test_two_planes_not_cm(self):
        A = _ring("x", "y", "z", "w")
        x, y, z, w = A.gens()
        M = PresentedModule.quotient(Submodule.ideal(A, [x * z, x * w, y * z, y * w]))
        report = cm_test(M)
        assert (report.depth, report.dim) == (1, 2)
        assert not report.is_cm


class TestLocalDualitySuite:
    """Both sides of graded local duality agree."""

    @pytest.mark.parametrize("make", PLANE_MODULES, ids=PLANE_MODULE_IDS)
    def test_plane_module(self, make):
        A, (x, y) = _plane()
        M = make(A, x, y)
        for p in range(3):
            assert local_duality_defect(M, p, (-8, 8), power_cap=16).is_zero(), p

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_plane_conic(self, p):
        A = _ring("x", "y", "z")
        x, y, z = A.gens()
        M = PresentedModule.quotient(Submodule.ideal(A, [x * z - y ** 2]))
        assert local_duality_defect(M, p, (-2, 0)).is_zero()


class TestMayerVietorisSuite:
    """Alternating sums along the Mayer-Vietoris sequence vanish degreewise."""

    PAIRS = [
        (lambda x, y: [x, y ** 2], lambda x, y: [x ** 2, y]),
        (lambda x, y: [x, y], lambda x, y: [x ** 2, y ** 2]),
        (lambda x, y: [x ** 2, x * y, y ** 2], lambda x, y: [x ** 3, y]),
        (lambda x, y: [x, y ** 3], lambda x, y: [x ** 3, y]),
        (lambda x, y: [x ** 2, y ** 2], lambda x, y: [x ** 3, y ** 3]),
    ]

    @pytest.mark.parametrize("index", range(len(PAIRS)))
    def test_primary_pairs(self, index):
        A, (x, y) = _plane()
        make_i, make_j = self.PAIRS[index]
        I = Submodule.ideal(A, make_i(x, y))
        J = Submodule.ideal(A, make_j(x, y))
        report = mayer_vietoris_check(I, J, PresentedModule.free(A), window=(-6, 6))
        assert report.ok
        assert report.complete
        assert report.groups["sum"][2].as_dict() == {j: -j - 1 for j in range(-6, -1)}

    def test_equal_ideals(self):
        A, (x, y) = _plane()
        M = PresentedModule.quotient(Submodule.ideal(A, [y]))
        I = Submodule.ideal(A, [x])
        report = mayer_vietoris_check(I, I, M, window=(-6, 6))
        assert report.ok
        assert report.groups["I"][1].as_dict() == {j: 1 for j in range(-6, 0)}

    def test_coordinate_axes_have_infinite_pieces(self):
        # H^1_(x)(A) = A_x / A has infinite-dimensional graded pieces
        A, (x, y) = _plane()
        I = Submodule.ideal(A, [x])
        J = Submodule.ideal(A, [y])
        with pytest.raises(StabilizationError):
            mayer_vietoris_check(I, J, PresentedModule.free(A), window=(-2, 2), power_cap=4)


class TestKilledByPower:
    """Every computed local cohomology class is killed by a power of I."""

    def test_h0_killed_by_maximal_ideal(self):
        A, (x, y) = _plane()
        m = irrelevant_ideal(A)
        H = h0_local(m, PresentedModule.quotient(Submodule.ideal(A, [x ** 2, x * y])))
        assert generators_killed_by(H, m, 1)
        assert annihilating_power(H, m) == 1

    def test_h0_needs_square(self):
        A, (x, y) = _plane()
        m = irrelevant_ideal(A)
        H = h0_local(m, PresentedModule.quotient(Submodule.ideal(A, [x ** 3, x * y])))
        assert not generators_killed_by(H, m, 1)
        assert annihilating_power(H, m) == 2

    def test_zero_module(self):
        A, _ = _plane()
        m = irrelevant_ideal(A)
        assert annihilating_power(h0_local(m, PresentedModule.free(A)), m) == 0

    def test_cap_exceeded(self):
        A, (x, y) = _plane()
        m = irrelevant_ideal(A)
        H = h0_local(m, PresentedModule.quotient(Submodule.ideal(A, [x ** 3, x * y])))
        with pytest.raises(SaturationLimitError):
            annihilating_power(H, m, cap=1)

    @pytest.mark.parametrize("p, quotient", [(0, "embedded"), (1, "embedded"), (2, "free")])
    def test_ext_limit_presentation(self, p, quotient):
        A, (x, y) = _plane()
        M = (
            PresentedModule.quotient(Submodule.ideal(A, [x ** 2, x * y]))
            if quotient == "embedded" else PresentedModule.free(A)
        )
        m = irrelevant_ideal(A)
        result = local_cohomology_dims(p, m, M, (-3, 1))
        assert generators_killed_by(result.ext, m, result.stabilized_at)
