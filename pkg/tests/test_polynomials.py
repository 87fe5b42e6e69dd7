"""Tests for fields.py, polynomials.py and linalg.py — exact arithmetic."""

from fractions import Fraction

import pytest

from errors import ArityError, FieldError, RingMismatchError, UnknownVariableError
from fields import CoefficientField, QQ
from linalg import det, inverse, matmul, rank, rref
from polynomials import NEG_INF, MonomialOrder, PolyRing, monomial_compare, poly_op, substitute


def _ring(*names, field=QQ, order=None, weights=()):
    return PolyRing(field, names, order or MonomialOrder.grevlex(), weights)


class TestFields:
    """Test coefficient fields."""

    def test_rationals_are_fractions(self):
        assert QQ("3/6") == Fraction(1, 2)
        assert QQ.add(Fraction(1, 3), Fraction(2, 3)) == 1

    def test_prime_field_reduces(self):
        K = CoefficientField.prime(7)
        assert K(10) == 3
        assert K(-1) == 6
        assert K(Fraction(1, 2)) == 4

    def test_prime_field_inverse(self):
        K = CoefficientField.prime(101)
        assert K.mul(37, K.inv(37)) == 1

    def test_non_prime_rejected(self):
        with pytest.raises(FieldError):
            CoefficientField.prime(6)

    def test_denominator_divisible_by_p(self):
        with pytest.raises(FieldError):
            CoefficientField.prime(3)(Fraction(1, 3))

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            QQ.inv(QQ.zero())

    def test_to_json(self):
        assert QQ.to_json(Fraction(4, 2)) == 2
        assert QQ.to_json(Fraction(-1, 3)) == "-1/3"


class TestMonomialOrders:
    """Test monomial comparisons."""

    def test_grevlex_prefers_degree(self):
        assert monomial_compare(MonomialOrder.grevlex(), (1, 0), (0, 5)) == -1

    def test_lex_prefers_first_variable(self):
        assert monomial_compare(MonomialOrder.lex(), (1, 0), (0, 5)) == 1

    def test_grevlex_ties(self):
        order = MonomialOrder.grevlex()
        assert monomial_compare(order, (2, 0, 0), (1, 1, 0)) == 1
        assert monomial_compare(order, (1, 0, 1), (0, 2, 0)) == -1
        assert monomial_compare(order, (1, 1, 0), (1, 1, 0)) == 0

    def test_arity_checked(self):
        with pytest.raises(ArityError):
            monomial_compare(MonomialOrder.grevlex(), (1, 0), (1, 0, 0))


class TestPolynomials:
    """Test polynomial arithmetic and formatting."""

    def test_format(self):
        R = _ring("x", "y", "z")
        x, y, z = R.gens()
        f = x ** 3 - y * z * Fraction(2, 3)
        assert f.format() == "x^3 - 2/3*y*z"

    def test_zero_polynomial(self):
        R = _ring("x")
        assert R.zero().format() == "0"
        assert R.zero().degree() is NEG_INF

    def test_arithmetic(self):
        R = _ring("x", "y")
        x, y = R.gens()
        assert (x + y) * (x - y) == x ** 2 - y ** 2
        assert (x + y) ** 2 - x ** 2 - y ** 2 == 2 * x * y

    def test_weighted_degree(self):
        R = _ring("x", "y", weights=(1, 2))
        x, y = R.gens()
        f = x ** 2 + y
        assert f.degree() == 2
        assert f.is_homogeneous()

    def test_prime_field_format(self):
        R = _ring("x", "y", field=CoefficientField.prime(5))
        x, y = R.gens()
        assert (x - y).format() == "x + 4*y"

    def test_leading_monomial(self):
        R = _ring("x", "y", order=MonomialOrder.lex())
        x, y = R.gens()
        assert (y ** 4 + x).leading_monomial == (1, 0)

    def test_substitute(self):
        R = _ring("x", "y")
        x, y = R.gens()
        f = x ** 2 * y + y
        assert substitute(f, {"x": 2}) == 5 * y

    def test_substitute_unknown_variable(self):
        R = _ring("x", "y")
        with pytest.raises(UnknownVariableError):
            substitute(R.gen("x"), {"w": 1})

    def test_poly_op(self):
        R = _ring("x", "y")
        x, y = R.gens()
        assert poly_op("add", x, y) == x + y
        assert poly_op("mul", x, y) == x * y
        assert poly_op("scale", x, Fraction(1, 2)).format() == "1/2*x"

    def test_ring_mismatch(self):
        R, S = _ring("x", "y"), _ring("x", "z")
        with pytest.raises(RingMismatchError):
            poly_op("add", R.gen("x"), S.gen("x"))

    def test_unknown_op(self):
        R = _ring("x")
        with pytest.raises(ValueError):
            poly_op("div", R.gen("x"), R.gen("x"))

    def test_negative_weights_rejected(self):
        with pytest.raises(ValueError):
            _ring("x", weights=(-1,))

    def test_duplicate_variables_rejected(self):
        with pytest.raises(ValueError):
            _ring("x", "x")


class TestNegativeInfinity:
    """Test the -inf sentinel."""

    def test_ordering(self):
        assert NEG_INF < -10 ** 9
        assert not NEG_INF > 0
        assert max(NEG_INF, 3) == 3

    def test_absorbs_arithmetic(self):
        assert NEG_INF + 5 is NEG_INF
        assert NEG_INF - 5 is NEG_INF


class TestLinearAlgebra:
    """Test dense exact linear algebra."""

    def test_rank_and_rref(self):
        rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
        assert rank(rows, QQ) == 2
        _, pivots = rref(rows, QQ)
        assert pivots == [0, 1]

    def test_det(self):
        assert det([[2, 1], [1, 1]], QQ) == 1
        assert det([[1, 2], [2, 4]], QQ) == 0

    def test_inverse(self):
        A = [[2, 1], [1, 1]]
        assert matmul(inverse(A, QQ), A, QQ) == [[1, 0], [0, 1]]
