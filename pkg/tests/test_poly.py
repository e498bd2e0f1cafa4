"""Exact polynomial ring and Gaussian-rational scalar checks."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_polynomial
from starquant.errors import DimensionMismatchError
from starquant.poly import Polynomial
from starquant.rational import QI, I


def polys(dim=2):
    return st.builds(
        lambda seed: random_polynomial(random.Random(seed), dim),
        st.integers(0, 10 ** 6))


class TestQI:
    def test_formal_i(self):
        assert I * I == QI(-1)
        assert (I ** 3) == -I
        assert QI(Fraction(1, 2), 3).conjugate() == QI(Fraction(1, 2), -3)

    def test_float_is_exact(self):
        c = QI.coerce(0.1)
        assert c.re == Fraction(0.1)  # dyadic, not 1/10
        assert QI.coerce(0.5).re == Fraction(1, 2)

    def test_division(self):
        assert I / 2 * 2 == I
        assert (QI(1, 1) / QI(1, 1)) == QI(1)
        with pytest.raises(ZeroDivisionError):
            QI(1) / QI(0)

    def test_arith(self):
        a, b = QI(2, 3), QI(Fraction(-1, 2), 5)
        assert a + b == QI(Fraction(3, 2), 8)
        assert a * b == QI(2 * Fraction(-1, 2) - 15, 10 + Fraction(-3, 2))
        assert a - a == QI(0)
        assert abs(QI(3, 4)) == pytest.approx(5.0)


class TestPolynomialRing:
    @given(polys(), polys(), polys())
    @settings(max_examples=60)
    def test_ring_axioms(self, p, q, r):
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r

    @given(polys(), polys())
    @settings(max_examples=60)
    def test_derivation(self, p, q):
        for i in range(2):
            assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)

    def test_eval(self):
        d = 2
        p = Polynomial.variable(d, 0) ** 2 * 3 + Polynomial.variable(d, 1) - 1
        assert p((2.0, 5.0)) == pytest.approx(12 + 5 - 1)
        assert p.eval_exact((Fraction(1, 2), 0)) == QI(Fraction(-1, 4))

    def test_zero_handling(self):
        d = 2
        z = Polynomial.variable(d, 0) - Polynomial.variable(d, 0)
        assert z.is_zero() and z == Polynomial.zero(d)
        assert z.degree() == -1

    def test_diff_multi(self):
        d = 2
        p = Polynomial.monomial(d, (2, 1))
        assert p.diff_multi((1, 1)) == Polynomial.monomial(d, (1, 0), 2)
        assert p.diff_multi((3, 0)).is_zero()

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            Polynomial.variable(2, 0) + Polynomial.variable(3, 0)

    def test_conjugate(self):
        p = Polynomial.constant(1, I) * Polynomial.variable(1, 0)
        assert p.conjugate() == Polynomial.constant(1, -I) * Polynomial.variable(1, 0)

    def test_json_round_trip(self):
        p = (Polynomial.variable(2, 0) * QI(Fraction(2, 3), Fraction(-1, 7))
             + Polynomial.constant(2, 5))
        assert Polynomial.from_json_obj(2, p.to_json_obj()) == p

    def test_abs_coeffs(self):
        p = Polynomial.constant(1, QI(-2, 0)) + Polynomial.variable(1, 0) * I
        a = p.abs_coeffs()
        assert a((1.0,)).real == pytest.approx(3.0)
        assert p.max_abs_coeff() == pytest.approx(2.0)
