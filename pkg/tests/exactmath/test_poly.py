import unittest
from fractions import Fraction

from hypothesis import given
from sympy import Matrix, Poly, QQ, Rational

from tests import setup_env  # noqa
from tests.helpers import stochastic_matrices
from isolde import RatMatrix, RatPoly, char_poly, cyclotomic, min_poly
from isolde.exactmath import X, poly_divides, poly_divmod, poly_eval


def poly(*coeffs):
    return RatPoly(coeffs)


class TestRatPoly(unittest.TestCase):
    def test_normal_form(self):
        self.assertEqual(poly(1, 2, 0, 0).degree, 1)
        self.assertEqual(RatPoly().degree, RatPoly.ZERO_DEGREE)
        self.assertTrue(poly(0, 0).is_zero())
        self.assertEqual(str(poly("1/2", "-3/2", 1)), "x^2 - 3/2*x + 1/2")
        self.assertEqual(str(poly(-1, 0, 1)), "x^2 - 1")
        self.assertEqual(poly(1, 1)(Fraction(1, 2)), Fraction(3, 2))

    def test_divmod(self):
        q, r = poly_divmod(poly(-1, 0, 1), poly(-1, 1))
        self.assertEqual(q, poly(1, 1))
        self.assertTrue(r.is_zero())
        q, r = divmod(poly(1, 0, 1), poly(1, 1))
        self.assertEqual(q * poly(1, 1) + r, poly(1, 0, 1))
        self.assertEqual(r, poly(2))
        self.assertFalse(poly_divides(poly(1, 1), poly(1, 0, 1)))


class TestCharMinPoly(unittest.TestCase):
    def test_char_poly(self):
        self.assertEqual(char_poly(RatMatrix.identity(2)), poly(1, -2, 1))
        self.assertEqual(char_poly(RatMatrix([[0, 1], [1, 0]])), poly(-1, 0, 1))
        self.assertEqual(char_poly(RatMatrix([[1, 0], ["1/2", "1/2"]])), poly("1/2", "-3/2", 1))

    def test_min_poly(self):
        self.assertEqual(min_poly(RatMatrix.identity(2)), poly(-1, 1))
        self.assertEqual(min_poly(RatMatrix([[0, 1], [1, 0]])), poly(-1, 0, 1))
        self.assertEqual(min_poly(RatMatrix([[1, 0], ["1/2", "1/2"]])), poly("1/2", "-3/2", 1))
        # derogatory: two equal Jordan blocks of size one
        self.assertEqual(min_poly(RatMatrix([["1/2", 0, 0], [0, "1/2", 0], [0, 0, 1]])), poly("1/2", "-3/2", 1))

    @given(stochastic_matrices())
    def test_cayley_hamilton(self, a):
        n = a.rows
        zero = RatMatrix.zeros(n, n)
        self.assertEqual(poly_eval(char_poly(a), a), zero)
        m = min_poly(a)
        self.assertEqual(poly_eval(m, a), zero)
        self.assertTrue(poly_divides(m, char_poly(a)))
        self.assertEqual(m.leading(), 1)


class TestCyclotomic(unittest.TestCase):
    def test_small(self):
        self.assertEqual(cyclotomic(1), poly(-1, 1))
        self.assertEqual(cyclotomic(2), poly(1, 1))
        self.assertEqual(cyclotomic(3), poly(1, 1, 1))
        self.assertEqual(cyclotomic(4), poly(1, 0, 1))
        self.assertEqual(cyclotomic(6), poly(1, -1, 1))

    def test_product_is_x_n_minus_one(self):
        for n in range(1, 13):
            product = poly(1)
            for d in range(1, n + 1):
                if n % d == 0:
                    product = product * cyclotomic(d)
            self.assertEqual(product, RatPoly.monomial(n) - poly(1))


class TestSympyBacking(unittest.TestCase):
    def test_domain_is_rationals(self):
        a = RatMatrix([[1, 0], ["1/2", "1/2"]])
        for p in (char_poly(a), min_poly(a), cyclotomic(5), poly("1/3", 2)):
            self.assertIsInstance(p.poly, Poly)
            self.assertEqual(p.poly.get_domain(), QQ)
        self.assertEqual(a.to_domain().domain, QQ)
        self.assertEqual(RatMatrix.from_domain(a.to_domain()), a)

    def test_agrees_with_sympy(self):
        a = RatMatrix([["1/3", "2/3", 0], [0, "1/2", "1/2"], [1, 0, 0]])
        expected = Matrix([[Rational(1, 3), Rational(2, 3), 0], [0, Rational(1, 2), Rational(1, 2)], [1, 0, 0]]).charpoly(X)
        self.assertEqual(char_poly(a).poly, Poly(expected.as_expr(), X, domain=QQ))
        self.assertEqual(cyclotomic(12).poly, Poly(X**4 - X**2 + 1, X, domain=QQ))
        self.assertEqual(poly_eval(min_poly(a), a), RatMatrix.zeros(3, 3))
