from fractions import Fraction
from math import factorial, prod

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from omega_betti.errors import DimensionMismatch, ParseError
from omega_betti.parser import parse_polynomial
from omega_betti.poly import (
    DEGREE_OF_ZERO,
    Polynomial,
    evaluate,
    hasse_coefficient,
    monomials_of_degree,
    translate,
)
from omega_betti.verify import random_polynomial

XY = ("x", "y")
XYZ = ("x", "y", "z")


def P(text, variables=XY):
    return parse_polynomial(text, variables)


def to_sympy(p):
    syms = sympy.symbols(p.variables)
    return sympy.Add(
        *[sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s**e for s, e in zip(syms, m)])
          for m, c in p.terms.items()]
    )


def from_sympy(expr, variables):
    poly = sympy.Poly(sympy.expand(expr), *sympy.symbols(variables))
    terms = {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in poly.terms() if c}
    return Polynomial(variables, terms)


# strategies
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(monos, rationals, max_size=5).map(lambda t: Polynomial(XYZ, t))


class TestParse:
    def test_cusp(self):
        assert P("y^2 - x^3").terms == {(0, 2): 1, (3, 0): -1}

    def test_zero(self):
        p = parse_polynomial("0", ("x",))
        assert p.is_zero() and p.terms == {}
        assert p.degree == DEGREE_OF_ZERO

    def test_expand_and_cancel(self):
        assert P("(x + y)^2 - x^2 - 2*x*y") == P("y^2")

    def test_rationals_and_unary_minus(self):
        p = P("-3/2*x + -y")
        assert p.terms == {(1, 0): Fraction(-3, 2), (0, 1): -1}

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("x +* y", "position"),
            ("w + x", "unknown identifier"),
            ("x^-2", "position"),
            ("x^(1/2)", "position"),
            ("x^1/2", "position"),
            ("x^2.5", "position"),
            ("", "empty"),
            ("x $ y", "unexpected character"),
            ("1/0", "zero"),
        ],
    )
    def test_errors(self, text, fragment):
        with pytest.raises(ParseError) as ei:
            P(text)
        assert fragment in str(ei.value)

    def test_error_position_points_at_token(self):
        with pytest.raises(ParseError) as ei:
            P("x + + ")
        assert ei.value.pos == 4

    def test_unknown_identifier_position(self):
        with pytest.raises(ParseError) as ei:
            P("x*y + q")
        assert ei.value.pos == 6

    def test_roundtrip_random(self, rng):
        for _ in range(1000):
            p = random_polynomial(rng, XYZ, 4, 6)
            assert parse_polynomial(str(p), XYZ) == p


class TestEvaluate:
    def test_examples(self):
        f = P("y^2 - x^3")
        assert evaluate(f, (1, 1)) == 0
        assert evaluate(f, (1, 2)) == 3
        assert evaluate(Polynomial.zero(XY), (5, 7)) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            P("x").evaluate((1,))


class TestHasse:
    def test_examples(self):
        assert hasse_coefficient(parse_polynomial("x^3", ("x",)), (2,)) == parse_polynomial("3*x", ("x",))
        assert hasse_coefficient(P("y^2 - x^3"), (0, 2)) == P("1")
        assert hasse_coefficient(P("x^2*y"), (1, 1)) == P("2*x")

    def test_matches_taylor_coefficient_oracle(self):
        # coefficient of t1*t2 in (x+t1)^2 (y+t2), read off by sympy
        x, y, t1, t2 = sympy.symbols("x y t1 t2")
        expr = sympy.expand((x + t1) ** 2 * (y + t2))
        coeff = sympy.Poly(expr, t1, t2).coeff_monomial(t1 * t2)
        assert hasse_coefficient(P("x^2*y"), (1, 1)) == from_sympy(coeff, XY)

    @settings(max_examples=60, deadline=None)
    @given(polys, st.tuples(*[st.integers(0, 2)] * 3))
    def test_factorial_times_hasse_is_iterated_derivative(self, p, alpha):
        d = p
        for i, k in enumerate(alpha):
            for _ in range(k):
                d = d.derivative(i)
        scale = prod(factorial(a) for a in alpha)
        assert hasse_coefficient(p, alpha) * scale == d


class TestTranslate:
    def test_examples(self):
        assert translate(parse_polynomial("x", ("x",)), (1,)) == parse_polynomial("x + 1", ("x",))
        assert translate(P("y^2 - x^3"), (1, 1)) == P("y^2 + 2*y - x^3 - 3*x^2 - 3*x")
        assert translate(P("7/3"), (2, -1)) == P("7/3")

    def test_against_sympy_substitution(self, rng):
        x, y, z = sympy.symbols(XYZ)
        for _ in range(20):
            p = random_polynomial(rng, XYZ, 4, 5)
            a = (Fraction(rng.randint(-3, 3), rng.choice((1, 2))), Fraction(1), Fraction(-2))
            sub = to_sympy(p).subs({x: x + sympy.Rational(a[0].numerator, a[0].denominator), y: y + 1, z: z - 2})
            assert translate(p, a) == from_sympy(sub, XYZ)

    @settings(max_examples=50, deadline=None)
    @given(polys, polys, st.tuples(*[rationals] * 3))
    def test_homomorphism_and_inverse(self, p, q, a):
        assert translate(p * q, a) == translate(p, a) * translate(q, a)
        assert translate(translate(p, a), tuple(-c for c in a)) == p


class TestRingAxioms:
    @settings(max_examples=80, deadline=None)
    @given(polys, polys, polys)
    def test_axioms(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a
        assert a - a == Polynomial.zero(XYZ)

    def test_matches_sympy_product(self, rng):
        for _ in range(30):
            p, q = random_polynomial(rng, XYZ, 3), random_polynomial(rng, XYZ, 3)
            assert p * q == from_sympy(to_sympy(p) * to_sympy(q), XYZ)

    def test_power(self):
        assert P("x + y") ** 3 == P("x^3 + 3*x^2*y + 3*x*y^2 + y^3")


class TestPrinting:
    def test_degrevlex_order(self):
        assert str(P("y^2 - x^3")) == "-x^3 + y^2"
        assert str(P("x*y + x^2 + y^2")) == "x^2 + x*y + y^2"
        assert str(P("3/2*x - 1")) == "3/2*x - 1"

    def test_monomials_of_degree_count(self):
        from math import comb

        for s in range(1, 5):
            for d in range(5):
                assert len(monomials_of_degree(s, d)) == comb(d + s - 1, s - 1)
