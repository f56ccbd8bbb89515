import random
from fractions import Fraction
from math import comb

import sympy
from hypothesis import given, settings, strategies as st

from omega_betti.parser import parse_polynomial
from omega_betti.poly import Polynomial
from omega_betti.universal import (
    Convention,
    OmegaElement,
    convert_basis,
    dn_recursive,
    dn_taylor,
    in_m_omega,
    omega_basis,
    verify_identity,
)
from omega_betti.verify import random_polynomial

from test_poly import from_sympy, to_sympy

XY = ("x", "y")


def P(text, variables=XY):
    return parse_polynomial(text, variables)


def coords(el):
    return {a: str(p) for a, p in el.coords.items()}


def taylor_oracle(g, n):
    """DX coordinates of d_n(g) from the sympy expansion of g(x+t) - g(x)."""
    xs = sympy.symbols(g.variables)
    ts = sympy.symbols([f"t{i}" for i in range(len(xs))])
    expr = sympy.expand(to_sympy(g).subs({x: x + t for x, t in zip(xs, ts)}, simultaneous=True))
    poly = sympy.Poly(expr, *ts)
    out = {}
    for mono, c in poly.terms():
        if 1 <= sum(mono) <= n:
            q = from_sympy(c, g.variables)
            if q:
                out[tuple(mono)] = q
    return out


class TestBasis:
    def test_rank(self):
        for n in range(1, 6):
            for s in range(1, 5):
                assert omega_basis(n, s).rank == comb(n + s, s) - 1

    def test_order_degree_then_lex(self):
        assert omega_basis(2, 2).monomials == ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


class TestTaylor:
    def test_examples(self):
        b = omega_basis(2, 2)
        assert coords(dn_taylor(P("x^2"), b)) == {(1, 0): "2*x", (2, 0): "1"}
        assert dn_taylor(P("1"), b).is_zero()
        assert coords(dn_taylor(P("y^3 - x^4"), b)) == {
            (1, 0): "-4*x^3",
            (0, 1): "3*y^2",
            (2, 0): "-6*x^2",
            (0, 2): "3*y",
        }

    def test_against_sympy(self, rng):
        for n in (1, 2, 3):
            for vs in (("x",), XY, ("x", "y", "z")):
                b = omega_basis(n, len(vs))
                for _ in range(8):
                    g = random_polynomial(rng, vs, 2 * n, 5)
                    assert dn_taylor(g, b).coords == taylor_oracle(g, n)

    def test_formatting(self):
        el = dn_taylor(parse_polynomial("x^2", ("x",)), omega_basis(2, 1))
        assert el.to_string() == "(2*x)*dx + (1)*dx^2"

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.fractions(-3, 3, max_denominator=3), st.fractions(-3, 3, max_denominator=3))
    def test_linearity(self, seed, a, c):
        rng = random.Random(seed)
        b = omega_basis(2, 2)
        g, h = random_polynomial(rng, XY, 4), random_polynomial(rng, XY, 4)
        assert dn_taylor(g * a + h * c, b) == dn_taylor(g, b) * a + dn_taylor(h, b) * c


class TestRecursive:
    def test_examples(self):
        b = omega_basis(2, 1)
        x3 = parse_polynomial("x^3", ("x",))
        assert coords(dn_recursive(x3, b)) == {(1,): "-3*x^2", (2,): "3*x"}
        b22 = omega_basis(2, 2)
        for alpha in b22.monomials:
            el = dn_recursive(Polynomial.monomial(XY, alpha), b22)
            assert coords(el) == {alpha: "1"}
        assert coords(dn_recursive(parse_polynomial("x^2", ("x",)), omega_basis(1, 1))) == {
            (1,): "2*x"
        }

    def test_dual_algorithm_oracle(self, rng):
        for n in (1, 2, 3):
            for s in (1, 2, 3):
                b = omega_basis(n, s)
                vs = ("x", "y", "z")[:s]
                for _ in range(15):
                    g = random_polynomial(rng, vs, 2 * n, 5)
                    assert convert_basis(dn_taylor(g, b), Convention.DN) == dn_recursive(g, b)


class TestConvert:
    def test_dn_unit_to_dx(self):
        b = omega_basis(2, 1)
        el = OmegaElement(b, Convention.DN, ("x",), {(2,): Polynomial.constant(("x",), 1)})
        assert coords(convert_basis(el, Convention.DX)) == {(1,): "2*x", (2,): "1"}

    def test_zero(self):
        b = omega_basis(2, 2)
        z = OmegaElement.zero(b, Convention.DX, XY)
        assert convert_basis(z, Convention.DN).is_zero()

    def test_roundtrip_and_membership_invariance(self, rng):
        b = omega_basis(3, 2)
        for _ in range(30):
            el = OmegaElement(
                b, Convention.DX, XY, {a: random_polynomial(rng, XY, 3) for a in b.monomials}
            )
            dn = convert_basis(el, Convention.DN)
            assert convert_basis(dn, Convention.DX) == el
            pt = (Fraction(rng.randint(-2, 2)), Fraction(rng.randint(-2, 2)))
            assert in_m_omega(el, pt) == in_m_omega(dn, pt)
            # an element of m*Omega stays there after conversion
            fx = P("x") * 1 - pt[0]
            m_el = el * fx
            assert in_m_omega(m_el, pt) and in_m_omega(convert_basis(m_el, Convention.DN), pt)


class TestIdentity:
    def test_examples(self):
        x, y = P("x"), P("y")
        assert verify_identity(1, [x, y])
        assert verify_identity(2, [x, x, x])

    def test_random_cubics(self, rng):
        for _ in range(10):
            rs = [random_polynomial(rng, XY, 3) for _ in range(3)]
            assert verify_identity(2, rs)

    def test_identity_by_brute_force_oracle(self, rng):
        # both sides expanded independently through the sympy Taylor oracle
        n = 2
        for _ in range(5):
            rs = [random_polynomial(rng, XY, 2, 3) for _ in range(n + 1)]
            lhs = taylor_oracle(rs[0] * rs[1] * rs[2], n)
            rhs = {}
            idx = range(n + 1)
            from itertools import combinations

            for i in range(1, n + 1):
                for J in combinations(idx, i):
                    coef = Polynomial.constant(XY, (-1) ** (i - 1))
                    for j in J:
                        coef = coef * rs[j]
                    rest = Polynomial.constant(XY, 1)
                    for j in idx:
                        if j not in J:
                            rest = rest * rs[j]
                    for a, p in taylor_oracle(rest, n).items():
                        rhs[a] = rhs.get(a, Polynomial.zero(XY)) + coef * p
            rhs = {a: p for a, p in rhs.items() if p}
            assert lhs == rhs


class TestMembership:
    def test_examples(self):
        f = P("y^2 - x^3")
        assert in_m_omega(dn_taylor(f, omega_basis(1, 2)), (0, 0))
        assert not in_m_omega(dn_taylor(f, omega_basis(2, 2)), (0, 0))
        assert in_m_omega(OmegaElement.zero(omega_basis(2, 2), Convention.DX, XY), (0, 0))
