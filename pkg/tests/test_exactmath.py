from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from p2cert.exactmath import (
    EpsPoly,
    IntPoly,
    Poly,
    RatFunc,
    epspoly_lowest_term,
    format_rational,
    parse_rational,
    poly_divrem,
    poly_gcd,
    pseudo_remainder,
    rat_arith,
)
from p2cert.exactmath.localfrac import LocalRing

from conftest import GAMMA2_NUM

t = sp.symbols("t")
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=30)
coeff_lists = st.lists(rationals, min_size=0, max_size=6)


def to_sympy(p: Poly):
    s = t - sp.Rational(p.center.numerator, p.center.denominator)
    return sp.expand(sum(sp.Rational(c.numerator, c.denominator) * s ** n for n, c in enumerate(p.coeffs)))


# -- rationals -------------------------------------------------------------------

def test_rat_arith_examples():
    assert rat_arith("1/10", "1/2", "+") == Fraction(3, 5)
    assert rat_arith("149/200", 0, "×") == 0
    assert format_rational(rat_arith("149/200", 0, "×")) == "0"
    assert parse_rational("58/100") == Fraction(29, 50)
    assert format_rational(parse_rational("58/100")) == "29/50"


def test_rat_arith_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        rat_arith(1, 0, "/")
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        Poly([0.5])


@given(rationals, rationals)
def test_rat_arith_matches_sympy(a, b):
    sa, sb = sp.Rational(a.numerator, a.denominator), sp.Rational(b.numerator, b.denominator)
    for op, ref in (("+", sa + sb), ("-", sa - sb), ("*", sa * sb)):
        assert rat_arith(a, b, op) == Fraction(int(sp.numer(ref)), int(sp.denom(ref)))


# -- polynomials -------------------------------------------------------------------

def test_poly_arith_examples():
    p = Poly([0, 4, 0, -10])
    assert p + Poly([]) == p
    x = Poly([0, 1])
    assert x * x == Poly([0, 0, 1])
    assert (p * x).coeffs == tuple(Fraction(c) for c in (0, 0, 4, 0, -10))


def test_derivative_examples():
    p = Poly(GAMMA2_NUM)
    assert p.derivative() == Poly([4620, -10506, -27720, 20264, 23100, 2244])
    assert Poly([7]).derivative().is_zero()
    assert Poly([0, 4, 0, -10]).derivative() == Poly([4, 0, -30])


def test_divrem_examples():
    q, r = poly_divrem(Poly([-1, 0, 1]), Poly([-1, 1]))
    assert q == Poly([1, 1]) and r.is_zero()
    q, r = poly_divrem(Poly([0, 0, 1]), Poly([0, 1]))
    assert q == Poly([0, 1]) and r.is_zero()


def test_pseudo_remainder_gives_third_sturm_term():
    p1 = IntPoly.of(GAMMA2_NUM)
    p2 = p1.derivative()
    r = pseudo_remainder(p1, p2)
    neg = IntPoly.of([-c for c in r.coeffs])
    want = [-57870, -380205, -306498, 590240, 318128]
    assert list(neg.coeffs) == want


def test_gcd_examples():
    assert poly_gcd(Poly([-1, 0, 1]), Poly([-1, 1])).coeffs == (-1, 1)
    p = Poly(GAMMA2_NUM)
    assert poly_gcd(p, p.derivative()).degree == 0
    a = Poly([-1, 1]) ** 2 * Poly([2, 1])
    b = Poly([-1, 1]) * Poly([3, 1])
    assert poly_gcd(a, b).coeffs == (-1, 1)


@given(coeff_lists, coeff_lists)
def test_poly_ring_ops_match_sympy(a, b):
    p, q = Poly(a), Poly(b)
    assert sp.expand(to_sympy(p + q) - (to_sympy(p) + to_sympy(q))) == 0
    assert sp.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
    assert sp.expand(to_sympy(p - q) - (to_sympy(p) - to_sympy(q))) == 0


@given(coeff_lists, rationals, rationals)
def test_recenter_preserves_values(a, c, x):
    p = Poly(a)
    assert p.recenter(c)(x) == p(x)


@given(coeff_lists, st.lists(rationals, min_size=1, max_size=4).filter(lambda c: c[-1] != 0))
def test_divrem_identity(a, b):
    p, q = Poly(a), Poly(b)
    quo, rem = p.divrem(q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


@settings(max_examples=50)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=4), st.lists(st.integers(-9, 9), min_size=1, max_size=4),
       st.lists(st.integers(-9, 9), min_size=1, max_size=3))
def test_gcd_matches_sympy(a, b, c):
    pa, pb, pc = Poly(a), Poly(b), Poly(c)
    if pc.is_zero() or (pa.is_zero() and pb.is_zero()):
        return
    g = poly_gcd(pa * pc, pb * pc)
    ref = sp.Poly(sp.gcd(to_sympy(pa * pc), to_sympy(pb * pc)), t)
    assert g.degree == ref.degree()


# -- rational functions ----------------------------------------------------------------

def test_ratfunc_examples(p2):
    inv_t = RatFunc(1, Poly([0, 1]))
    assert inv_t * RatFunc(Poly([0, 1])) == RatFunc(1)
    f = RatFunc(Poly([1, 2]), Poly([3, 0, 1]))
    assert f + 0 == f
    vs, hs = p2.piece_polys(0)
    g = RatFunc(hs[1].derivative()) / (RatFunc(vs[1]) * 2)
    x = Fraction(1, 20)
    assert g(x) == hs[1].derivative()(x) / (2 * vs[1](x))


@given(coeff_lists, st.lists(rationals, min_size=1, max_size=4).filter(lambda c: any(c)), rationals)
def test_ratfunc_canonical_form_is_value_preserving(a, b, x):
    den = Poly(b)
    if den(x) == 0:
        return
    f = RatFunc(Poly(a), den)
    assert f(x) == Poly(a)(x) / den(x)
    assert f == RatFunc(Poly(a) * Poly([2, 1]), den * Poly([2, 1]))


# -- eps polynomials and the localized ring --------------------------------------------

def test_epspoly_lowest_term_examples():
    g1 = RatFunc(Poly([1, 1]))
    assert epspoly_lowest_term(EpsPoly({2: g1 * g1})) == (2, g1 * g1)
    x, y = RatFunc(Poly([3])), RatFunc(Poly([0, 1]))
    assert epspoly_lowest_term(EpsPoly({1: x, 3: y})) == (1, x)


def test_epspoly_truncated_product():
    a = EpsPoly({1: Fraction(1), 2: Fraction(2)})
    b = EpsPoly({1: Fraction(3), 4: Fraction(5)})
    assert a.mul(b, 3) == EpsPoly({2: Fraction(3), 3: Fraction(6)})


@given(st.dictionaries(st.integers(0, 4), rationals, max_size=4),
       st.dictionaries(st.integers(0, 4), rationals, max_size=4), rationals)
def test_epspoly_product_evaluates(a, b, e):
    pa, pb = EpsPoly(a), EpsPoly(b)
    assert (pa * pb).evaluate(e) == pa.evaluate(e) * pb.evaluate(e)


@settings(max_examples=40)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=3), st.integers(0, 3), st.integers(0, 3),
       st.fractions(min_value=Fraction(1, 10), max_value=Fraction(9, 10), max_denominator=20))
def test_localfrac_matches_ratfunc(num, e1, e2, x):
    v1, v2 = Poly([1, 1]), Poly([2, 0, 1])
    ring = LocalRing((v1, v2))
    f = ring.poly(Poly(num)) * ring.inverse_factor(0, e1) * ring.inverse_factor(1, e2)
    assert f(x) == Poly(num)(x) / (v1(x) ** e1 * v2(x) ** e2)
    assert f.to_ratfunc()(x) == f(x)
    assert f.derivative()(x) == f.to_ratfunc().derivative()(x)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-40, 40), min_size=1, max_size=4),
       st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=6, max_size=14),
       st.lists(st.integers(-9, 9), min_size=6, max_size=14))
def test_modular_gcd_agrees_with_subresultant(g, a, b):
    from p2cert.exactmath.poly import modular_gcd_int, mul_int, subresultant_gcd_int, trim
    g = trim(g) or [1]
    a, b = trim(mul_int(g, a)), trim(mul_int(g, b))
    if len(a) < 2 or len(b) < 2:
        return
    assert modular_gcd_int(a, b) == subresultant_gcd_int(a, b)
