from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from p2cert.exactmath import IntPoly, Poly, RatFunc
from p2cert.sturm import (
    Sign,
    Verdict,
    certify_many,
    certify_positive,
    certify_sign,
    count_roots,
    evaluate_chain,
    sign_changes,
    squarefree_part,
    sturm_sequence,
)

from conftest import GAMMA2_NUM

P3 = [-57870, -380205, -306498, 590240, 318128]
P45 = [-61495144443148677710, -69541807934598114885, 64022592445768027674]
P6 = [-62700752036018098289608090, -117945618693411267877827243]


def planted(rng: random.Random) -> tuple[Poly, Fraction, Fraction, int]:
    """A polynomial with known rational roots (some repeated) and root-free quadratic factors."""
    a = Fraction(rng.randint(-20, 10), rng.randint(1, 6))
    b = a + Fraction(rng.randint(1, 30), rng.randint(1, 6))
    p = Poly([rng.choice([-3, -2, -1, 1, 2, 5])])
    roots = set()
    for _ in range(rng.randint(0, 5)):
        r = Fraction(rng.randint(-60, 60), rng.randint(1, 8))
        mult = rng.choice([1, 1, 1, 2, 3])
        p = p * Poly([-r, 1]) ** mult
        roots.add(r)
    for _ in range(rng.randint(0, 2)):
        c = Fraction(rng.randint(1, 50), rng.randint(1, 7))
        p = p * Poly([c, 0, 1])
    if p.degree == 0:
        p = p * Poly([1, 0, 1])
    return p, a, b, sum(1 for r in roots if a < r <= b)


def test_planted_root_battery():
    rng = random.Random(20240611)
    for _ in range(500):
        p, a, b, want = planted(rng)
        assert count_roots(p, a, b) == want


def test_gamma2_chain_matches_listing():
    seq = sturm_sequence(IntPoly.of(GAMMA2_NUM))
    coeffs = [list(t.coeffs) for t in seq.terms]
    assert len(coeffs) == 7
    assert coeffs[0] == GAMMA2_NUM
    assert coeffs[2] == P3
    assert coeffs[4] == P45
    assert coeffs[5] == P6
    assert coeffs[6] == [1]
    assert not seq.multiplicity_discarded


def test_gamma2_chain_endpoint_values():
    seq = sturm_sequence(IntPoly.of(GAMMA2_NUM))
    at0 = evaluate_chain(seq, 0)
    listed = [2720, 4620, -57870, P45[0], P6[0], 1]
    # the listing repeats one polynomial; drop our cubic to compare
    ours = [at0[n] for n in (0, 1, 2, 4, 5, 6)]
    assert all(x / y > 0 for x, y in zip(ours, listed))
    assert evaluate_chain(seq, Fraction(1, 10))[0] == Fraction(3120783174, 1000000)
    assert sign_changes(at0) == 2
    assert sign_changes(evaluate_chain(seq, Fraction(1, 10))) == 2
    assert count_roots(IntPoly.of(GAMMA2_NUM), 0, Fraction(1, 10)) == 0


def test_small_chains():
    seq = sturm_sequence(Poly([-1, 0, 1]))
    assert [t.coeffs for t in seq.terms] == [(-1, 0, 1), (0, 1), (1,)]
    seq = sturm_sequence(Poly([0, 1]))
    assert [t.coeffs for t in seq.terms] == [(0, 1), (1,)]


def test_count_roots_examples():
    assert count_roots(Poly([-1, 0, 1]), 0, 2) == 1
    p = Poly([-Fraction(1, 4), 1]) * Poly([-Fraction(1, 2), 1]) * Poly([-Fraction(3, 4), 1])
    assert count_roots(p, 0, 1) == 3
    with pytest.raises(ValueError):
        count_roots(p, 1, 0)


def test_chain_at_root_starts_with_zero():
    p = Poly([-2, 0, 1]) * Poly([-1, 3])
    seq = sturm_sequence(p)
    assert evaluate_chain(seq, Fraction(1, 3))[0] == 0


def test_squarefree_examples():
    p = Poly([-1, 1]) ** 2 * Poly([2, 1])
    assert squarefree_part(p).coeffs == (-2, 1, 1)
    q = IntPoly.of(GAMMA2_NUM)
    assert squarefree_part(q) == q


def test_certify_positive_examples():
    assert certify_positive(IntPoly.of(GAMMA2_NUM), 0, Fraction(1, 10)).verdict == Verdict.STRICTLY_POSITIVE
    assert certify_positive(Poly([0, 1]), 0, 1).verdict == Verdict.BOUNDARY_ZERO
    assert certify_positive(Poly([1, -1]), 0, Fraction(1, 2)).verdict == Verdict.STRICTLY_POSITIVE
    assert certify_positive(Poly([-1, 1]), 0, 1).verdict == Verdict.HAS_ZERO


def test_double_root_is_reduced():
    cert = certify_positive(Poly([Fraction(1, 9), Fraction(-2, 3), 1]), 0, 1)
    assert cert.squarefree_reduced
    assert cert.roots_in_half_open == 1
    assert cert.verdict == Verdict.HAS_ZERO


def test_certify_sign_examples():
    den = Poly([-2, 0, 5]) * Poly([-1341, -2200, 180, 1260]) * 187
    g2 = RatFunc(Poly(GAMMA2_NUM) * 180, den)
    assert certify_sign(g2, 0, Fraction(1, 10)).sign == Sign.POSITIVE
    assert certify_sign(RatFunc(Fraction(-3, 2)), 0, 1).sign == Sign.NEGATIVE
    res = certify_sign(RatFunc(Poly([-Fraction(1, 20), 1])), 0, Fraction(1, 10))
    assert res.sign == Sign.INDETERMINATE
    assert res.numerator.roots_in_half_open == 1
    assert "roots in (a,b] = 1" in res.witness


def test_certify_many_keeps_order():
    items = [(RatFunc(Poly([k, 1])), Fraction(0), Fraction(1)) for k in (-3, 2, Fraction(-1, 2))]
    signs = [r.sign for r in certify_many(items, jobs=2)]
    assert signs == [Sign.NEGATIVE, Sign.POSITIVE, Sign.INDETERMINATE]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-12, 12), min_size=2, max_size=7).filter(lambda c: c[-1] != 0),
       st.fractions(min_value=-3, max_value=3, max_denominator=7),
       st.fractions(min_value=Fraction(1, 7), max_value=4, max_denominator=7))
def test_root_count_matches_sympy(coeffs, a, width):
    b = a + width
    t = sp.symbols("t")
    expr = sum(c * t ** n for n, c in enumerate(coeffs))
    ref = sum(1 for r in sp.Poly(expr, t).real_roots()
              if sp.Rational(a.numerator, a.denominator) < r <= sp.Rational(b.numerator, b.denominator))
    ref_distinct = len({r for r in sp.Poly(expr, t).real_roots()
                        if sp.Rational(a.numerator, a.denominator) < r <= sp.Rational(b.numerator, b.denominator)})
    assert count_roots(Poly(coeffs), a, b) == ref_distinct
    assert ref >= ref_distinct


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6).filter(lambda c: any(c)),
       st.fractions(min_value=-2, max_value=2, max_denominator=5))
def test_verdict_consistent_with_values(coeffs, a):
    b = a + 1
    p = Poly(coeffs)
    cert = certify_positive(p, a, b)
    grid = [a + Fraction(k, 16) for k in range(17)]
    if cert.verdict == Verdict.STRICTLY_POSITIVE:
        assert all(p(x) > 0 for x in grid)
    elif cert.verdict == Verdict.STRICTLY_NEGATIVE:
        assert all(p(x) < 0 for x in grid)
    if any(p(x) == 0 for x in grid):
        assert cert.verdict in (Verdict.HAS_ZERO, Verdict.BOUNDARY_ZERO)
