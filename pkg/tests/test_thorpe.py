from __future__ import annotations

import itertools
import random
from fractions import Fraction
from types import SimpleNamespace

import pytest
from hypothesis import given, settings, strategies as st

from p2cert import thorpe
from p2cert.curvature import UNIT_LABELS
from p2cert.exactmath import EpsPoly

from conftest import direct_N


@pytest.fixture(scope="module")
def params(frames):
    return [thorpe.build_params(fr) for fr in frames]


def test_three_sasakian_params():
    one = Fraction(1)
    fr = SimpleNamespace(gamma=(one,) * 3, beta=(one,) * 3, Nbase=(0, Fraction(0), 0))
    p = thorpe.build_params(fr)
    for i in range(3):
        assert p.a[i] == EpsPoly({1: one, 2: -one})
        assert p.b[i] == EpsPoly({1: -one, 2: one})
        assert p.c[i].is_zero()
    assert p.d1.is_zero()


def test_d2_is_minus_N2(p2, frames, params):
    fr, p = frames[0], params[0]
    assert p.d2 == EpsPoly({0: -fr.Nbase[1]})
    t = Fraction(1, 20)
    vals = [f(t) for f in p2.v]
    ders = [f.derivative_at(t, 1) for f in p2.v]
    assert p.d2.coeff(0)(t) == -direct_N(vals, ders, 1)


def test_blocks_symmetric_and_A0_diagonal(frames, params):
    for fr, p in zip(frames, params):
        for label in thorpe.BLOCK_LABELS:
            blk = thorpe.build_block(fr, p, label)
            assert blk.is_symmetric()
        a0 = thorpe.build_block(fr, p, "A0")
        assert all(a0.entries[r][c].is_zero() for r in range(3) for c in range(3) if r != c)
        for i in range(3):
            assert a0.entries[i][i] == EpsPoly({2: fr.beta[i] * fr.beta[i]})


def test_A23_entry_12(frames, params):
    fr, p = frames[1], params[1]
    b, g = fr.beta, fr.gamma
    e = thorpe.build_block(fr, p, "A23").entry(1, 2)
    assert e == EpsPoly({2: g[1] * g[2] - b[1] * b[2]})
    # the 2x2 display writes the same entry as eps gamma1 - eps^2 beta2 beta3 - a1
    assert e == EpsPoly({1: g[0], 2: -(b[1] * b[2])}) - p.a[0]


def test_A12_entry_45(frames, params):
    for fr, p in zip(frames, params):
        e = thorpe.build_block(fr, p, "A12").entry(4, 5)
        assert e == EpsPoly({0: fr.Nbase[2] - fr.Nbase[1]})


def test_raw_A0_without_4form(frames, oracles):
    fr, orc = frames[0], oracles[0]
    a0 = thorpe.assemble_from_4form(orc, None, ["A0"])["A0"]
    g = fr.gamma
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        assert a0.entries[i][j] == EpsPoly({1: g[k], 2: -(g[i] * g[j])})


def test_assembly_reproduces_displayed_blocks(frames, params):
    for fr, p in zip(frames, params):
        got = thorpe.assemble_from_4form(thorpe.TableCurvature(fr), p.eta())
        for label in thorpe.BLOCK_LABELS:
            assert got[label].entries == thorpe.build_block(fr, p, label).entries


def test_exact_mode_blocks_symmetric(frames, oracles, params):
    blk = thorpe.build_block(frames[0], params[0], "A12", mode="exact", oracle=oracles[0])
    assert blk.is_symmetric()


def test_nothing_outside_the_blocks(frames, oracles, params):
    for orc, p in zip(oracles, params):
        assert thorpe.off_block_entries(orc, p.eta()) == []


def test_eps_degrees_and_leading_terms(frames, params):
    for fr, p in zip(frames, params):
        for label, (i, j, k) in thorpe.BLOCK_TRIPLES.items():
            ms = thorpe.leading_minors(thorpe.build_block(fr, p, label), max_degree=6)
            assert tuple(m.eps_degree for m in ms) == thorpe.EXPECTED_DEGREES
            b, g = fr.beta, fr.gamma
            assert ms[0].leading_frac == g[i] * g[i]
            m12 = g[i] * g[j] - b[i] * b[j]
            assert ms[1].leading_frac == g[i] * g[i] * g[j] * g[j] - m12 * m12


def test_six_by_six_is_symmetric(frames, params):
    blk = thorpe.build_block(frames[2], params[2], "A31", size=6)
    assert blk.dim == 6 and blk.is_symmetric()


def test_alpha_independence(frames, oracles):
    for fr, orc in zip(frames, oracles):
        res = thorpe.alpha_independence(fr, orc)
        assert all(all(v) for v in res.values())


def test_ratio_conditions(frames):
    for fr in frames:
        for label, res in thorpe.eq35_identities(fr).items():
            assert res["corrected_k2"] and res["corrected_k3"], label
            assert not res["printed_k2"] and not res["printed_k3"], label


def test_printed_variant_changes_only_one_entry(frames, params):
    fr, p = frames[0], params[0]
    a = thorpe.build_block(fr, p, "A12")
    b = thorpe.build_block(fr, p, "A12", variant="printed")
    diff = [(r, c) for r in range(5) for c in range(5) if a.entries[r][c] != b.entries[r][c]]
    assert diff == [(2, 3), (3, 2)]


def test_determinants_at_eps_match_substitution(frames, params):
    fr, p = frames[1], params[1]
    blk = thorpe.build_block(fr, p, "A23")
    eps, t = Fraction(1, 50), Fraction(3, 10)
    vals = thorpe.determinants_at_eps(blk, eps, 3)
    dets = thorpe.determinants(blk, 3)
    for v, d in zip(vals, dets):
        assert v(t) == d.evaluate(eps, t)


def test_eta_breaks_bianchi(frames, oracles, params):
    orc, eta = oracles[0], params[0].eta()
    t, e = Fraction(1, 20), Fraction(1, 7)
    tup = ("X1", "X2", "Z1", "Z2")
    assert not eta(*tup).is_zero()

    def mod(a, b, c, d):
        return (orc.component(a, b, c, d) + eta(a, b, c, d)).evaluate(e, t)

    x, y, z, w = tup
    raw = sum(orc.component(*q, w).evaluate(e, t) for q in ((x, y, z), (y, z, x), (z, x, y)))
    assert raw == 0
    assert mod(x, y, z, w) + mod(y, z, x, w) + mod(z, x, y, w) != 0


coef = st.fractions(min_value=-5, max_value=5, max_denominator=7).map(lambda c: EpsPoly({1: c}))


@settings(max_examples=50, deadline=None)
@given(st.lists(coef, min_size=11, max_size=11), st.permutations(range(7)), st.permutations(range(4)))
def test_eta_is_alternating(cs, order, perm):
    p = thorpe.PuttmannParams(tuple(cs[0:3]), tuple(cs[3:6]), tuple(cs[6:9]), cs[9], cs[10])
    eta = p.eta()
    tup = [UNIT_LABELS[x] for x in order[:4]]
    base = eta(*tup)
    moved = eta(*[tup[n] for n in perm])
    sign = 1
    for a, b in itertools.combinations(range(4), 2):
        if perm[a] > perm[b]:
            sign = -sign
    assert moved == (base if sign > 0 else -base)
    assert eta(tup[0], tup[0], tup[1], tup[2]).is_zero()


def test_laplace_matches_naive_determinant():
    rng = random.Random(3)
    m = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(5)] for _ in range(5)]
    got = thorpe._leading_dets(m, 5, lambda x, y: x * y, lambda x: x == 0, Fraction(0))

    def naive(a):
        n = len(a)
        total = Fraction(0)
        for p in itertools.permutations(range(n)):
            s = 1
            for x, y in itertools.combinations(range(n), 2):
                if p[x] > p[y]:
                    s = -s
            prod = Fraction(s)
            for r in range(n):
                prod *= a[r][p[r]]
            total += prod
        return total

    assert got == [naive([row[:k] for row in m[:k]]) for k in range(1, 6)]
