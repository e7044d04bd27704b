from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from p2cert.curvature import (
    UNIT_LABELS,
    GeneralMetricData,
    UnitFrameCurvature,
    audit_table,
    base_curvature,
    bianchi_residuals,
    compute_frame,
    connection_curvature,
    frame_from_polys,
    general_curvature,
    sample_points,
    table_lookup,
)
from p2cert.curvature.connection import canonical
from p2cert.exactmath import EpsPoly, Poly, RatFunc

from conftest import GAMMA2_NUM, direct_N

T_EPS = (Fraction(1, 4), Fraction(1, 100))


def gamma2_quotient() -> RatFunc:
    den = Poly([-2, 0, 5]) * Poly([-1341, -2200, 180, 1260]) * 187
    return RatFunc(Poly(GAMMA2_NUM) * 180, den)


def test_gamma2_reproduces_displayed_quotient(frames):
    assert frames[0].ratfunc("gamma2") == gamma2_quotient()


def test_gamma2_with_unnegated_v3_is_negative_near_zero():
    from p2cert.metricdef import metric_from_json, p2_metric_data
    data = p2_metric_data()
    data["conventions"]["v3_sign"] = 1
    fr = compute_frame(metric_from_json(data), 0)
    assert fr.ratfunc("gamma2")(Fraction(1, 20)) < 0 < gamma2_quotient()(Fraction(1, 20))


def test_constant_metric_degenerates():
    c = [Poly([2]), Poly([3]), Poly([-5])]
    fr = frame_from_polys(c, [Poly([1]), Poly([Fraction(1, 2)]), Poly([0])])
    for i in (1, 2, 3):
        assert fr.ratfunc(f"L{i}").is_zero()
        assert fr.ratfunc(f"beta{i}").is_zero()


def test_round_degeneration():
    c = Fraction(3, 2)
    fr = frame_from_polys([Poly([c]), Poly([c]), Poly([-c])], [Poly([0])] * 3)
    for i in (1, 2, 3):
        assert fr.ratfunc(f"M{i}") == RatFunc(1 / (c * c))


def test_L_for_v1(p2):
    Lb, _, _ = base_curvature(p2, 0)
    assert Lb[0] == RatFunc(Poly([30]), Poly([2, 0, -5]))


def test_N_difference_by_direct_evaluation(p2, frames):
    t = Fraction(1, 4)
    vals = [f(t) for f in p2.v]
    ders = [f.derivative_at(t, 1) for f in p2.v]
    fr = frames[1]
    got = fr.ratfunc("N1")(t) - fr.ratfunc("N2")(t)
    assert got == direct_N(vals, ders, 0) - direct_N(vals, ders, 1)


def test_table_constants(frames, oracles):
    for fr, orc in zip(frames, oracles):
        assert orc.component("X1", "X2", "X1", "X2") == EpsPoly({1: Fraction(1)})
        assert orc.component("X1", "X2", "X3", "T").is_zero()
        table = table_lookup(connection_curvature(fr, orc))
        key, _ = canonical(0, 1, 0, 1)
        assert table[key][0] == EpsPoly({1: Fraction(1)})


def test_worked_identity_at_a_point(frames, oracles):
    t, e = T_EPS
    fr, orc = frames[1], oracles[1]
    val = orc.component("X1", "Z2", "Z3", "T").evaluate(e, t)
    assert val == e * fr.quantity("C12")(t)


def test_ZT_sectional_at_a_point(frames, oracles):
    t, e = T_EPS
    fr, orc = frames[1], oracles[1]
    for i in range(3):
        val = orc.component(f"Z{i + 1}", "T", f"Z{i + 1}", "T").evaluate(e, t)
        assert val == fr.quantity(f"L{i + 1}")(t) - 3 * e * fr.quantity(f"beta{i + 1}")(t) ** 2


def test_XT_sectional(frames, oracles):
    for fr, orc in zip(frames, oracles):
        for i in range(3):
            want = EpsPoly({2: fr.beta[i] * fr.beta[i]})
            assert orc.component(f"X{i + 1}", "T", f"X{i + 1}", "T") == want


def test_pure_action_components_pass_through(oracles):
    orc = oracles[0]
    for tup in ((0, 1, 0, 1), (0, 6, 1, 6), (0, 1, 2, 6)):
        assert orc.component(*tup) == orc.gz.component(*tup)


def test_biinvariant_product():
    one, zero = [Fraction(1)] * 3, [Fraction(0)] * 3
    eng = general_curvature(GeneralMetricData.at_point(one, one, zero, zero, zero, zero, zero, zero, zero))
    for i, j in ((0, 1), (1, 2), (2, 0)):
        assert eng.component(i, j, i, j) == 1
        assert eng.component(i, 3 + j, i, 3 + j) == 0


def test_corrected_table_matches_oracle(frames, oracles):
    for fr, orc in zip(frames, oracles):
        bad = [e for e in audit_table(fr, orc, printed=False, anticyclic=True) if not e.matches]
        assert bad == []


def test_literal_table_mismatches_are_localized(frames, oracles):
    for fr, orc in zip(frames, oracles):
        audit = audit_table(fr, orc)
        mismatched = {e.family for e in audit if e.family and not e.matches}
        assert mismatched == {"R_ZiZjXkT"}
        assert len([e for e in audit if e.family is None and not e.matches]) == 12


def test_odd_families_pick_up_the_permutation_sign(frames, oracles):
    fr, orc = frames[0], oracles[0]
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        cyc = orc.component(f"X{i + 1}", f"Z{j + 1}", f"Z{k + 1}", "T")
        anti = orc.component(f"X{i + 1}", f"Z{k + 1}", f"Z{j + 1}", "T")
        assert cyc == EpsPoly({1: fr.C[(i, j)]})
        assert anti == EpsPoly({1: -fr.C[(i, k)]})


def test_bianchi_on_oracle(frames, oracles):
    for fr, orc in zip(frames, oracles):
        assert bianchi_residuals(orc, sample_points(fr, 2, 7)) == []


# -- independent oracle: Levi-Civita connection via the Koszul formula ------------------

def _koszul_curvature(f, g, h, s):
    n = 7
    G = sp.zeros(n, n)
    for i in range(3):
        G[i, i], G[i + 3, i + 3] = f[i], g[i]
        G[i, i + 3] = G[i + 3, i] = h[i]
    G[6, 6] = 1
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for off in (0, 3):
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            c[i + off][j + off][k + off] = 2
            c[j + off][i + off][k + off] = -2
    Ginv = G.inv()
    dd = lambda a, e: sp.diff(e, s) if a == 6 else 0
    br = lambda a, b, d: sum(c[a][b][e] * G[e, d] for e in range(n))
    Gam = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            low = [sp.Rational(1, 2) * (dd(a, G[b, d]) + dd(b, G[a, d]) - dd(d, G[a, b])
                                        + br(a, b, d) - br(a, d, b) - br(b, d, a)) for d in range(n)]
            Gam[a][b] = [sp.expand(sum(Ginv[e, d] * low[d] for d in range(n))) for e in range(n)]

    def nabla(a, vec):
        out = [0] * n
        for e in range(n):
            if vec[e] == 0:
                continue
            out[e] += dd(a, vec[e])
            for q in range(n):
                out[q] += vec[e] * Gam[a][e][q]
        return out

    def R(a, b, cc, d):
        v1, v2 = nabla(a, Gam[b][d]), nabla(b, Gam[a][d])
        v3 = [0] * n
        for e in range(n):
            if c[a][b][e]:
                for q in range(n):
                    v3[q] += c[a][b][e] * Gam[e][d][q]
        return sum((v1[q] - v2[q] - v3[q]) * G[q, cc] for q in range(n))

    return R


def test_general_engine_against_koszul():
    s = sp.symbols("s")
    rng = random.Random(5)

    def rp(base):
        return base + sum(sp.Rational(rng.randint(-9, 9), rng.randint(1, 6)) * s ** k for k in range(3))

    f = [rp(6) for _ in range(3)]
    g = [rp(7) for _ in range(3)]
    h = [rp(0) for _ in range(3)]
    R = _koszul_curvature(f, g, h, s)
    t0 = sp.Rational(1, 3)
    val = lambda e: Fraction(str(sp.nsimplify(e.subs(s, t0))))
    jet = lambda fs, o: [val(sp.diff(x, s, o)) for x in fs]
    eng = general_curvature(GeneralMetricData.at_point(
        jet(f, 0), jet(g, 0), jet(h, 0), jet(f, 1), jet(g, 1), jet(h, 1), jet(f, 2), jet(g, 2), jet(h, 2)))
    tuples = [(0, 1, 0, 1), (0, 3, 1, 4), (3, 4, 0, 6), (0, 4, 2, 6), (3, 4, 5, 6), (0, 6, 0, 6),
              (0, 6, 3, 6), (0, 1, 2, 6), (1, 5, 2, 6), (0, 1, 3, 4)]
    tuples += [tuple(rng.randrange(7) for _ in range(4)) for _ in range(20)]
    for tup in tuples:
        assert val(R(*tup)) == eng.component(*tup), tup


# -- algebraic symmetries of the general engine at random jets -------------------------

jets = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=3, max_size=3)
idx = st.integers(0, 6)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=1, max_value=4, max_denominator=5), jets, jets, jets, jets, idx, idx, idx, idx)
def test_curvature_symmetries(base, hv, d1, d2, d3, a, b, c, d):
    f = [base + x * x for x in hv]
    g = [2 * base + x * x for x in d1]
    h = [x / 4 for x in hv]
    eng = general_curvature(GeneralMetricData.at_point(f, g, h, d1, d2, d3, d2, d3, d1))
    R = eng.component
    assert R(a, b, c, d) == -R(b, a, c, d) == -R(a, b, d, c)
    assert R(a, b, c, d) == R(c, d, a, b)
    assert R(a, b, c, d) + R(b, c, a, d) + R(c, a, b, d) == 0


def test_unit_labels():
    assert UNIT_LABELS == ("X1", "X2", "X3", "Z1", "Z2", "Z3", "T")
