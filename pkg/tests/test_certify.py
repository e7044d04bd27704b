from __future__ import annotations

import copy
import json
from fractions import Fraction

import pytest

from p2cert import certify
from p2cert.certify import (
    JetError,
    VerifyConfig,
    endpoint_inequality_L,
    endpoint_inequality_zero,
    endpoint_jets,
    hitchin_jet,
    open_sign_check,
)
from p2cert.curvature import compute_frame
from p2cert.exactmath import Poly
from p2cert.metricdef.metric import metric_from_json, p2_metric_data
from p2cert.replay import replay, sturm_verdict

F = Fraction


def variant(edit) -> object:
    data = p2_metric_data()
    edit(data)
    return metric_from_json(data)


# -- endpoint inequalities -------------------------------------------------------

def test_endpoint_jets_of_p2(p2):
    jets = endpoint_jets(p2)
    assert jets["t=0"] == {"a2": F(149, 200), "b2": F(11, 9), "c2": F(1, 10), "d0": F(10)}
    assert jets["t=L"] == {"a1": F(5, 4), "c1": F(3), "d3": F(3, 10), "ell": F(3)}


def test_endpoint_inequalities_hold_for_p2():
    ok0, d0 = endpoint_inequality_zero(F(149, 200), F(11, 9), F(1, 10), F(10))
    okL, dL = endpoint_inequality_L(F(5, 4), F(3), F(3, 10), F(3))
    assert ok0 and okL
    # exact: Q = 3 (b2^2 + 2) d0, R = (3 |4 - b2^2| - 2 c2 a2) / a2
    assert F(d0["Q"]) == 3 * (F(121, 81) + 2) * 10
    assert F(dL["Q"]) == 6 * F(3, 10) * 3


def test_endpoint_zero_right_side_vanishes():
    ok, data = endpoint_inequality_zero(F(1, 3), 2, F(-1, 10), F(1, 100))
    assert ok and data["branch"] in ("squared", "right side negative")
    assert F(data["R"]) == -2 * F(-1, 10)  # only -2 c2 survives when b2 = 2


def test_hitchin_jet_fails_at_zero():
    jet = hitchin_jet()
    ok, _ = endpoint_inequality_zero(**jet)
    assert not ok
    a = jet["a2"]
    assert jet["c2"] < 0 or 5 * a * a < 3


def test_endpoint_inequality_rejects_nonpositive_a():
    with pytest.raises(JetError):
        endpoint_inequality_zero(0, 1, 1, 1)


def test_jet_error_on_wrong_template():
    m = variant(lambda d: d["v"]["1"][0].update(coeffs=["0", "3", "0", "-10"]))
    with pytest.raises(JetError):
        endpoint_jets(m)


# -- single checks --------------------------------------------------------------------

def test_open_sign_check_strips_prescribed_zeros(p2):
    vs, _ = p2.piece_polys(0)
    a, b = p2.interval(0)
    ok = open_sign_check("v1", "v1 positive", vs[0], a, b, "positive", (F(0),))
    assert ok.passed and ok.data["stripped"] == {"a": 1}
    strict = open_sign_check("v1", "v1 positive", vs[0], a, b, "positive", ())
    assert not strict.passed


def test_open_sign_check_flags_interior_zero():
    p = Poly([F(-1, 4), 0, 1])  # zero at 1/2
    assert not open_sign_check("p", "p", p, F(0), F(1), "negative", (F(0), F(1))).passed


def test_fatness_gamma2_on_first_piece(frames):
    checks = certify.check_fatness(frames[0])
    assert len(checks) == 6 and all(c.passed for c in checks)
    g2 = [c for c in checks if c.name == "fatness: gamma2 > 0 on [0,1/10]"]
    assert len(g2) == 1
    num = next(p for p in g2[0].polys if p["role"] == "numerator")
    assert num["sturm"]["sign_changes"] == [2, 2]


def test_flipped_metric_fails_gamma2():
    m = variant(lambda d: d["conventions"].update(v3_sign=1))
    checks = certify.check_fatness(compute_frame(m, 0))
    failed = {c.name for c in checks if not c.passed}
    assert "fatness: gamma2 > 0 on [0,1/10]" in failed


def test_constant_h1_fails_fatness():
    def edit(d):
        d["h"]["1"][0]["coeffs"] = ["1"]
        d["h"]["1"][2]["coeffs"] = ["1"]
    m = variant(edit)
    checks = certify.check_fatness(compute_frame(m, 0))
    beta1 = next(c for c in checks if c.name.startswith("fatness: beta1"))
    assert not beta1.passed
    assert "identically zero" in beta1.data["witness"]


def test_perturbed_metric_fails_named_check():
    m = variant(lambda d: d["v"]["2"][0]["coeffs"].__setitem__(3, "-1"))
    fr = compute_frame(m, 1)
    failed = [c.name for c in certify.check_hyperfatness(fr) + certify.check_base_positive(fr) if not c.passed]
    assert "HF I: (beta2'/beta2)^2 < L2 on [1/10,1/2]" in failed


def test_base_positivity_trivial_branch():
    from p2cert.curvature import frame_from_polys
    c = [Poly([2]), Poly([2]), Poly([-2])]
    fr = frame_from_polys(c, [Poly([1])] * 3)
    checks = certify.check_base_positive(fr)
    cover = [c for c in checks if c.kind == "cover"]
    assert all(c.data.get("trivial") for c in cover)


def test_verify_config_validation():
    with pytest.raises(ValueError):
        VerifyConfig(mode="exact")
    with pytest.raises(ValueError):
        VerifyConfig(mode="exact", eps=F(2))
    with pytest.raises(ValueError):
        VerifyConfig(variant="other")
    assert VerifyConfig(mode="exact", eps=F(1, 100)).to_json()["eps"] == "1/100"


# -- the shipped certificate ----------------------------------------------------------

def test_certificate_passes(certificate):
    assert certificate.overall == "PASS", [c.name for c in certificate.failures()]
    names = [c.name for c in certificate.checks]
    assert len(names) == len(set(names))


def test_certificate_counts(certificate):
    minors = [c for c in certificate.checks if c.group == "minors" and c.kind == "sign"]
    assert len(minors) == 45
    fat = [c for c in certificate.checks if c.group == "fatness"]
    assert len(fat) == 18


def test_certificate_is_a_dag(certificate):
    seen = set()
    for c in certificate.checks:
        assert set(c.depends) <= seen, c.name
        seen.add(c.name)


def test_certificate_schema(certificate):
    doc = json.loads(certificate.dumps())
    assert set(doc) >= {"format", "metric_sha256", "mode", "config", "checks", "overall"}
    for c in doc["checks"]:
        assert {"name", "anchor", "kind", "verdict"} <= set(c)
        if c["kind"] == "sign":
            assert {p["role"] for p in c["polys"]} == {"numerator", "denominator"}


def test_certificate_findings(certificate):
    for found in certificate.notes["findings"].values():
        assert found["printed_table_mismatches"] == ["R_ZiZjXkT"]
        assert not any(found["printed_ratio_conditions_equivalent"].values())
    assert certificate.notes["smoothness"]["c3"] is False


def test_replay_agrees(certificate):
    report = replay(json.loads(certificate.dumps()))
    assert report.agrees and report.replayed_overall == "PASS"


def test_replay_detects_tampering(certificate):
    doc = json.loads(certificate.dumps())
    target = next(c for c in doc["checks"] if c["name"] == "fatness: gamma2 > 0 on [0,1/10]")
    num = next(p for p in target["polys"] if p["role"] == "numerator")
    num["poly"][0] = str(-10 ** 9)
    report = replay(doc)
    assert [e.name for e in report.disagreements()] == [target["name"]]

    doc = json.loads(certificate.dumps())
    ident = next(c for c in doc["checks"] if c["kind"] == "identity")
    ident["data"]["rhs_sha256"] = "0" * 64
    assert [e.name for e in replay(doc).disagreements()] == [ident["name"]]


def test_replay_verdicts_match_certifier():
    from p2cert.sturm import certify_positive
    cases = [([-2, 0, 1], F(0), F(2)), ([1, 0, 1], F(-3), F(3)), ([-1, 3], F(1, 3), F(1)),
             ([-1, 3], F(0), F(1, 3)), ([4, -4, 1], F(0), F(3))]
    for coeffs, a, b in cases:
        assert sturm_verdict(coeffs, F(0), a, b).verdict == certify_positive(Poly(coeffs), a, b).verdict.value
