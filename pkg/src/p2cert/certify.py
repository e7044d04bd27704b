"""The positivity proof as a list of independently checkable certificates.

Every check records enough data (integer polynomials, intervals, Sturm sign
patterns, exact constants or digests of canonical forms) for
:mod:`p2cert.replay` to re-derive its verdict without recomputing curvature.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .curvature.connection import (
    UNIT_LABELS,
    UnitFrameCurvature,
    audit_table,
    canonical,
    connection_curvature,
    sample_points,
    bianchi_residuals,
)
from .curvature.frame import CYCLIC, ORDERED_PAIRS, CurvatureFrame, compute_frame, third
from .exactmath.localfrac import LocalFrac
from .exactmath.poly import IntPoly, Poly, exact_div_int, primitive_int
from .exactmath.ratfunc import RatFunc
from .exactmath.rational import as_rational, format_rational
from .metricdef.metric import PiecewiseMetric
from .metricdef.smoothness import check_smoothness
from .sturm import SignResult, Verdict, certify_many, certify_positive
from . import thorpe

FORMAT = "p2cert-certificate/1"
PASS, FAIL = "PASS", "FAIL"


class JetError(ValueError):
    """The endpoint pieces do not have the shape the endpoint inequalities need."""


@dataclass
class Check:
    name: str
    anchor: str
    kind: str
    passed: bool
    interval: tuple[Fraction, Fraction] | None = None
    expect: str = "positive"
    polys: list[dict] = field(default_factory=list)
    parts: list[dict] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    depends: tuple[str, ...] = ()
    group: str = ""

    @property
    def verdict(self) -> str:
        return PASS if self.passed else FAIL

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "name": self.name,
            "group": self.group,
            "anchor": self.anchor,
            "kind": self.kind,
            "interval": None if self.interval is None else [format_rational(x) for x in self.interval],
            "verdict": self.verdict,
        }
        if self.kind in ("sign", "sign_open"):
            out["expect"] = self.expect
        if self.polys:
            out["polys"] = self.polys
        if self.parts:
            out["parts"] = self.parts
        if self.data:
            out["data"] = self.data
        if self.depends:
            out["depends"] = list(self.depends)
        return out


# -- helpers ------------------------------------------------------------------

def _fmt_interval(a: Fraction, b: Fraction) -> str:
    return f"[{format_rational(a)},{format_rational(b)}]"


def digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def _rf(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, LocalFrac):
        return x.to_ratfunc()
    return RatFunc.coerce(x)


def canonical_value(x) -> Any:
    """JSON-ready canonical form of a scalar, a function of t, or an eps-polynomial."""
    if hasattr(x, "terms"):
        return {str(d): canonical_value(c) for d, c in sorted(x.terms.items())}
    if isinstance(x, (int, Fraction)):
        return format_rational(x)
    return _rf(x).to_json()


def _sign_from_result(r: SignResult, expect: str) -> bool:
    return r.sign.value.lower() == expect


def sign_checks(
    items: Sequence[tuple[str, str, Any, Fraction, Fraction]],
    *,
    expect: str = "positive",
    group: str = "",
    depends: dict[str, tuple[str, ...]] | None = None,
    data: dict[str, dict] | None = None,
    jobs: int = 1,
) -> list[Check]:
    """Sign certificates for ``(name, anchor, function, a, b)`` items."""
    funcs = [(_rf(f), as_rational(a), as_rational(b)) for _, _, f, a, b in items]
    results = certify_many(funcs, jobs)
    out = []
    for (name, anchor, _, a, b), res in zip(items, results):
        polys = [dict(res.numerator.to_json(), role="numerator"), dict(res.denominator.to_json(), role="denominator")]
        extra = dict((data or {}).get(name, {}))
        if res.witness:
            extra["witness"] = res.witness
        out.append(Check(
            name, anchor, "sign", _sign_from_result(res, expect), (as_rational(a), as_rational(b)), expect,
            polys, data=extra, depends=(depends or {}).get(name, ()), group=group,
        ))
    return out


def _strip_root(coeffs: list[int], center: Fraction, root: Fraction) -> tuple[list[int], int]:
    """Divide out ``(t - root)`` as often as it divides; returns the quotient and multiplicity."""
    s0 = root - center
    factor = [-s0.numerator, s0.denominator]  # positive multiple of (t - root)
    m = 0
    while len(coeffs) > 1:
        try:
            q = exact_div_int(coeffs, factor)
        except ArithmeticError:
            break
        coeffs, m = primitive_int(q), m + 1
    return coeffs, m


def open_sign_check(
    name: str, anchor: str, p: Poly, a: Fraction, b: Fraction, expect: str,
    allowed_zeros: Iterable[Fraction] = (), group: str = "",
) -> Check:
    """``p`` has sign ``expect`` on ``[a, b]`` minus the points in ``allowed_zeros``.

    Prescribed endpoint zeros are divided out; the quotient is certified on
    the closed interval.  Any other zero, including one at a breakpoint,
    fails the check.
    """
    _, ip = p.primitive()
    coeffs = list(ip.coeffs)
    stripped = {}
    for end, label in ((a, "a"), (b, "b")):
        if end in allowed_zeros and ip.sign_at(end) == 0:
            coeffs, m = _strip_root(coeffs, ip.center, end)
            stripped[label] = m
    q = IntPoly(tuple(coeffs), ip.center)
    cert = certify_positive(q, a, b)
    flip = (-1) ** stripped.get("b", 0)
    if cert.verdict == Verdict.STRICTLY_POSITIVE:
        sign = flip
    elif cert.verdict == Verdict.STRICTLY_NEGATIVE:
        sign = -flip
    else:
        sign = 0
    want = 1 if expect == "positive" else -1
    return Check(
        name, anchor, "sign_open", sign == want, (a, b), expect,
        [dict(cert.to_json(), role="quotient")],
        data={"original": {"center": format_rational(ip.center), "poly": [str(c) for c in ip.coeffs]},
              "stripped": stripped},
        group=group,
    )


def identity_check(name: str, anchor: str, lhs: Any, rhs: Any, group: str = "", data: dict | None = None,
                   interval=None) -> Check:
    dl, dr = digest(lhs), digest(rhs)
    d = {"lhs_sha256": dl, "rhs_sha256": dr}
    d.update(data or {})
    return Check(name, anchor, "identity", dl == dr, interval, data=d, group=group)


def exact_check(name: str, anchor: str, rule: str, payload: dict, passed: bool, group: str = "",
                interval=None) -> Check:
    return Check(name, anchor, "exact", passed, interval, data=dict(payload, rule=rule), group=group)


# -- smoothness and sign conventions --------------------------------------------

def check_smoothness_entries(m: PiecewiseMetric) -> tuple[list[Check], dict]:
    rep = check_smoothness(m)
    out = []
    for e in rep.entries:
        rhs = e.required.split("=")[-1].strip()
        if e.required.startswith("jump"):
            rhs = "0"
        out.append(exact_check(
            f"smoothness: {e.name}", f"C2 smoothness ({e.group})", "equal",
            {"lhs": e.computed, "rhs": rhs}, e.passed, group="smoothness",
        ))
    notes = {
        "c3": rep.c3_smooth,
        "c3_failures": [f"{e.name}: jump {e.computed}" for e in rep.c3_probe if not e.passed],
        "notes": list(rep.notes),
    }
    return out, notes


def check_sign_conventions(m: PiecewiseMetric) -> list[Check]:
    """``v1, v2 > 0`` on ``(0, L)``, ``v3 < 0`` on ``(0, L]`` (the stored v3 orientation)."""
    zero, L = Fraction(0), m.L
    out = []
    for piece in range(m.num_pieces):
        a, b = m.interval(piece)
        vs, _ = m.piece_polys(piece)
        iv = _fmt_interval(a, b)
        out.append(open_sign_check(f"v1 > 0 on {iv}", "sign convention v1 > 0 on (0,L)", vs[0], a, b,
                                   "positive", (zero, L), "signs"))
        out.append(open_sign_check(f"v2 > 0 on {iv}", "sign convention v2 > 0 on (0,L)", vs[1], a, b,
                                   "positive", (zero, L), "signs"))
        out.append(open_sign_check(f"v3 < 0 on {iv}", "sign convention v3 < 0 on (0,L]", vs[2], a, b,
                                   "negative", (), "signs"))
    return out


# -- fatness, hyperfatness, base ---------------------------------------------------

def _piece_tag(frame: CurvatureFrame) -> str:
    return _fmt_interval(*frame.interval)


def fatness_names(frame: CurvatureFrame) -> list[str]:
    tag = _piece_tag(frame)
    return [f"fatness: {q}{i} > 0 on {tag}" for q in ("beta", "gamma") for i in (1, 2, 3)]


def check_fatness(frame: CurvatureFrame, piece: int | None = None, jobs: int = 1) -> list[Check]:
    a, b = frame.interval
    names = fatness_names(frame)
    items = []
    for name, q in zip(names, [f"{p}{i}" for p in ("beta", "gamma") for i in (1, 2, 3)]):
        items.append((name, "fatness: beta_i > 0, gamma_i > 0", frame.ratfunc(q), a, b))
    return sign_checks(items, group="fatness", jobs=jobs)


def check_hyperfatness(frame: CurvatureFrame, piece: int | None = None, jobs: int = 1) -> list[Check]:
    a, b = frame.interval
    tag = _piece_tag(frame)
    fat = tuple(fatness_names(frame))
    items = []
    for i in range(3):
        beta = frame.ratfunc(f"beta{i + 1}")
        ratio = frame.ratfunc(f"beta_prime{i + 1}") / beta
        f = frame.ratfunc(f"L{i + 1}") - ratio * ratio
        items.append((f"HF I: (beta{i + 1}'/beta{i + 1})^2 < L{i + 1} on {tag}",
                      "HF I: (beta_i'/beta_i)^2 < L_i", f, a, b))
    for i, j in ORDERED_PAIRS:
        k = third(i, j)
        g = frame.ratfunc(f"gamma{i + 1}")
        B = frame.ratfunc(f"B{i + 1}{j + 1}")
        f = g * g * frame.ratfunc(f"M{k + 1}") - B * B
        items.append((f"HF II: B{i + 1}{j + 1}^2 < gamma{i + 1}^2 M{k + 1} on {tag}",
                      "HF II: B_ij^2 < gamma_i^2 M_k", f, a, b))
    return sign_checks(items, group="hyperfatness", depends={it[0]: fat for it in items}, jobs=jobs)


def _cover(A: RatFunc, x: RatFunc, y: RatFunc, a: Fraction, b: Fraction, depth: int = 0,
           max_depth: int = 8) -> list[dict] | None:
    """Sub-intervals of ``[a, b]`` each certified by one of the two sufficient branches."""
    A2 = A * A
    branches = (
        ("4xy-(A^2-x-y)^2", x * y * 4 - (A2 - x - y) * (A2 - x - y)),
        ("x+y-A^2", x + y - A2),
    )
    for label, f in branches:
        if f.is_zero():
            continue
        res = certify_many([(f, a, b)])[0]
        if res.positive:
            return [{
                "interval": [format_rational(a), format_rational(b)],
                "branch": label,
                "polys": [dict(res.numerator.to_json(), role="numerator"),
                          dict(res.denominator.to_json(), role="denominator")],
            }]
    if depth >= max_depth:
        return None
    mid = (a + b) / 2
    left = _cover(A, x, y, a, mid, depth + 1, max_depth)
    if left is None:
        return None
    right = _cover(A, x, y, mid, b, depth + 1, max_depth)
    if right is None:
        return None
    return left + right


def check_base_positive(frame: CurvatureFrame, piece: int | None = None, jobs: int = 1) -> list[Check]:
    a, b = frame.interval
    tag = _piece_tag(frame)
    items = []
    for i in range(3):
        items.append((f"base: L{i + 1} > 0 on {tag}", "base positivity: L_i > 0", frame.ratfunc(f"L{i + 1}"), a, b))
        items.append((f"base: M{i + 1} > 0 on {tag}", "base positivity: M_i > 0", frame.ratfunc(f"M{i + 1}"), a, b))
    out = sign_checks(items, group="base", jobs=jobs)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        A = frame.ratfunc(f"N{i + 1}") - frame.ratfunc(f"N{j + 1}")
        x = frame.ratfunc(f"L{i + 1}") * frame.ratfunc(f"M{i + 1}")
        y = frame.ratfunc(f"L{j + 1}") * frame.ratfunc(f"M{j + 1}")
        name = f"base: |N{i + 1}-N{j + 1}| < sqrt(L{i + 1}M{i + 1}) + sqrt(L{j + 1}M{j + 1}) on {tag}"
        deps = tuple(f"base: {q}{n + 1} > 0 on {tag}" for n in (i, j) for q in ("L", "M"))
        if A.is_zero():
            parts: list[dict] | None = []
            data = {"trivial": "N_i = N_j identically"}
        else:
            parts = _cover(A, x, y, a, b)
            data = {}
        out.append(Check(name, "base positivity: |N_i - N_j| < sqrt(L_i M_i) + sqrt(L_j M_j)", "cover",
                         parts is not None, (a, b), parts=parts or [], data=data, depends=deps, group="base"))
    return out


# -- endpoint inequalities -----------------------------------------------------------

def _coeff(p: Poly, n: int) -> Fraction:
    return p.coefficient(n) if n <= p.degree else Fraction(0)


def endpoint_jets(m: PiecewiseMetric) -> dict[str, dict[str, Fraction]]:
    """Taylor constants at both singular orbits, read from the end pieces."""
    vs0, _ = m.piece_polys(0)
    vsL, _ = m.piece_polys(m.num_pieces - 1)
    v1, v2, v3 = vs0[0].recenter(0), vs0[1].recenter(0), (vs0[2] * m.v3_sign).recenter(0)
    need = [
        (_coeff(v1, 0) == 0 and _coeff(v1, 1) == 4 and _coeff(v1, 2) == 0,
         "v1 = 4t - d0 t^3 + O(t^4) at t=0"),
        (_coeff(v3, 0) == _coeff(v2, 0) and _coeff(v3, 1) == -_coeff(v2, 1) and _coeff(v3, 2) == _coeff(v2, 2),
         "v3 mirrors v2 to second order at t=0"),
    ]
    L = m.L
    w1, w2, w3 = vsL[0].recenter(L), vsL[1].recenter(L), (vsL[2] * m.v3_sign).recenter(L)
    need += [
        (_coeff(w1, 1) == 0, "v1 = a1 - c1 (t-L)^2 + O((t-L)^3) at t=L"),
        (_coeff(w2, 0) == 0 and _coeff(w2, 1) == Fraction(-4, m.ell) and _coeff(w2, 2) == 0,
         "v2 = -(4/ell)(t-L) + d3 (t-L)^3 + O((t-L)^4) at t=L"),
        (_coeff(w3, 0) == _coeff(w1, 0) and _coeff(w3, 1) == 0 and _coeff(w3, 2) == _coeff(w1, 2),
         "v3 agrees with v1 to second order at t=L"),
    ]
    bad = [msg for ok, msg in need if not ok]
    if bad:
        raise JetError("endpoint jets do not match the template: " + "; ".join(bad))
    return {
        "t=0": {"a2": _coeff(v2, 0), "b2": -_coeff(v2, 1), "c2": -_coeff(v2, 2), "d0": -_coeff(v1, 3)},
        "t=L": {"a1": _coeff(w1, 0), "c1": -_coeff(w1, 2), "d3": _coeff(w2, 3), "ell": Fraction(m.ell)},
    }


def _sqrt_gt(Q: Fraction, R: Fraction) -> tuple[bool, str]:
    """Decide ``sqrt(Q) > R`` exactly."""
    if Q < 0:
        return False, "radicand negative"
    if R < 0:
        return True, "right side negative"
    return Q > R * R, "squared"


def endpoint_inequality_zero(a2, b2, c2, d0) -> tuple[bool, dict]:
    """``(sqrt(3 (b2^2 + 2) d0) + 2 c2) a2 > 3 |4 - b2^2|`` with ``a2 > 0``."""
    a2, b2, c2, d0 = (as_rational(x) for x in (a2, b2, c2, d0))
    if a2 <= 0:
        raise JetError("a2 must be positive")
    Q = 3 * (b2 * b2 + 2) * d0
    R = (3 * abs(4 - b2 * b2) - 2 * c2 * a2) / a2
    ok, branch = _sqrt_gt(Q, R)
    return ok, {"constants": {k: format_rational(v) for k, v in (("a2", a2), ("b2", b2), ("c2", c2), ("d0", d0))},
                "Q": format_rational(Q), "R": format_rational(R), "branch": branch}


def endpoint_inequality_L(a1, c1, d3, ell) -> tuple[bool, dict]:
    """``(sqrt(6 d3 ell) + 2 c1) a1 > 12 / ell`` with ``a1 > 0``."""
    a1, c1, d3, ell = (as_rational(x) for x in (a1, c1, d3, ell))
    if a1 <= 0 or ell <= 0:
        raise JetError("a1 and ell must be positive")
    Q = 6 * d3 * ell
    R = (12 / ell - 2 * c1 * a1) / a1
    ok, branch = _sqrt_gt(Q, R)
    return ok, {"constants": {k: format_rational(v) for k, v in (("a1", a1), ("c1", c1), ("d3", d3), ("ell", ell))},
                "Q": format_rational(Q), "R": format_rational(R), "branch": branch}


def hitchin_jet(digits: int = 7) -> dict[str, Fraction]:
    """Rational surrogate of the Hitchin jet at ``t = 0`` (``a = tan(pi/5)`` rounded).

    ``c2`` is taken with the sign that makes ``v2`` non-concave at ``t = 0``.
    """
    scale = 10 ** digits
    a = Fraction(round(math.tan(math.pi / 5) * scale), scale)
    b_sq = 1 + a * a
    root = math.isqrt(b_sq.numerator * scale * scale // b_sq.denominator)
    b = Fraction(root, scale)
    c = (5 * a * a - 3) / (2 * a)
    d = 4 * (a * a + 3) / (3 * a * a)
    return {"a2": a, "b2": b, "c2": c, "d0": d}


def check_endpoint_inequalities(m: PiecewiseMetric) -> list[Check]:
    jets = endpoint_jets(m)
    ok0, data0 = endpoint_inequality_zero(**jets["t=0"])
    okL, dataL = endpoint_inequality_L(**jets["t=L"])
    return [
        exact_check("endpoint inequality at t=0", "base curvature positive at t=0",
                    "endpoint_zero", data0, ok0, "endpoint"),
        exact_check("endpoint inequality at t=L", "base curvature positive at t=L",
                    "endpoint_L", dataL, okL, "endpoint"),
    ]


# -- oracle cross-checks -------------------------------------------------------------

def check_oracle(frame: CurvatureFrame, oracle: UnitFrameCurvature, seed: int = 0, samples: int = 3) -> tuple[list[Check], dict]:
    """Table families against the general formulas, plus structural identities of the blocks."""
    tag = _piece_tag(frame)
    iv = frame.interval
    out = []
    comps = connection_curvature(frame, oracle, printed=False, anticyclic=True)
    families: dict[str, tuple[list, list]] = {}
    listed = set()
    idx = {name: n for n, name in enumerate(UNIT_LABELS)}
    for c in comps:
        key, sign = canonical(*(idx[x] for x in c.label))
        listed.add(key)
        got = oracle.component(*c.label)
        lhs, rhs = families.setdefault(c.family, ([], []))
        lhs.append([list(c.label), canonical_value(c.value)])
        rhs.append([list(c.label), canonical_value(got)])
    for fam in sorted(families):
        lhs, rhs = families[fam]
        out.append(identity_check(f"oracle: {fam} on {tag}", "curvature table equals general formulas",
                                  lhs, rhs, "oracle", interval=iv))
    pairs = [(a, b) for a in range(7) for b in range(a + 1, 7)]
    stray = []
    for n, p in enumerate(pairs):
        for q in pairs[n:]:
            key = (*p, *q)
            if key not in listed and not oracle.component(*key).is_zero():
                stray.append([UNIT_LABELS[x] for x in key])
    out.append(identity_check(f"oracle: all other components vanish on {tag}",
                              "components not in the table are zero", stray, [], "oracle", interval=iv))
    bad = bianchi_residuals(oracle, sample_points(frame, samples, seed + frame.piece))
    out.append(identity_check(f"oracle: first Bianchi identity at {samples} sample points on {tag}",
                              "first Bianchi identity", [list(map(str, x[:4])) for x in bad], [], "oracle",
                              interval=iv))

    params = thorpe.build_params(frame)
    eta = params.eta()
    table = thorpe.TableCurvature(frame)
    assembled = thorpe.assemble_from_4form(table, eta)
    for label in thorpe.BLOCK_LABELS:
        shown = thorpe.build_block(frame, params, label)
        out.append(identity_check(
            f"thorpe: displayed {label} equals R + eta on {tag}", "4-form assembly reproduces the blocks",
            [[canonical_value(e) for e in row] for row in shown.entries],
            [[canonical_value(e) for e in row] for row in assembled[label].entries], "thorpe", interval=iv))
        out.append(identity_check(
            f"thorpe: {label} symmetric on {tag}", "blocks are symmetric",
            [[canonical_value(e) for e in row] for row in shown.entries],
            [[canonical_value(shown.entries[c][r]) for c in range(shown.dim)] for r in range(shown.dim)],
            "thorpe", interval=iv))
    a0 = assembled["A0"]
    off = [canonical_value(a0.entries[r][c]) for r in range(3) for c in range(3) if r != c]
    out.append(identity_check(f"thorpe: A0 diagonal on {tag}", "A0 is diagonal", off, [{}] * 6, "thorpe",
                              interval=iv))
    stray = thorpe.off_block_entries(oracle, eta)
    out.append(identity_check(f"thorpe: modified operator vanishes off the blocks on {tag}",
                              "block decomposition", [list(map(list, x)) for x in stray], [], "thorpe",
                              interval=iv))

    eq = {}
    for label in ("A12", "A23", "A31"):
        for name, (lhs, rhs) in thorpe.eq35_polynomials(frame, label).items():
            eq[(label, name)] = (lhs, rhs)
            if name.startswith("corrected"):
                out.append(identity_check(
                    f"thorpe: ratio condition {name.split('_')[1]} encodes the minor of {label} on {tag}",
                    "k <= 3 minors as ratio conditions", canonical_value(lhs), canonical_value(rhs), "thorpe",
                    interval=iv))
    audit = audit_table(frame, oracle)
    findings = {
        "printed_table_mismatches": sorted({e.family for e in audit if e.family and not e.matches}),
        "printed_table_unlisted_nonzero": [list(e.label) for e in audit if e.family is None and not e.matches],
        "printed_ratio_conditions_equivalent": {f"{lab}:{n}": lhs == rhs for (lab, n), (lhs, rhs) in eq.items()
                                                if n.startswith("printed")},
    }
    return out, findings


# -- minors -----------------------------------------------------------------------------

def minor_name(label: str, k: int, frame: CurvatureFrame, suffix: str = "") -> str:
    return f"minor: {label} k={k}{suffix} on {_piece_tag(frame)}"


def check_minors(
    m: PiecewiseMetric,
    mode: str = "leading",
    *,
    eps: Fraction | None = None,
    variant: str = "corrected",
    jobs: int = 1,
    frames: Sequence[CurvatureFrame] | None = None,
    oracles: Sequence[UnitFrameCurvature] | None = None,
) -> tuple[list[Check], dict]:
    """Sylvester minors of every block on every piece.

    The leading-order coefficients are always certified; ``exact`` mode also
    certifies the full determinants at the rational ``eps``.
    """
    frames = frames or [compute_frame(m, p) for p in range(m.num_pieces)]
    items, degrees, checks = [], {}, []
    deps = {}
    spectra = {}
    alpha = {}
    for n, fr in enumerate(frames):
        a, b = fr.interval
        params = thorpe.build_params(fr)
        fat = tuple(fatness_names(fr))
        for label in ("A12", "A23", "A31"):
            block = thorpe.build_block(fr, params, label, variant=variant)
            ms = thorpe.leading_minors(block, max_degree=6)
            spectra[(n, label)] = ms
            degrees[(n, label)] = [x.eps_degree for x in ms]
            for x in ms:
                name = minor_name(label, x.k, fr)
                items.append((name, "Sylvester minors of the modified curvature operator", x.leading, a, b))
                deps[name] = fat
            checks.append(exact_check(
                f"minor: {label} eps-degrees on {_piece_tag(fr)}", "lowest eps-orders of the minors",
                "sequence_equal",
                {"lhs": degrees[(n, label)], "rhs": list(thorpe.EXPECTED_DEGREES)},
                degrees[(n, label)] == list(thorpe.EXPECTED_DEGREES), "minors", (a, b)))
        if mode == "exact" or oracles is not None:
            orc = oracles[n] if oracles is not None else UnitFrameCurvature(fr)
            for label in ("A12", "A23", "A31"):
                block = thorpe.build_block(fr, params, label, mode="exact", oracle=orc)
                ex = thorpe.leading_minors(block, max_degree=6)
                for x, y in zip(spectra[(n, label)], ex):
                    checks.append(identity_check(
                        f"minor: {label} k={x.k} lowest term independent of alpha on {_piece_tag(fr)}",
                        "the alpha term does not reach the lowest order",
                        [x.eps_degree, canonical_value(x.leading)], [y.eps_degree, canonical_value(y.leading)],
                        "minors", interval=(a, b)))
                if mode == "exact":
                    dets = thorpe.determinants_at_eps(block, eps)
                    for k, d in enumerate(dets, start=1):
                        name = minor_name(label, k, fr, f" at eps={format_rational(eps)}")
                        items.append((name, "minors at a fixed eps (beyond the leading-order claim)", d, a, b))
                        deps[name] = fat
    checks = sign_checks(items, group="minors", depends=deps, jobs=jobs) + checks
    summary = {
        "variant": variant,
        "eps_degrees": {f"{lab} piece {n}": d for (n, lab), d in sorted(degrees.items())},
    }
    return checks, summary


# -- the whole pipeline ----------------------------------------------------------------

@dataclass(frozen=True)
class VerifyConfig:
    mode: str = "leading"
    eps: Fraction | None = None
    seed: int = 0
    jobs: int = 1
    variant: str = "corrected"
    samples: int = 3

    def __post_init__(self):
        if self.mode not in thorpe.MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "exact":
            if self.eps is None or not 0 < Fraction(self.eps) <= 1:
                raise ValueError("exact mode needs a rational 0 < eps <= 1")
        if self.variant not in thorpe.VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "eps": None if self.eps is None else format_rational(self.eps),
            "seed": self.seed,
            "variant": self.variant,
            "samples": self.samples,
        }


@dataclass
class Certificate:
    metric_sha256: str
    metric_name: str
    config: VerifyConfig
    checks: list[Check]
    notes: dict

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def overall(self) -> str:
        return PASS if self.passed else FAIL

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "metric_sha256": self.metric_sha256,
            "metric_name": self.metric_name,
            "mode": self.config.mode,
            "config": self.config.to_json(),
            "checks": [c.to_json() for c in self.checks],
            "notes": self.notes,
            "overall": self.overall,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def _error_check(name: str, anchor: str, exc: Exception, group: str) -> Check:
    return Check(name, anchor, "error", False, data={"error": f"{type(exc).__name__}: {exc}"}, group=group)


def verify(m: PiecewiseMetric, config: VerifyConfig | None = None) -> Certificate:
    """Run every check; a failing stage is recorded and the pipeline continues."""
    config = config or VerifyConfig()
    checks: list[Check] = []
    notes: dict[str, Any] = {}

    smooth, notes["smoothness"] = check_smoothness_entries(m)
    checks += smooth
    checks += check_sign_conventions(m)

    frames = [compute_frame(m, p) for p in range(m.num_pieces)]
    for fr in frames:
        checks += check_fatness(fr, jobs=config.jobs)
    for fr in frames:
        checks += check_hyperfatness(fr, jobs=config.jobs)
    for fr in frames:
        checks += check_base_positive(fr, jobs=config.jobs)
    try:
        checks += check_endpoint_inequalities(m)
    except JetError as exc:
        checks.append(_error_check("endpoint inequalities", "endpoint jets", exc, "endpoint"))

    oracles = [UnitFrameCurvature(fr) for fr in frames]
    findings = {}
    for fr, orc in zip(frames, oracles):
        oc, found = check_oracle(fr, orc, config.seed, config.samples)
        checks += oc
        findings[_piece_tag(fr)] = found
    notes["findings"] = findings

    mc, notes["minors"] = check_minors(
        m, config.mode, eps=config.eps, variant=config.variant, jobs=config.jobs, frames=frames, oracles=oracles,
    )
    checks += mc
    if config.mode == "exact":
        notes["exact_mode"] = "minors at a fixed eps are certified in addition to the leading-order proof"
    return Certificate(m.fingerprint(), m.name, config, checks, notes)
