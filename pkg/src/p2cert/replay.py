"""Independent re-check of a certificate file.

Only the data stored in the certificate is used: integer polynomials,
intervals, exact constants and digests.  Definite signs are re-proved
with a different algorithm from the certifier: Descartes' rule of signs on
the Moebius-transformed polynomial, with bisection.  A plain Sturm chain
(no shared code with :mod:`p2cert.sturm`) is the fallback and also settles
the non-definite verdicts.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

POSITIVE, NEGATIVE = "StrictlyPositive", "StrictlyNegative"
HAS_ZERO, BOUNDARY_ZERO = "HasZero", "BoundaryZero"


# -- integer polynomials, lowest degree first -------------------------------------

def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _primitive(p: list[int]) -> list[int]:
    g = 0
    for c in p:
        g = math.gcd(g, c)
    return [c // g for c in p] if g > 1 else list(p)


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder with a positive multiplier (sign of ``a mod b`` is kept)."""
    r = list(a)
    db, lc = len(b) - 1, b[-1]
    mult = abs(lc)
    sgn = 1 if lc > 0 else -1
    while len(r) - 1 >= db and r:
        top = r[-1]
        shift = len(r) - 1 - db
        r = [c * mult for c in r]
        for n, c in enumerate(b):
            r[shift + n] -= top * sgn * c
        _trim(r)
    return r


def _div_exact(a: list[int], b: list[int]) -> list[int] | None:
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return None if r else []
    q = [0] * (len(r) - db)
    for d in range(len(r) - 1, db - 1, -1):
        c, m = divmod(r[d], b[-1])
        if m:
            return None
        q[d - db] = c
        for n, y in enumerate(b):
            r[d - db + n] -= c * y
    return None if any(r) else _trim(q)


def _deriv(p: list[int]) -> list[int]:
    return [n * c for n, c in enumerate(p)][1:]


def _sign_at(p: list[int], x: Fraction) -> int:
    num, den = x.numerator, x.denominator
    n = len(p) - 1
    total = sum(c * num ** k * den ** (n - k) for k, c in enumerate(p))
    return (total > 0) - (total < 0)


def _chain(p: list[int]) -> list[list[int]]:
    seq = [p, _primitive(_deriv(p))]
    while len(seq[-1]) > 1:
        r = _prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(_primitive([-c for c in r]))
    return seq


def _changes(chain: list[list[int]], x: Fraction) -> int:
    signs = [s for s in (_sign_at(q, x) for q in chain) if s]
    return sum(1 for u, w in zip(signs, signs[1:]) if u != w)


def _variations(p: list[int]) -> int:
    signs = [c > 0 for c in p if c]
    return sum(1 for u, w in zip(signs, signs[1:]) if u != w)


def _compose_linear(p: list[int], alpha: int, beta: int, den: int) -> list[int]:
    """Coefficients of ``den**n * p((alpha + beta*u) / den)`` in ``u``."""
    n = len(p) - 1
    out = [0]
    for k in range(n, -1, -1):
        # out <- out * (alpha + beta u) + p_k * den^(n-k)
        nxt = [0] * (len(out) + 1)
        for m, c in enumerate(out):
            nxt[m] += c * alpha
            nxt[m + 1] += c * beta
        nxt[0] += p[k] * den ** (n - k)
        out = nxt
    return _trim(out)


def _taylor_shift_one(p: list[int]) -> list[int]:
    q = list(p)
    n = len(q)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            q[j] += q[j + 1]
    return q


def _no_roots_open(p: list[int], lo: Fraction, hi: Fraction) -> bool:
    """Descartes' bound: no root of ``p`` in the open interval ``(lo, hi)``."""
    den = lo.denominator * hi.denominator // math.gcd(lo.denominator, hi.denominator)
    alpha, beta = int(lo * den), int((hi - lo) * den)
    q = _compose_linear(p, alpha, beta, den)
    # roots of q in (0, 1) <-> positive roots of (1+y)^n q(1/(1+y))
    r = _taylor_shift_one(list(reversed(q)) + [0] * (len(p) - len(q)))
    return _variations(r) == 0


def descartes_definite(p: list[int], a: Fraction, b: Fraction, depth: int = 10) -> int:
    """``+1`` or ``-1`` if ``p`` provably keeps that sign on ``[a, b]``; ``0`` if undecided."""
    sa = _sign_at(p, a)
    if sa == 0 or _sign_at(p, b) != sa:
        return 0
    stack = [(a, b, 0)]
    while stack:
        lo, hi, d = stack.pop()
        if _no_roots_open(p, lo, hi):
            continue
        mid = (lo + hi) / 2
        if d >= depth or _sign_at(p, mid) != sa:
            return 0
        stack += [(lo, mid, d + 1), (mid, hi, d + 1)]
    return sa


@dataclass
class SturmReplay:
    verdict: str
    changes: tuple[int, int] | None
    roots: int
    method: str = "sturm"


def sturm_verdict(poly: list[int], center: Fraction, a: Fraction, b: Fraction) -> SturmReplay:
    """Sign of ``poly(t - center)`` on ``[a, b]``, with the same verdict vocabulary as the certifier."""
    p = _primitive(_trim(list(poly)))
    if not p:
        return SturmReplay(BOUNDARY_ZERO, (0, 0), 0)
    sa, sb = a - center, b - center
    va = _sign_at(p, sa)
    if len(p) == 1:
        return SturmReplay(POSITIVE if va > 0 else NEGATIVE, (0, 0), 0, "constant")
    fast = descartes_definite(p, sa, sb)
    if fast:
        return SturmReplay(POSITIVE if fast > 0 else NEGATIVE, None, 0, "descartes")
    chain = _chain(p)
    if len(chain[-1]) > 1:
        # repeated factors: count distinct roots of the square-free part
        q = _div_exact(p, chain[-1])
        p = _primitive(q if q is not None else p)
        chain = _chain(p)
    ca, cb = _changes(chain, sa), _changes(chain, sb)
    roots = ca - cb
    if va == 0:
        verdict = BOUNDARY_ZERO
    elif roots:
        verdict = HAS_ZERO
    else:
        verdict = POSITIVE if va > 0 else NEGATIVE
    return SturmReplay(verdict, (ca, cb), roots)


# -- per-kind re-checks ----------------------------------------------------------

def _frac(s: str) -> Fraction:
    return Fraction(s)


def _replay_poly(d: dict) -> tuple[str, list[str]]:
    """Verdict of an embedded polynomial certificate plus any disagreements with its record."""
    a, b = (_frac(x) for x in d["interval"])
    got = sturm_verdict([int(c) for c in d["poly"]], _frac(d["center"]), a, b)
    issues = []
    if got.verdict != d["verdict"]:
        issues.append(f"verdict {d['verdict']} recorded, {got.verdict} recomputed")
    rec = d.get("sturm", {}).get("sign_changes")
    if rec is not None and d["verdict"] in (POSITIVE, NEGATIVE) and got.roots != 0:
        issues.append("recorded chain claims no roots but roots were found")
    return got.verdict, issues


def _ratfunc_sign(polys: list[dict]) -> tuple[str, list[str]]:
    num = next(p for p in polys if p.get("role") == "numerator")
    den = next(p for p in polys if p.get("role") == "denominator")
    vn, i1 = _replay_poly(num)
    vd, i2 = _replay_poly(den)
    if vn in (POSITIVE, NEGATIVE) and vd in (POSITIVE, NEGATIVE):
        return ("positive" if vn == vd else "negative"), i1 + i2
    return "indeterminate", i1 + i2


def _replay_sign(c: dict) -> tuple[bool, list[str]]:
    sign, issues = _ratfunc_sign(c["polys"])
    return sign == c["expect"], issues


def _replay_sign_open(c: dict) -> tuple[bool, list[str]]:
    a, b = (_frac(x) for x in c["interval"])
    orig = c["data"]["original"]
    center = _frac(orig["center"])
    p = [int(x) for x in orig["poly"]]
    quot = c["polys"][0]
    issues = []
    for label, end in (("a", a), ("b", b)):
        m = c["data"]["stripped"].get(label, 0)
        s0 = end - center
        for _ in range(m):
            q = _div_exact(p, [-s0.numerator, s0.denominator])
            if q is None:
                return False, [f"recorded root at {label} does not divide"]
            p = _primitive(q)
    if [int(x) for x in quot["poly"]] != p or _frac(quot["center"]) != center:
        issues.append("quotient differs from the stripped original")
        return False, issues
    v, more = _replay_poly(quot)
    issues += more
    flip = (-1) ** c["data"]["stripped"].get("b", 0)
    sign = {POSITIVE: flip, NEGATIVE: -flip}.get(v, 0)
    want = 1 if c["expect"] == "positive" else -1
    return sign == want, issues


def _replay_cover(c: dict) -> tuple[bool, list[str]]:
    if c.get("data", {}).get("trivial"):
        return True, []
    a, b = (_frac(x) for x in c["interval"])
    parts = c.get("parts", [])
    if not parts:
        return False, ["no covering pieces"]
    issues = []
    ok = True
    pos = a
    for part in parts:
        lo, hi = (_frac(x) for x in part["interval"])
        if lo != pos:
            return False, [f"gap before {lo}"]
        sign, more = _ratfunc_sign(part["polys"])
        issues += more
        ok = ok and sign == "positive"
        pos = hi
    if pos != b:
        return False, ["cover does not reach the right endpoint"]
    return ok, issues


def _sqrt_gt(Q: Fraction, R: Fraction) -> bool:
    if Q < 0:
        return False
    if R < 0:
        return True
    return Q > R * R


def _replay_exact(c: dict) -> tuple[bool, list[str]]:
    d = c["data"]
    rule = d["rule"]
    if rule == "equal":
        return _frac(d["lhs"]) == _frac(d["rhs"]), []
    if rule == "sequence_equal":
        return list(d["lhs"]) == list(d["rhs"]), []
    k = {n: _frac(v) for n, v in d["constants"].items()}
    if rule == "endpoint_zero":
        if k["a2"] <= 0:
            return False, ["a2 not positive"]
        Q = 3 * (k["b2"] ** 2 + 2) * k["d0"]
        R = (3 * abs(4 - k["b2"] ** 2) - 2 * k["c2"] * k["a2"]) / k["a2"]
    elif rule == "endpoint_L":
        if k["a1"] <= 0 or k["ell"] <= 0:
            return False, ["a1 or ell not positive"]
        Q = 6 * k["d3"] * k["ell"]
        R = (12 / k["ell"] - 2 * k["c1"] * k["a1"]) / k["a1"]
    else:
        return False, [f"unknown rule {rule}"]
    issues = []
    if (_frac(d["Q"]), _frac(d["R"])) != (Q, R):
        issues.append("recorded Q, R differ from the constants")
    return _sqrt_gt(Q, R), issues


def _replay_identity(c: dict) -> tuple[bool, list[str]]:
    d = c["data"]
    return d["lhs_sha256"] == d["rhs_sha256"], []


_KINDS = {
    "sign": _replay_sign,
    "sign_open": _replay_sign_open,
    "cover": _replay_cover,
    "exact": _replay_exact,
    "identity": _replay_identity,
    "error": lambda c: (False, []),
}


@dataclass
class ReplayEntry:
    name: str
    recorded: str
    replayed: str
    issues: list[str] = field(default_factory=list)

    @property
    def agrees(self) -> bool:
        return self.recorded == self.replayed and not self.issues


@dataclass
class ReplayReport:
    entries: list[ReplayEntry]
    recorded_overall: str
    replayed_overall: str

    @property
    def agrees(self) -> bool:
        return self.recorded_overall == self.replayed_overall and all(e.agrees for e in self.entries)

    def disagreements(self) -> list[ReplayEntry]:
        return [e for e in self.entries if not e.agrees]


def replay(cert: dict[str, Any]) -> ReplayReport:
    """Re-derive every verdict of a certificate from its own contents."""
    entries = []
    for c in cert["checks"]:
        fn = _KINDS.get(c["kind"])
        if fn is None:
            entries.append(ReplayEntry(c["name"], c["verdict"], "FAIL", [f"unknown kind {c['kind']}"]))
            continue
        ok, issues = fn(c)
        entries.append(ReplayEntry(c["name"], c["verdict"], "PASS" if ok else "FAIL", issues))
    overall = "PASS" if entries and all(e.replayed == "PASS" for e in entries) else "FAIL"
    return ReplayReport(entries, cert.get("overall", ""), overall)


def replay_file(path: str) -> ReplayReport:
    with open(path, encoding="utf-8") as fh:
        return replay(json.load(fh))
