"""Smoothness at the singular orbits and C^2 gluing checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from ..exactmath.poly import Poly
from ..exactmath.rational import format_rational
from .metric import PiecewiseFunc, PiecewiseMetric, map_to_3L


@dataclass(frozen=True)
class SmoothnessEntry:
    name: str
    required: str
    computed: str
    passed: bool
    group: str = "C2"

    def to_json(self) -> dict:
        return {"name": self.name, "group": self.group, "required": self.required,
                "computed": self.computed, "passed": self.passed}


@dataclass(frozen=True)
class SmoothnessReport:
    entries: tuple[SmoothnessEntry, ...]
    c3_probe: tuple[SmoothnessEntry, ...] = ()
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def c3_smooth(self) -> bool:
        return all(e.passed for e in self.c3_probe)

    def failures(self) -> list[SmoothnessEntry]:
        return [e for e in self.entries if not e.passed]

    def entry(self, name: str) -> SmoothnessEntry:
        for e in self.entries + self.c3_probe:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "c2": self.passed,
            "c3": self.c3_smooth,
            "entries": [e.to_json() for e in self.entries],
            "c3_probe": [e.to_json() for e in self.c3_probe],
            "notes": list(self.notes),
        }


_PRIMES = {0: "", 1: "'", 2: "''", 3: "'''"}


def _fmt(x: Fraction) -> str:
    return format_rational(x)


def _value(name: str, f: PiecewiseFunc, t: Fraction, order: int, required: Fraction, where: str) -> SmoothnessEntry:
    got = f.derivative_at(t, order)
    return SmoothnessEntry(f"{name}{_PRIMES[order]}({where}) = {_fmt(required)}", _fmt(required), _fmt(got), got == required)


def _pair(n1: str, f1: PiecewiseFunc, n2: str, f2: PiecewiseFunc, c: int, t: Fraction,
          order: int, where: str) -> SmoothnessEntry:
    """``f1^(order)(t) = c * f2^(order)(t)`` with ``c = +-1``."""
    x, y = f1.derivative_at(t, order), f2.derivative_at(t, order)
    sign = "" if c > 0 else "-"
    name = f"{n1}{_PRIMES[order]}({where}) = {sign}{n2}{_PRIMES[order]}({where})"
    return SmoothnessEntry(name, f"{sign}{n2}{_PRIMES[order]}({where}) = {_fmt(c * y)}", _fmt(x), x == c * y)


def _orientation(f: PiecewiseFunc) -> int:
    p = f.pieces[0]
    mid = (p.a + p.b) / 2
    return 1 if f(mid) > 0 else -1


def check_smoothness(m: PiecewiseMetric) -> SmoothnessReport:
    """Exact C^2 conditions at both singular orbits, gluing checks, and a C^3 probe.

    The endpoint conditions are stated for positive ``v_3``; with a negative
    ``v_3`` the pairings acquire the corresponding sign.
    """
    if m.ell <= 2:
        raise ValueError("endpoint smoothness conditions need ell > 2")
    zero, L = Fraction(0), m.L
    v1, v2, v3 = m.v
    h1, h2, h3 = m.h
    s3 = _orientation(v3)
    entries: list[SmoothnessEntry] = [
        _value("v1", v1, zero, 0, Fraction(0), "0"),
        _value("v1", v1, zero, 1, Fraction(4), "0"),
        _value("v1", v1, zero, 2, Fraction(0), "0"),
        _pair("v2", v2, "v3", v3, s3, zero, 0, "0"),
        _pair("v2", v2, "v3", v3, -s3, zero, 1, "0"),
        _pair("v2", v2, "v3", v3, s3, zero, 2, "0"),
        _value("v2", v2, L, 0, Fraction(0), "L"),
        _value("v2", v2, L, 1, Fraction(-4, m.ell), "L"),
        _value("v2", v2, L, 2, Fraction(0), "L"),
        _pair("v1", v1, "v3", v3, s3, L, 0, "L"),
        _value("v1", v1, L, 1, Fraction(0), "L"),
        _value("v3", v3, L, 1, Fraction(0), "L"),
        _pair("v1", v1, "v3", v3, s3, L, 2, "L"),
        _value("h1", h1, zero, 0, Fraction(-1), "0"),
        _value("h1", h1, zero, 1, Fraction(0), "0"),
        _pair("h2", h2, "h3", h3, 1, zero, 0, "0"),
        _pair("h2", h2, "h3", h3, -1, zero, 1, "0"),
        _pair("h2", h2, "h3", h3, 1, zero, 2, "0"),
        _value("h2", h2, L, 0, Fraction(m.ell + 2, m.ell), "L"),
        _value("h2", h2, L, 1, Fraction(0), "L"),
        _value("h1", h1, L, 0, Fraction(0), "L"),
        _value("h3", h3, L, 0, Fraction(0), "L"),
        _pair("h1", h1, "h3", h3, -1, L, 1, "L"),
        _value("h1", h1, L, 2, Fraction(0), "L"),
        _value("h3", h3, L, 2, Fraction(0), "L"),
    ]

    named = [(f"v{i + 1}", f) for i, f in enumerate(m.v)] + [(f"h{i + 1}", f) for i, f in enumerate(m.h)]
    probe: list[SmoothnessEntry] = []
    for t in m.breakpoints[1:-1]:
        for name, f in named:
            for order in range(4):
                left = f.derivative_at(t, order, "left")
                right = f.derivative_at(t, order, "right")
                e = SmoothnessEntry(
                    f"{name}{_PRIMES[order]} continuous at t={_fmt(t)}",
                    "jump = 0", _fmt(right - left), left == right,
                    "junction" if order < 3 else "C3",
                )
                (entries if order < 3 else probe).append(e)

    entries.extend(_unrolled_conditions(m))
    notes = ()
    if s3 < 0:
        notes = ("v3 is negative on the interval; v3 pairings are read with the opposite sign",)
    return SmoothnessReport(tuple(entries), tuple(probe), notes)


def _unrolled_conditions(m: PiecewiseMetric) -> list[SmoothnessEntry]:
    v, h = map_to_3L(m)
    L = m.L
    zero = Fraction(0)
    req = [
        ("v", v, zero, 0, Fraction(0), "0"), ("v", v, zero, 1, Fraction(4), "0"),
        ("v", v, zero, 2, Fraction(0), "0"), ("v", v, L, 1, Fraction(0), "L"),
        ("v", v, 3 * L, 0, Fraction(0), "3L"), ("v", v, 3 * L, 1, Fraction(-4, m.ell), "3L"),
        ("v", v, 3 * L, 2, Fraction(0), "3L"),
        ("h", h, zero, 0, Fraction(-1), "0"), ("h", h, zero, 1, Fraction(0), "0"),
        ("h", h, L, 0, Fraction(0), "L"), ("h", h, L, 2, Fraction(0), "L"),
        ("h", h, 3 * L, 0, Fraction(m.ell + 2, m.ell), "3L"), ("h", h, 3 * L, 1, Fraction(0), "3L"),
    ]
    out = []
    for name, f, t, order, value, where in req:
        e = _value(name, f, t, order, value, where)
        out.append(SmoothnessEntry(e.name, e.required, e.computed, e.passed, "unrolled"))
    # the unrolled functions must themselves be C^2 across t = L and t = 2L
    for t, where in ((L, "L"), (2 * L, "2L")):
        for name, f in (("v", v), ("h", h)):
            for order in range(3):
                left = f.derivative_at(t, order, "left")
                right = f.derivative_at(t, order, "right")
                out.append(SmoothnessEntry(
                    f"{name}{_PRIMES[order]} continuous at {where}", "jump = 0",
                    _fmt(right - left), left == right, "unrolled",
                ))
    return out


# -- general smoothness conditions at t = 0 ---------------------------------

def _taylor(p: Poly, order: int) -> list[Fraction]:
    q = p.recenter(0) if p.center != 0 and not p.is_constant() else p
    cs = list(q.coeffs)
    return [cs[n] if n < len(cs) else Fraction(0) for n in range(order + 1)]


def _valuation_entries(name: str, p: Poly, exponent: Fraction, order: int) -> list[SmoothnessEntry]:
    """``p = t^e phi(t^2)`` up to ``order``; a fractional ``e`` forces ``p = 0``."""
    cs = _taylor(p, order)
    out = []
    integral = exponent.denominator == 1
    for n, c in enumerate(cs):
        if integral and n >= exponent and (n - exponent) % 2 == 0:
            continue
        rule = f"t^{_fmt(exponent)} phi(t^2)" if integral else "0 (fractional exponent)"
        out.append(SmoothnessEntry(
            f"[t^{n}] ({name}) = 0", f"{name} = {rule}", _fmt(c), c == 0, "gen-b",
        ))
    return out


def check_gen_smooth(
    f: Sequence[Poly],
    g: Sequence[Poly],
    h: Sequence[Poly],
    slopes: tuple[int, int],
    k: int,
    order: int,
) -> SmoothnessReport:
    """Smoothness at the singular orbit ``t = 0`` up to derivatives of order ``order``.

    ``f, g, h`` are the inner products ``|X_i|^2, |Y_i|^2, <X_i, Y_i>`` near
    ``t = 0`` and ``slopes = (p, q)`` the isotropy slopes.
    """
    p, q = slopes
    if gcd(p, q) != 1:
        raise ValueError(f"slopes (p, q) = ({p}, {q}) must satisfy gcd(p, q) = 1")
    if k <= 0 or order < 0:
        raise ValueError("need k > 0 and order >= 0")
    f1, g1, h1 = (_taylor(x[0], max(order, 2)) for x in (f, g, h))
    entries: list[SmoothnessEntry] = []
    for name, cs in (("f1", f1), ("g1", g1), ("h1", h1)):
        for n in range(1, order + 1, 2):
            entries.append(SmoothnessEntry(f"[t^{n}] {name} = 0", f"{name} even", _fmt(cs[n]), cs[n] == 0, "gen-a"))
    lhs, rhs = p * f1[0], -q * h1[0]
    entries.append(SmoothnessEntry("p f1(0) = -q h1(0)", _fmt(rhs), _fmt(lhs), lhs == rhs, "gen-a"))
    lhs, rhs = q * g1[0], -p * h1[0]
    entries.append(SmoothnessEntry("q g1(0) = -p h1(0)", _fmt(rhs), _fmt(lhs), lhs == rhs, "gen-a"))
    if order >= 2:
        # second derivatives are 2 * (t^2 coefficient)
        lhs = 2 * (p * p * f1[2] + q * q * g1[2] + 2 * p * q * h1[2])
        entries.append(SmoothnessEntry(
            "p^2 f1'' + q^2 g1'' + 2pq h1'' = 2k^2", str(2 * k * k), _fmt(lhs), lhs == 2 * k * k, "gen-a",
        ))
    pairs = [
        ("f2+f3", f[1] + f[2], Fraction(0)),
        ("f2-f3", f[1] - f[2], Fraction(4 * abs(p), k)),
        ("g2+g3", g[1] + g[2], Fraction(0)),
        ("g2-g3", g[1] - g[2], Fraction(4 * abs(q), k)),
        ("h2+h3", h[1] + h[2], Fraction(2 * abs(q - p), k)),
        ("h2-h3", h[1] - h[2], Fraction(2 * abs(q + p), k)),
    ]
    for name, poly, e in pairs:
        entries.extend(_valuation_entries(name, poly, e, order))
    return SmoothnessReport(tuple(entries))


def connection_jets_at_zero(m: PiecewiseMetric) -> tuple[tuple[Poly, ...], tuple[Poly, ...], tuple[Poly, ...]]:
    """``f_i = 1, g_i = v_i^2 + h_i^2, h_i`` on the first piece (unscaled fibre)."""
    vs, hs = m.piece_polys(0)
    one = Poly.constant(1)
    return (one, one, one), tuple(v * v + x * x for v, x in zip(vs, hs)), hs
