"""Piecewise-polynomial connection metrics and their JSON file format."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence

from ..exactmath.poly import Poly
from ..exactmath.rational import RationalLike, as_rational, format_rational, parse_rational

INDICES = ("1", "2", "3")


class MetricFormatError(ValueError):
    """Malformed metric definition; ``location`` names the offending field."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass(frozen=True)
class Piece:
    a: Fraction
    b: Fraction
    poly: Poly
    center_tag: str = "0"
    glued: bool = False

    def contains(self, t: Fraction) -> bool:
        return self.a <= t <= self.b


@dataclass(frozen=True)
class PiecewiseFunc:
    pieces: tuple[Piece, ...]

    def __post_init__(self):
        for left, right in zip(self.pieces, self.pieces[1:]):
            if left.b != right.a:
                raise ValueError(f"pieces not contiguous at {left.b} / {right.a}")

    @property
    def glue_markers(self) -> tuple[bool, ...]:
        return tuple(p.glued for p in self.pieces)

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.pieces[0].a, self.pieces[-1].b

    def piece_at(self, t: RationalLike, side: str = "right") -> Piece:
        """The piece used at ``t``; at a breakpoint ``side`` picks left or right."""
        t = as_rational(t)
        lo, hi = self.domain
        if not lo <= t <= hi:
            raise ValueError(f"t={t} outside [{lo}, {hi}]")
        candidates = [p for p in self.pieces if p.contains(t)]
        return candidates[0] if side == "left" else candidates[-1]

    def derivative_at(self, t: RationalLike, order: int = 0, side: str = "right") -> Fraction:
        p = self.piece_at(t, side).poly
        return p.derivative(order)(t) if order else p(t)

    def __call__(self, t: RationalLike) -> Fraction:
        return self.derivative_at(t)

    def scaled(self, c: RationalLike) -> "PiecewiseFunc":
        c = as_rational(c)
        return PiecewiseFunc(tuple(
            Piece(p.a, p.b, p.poly * c, p.center_tag, p.glued) for p in self.pieces
        ))


def hermite_c2_glue(left: Poly, right: Poly, a: RationalLike, b: RationalLike) -> Poly:
    """The unique quintic matching ``left`` to second order at ``a`` and ``right`` at ``b``.

    Built in the local variable ``s = t - a`` and returned as a polynomial in ``t``.
    """
    a, b = as_rational(a), as_rational(b)
    if not a < b:
        raise ValueError("hermite_c2_glue needs a < b")
    y0, y1, y2 = left(a), left.derivative()(a), left.derivative(2)(a)
    z0, z1, z2 = right(b), right.derivative()(b), right.derivative(2)(b)
    h = b - a
    r0 = z0 - (y0 + y1 * h + y2 * h * h / 2)
    r1 = (z1 - (y1 + y2 * h)) * h
    r2 = (z2 - y2) * h * h
    # unknowns u = c3 h^3, w = c4 h^4, x = c5 h^5
    x = (r2 + 12 * r0 - 6 * r1) / 2
    w = r1 - 3 * r0 - 2 * x
    u = r0 - w - x
    local = Poly([y0, y1, y2 / 2, u / h ** 3, w / h ** 4, x / h ** 5], center=a)
    return local.recenter(0)


@dataclass(frozen=True)
class PiecewiseMetric:
    ell: int
    L: Fraction
    breakpoints: tuple[Fraction, ...]
    v: tuple[PiecewiseFunc, PiecewiseFunc, PiecewiseFunc]
    h: tuple[PiecewiseFunc, PiecewiseFunc, PiecewiseFunc]
    conventions: Mapping[str, Any] = field(default_factory=dict)
    name: str = ""

    @property
    def num_pieces(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def v3_sign(self) -> int:
        return int(self.conventions.get("v3_sign", 1))

    def interval(self, piece: int) -> tuple[Fraction, Fraction]:
        self._check_piece(piece)
        return self.breakpoints[piece], self.breakpoints[piece + 1]

    def piece_polys(self, piece: int) -> tuple[tuple[Poly, ...], tuple[Poly, ...]]:
        """``(v1, v2, v3), (h1, h2, h3)`` on one piece, v3 signed."""
        self._check_piece(piece)
        return (
            tuple(f.pieces[piece].poly for f in self.v),
            tuple(f.pieces[piece].poly for f in self.h),
        )

    def _check_piece(self, piece: int) -> None:
        if not 0 <= piece < self.num_pieces:
            raise IndexError(f"piece index {piece} out of range 0..{self.num_pieces - 1}")

    def to_json(self) -> dict:
        """File form: v3 printed (sign undone), glued pieces written as markers."""
        def funcs(fs, undo_v3: bool):
            out = {}
            for key, f in zip(INDICES, fs):
                rows = []
                for p in f.pieces:
                    iv = [format_rational(p.a), format_rational(p.b)]
                    if p.glued:
                        rows.append({"interval": iv, "glue": True})
                        continue
                    poly = p.poly * self.v3_sign if undo_v3 and key == "3" else p.poly
                    rows.append({"interval": iv, "center": p.center_tag,
                                 "coeffs": [format_rational(c) for c in poly.coeffs]})
                out[key] = rows
            return out

        data = {
            "ell": self.ell,
            "L": format_rational(self.L),
            "breakpoints": [format_rational(b) for b in self.breakpoints],
            "conventions": dict(self.conventions),
            "v": funcs(self.v, True),
            "h": funcs(self.h, False),
        }
        if self.name:
            data["name"] = self.name
        return data

    def canonical_json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    def fingerprint(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


# -- parsing ----------------------------------------------------------------

def _rat(value, loc: str) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    try:
        return parse_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise MetricFormatError(loc, f"not a rational string ({exc})") from None


def _parse_func(rows, loc: str, bps: Sequence[Fraction], L: Fraction, scale: int) -> PiecewiseFunc:
    if not isinstance(rows, list):
        raise MetricFormatError(loc, "expected an array of pieces")
    if len(rows) != len(bps) - 1:
        raise MetricFormatError(loc, f"expected {len(bps) - 1} pieces, got {len(rows)}")
    raw: list[tuple[Fraction, Fraction, Poly | None, str]] = []
    for n, row in enumerate(rows):
        where = f"{loc}[{n}]"
        if not isinstance(row, dict) or "interval" not in row:
            raise MetricFormatError(where, "piece needs an 'interval'")
        iv = row["interval"]
        if not isinstance(iv, list) or len(iv) != 2:
            raise MetricFormatError(f"{where}.interval", "expected [a, b]")
        a, b = _rat(iv[0], f"{where}.interval[0]"), _rat(iv[1], f"{where}.interval[1]")
        if (a, b) != (bps[n], bps[n + 1]):
            raise MetricFormatError(
                f"{where}.interval",
                f"[{format_rational(a)}, {format_rational(b)}] does not match breakpoints "
                f"[{format_rational(bps[n])}, {format_rational(bps[n + 1])}] (gap or overlap)",
            )
        if row.get("glue") is True:
            raw.append((a, b, None, "0"))
            continue
        tag = row.get("center", "0")
        if tag not in ("0", "L"):
            raise MetricFormatError(f"{where}.center", "must be \"0\" or \"L\"")
        coeffs = row.get("coeffs")
        if not isinstance(coeffs, list):
            raise MetricFormatError(f"{where}.coeffs", "expected an array of rational strings")
        cs = [_rat(c, f"{where}.coeffs[{i}]") * scale for i, c in enumerate(coeffs)]
        raw.append((a, b, Poly(cs, center=L if tag == "L" else 0), tag))

    pieces: list[Piece] = []
    for n, (a, b, poly, tag) in enumerate(raw):
        if poly is None:
            if n == 0 or n == len(raw) - 1 or raw[n - 1][2] is None or raw[n + 1][2] is None:
                raise MetricFormatError(f"{loc}[{n}]", "a glued piece needs explicit neighbours")
            poly = hermite_c2_glue(raw[n - 1][2], raw[n + 1][2], a, b)
            pieces.append(Piece(a, b, poly, "0", True))
        else:
            pieces.append(Piece(a, b, poly, tag, False))
    return PiecewiseFunc(tuple(pieces))


def metric_from_json(data: Mapping[str, Any]) -> PiecewiseMetric:
    if not isinstance(data, Mapping):
        raise MetricFormatError("$", "top level must be an object")
    for key in ("ell", "L", "breakpoints", "v", "h"):
        if key not in data:
            raise MetricFormatError(key, "missing field")
    ell = data["ell"]
    if not isinstance(ell, int) or isinstance(ell, bool) or ell <= 0:
        raise MetricFormatError("ell", "must be a positive integer")
    L = _rat(data["L"], "L")
    if L <= 0:
        raise MetricFormatError("L", "must be positive")
    if not isinstance(data["breakpoints"], list) or len(data["breakpoints"]) < 2:
        raise MetricFormatError("breakpoints", "need at least [0, L]")
    bps = tuple(_rat(x, f"breakpoints[{i}]") for i, x in enumerate(data["breakpoints"]))
    if bps[0] != 0 or bps[-1] != L:
        raise MetricFormatError("breakpoints", "must start at 0 and end at L")
    if any(x >= y for x, y in zip(bps, bps[1:])):
        raise MetricFormatError("breakpoints", "must be strictly increasing")
    conventions = dict(data.get("conventions", {}))
    sign = conventions.get("v3_sign", 1)
    if sign not in (1, -1):
        raise MetricFormatError("conventions.v3_sign", "must be 1 or -1")

    def triple(key: str, scale3: int):
        block = data[key]
        if not isinstance(block, Mapping) or set(block) != set(INDICES):
            raise MetricFormatError(key, "expected keys \"1\", \"2\", \"3\"")
        return tuple(
            _parse_func(block[i], f"{key}.{i}", bps, L, scale3 if i == "3" else 1) for i in INDICES
        )

    return PiecewiseMetric(
        ell=ell, L=L, breakpoints=bps,
        v=triple("v", sign), h=triple("h", 1),
        conventions=conventions, name=str(data.get("name", "")),
    )


def load_metric(path: str | Path) -> PiecewiseMetric:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MetricFormatError(str(path), f"cannot read ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MetricFormatError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return metric_from_json(data)


def p2_metric_data() -> dict:
    """The shipped P2 definition as a fresh JSON dict (safe to mutate)."""
    text = resources.files("p2cert").joinpath("data/p2.metric.json").read_text(encoding="utf-8")
    return json.loads(text)


def build_p2_metric() -> PiecewiseMetric:
    return metric_from_json(p2_metric_data())


def map_to_3L(m: PiecewiseMetric, signed: bool = False) -> tuple[PiecewiseFunc, PiecewiseFunc]:
    """Unroll ``(v_i, h_i)`` on [0, L] into single functions ``v, h`` on [0, 3L].

    ``v_1(t) = v(t)``, ``v_3(t) = v(2L - t)``, ``v_2(t) = v(2L + t)``.  By
    default ``v_3`` enters with its printed (positive) orientation so that
    ``v`` is continuous; ``signed=True`` keeps the stored sign.
    """
    L = m.L

    def unroll(f1: PiecewiseFunc, f2: PiecewiseFunc, f3: PiecewiseFunc) -> PiecewiseFunc:
        out = list(f1.pieces)
        for p in reversed(f3.pieces):
            # q(s) = p(2L - s): reflect the local variable
            c = p.poly.center
            cs = [x if i % 2 == 0 else -x for i, x in enumerate(p.poly.coeffs)]
            out.append(Piece(2 * L - p.b, 2 * L - p.a, Poly(cs, center=2 * L - c), p.center_tag, p.glued))
        for p in f2.pieces:
            out.append(Piece(p.a + 2 * L, p.b + 2 * L, Poly(p.poly.coeffs, center=p.poly.center + 2 * L),
                             p.center_tag, p.glued))
        return PiecewiseFunc(tuple(out))

    v3 = m.v[2] if signed else m.v[2].scaled(m.v3_sign)
    return unroll(m.v[0], m.v[1], v3), unroll(*m.h)
