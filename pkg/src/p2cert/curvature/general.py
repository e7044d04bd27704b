"""Curvature of a cohomogeneity-one metric on su(2)+su(2) from the homogeneous formulas.

The Lie algebra has basis ``X_1, X_2, X_3, Y_1, Y_2, Y_3`` with
``[X_i, X_j] = 2 X_k``, ``[Y_i, Y_j] = 2 Y_k`` for cyclic ``(i, j, k)`` and a
bi-invariant inner product ``Q`` making the basis orthonormal.  The metric
is ``g(U*, W*) = Q(P U, W)`` with

    P X_i = f_i X_i + h_i Y_i,    P Y_i = h_i X_i + g_i Y_i,

plus the unit normal direction ``T``.  Components are returned in the
convention ``R_abcd = g(R(a, b) d, c)``, so that ``R_abab`` is the
(unnormalized) sectional curvature.

The engine is generic in the scalar type: :class:`fractions.Fraction`
(values and derivatives at a point) or :class:`EpsPoly` with function
coefficients (symbolic).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

from ..exactmath.epspoly import EpsPoly

# basis indices 0..2 -> X_1..X_3, 3..5 -> Y_1..Y_3, 6 -> T
T = 6
ACTION_LABELS = ("X1", "X2", "X3", "Y1", "Y2", "Y3", "T")


class DegenerateMetric(ArithmeticError):
    def __init__(self, index: int):
        super().__init__(f"D_{index + 1} = f_{index + 1} g_{index + 1} - h_{index + 1}^2 is not invertible")
        self.index = index


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero()


def _derive(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(0)
    if isinstance(x, EpsPoly):
        return x.map(lambda c: c.derivative() if hasattr(c, "derivative") else Fraction(0))
    return x.derivative()


@dataclass
class GeneralMetricData:
    """``f_i, g_i, h_i`` with their first two t-derivatives and ``1/D_i``.

    ``inv_D`` may be omitted when the ``D_i`` are invertible scalars (or
    eps-monomials whose coefficient supports ``1/x``).
    """

    f: Sequence[Any]
    g: Sequence[Any]
    h: Sequence[Any]
    inv_D: Sequence[Any] | None = None
    f1: Sequence[Any] | None = None
    g1: Sequence[Any] | None = None
    h1: Sequence[Any] | None = None
    f2: Sequence[Any] | None = None
    g2: Sequence[Any] | None = None
    h2: Sequence[Any] | None = None

    def __post_init__(self):
        for name in ("f", "g", "h"):
            vals = getattr(self, name)
            d1 = getattr(self, name + "1")
            if d1 is None:
                d1 = [_derive(x) for x in vals]
                setattr(self, name + "1", d1)
            if getattr(self, name + "2") is None:
                setattr(self, name + "2", [_derive(x) for x in d1])
        self.D = [self.f[i] * self.g[i] - self.h[i] * self.h[i] for i in range(3)]
        if self.inv_D is None:
            self.inv_D = [_invert(d, i) for i, d in enumerate(self.D)]

    @classmethod
    def at_point(cls, f, g, h, f1, g1, h1, f2, g2, h2) -> "GeneralMetricData":
        """Numeric data: values and derivatives at one point, all rationals."""
        conv = lambda xs: [Fraction(x) for x in xs]
        return cls(conv(f), conv(g), conv(h), None, conv(f1), conv(g1), conv(h1), conv(f2), conv(g2), conv(h2))


def _invert(d, i: int):
    if _is_zero(d):
        raise DegenerateMetric(i)
    if isinstance(d, (int, Fraction)):
        return 1 / Fraction(d)
    if isinstance(d, EpsPoly) and len(d.terms) == 1:
        deg, c = d.lowest_term()
        if isinstance(c, (int, Fraction)):
            return EpsPoly({-deg: 1 / Fraction(c)})
        return EpsPoly({-deg: 1 / c})
    raise DegenerateMetric(i)


def _sign_cyclic(i: int, j: int) -> int:
    if i == j:
        return 0
    return 1 if (j - i) % 3 == 1 else -1


class GZ2Curvature:
    """Memoized evaluation of all curvature components."""

    def __init__(self, data: GeneralMetricData, zero: Any = Fraction(0)):
        self.d = data
        self.zero = zero
        self._c4: dict = {}
        self._c3: dict = {}
        self._cT: dict = {}

    # vectors are dicts {basis index: scalar}
    def _add(self, out: dict, idx: int, c) -> None:
        if idx in out:
            out[idx] = out[idx] + c
        else:
            out[idx] = c

    def bracket(self, u: dict, w: dict) -> dict:
        out: dict = {}
        for a, ca in u.items():
            for b, cb in w.items():
                if (a < 3) != (b < 3):
                    continue
                i, j = a % 3, b % 3
                s = _sign_cyclic(i, j)
                if s:
                    k = 3 - i - j
                    self._add(out, k + (0 if a < 3 else 3), ca * cb * (2 * s))
        return out

    def _apply(self, u: dict, f, g, h) -> dict:
        out: dict = {}
        for a, c in u.items():
            i = a % 3
            if a < 3:
                self._add(out, i, c * f[i])
                self._add(out, i + 3, c * h[i])
            else:
                self._add(out, i, c * h[i])
                self._add(out, i + 3, c * g[i])
        return out

    def P(self, u: dict, order: int = 0) -> dict:
        d = self.d
        if order == 0:
            return self._apply(u, d.f, d.g, d.h)
        if order == 1:
            return self._apply(u, d.f1, d.g1, d.h1)
        return self._apply(u, d.f2, d.g2, d.h2)

    def P_inv(self, u: dict) -> dict:
        d = self.d
        out: dict = {}
        for a, c in u.items():
            i = a % 3
            inv = d.inv_D[i]
            if a < 3:
                self._add(out, i, c * d.g[i] * inv)
                self._add(out, i + 3, -(c * d.h[i] * inv))
            else:
                self._add(out, i, -(c * d.h[i] * inv))
                self._add(out, i + 3, c * d.f[i] * inv)
        return out

    def Q(self, u: dict, w: dict):
        total = self.zero
        for a, c in u.items():
            if a in w:
                total = total + c * w[a]
        return total

    def B(self, u: dict, w: dict, sign: int) -> dict:
        """``B_+`` for ``sign = +1`` and ``B_-`` for ``sign = -1``."""
        first = self.bracket(u, self.P(w))
        second = self.bracket(self.P(u), w)
        out = dict(first)
        for a, c in second.items():
            self._add(out, a, c if sign < 0 else -c)
        return {a: c * Fraction(1, 2) for a, c in out.items()}

    @staticmethod
    def e(a: int) -> dict:
        return {a: Fraction(1)}

    # g(R(X,Y)Z,W) for basis vectors of the Lie algebra
    def _gz4(self, x: int, y: int, z: int, w: int):
        key = (x, y, z, w)
        if key in self._c4:
            return self._c4[key]
        X, Y, Z, W = (self.e(a) for a in key)
        Q, br, P = self.Q, self.bracket, self.P
        val = (
            -Q(self.B(X, Y, -1), br(Z, W)) * Fraction(1, 2)
            - Q(br(X, Y), self.B(Z, W, -1)) * Fraction(1, 2)
            + Q(P(br(X, Y)), br(Z, W)) * Fraction(1, 2)
            + Q(P(br(X, Z)), br(Y, W)) * Fraction(1, 4)
            - Q(P(br(X, W)), br(Y, Z)) * Fraction(1, 4)
            + Q(self.B(X, Z, 1), self.P_inv(self.B(Y, W, 1)))
            - Q(self.B(X, W, 1), self.P_inv(self.B(Y, Z, 1)))
            + Q(P(X, 1), Z) * Q(P(Y, 1), W) * Fraction(1, 4)
            - Q(P(X, 1), W) * Q(P(Y, 1), Z) * Fraction(1, 4)
        )
        self._c4[key] = val
        return val

    # g(R(X,Y)Z,T)
    def _gz3(self, x: int, y: int, z: int):
        key = (x, y, z)
        if key in self._c3:
            return self._c3[key]
        X, Y, Z = (self.e(a) for a in key)
        Q, br, P = self.Q, self.bracket, self.P
        val = (
            Q(br(X, Y), P(Z, 1)) * Fraction(1, 2)
            - Q(br(Z, X), P(Y, 1)) * Fraction(1, 4)
            - Q(br(Y, Z), P(X, 1)) * Fraction(1, 4)
            - Q(P(X, 1), self.P_inv(self.B(Y, Z, 1))) * Fraction(1, 2)
            + Q(P(Y, 1), self.P_inv(self.B(Z, X, 1))) * Fraction(1, 2)
        )
        self._c3[key] = val
        return val

    # g(R(X,T)T,Y)
    def _gzT(self, x: int, y: int):
        key = (x, y)
        if key in self._cT:
            return self._cT[key]
        X, Y = self.e(x), self.e(y)
        P1X = self.P(X, 1)
        val = -self.Q(self.P(X, 2), Y) * Fraction(1, 2) + self.Q(self.P(self.P_inv(P1X), 1), Y) * Fraction(1, 4)
        self._cT[key] = val
        return val

    def component(self, a: int, b: int, c: int, d: int):
        """``R_abcd = g(R(a, b) d, c)`` on the basis ``X_1..3, Y_1..3, T``."""
        nt = (a == T) + (b == T) + (c == T) + (d == T)
        if nt == 0:
            return -self._gz4(a, b, c, d)
        if nt == 1:
            # move T to the last slot using the algebraic symmetries
            if d == T:
                return -self._gz3(a, b, c)
            if c == T:
                return self._gz3(a, b, d)
            if b == T:
                return -self._gz3(c, d, a)
            return self._gz3(c, d, b)
        if nt == 2:
            if (a == T and b == T) or (c == T and d == T):
                return self.zero
            # R_{xTyT} = g(R(x,T)T,y)
            x = a if a != T else b
            y = c if c != T else d
            sign = (1 if b == T else -1) * (1 if d == T else -1)
            val = self._gzT(x, y)
            return val if sign > 0 else -val
        return self.zero


def general_curvature(data: GeneralMetricData, zero: Any = Fraction(0)) -> GZ2Curvature:
    return GZ2Curvature(data, zero)


def all_components(curv: GZ2Curvature, is_zero: Callable[[Any], bool] = _is_zero) -> dict[tuple[str, ...], Any]:
    """Nonzero components over canonical index tuples (a<b, c<d, (a,b)<=(c,d))."""
    out = {}
    pairs = [(a, b) for a in range(7) for b in range(a + 1, 7)]
    for n, p in enumerate(pairs):
        for q in pairs[n:]:
            val = curv.component(*p, *q)
            if not is_zero(val):
                out[tuple(ACTION_LABELS[x] for x in (*p, *q))] = val
    return out
