"""Rational functions in one local variable, kept in lowest terms."""
from __future__ import annotations

from fractions import Fraction

from .poly import (
    IntPoly,
    Poly,
    VariableMismatch,
    content,
    exact_div_int,
    gcd_int,
)
from .rational import RationalLike, as_rational, format_rational


class RatFunc:
    """``num / den`` with ``gcd(num, den) = 1``.

    The denominator is a primitive integer polynomial with positive leading
    coefficient; every rational scalar lives in the numerator.  With that
    normalization two equal rational functions are structurally equal.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | RationalLike, den: Poly | RationalLike = 1, *, reduced: bool = False):
        if not isinstance(num, Poly):
            num = Poly.constant(as_rational(num))
        if not isinstance(den, Poly):
            den = Poly.constant(as_rational(den), num.center)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.center != den.center and not num.is_constant() and not den.is_constant():
            raise VariableMismatch("numerator and denominator in different variables")
        center = num.center if not num.is_constant() else den.center
        ns, ni = num.primitive()
        ds, di = den.primitive()
        n, d = list(ni.coeffs), list(di.coeffs)
        if not n:
            d, ds = [1], Fraction(1)
        elif not reduced and len(d) > 1:
            g = gcd_int(n, d)
            if len(g) > 1:
                n = exact_div_int(n, g)
                d = exact_div_int(d, g)
        scale = ns / ds
        if d[-1] < 0:
            d = [-x for x in d]
            scale = -scale
        g = content(d)
        if g > 1:
            d = [x // g for x in d]
            scale /= g
        object.__setattr__(self, "num", Poly.from_int(n, 1, center) * scale)
        object.__setattr__(self, "den", Poly.from_int(d, 1, center))

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    def __reduce__(self):
        return (_restore, (self.num, self.den))

    @property
    def center(self) -> Fraction:
        return self.num.center if not self.num.is_constant() else self.den.center

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return cls(x)
        return cls(as_rational(x))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc.coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return RatFunc(1) / (self ** (-n))
        return RatFunc(self.num ** n, self.den ** n, reduced=True)

    def __eq__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- calculus / evaluation ----------------------------------------------
    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x: RationalLike) -> Fraction:
        dv = self.den(x)
        if dv == 0:
            raise ZeroDivisionError(f"denominator vanishes at t={x}")
        return self.num(x) / dv

    def recenter(self, center: RationalLike) -> "RatFunc":
        return RatFunc(self.num.recenter(center), self.den.recenter(center), reduced=True)

    def int_parts(self) -> tuple[Fraction, IntPoly, IntPoly]:
        """``(scale, N, D)`` with ``self = scale * N / D``, scale > 0, N, D primitive."""
        s, n = self.num.primitive()
        _, d = self.den.primitive()
        return s, n, d

    def to_json(self) -> dict:
        s, n, d = self.int_parts()
        return {
            "center": format_rational(self.center),
            "scale": format_rational(s),
            "num": [str(c) for c in n.coeffs],
            "den": [str(c) for c in d.coeffs],
        }

    def __repr__(self) -> str:
        return f"RatFunc(({self.num}) / ({self.den}))"


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def _restore(num: Poly, den: Poly) -> RatFunc:
    """Rebuild an already-normalized instance (used by pickle)."""
    f = RatFunc.__new__(RatFunc)
    object.__setattr__(f, "num", num)
    object.__setattr__(f, "den", den)
    return f
