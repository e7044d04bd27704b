"""Fractions whose denominator is a monomial in a fixed list of polynomials.

Every curvature quantity of a connection metric is a polynomial in ``t``
divided by a product of powers of ``v_1, v_2, v_3``.  Working in that
localized ring needs no gcd at all: addition takes the componentwise maximum
exponent, multiplication adds exponents.  :meth:`LocalFrac.to_ratfunc`
produces the lowest-terms :class:`RatFunc` when a canonical form is needed,
cancelling only against the known denominator factors.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import (
    Poly,
    exact_div_int,
    gcd_int,
    mul_int,
    primitive_int,
    trim,
)
from .ratfunc import RatFunc
from .rational import RationalLike, as_rational


class LocalRing:
    """Context fixing the denominator factors (e.g. the three ``v_i`` on one piece)."""

    def __init__(self, factors: Sequence[Poly]):
        if not factors:
            raise ValueError("need at least one denominator factor")
        centers = {f.center for f in factors if not f.is_constant()}
        if len(centers) > 1:
            raise ValueError("denominator factors live in different variables")
        self.factors = tuple(factors)
        self.center = centers.pop() if centers else Fraction(0)
        self._pow: dict[tuple[int, int], Poly] = {}
        self.zero_exps = (0,) * len(factors)

    def power(self, i: int, e: int) -> Poly:
        if e == 0:
            return Poly.constant(1, self.center)
        key = (i, e)
        p = self._pow.get(key)
        if p is None:
            p = self.factors[i] if e == 1 else self.power(i, e - 1) * self.factors[i]
            self._pow[key] = p
        return p

    def monomial(self, exps: Sequence[int]) -> Poly:
        out = Poly.constant(1, self.center)
        for i, e in enumerate(exps):
            if e:
                out = out * self.power(i, e)
        return out

    def const(self, c: RationalLike) -> "LocalFrac":
        return LocalFrac(self, Poly.constant(as_rational(c), self.center), self.zero_exps)

    def poly(self, p: Poly) -> "LocalFrac":
        if not p.is_constant() and p.center != self.center:
            p = p.recenter(self.center)
        return LocalFrac(self, p, self.zero_exps)

    def inverse_factor(self, i: int, e: int = 1) -> "LocalFrac":
        exps = list(self.zero_exps)
        exps[i] = e
        return LocalFrac(self, Poly.constant(1, self.center), tuple(exps))

    def zero(self) -> "LocalFrac":
        return self.const(0)

    def one(self) -> "LocalFrac":
        return self.const(1)


class LocalFrac:
    """``num / prod(factor_i ** exps_i)`` over a :class:`LocalRing`."""

    __slots__ = ("ring", "num", "exps")

    def __init__(self, ring: LocalRing, num: Poly, exps: tuple[int, ...]):
        self.ring = ring
        self.num = num
        self.exps = exps if not num.is_zero() else ring.zero_exps

    def _coerce(self, other) -> "LocalFrac | None":
        if isinstance(other, LocalFrac):
            if other.ring is not self.ring:
                raise ValueError("LocalFrac values from different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        if isinstance(other, Poly):
            return self.ring.poly(other)
        return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _lift(self, exps: tuple[int, ...]) -> Poly:
        extra = [e - f for e, f in zip(exps, self.exps)]
        if not any(extra):
            return self.num
        return self.num * self.ring.monomial(extra)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        exps = tuple(max(a, b) for a, b in zip(self.exps, o.exps))
        return LocalFrac(self.ring, self._lift(exps) + o._lift(exps), exps)

    __radd__ = __add__

    def __neg__(self):
        return LocalFrac(self.ring, -self.num, self.exps)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.ring.zero()
            return LocalFrac(self.ring, self.num * other, self.exps)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return self.ring.zero()
        return LocalFrac(self.ring, self.num * o.num, tuple(a + b for a, b in zip(self.exps, o.exps)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / as_rational(other))
        return NotImplemented

    def divide_by_factor(self, i: int, e: int = 1) -> "LocalFrac":
        exps = list(self.exps)
        exps[i] += e
        return LocalFrac(self.ring, self.num, tuple(exps))

    def __pow__(self, n: int) -> "LocalFrac":
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def derivative(self) -> "LocalFrac":
        """Quotient rule, keeping the denominator a monomial in the factors."""
        active = [i for i, e in enumerate(self.exps) if e]
        if not active:
            return LocalFrac(self.ring, self.num.derivative(), self.exps)
        # (n / prod b_i^e_i)' = (n' * prod b_i - n * sum e_i b_i' prod_{j!=i} b_j) / prod b_i^(e_i+1)
        prod_all = Poly.constant(1, self.ring.center)
        for i in active:
            prod_all = prod_all * self.ring.factors[i]
        top = self.num.derivative() * prod_all
        for i in active:
            rest = Poly.constant(self.exps[i], self.ring.center) * self.ring.factors[i].derivative()
            for j in active:
                if j != i:
                    rest = rest * self.ring.factors[j]
            top = top - self.num * rest
        exps = tuple(e + 1 if e else 0 for e in self.exps)
        return LocalFrac(self.ring, top, exps)

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_rational(x)
        den = Fraction(1)
        for i, e in enumerate(self.exps):
            if e:
                den *= self.ring.factors[i](x) ** e
        if den == 0:
            raise ZeroDivisionError(f"denominator factor vanishes at t={x}")
        return self.num(x) / den

    def denominator(self) -> Poly:
        return self.ring.monomial(self.exps)

    def to_ratfunc(self) -> RatFunc:
        """Lowest-terms form, cancelling only against the denominator factors."""
        if self.is_zero():
            return RatFunc(Poly.constant(0, self.ring.center))
        scale, ip = self.num.primitive()
        n = list(ip.coeffs)
        den_parts: list[list[int]] = []
        for i, e in enumerate(self.exps):
            if not e:
                continue
            fs, fi = self.ring.factors[i].primitive()
            f = list(fi.coeffs)
            scale /= fs ** e
            for _ in range(e):
                part = f
                if len(part) > 1 and len(n) > 1:
                    g = _gcd_with_small(n, part)
                    if len(g) > 1:
                        n = exact_div_int(n, g)
                        part = exact_div_int(part, g)
                den_parts.append(part)
        d = [1]
        for part in den_parts:
            d = mul_int(d, part)
        center = self.ring.center
        return RatFunc(Poly.from_int(n, 1, center) * scale, Poly.from_int(d, 1, center), reduced=True)

    def __repr__(self) -> str:
        return f"LocalFrac({self.num} / factors^{self.exps})"


def rem_small_int(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """A positive multiple of ``a mod b``; cheap when ``deg b`` is small."""
    db = len(b) - 1
    if db <= 0:
        return []
    if len(a) <= db:
        return trim(list(a))
    lc = b[-1]
    sgn = 1 if lc > 0 else -1
    alc = abs(lc)
    r = list(a[len(a) - db:])
    m = 1
    for c in reversed(a[: len(a) - db]):
        # r <- r*x + c (mod b), scaled by |lc|
        u = r[-1]
        r = [0] + r
        r = [alc * x for x in r]
        for j in range(db + 1):
            r[j] -= sgn * u * b[j]
        r.pop()
        m *= alc
        r[0] += c * m
    return trim(r)


def _gcd_with_small(n: Sequence[int], f: Sequence[int]) -> list[int]:
    r = rem_small_int(n, f)
    if not r:
        g = primitive_int(list(f))
        return g if g[-1] > 0 else [-x for x in g]
    return gcd_int(list(f), primitive_int(r))
