"""Dense univariate polynomials over the rationals.

A :class:`Poly` lives in a local variable ``s = t - center``.  Pieces near
the right end of the orbit interval are kept in ``t - L`` so coefficients
stay small; :meth:`Poly.recenter` converts exactly.

Internally a polynomial is a tuple of integers over one positive common
denominator.  All the heavy pipelines (curvature, determinants, Sturm chains)
run on those integer kernels, which are exposed as module-level helpers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from fractions import Fraction
from typing import Iterable, Sequence

from .rational import RationalLike, as_rational, format_rational

try:  # GMP integers make the Sturm chains several times faster
    import gmpy2
    _mpz = gmpy2.mpz
    _gcd = gmpy2.gcd
except ImportError:  # pragma: no cover - exercised only without gmpy2
    gmpy2 = None
    _mpz = int
    _gcd = math.gcd

IntSeq = Sequence[int]

# product size (len(a) * len(b)) above which Kronecker substitution is used
_KRONECKER_CUTOFF = 256


class VariableMismatch(ValueError):
    """Raised when polynomials in different local variables are combined."""


# ---------------------------------------------------------------------------
# integer coefficient kernels (lowest degree first)
# ---------------------------------------------------------------------------

def trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def add_int(a: IntSeq, b: IntSeq) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return trim(out)


def sub_int(a: IntSeq, b: IntSeq) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] -= y
    return trim(out)


def scale_int(a: IntSeq, k: int) -> list[int]:
    if k == 0:
        return []
    return [k * x for x in a]


def _schoolbook(a: IntSeq, b: IntSeq) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _kronecker(a: IntSeq, b: IntSeq) -> list[int]:
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    k = bound.bit_length() + 2
    x = _mpz(0)
    for c in reversed(a):
        x = (x << k) + c
    y = _mpz(0)
    for c in reversed(b):
        y = (y << k) + c
    z = x * y
    n = len(a) + len(b) - 1
    mask = (1 << k) - 1
    half = 1 << (k - 1)
    full = 1 << k
    out = []
    for _ in range(n):
        r = z & mask
        if r >= half:
            r -= full
        out.append(int(r))
        z = (z - r) >> k
    return out


def mul_int(a: IntSeq, b: IntSeq) -> list[int]:
    if not a or not b:
        return []
    if len(a) * len(b) > _KRONECKER_CUTOFF:
        return trim(_kronecker(a, b))
    return trim(_schoolbook(a, b))


def content(a: IntSeq) -> int:
    """Non-negative gcd of the coefficients (0 for the zero polynomial)."""
    g = 0
    for x in a:
        if x:
            g = _gcd(g, x)
            if g == 1:
                break
    return int(g)


def to_fast(a: IntSeq) -> list:
    """Coefficients as GMP integers when available (values are unchanged)."""
    return [_mpz(x) for x in a]


def from_fast(a: IntSeq) -> list[int]:
    return [int(x) for x in a]


def primitive_int(a: IntSeq) -> list[int]:
    """Divide by the positive content; signs of all values are unchanged."""
    g = content(a)
    if g <= 1:
        return list(a)
    return [x // g for x in a]


def derivative_int(a: IntSeq) -> list[int]:
    return [i * a[i] for i in range(1, len(a))]


def eval_int_homogeneous(a: IntSeq, num: int, den: int) -> int:
    """Return ``den**deg * a(num/den)`` as an integer (``den > 0`` keeps the sign)."""
    if not a:
        return 0
    acc = a[-1]
    dpow = 1
    for c in reversed(a[:-1]):
        dpow *= den
        acc = acc * num + c * dpow
    return acc


def sign_at(a: IntSeq, x: Fraction) -> int:
    v = eval_int_homogeneous(a, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


def prem_int(a: IntSeq, b: IntSeq, sign_safe: bool = True) -> list[int]:
    """Pseudo-remainder of ``a`` by ``b``.

    Returns ``lc(b)**(da-db+1) * a mod b``.  With ``sign_safe`` the result is
    negated when that factor is negative, so it is always a *positive*
    multiple of the exact remainder.
    """
    if not b:
        raise ZeroDivisionError("pseudo-remainder by the zero polynomial")
    db = len(b) - 1
    r = list(a)
    da = len(r) - 1
    if da < db:
        return trim(r)
    lc = b[-1]
    steps = da - db + 1
    for d in range(da, db - 1, -1):
        top = r[d] if d < len(r) else 0
        r = [lc * x for x in r]
        if top:
            shift = d - db
            for j, y in enumerate(b):
                r[shift + j] -= top * y
        r = r[:d] if len(r) > d else r
    r = trim(r)
    if sign_safe and lc < 0 and steps % 2 == 1:
        r = [-x for x in r]
    return r


def exact_div_int(a: IntSeq, b: IntSeq) -> list[int]:
    """Exact quotient ``a / b`` for integer polynomials; raises if inexact."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        if r:
            raise ArithmeticError("inexact polynomial division")
        return []
    lc = b[-1]
    q = [0] * (len(r) - db)
    for d in range(len(r) - 1, db - 1, -1):
        top = r[d]
        if top == 0:
            continue
        c, m = divmod(top, lc)
        if m:
            raise ArithmeticError("inexact polynomial division")
        q[d - db] = c
        shift = d - db
        for j, y in enumerate(b):
            r[shift + j] -= c * y
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return trim(q)


def subresultant_gcd_int(a: IntSeq, b: IntSeq) -> list[int]:
    """Primitive, positive-leading gcd via the subresultant remainder sequence."""
    a, b = trim(list(a)), trim(list(b))
    if not a and not b:
        raise ValueError("gcd of two zero polynomials")
    if not b:
        g = primitive_int(a)
        return g if g[-1] > 0 else [-x for x in g]
    if not a:
        g = primitive_int(b)
        return g if g[-1] > 0 else [-x for x in g]
    if len(a) < len(b):
        a, b = b, a
    a, b = primitive_int(a), primitive_int(b)
    g, h = 1, 1
    while True:
        delta = len(a) - len(b)
        r = prem_int(a, b, sign_safe=False)
        if not r:
            break
        if len(r) == 1:
            return [1]
        a = b
        div = g * h ** delta
        b = [x // div for x in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g ** delta // h ** (delta - 1)
    out = primitive_int(b)
    return out if out[-1] > 0 else [-x for x in out]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d, r = d // 2, r + 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):  # deterministic below 3.3e24
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes(start: int = (1 << 61) - 1):
    n = start
    while True:
        if _is_prime(n):
            yield n
        n -= 2


def _gcd_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Monic gcd of two polynomials over GF(p)."""
    def norm(c):
        c = [x % p for x in c]
        while c and c[-1] == 0:
            c.pop()
        return c

    a, b = norm(a), norm(b)
    while b:
        inv = pow(b[-1], -1, p)
        db = len(b) - 1
        while len(a) - 1 >= db and a:
            f = a[-1] * inv % p
            shift = len(a) - 1 - db
            for j, y in enumerate(b):
                a[shift + j] = (a[shift + j] - f * y) % p
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def modular_gcd_int(a: IntSeq, b: IntSeq) -> list[int]:
    """Same result as :func:`subresultant_gcd_int`, by small primes and CRT.

    A prime not dividing the leading coefficients gives a gcd of degree at
    least the true one, so degree 0 modulo one prime settles coprimality.
    Otherwise images of minimal degree are combined until the lifted
    candidate divides both inputs, which proves it is the gcd.
    """
    a, b = primitive_int(trim(list(a))), primitive_int(trim(list(b)))
    if not a or not b or len(a) < 2 or len(b) < 2:
        return subresultant_gcd_int(a, b)
    lc = math.gcd(int(a[-1]), int(b[-1]))
    best, mod, lifted = None, 1, None
    for p in _primes():
        if a[-1] % p == 0 or b[-1] % p == 0:
            continue
        g = _gcd_mod(a, b, p)
        if len(g) == 1:
            return [1]
        g = [x * lc % p for x in g]
        if best is None or len(g) < best:
            best, mod, lifted = len(g), p, g
        elif len(g) == best:
            inv = pow(mod, -1, p)
            new = []
            for x, y in zip(lifted, g):
                new.append(x + mod * ((y - x) * inv % p))
            lifted, mod = new, mod * p
        else:
            continue
        half = mod // 2
        cand = [x - mod if x > half else x for x in lifted]
        cand = primitive_int(cand)
        if cand[-1] < 0:
            cand = [-x for x in cand]
        try:
            exact_div_int(a, cand)
            exact_div_int(b, cand)
        except ArithmeticError:
            continue
        return [int(x) for x in cand]


def gcd_int(a: IntSeq, b: IntSeq) -> list[int]:
    """Primitive, positive-leading gcd; modular for all but tiny inputs."""
    if min(len(a), len(b)) <= 4:
        return subresultant_gcd_int(a, b)
    return modular_gcd_int(a, b)


def taylor_shift_int(a: IntSeq, num: int, den: int) -> tuple[list[int], int]:
    """Return ``(c, D)`` with ``a(u + num/den) = c(u) / D`` exactly."""
    n = len(a) - 1
    if n < 0:
        return [], 1
    lin = [num, den]  # num + den*u
    acc = [a[-1]]
    dpow = 1
    for c in reversed(a[:-1]):
        dpow *= den
        acc = mul_int(acc, lin)
        acc = add_int(acc, [c * dpow])
    return acc, den ** n


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------

def _as_center(c: RationalLike) -> Fraction:
    return as_rational(c)


class Poly:
    """Exact rational polynomial in ``s = t - center``.

    ``Poly([0, 4, 0, -10])`` is ``4t - 10t^3``.  Instances are immutable.
    """

    __slots__ = ("num", "den", "center")

    def __init__(self, coeffs: Iterable[RationalLike] = (), center: RationalLike = 0):
        fr = [as_rational(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = [c.numerator * (den // c.denominator) for c in fr]
        self._set(num, den, _as_center(center))

    def _set(self, num: list[int], den: int, center: Fraction) -> None:
        trim(num)
        if not num:
            den = 1
        else:
            g = math.gcd(den, *num)
            if g > 1:
                num = [x // g for x in num]
                den //= g
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "center", center)

    @classmethod
    def from_int(cls, num: IntSeq, den: int = 1, center: RationalLike = 0) -> "Poly":
        if den <= 0:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            num, den = [-x for x in num], -den
        p = cls.__new__(cls)
        p._set(list(num), den, _as_center(center))
        return p

    @classmethod
    def constant(cls, c: RationalLike, center: RationalLike = 0) -> "Poly":
        return cls([c], center)

    @classmethod
    def monomial(cls, degree: int, coeff: RationalLike = 1, center: RationalLike = 0) -> "Poly":
        return cls([0] * degree + [coeff], center)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly.from_int, (list(self.num), self.den, self.center))

    # -- basic properties ---------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.num) - 1

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return len(self.num) <= 1

    @property
    def leading_coefficient(self) -> Fraction:
        return Fraction(self.num[-1], self.den) if self.num else Fraction(0)

    def coefficient(self, i: int) -> Fraction:
        return Fraction(self.num[i], self.den) if 0 <= i < len(self.num) else Fraction(0)

    # -- arithmetic ---------------------------------------------------------
    def _common_center(self, other: "Poly") -> Fraction:
        if self.center == other.center:
            return self.center
        if self.is_constant():
            return other.center
        if other.is_constant():
            return self.center
        raise VariableMismatch(
            f"polynomials in t-{format_rational(self.center)} and t-{format_rational(other.center)}"
        )

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other, self.center)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = self._common_center(o)
        d = self.den * o.den // math.gcd(self.den, o.den)
        a = scale_int(self.num, d // self.den)
        b = scale_int(o.num, d // o.den)
        return Poly.from_int(add_int(a, b), d, c)

    __radd__ = __add__

    def __neg__(self):
        return Poly.from_int([-x for x in self.num], self.den, self.center)

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
            f = as_rational(other)
            return Poly.from_int(scale_int(self.num, f.numerator), self.den * f.denominator, self.center)
        if not isinstance(other, Poly):
            return NotImplemented
        c = self._common_center(other)
        return Poly.from_int(mul_int(self.num, other.num), self.den * other.den, c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("polynomial divided by zero scalar")
            return self * (1 / as_rational(other))
        return NotImplemented

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Poly.constant(1, self.center)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other, self.center)
        if not isinstance(other, Poly):
            return NotImplemented
        if self.num != other.num or self.den != other.den:
            return False
        return self.center == other.center or self.is_constant()

    def __hash__(self):
        return hash((self.num, self.den, self.center if len(self.num) > 1 else None))

    # -- calculus / evaluation ------------------------------------------------
    def derivative(self, order: int = 1) -> "Poly":
        num = list(self.num)
        for _ in range(order):
            num = derivative_int(num)
        return Poly.from_int(num, self.den, self.center)

    def __call__(self, x: RationalLike) -> Fraction:
        """Evaluate at the absolute point ``t = x``."""
        s = as_rational(x) - self.center
        v = eval_int_homogeneous(self.num, s.numerator, s.denominator)
        return Fraction(v, self.den * s.denominator ** max(self.degree, 0))

    def eval_local(self, s: RationalLike) -> Fraction:
        """Evaluate at the local variable value ``s = t - center``."""
        return self(as_rational(s) + self.center)

    def recenter(self, center: RationalLike) -> "Poly":
        """Exact rewrite in ``t - center``."""
        center = _as_center(center)
        if center == self.center or self.is_constant():
            return Poly.from_int(list(self.num), self.den, center)
        delta = center - self.center
        c, d = taylor_shift_int(self.num, delta.numerator, delta.denominator)
        return Poly.from_int(c, self.den * d, center)

    def divrem(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Quotient and remainder over the rationals."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        c = self._common_center(other)
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(r) - 1 < db:
            return Poly.constant(0, c), Poly(r, c)
        q = [Fraction(0)] * (len(r) - db)
        lc = b[-1]
        for d in range(len(r) - 1, db - 1, -1):
            top = r[d]
            if top == 0:
                continue
            f = top / lc
            q[d - db] = f
            for j, y in enumerate(b):
                r[d - db + j] -= f * y
        return Poly(q, c), Poly(r[:db], c)

    def primitive(self) -> tuple[Fraction, "IntPoly"]:
        """Split as ``scale * IntPoly`` with ``scale > 0`` and a primitive integer part."""
        if self.is_zero():
            return Fraction(1), IntPoly((), self.center)
        g = content(self.num)
        return Fraction(g, self.den), IntPoly(tuple(x // g for x in self.num), self.center)

    # -- presentation -------------------------------------------------------
    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str], center: RationalLike = 0) -> "Poly":
        return cls([as_rational(x) for x in data], center)

    def _var(self) -> str:
        if self.center == 0:
            return "t"
        return f"(t-{format_rational(self.center)})"

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        v = self._var()
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (v if i == 1 else f"{v}^{i}")
            cs = format_rational(c)
            parts.append(cs if not mono else (mono if c == 1 else f"-{mono}" if c == -1 else f"{cs}*{mono}"))
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class IntPoly:
    """Primitive integer polynomial in ``t - center`` (sign-relevant normal form)."""

    coeffs: tuple[int, ...]
    center: Fraction = Fraction(0)

    @classmethod
    def of(cls, coeffs: Iterable[int], center: RationalLike = 0, *, normalize: bool = True) -> "IntPoly":
        c = trim([int(x) for x in coeffs])
        if normalize:
            c = primitive_int(c)
        return cls(tuple(c), as_rational(center))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_poly(self) -> Poly:
        return Poly.from_int(list(self.coeffs), 1, self.center)

    def __call__(self, x: RationalLike) -> Fraction:
        return self.to_poly()(x)

    def sign_at(self, x: RationalLike) -> int:
        return sign_at(self.coeffs, as_rational(x) - self.center)

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(derivative_int(self.coeffs)), self.center)

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-x for x in self.coeffs), self.center)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.center != other.center and self.degree > 0 and other.degree > 0:
            raise VariableMismatch("IntPoly centers differ")
        center = self.center if self.degree > 0 else other.center
        return IntPoly(tuple(mul_int(self.coeffs, other.coeffs)), center)


def poly_gcd(p: Poly | IntPoly, q: Poly | IntPoly) -> IntPoly:
    """Primitive gcd with positive leading coefficient."""
    pa = p.primitive()[1] if isinstance(p, Poly) else p
    qa = q.primitive()[1] if isinstance(q, Poly) else q
    if pa.center != qa.center and pa.degree > 0 and qa.degree > 0:
        raise VariableMismatch("gcd of polynomials in different variables")
    center = pa.center if pa.degree > 0 else qa.center
    return IntPoly(tuple(gcd_int(pa.coeffs, qa.coeffs)), center)


def pseudo_remainder(p: IntPoly, q: IntPoly) -> IntPoly:
    """Sign-safe pseudo-remainder: a positive integer multiple of ``rem(p, q)``."""
    if q.is_zero():
        raise ZeroDivisionError("pseudo-remainder by zero polynomial")
    return IntPoly(tuple(prem_int(p.coeffs, q.coeffs)), p.center)


def poly_divrem(p: Poly | IntPoly, q: Poly | IntPoly) -> tuple[Poly, Poly]:
    pp = p.to_poly() if isinstance(p, IntPoly) else p
    qq = q.to_poly() if isinstance(q, IntPoly) else q
    return pp.divrem(qq)
