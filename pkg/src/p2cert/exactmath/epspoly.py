"""Polynomials in the fiber-scaling parameter eps with function coefficients.

Coefficients may be any exact ring element that supports ``+ - *`` and
``is_zero()`` (:class:`RatFunc`, :class:`LocalFrac`).  Negative degrees are
allowed while intermediate expressions contain ``1/eps`` (the inverse of the
fiber metric); finished curvature components only have non-negative degrees.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

from .rational import RationalLike, as_rational


class EpsPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Any] | None = None):
        clean = {}
        for d, c in (terms or {}).items():
            if not _is_zero(c):
                clean[int(d)] = c
        self.terms: dict[int, Any] = dict(sorted(clean.items()))

    @classmethod
    def scalar(cls, c: Any, degree: int = 0) -> "EpsPoly":
        return cls({degree: c})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero EpsPoly has no degree")
        return next(iter(self.terms))

    @property
    def max_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero EpsPoly has no degree")
        return next(reversed(self.terms))

    def coeff(self, d: int, zero: Any = 0) -> Any:
        return self.terms.get(d, zero)

    def __add__(self, other):
        o = _coerce(other)
        out = dict(self.terms)
        for d, c in o.terms.items():
            out[d] = out[d] + c if d in out else c
        return EpsPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return EpsPoly({d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def mul(self, other, max_degree: int | None = None) -> "EpsPoly":
        o = _coerce(other)
        out: dict[int, Any] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in o.terms.items():
                d = d1 + d2
                if max_degree is not None and d > max_degree:
                    continue
                p = c1 * c2
                out[d] = out[d] + p if d in out else p
        return EpsPoly(out)

    def __mul__(self, other):
        if isinstance(other, EpsPoly):
            return self.mul(other)
        return EpsPoly({d: c * other for d, c in self.terms.items()})

    def __rmul__(self, other):
        return EpsPoly({d: other * c for d, c in self.terms.items()})

    def shift(self, k: int) -> "EpsPoly":
        """Multiply by ``eps**k``."""
        return EpsPoly({d + k: c for d, c in self.terms.items()})

    def truncate(self, max_degree: int) -> "EpsPoly":
        return EpsPoly({d: c for d, c in self.terms.items() if d <= max_degree})

    def map(self, fn: Callable[[Any], Any]) -> "EpsPoly":
        return EpsPoly({d: fn(c) for d, c in self.terms.items()})

    def __eq__(self, other):
        try:
            diff = self - _coerce(other)
        except TypeError:
            return NotImplemented
        return diff.is_zero()

    __hash__ = None

    def evaluate(self, eps: RationalLike, t: RationalLike | None = None):
        """Substitute ``eps``; with ``t`` also evaluate each coefficient at ``t``."""
        eps = as_rational(eps)
        total = None
        for d, c in self.terms.items():
            val = c(t) if t is not None else c
            term = val * eps ** d
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def lowest_term(self) -> tuple[int, Any]:
        if not self.terms:
            raise ValueError("lowest term of the zero EpsPoly")
        d = self.min_degree
        return d, self.terms[d]

    def __repr__(self) -> str:
        if not self.terms:
            return "EpsPoly(0)"
        return "EpsPoly(" + " + ".join(f"eps^{d}*[{c!r}]" for d, c in self.terms.items()) + ")"


def _is_zero(c: Any) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def _coerce(x) -> EpsPoly:
    if isinstance(x, EpsPoly):
        return x
    return EpsPoly({0: x})


def epspoly_lowest_term(e: EpsPoly) -> tuple[int, Any]:
    """Minimal eps-degree and its coefficient; the zero input is a usage error."""
    return e.lowest_term()


def eps_sum(items: Iterable[EpsPoly]) -> EpsPoly:
    out = EpsPoly()
    for x in items:
        out = out + x
    return out
