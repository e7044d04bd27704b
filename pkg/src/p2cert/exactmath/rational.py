"""Rational scalars.

The scalar field is :class:`fractions.Fraction`; this module only adds the
string conventions shared by every file format (``"p/q"``, ``q`` omitted
when it is 1).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction, str]

__all__ = ["Fraction", "RationalLike", "as_rational", "format_rational", "parse_rational", "rat_arith"]


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; whitespace is not accepted inside the literal."""
    if not isinstance(text, str):
        raise TypeError(f"expected a rational string, got {type(text).__name__}")
    s = text.strip()
    if "/" in s:
        n, d = s.split("/", 1)
        den = int(d)
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        return Fraction(int(n), den)
    return Fraction(int(s))


def format_rational(x: RationalLike) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rat_arith(a: RationalLike, b: RationalLike, op: str) -> Fraction:
    """Apply one of ``+ - * /`` exactly. Division by zero raises ZeroDivisionError."""
    a, b = as_rational(a), as_rational(b)
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown operator {op!r}")
