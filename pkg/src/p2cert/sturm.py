"""Sturm sequences, real-root counting and sign certificates.

All chains are computed over the integers.  Each remainder is a sign-safe
pseudo-remainder divided by its positive content, so every term is a
positive multiple of the corresponding term of the exact Euclidean chain and
the sign patterns (hence root counts) are identical.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .exactmath.poly import (
    IntPoly,
    derivative_int,
    eval_int_homogeneous,
    exact_div_int,
    from_fast,
    gcd_int,
    prem_int,
    primitive_int,
    to_fast,
)
from .exactmath.ratfunc import RatFunc
from .exactmath.rational import RationalLike, as_rational, format_rational


class Verdict(str, Enum):
    STRICTLY_POSITIVE = "StrictlyPositive"
    STRICTLY_NEGATIVE = "StrictlyNegative"
    HAS_ZERO = "HasZero"
    BOUNDARY_ZERO = "BoundaryZero"


class Sign(str, Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class SturmSequence:
    terms: tuple[IntPoly, ...]
    squarefree_input: IntPoly
    multiplicity_discarded: bool = False

    def __len__(self) -> int:
        return len(self.terms)


def _as_intpoly(p) -> IntPoly:
    if isinstance(p, IntPoly):
        return p
    if hasattr(p, "primitive"):
        return p.primitive()[1]
    return IntPoly.of(p)


def squarefree_part(p) -> IntPoly:
    """``p / gcd(p, p')`` as a primitive integer polynomial (same real root set)."""
    p = _as_intpoly(p)
    if p.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    c = primitive_int(list(p.coeffs))
    if len(c) <= 2:
        return IntPoly(tuple(c), p.center)
    g = gcd_int(c, derivative_int(c))
    if len(g) > 1:
        c = primitive_int(exact_div_int(c, g))
    return IntPoly(tuple(c), p.center)


def _chain(a: list) -> list[list]:
    terms = [a]
    if len(a) > 1:
        b = primitive_int(derivative_int(a))
        terms.append(b)
        while len(b) > 1:
            r = prem_int(a, b, sign_safe=True)
            if not r:
                break  # b is gcd(p, p'): p was not squarefree
            nxt = [-x for x in primitive_int(r)]
            terms.append(nxt)
            a, b = b, nxt
    return terms


def sturm_sequence(p) -> SturmSequence:
    """Sturm chain of the squarefree part of ``p``.

    The chain of ``p`` itself ends in ``gcd(p, p')``; only when that is not
    constant is ``p`` reduced and the chain recomputed.
    """
    p = _as_intpoly(p)
    if p.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    a = to_fast(primitive_int(list(p.coeffs)))
    terms = _chain(a)
    discarded = len(terms[-1]) > 1
    if discarded:
        a = primitive_int(exact_div_int(a, terms[-1]))
        terms = _chain(a)
    sq = IntPoly(tuple(from_fast(a)), p.center)
    return SturmSequence(
        terms=tuple(IntPoly(tuple(from_fast(t)), p.center) for t in terms),
        squarefree_input=sq,
        multiplicity_discarded=discarded,
    )


def _signs(seq: SturmSequence, x: Fraction) -> list[int]:
    s = x - seq.squarefree_input.center
    out = []
    for term in seq.terms:
        v = eval_int_homogeneous(term.coeffs, s.numerator, s.denominator)
        out.append((v > 0) - (v < 0))
    return out


def sign_changes(values: Iterable) -> int:
    """Sign changes in a sequence, skipping exact zeros."""
    n = 0
    last = 0
    for v in values:
        s = (v > 0) - (v < 0)
        if s == 0:
            continue
        if last and s != last:
            n += 1
        last = s
    return n


def evaluate_chain(seq: SturmSequence, x: RationalLike) -> list[Fraction]:
    x = as_rational(x)
    return [t(x) for t in seq.terms]


def count_roots(p, a: RationalLike, b: RationalLike, seq: SturmSequence | None = None) -> int:
    """Number of distinct real roots in the half-open interval ``(a, b]``."""
    a, b = as_rational(a), as_rational(b)
    if not a < b:
        raise ValueError("count_roots needs a < b")
    seq = seq or sturm_sequence(p)
    return sign_changes(_signs(seq, a)) - sign_changes(_signs(seq, b))


@dataclass(frozen=True)
class SignCertificate:
    polynomial: IntPoly
    interval: tuple[Fraction, Fraction]
    sign_changes_at_a: int
    sign_changes_at_b: int
    roots_in_half_open: int
    endpoint_values: tuple[Fraction, Fraction]
    verdict: Verdict
    chain_degrees: tuple[int, ...] = ()
    squarefree_reduced: bool = False

    @property
    def ok(self) -> bool:
        return self.verdict == Verdict.STRICTLY_POSITIVE

    def to_json(self) -> dict:
        return {
            "center": format_rational(self.polynomial.center),
            "poly": [str(c) for c in self.polynomial.coeffs],
            "interval": [format_rational(self.interval[0]), format_rational(self.interval[1])],
            "sturm": {
                "chain_lengths": len(self.chain_degrees),
                "chain_degrees": list(self.chain_degrees),
                "sign_changes": [self.sign_changes_at_a, self.sign_changes_at_b],
                "squarefree_reduced": self.squarefree_reduced,
            },
            "roots": self.roots_in_half_open,
            "verdict": self.verdict.value,
        }


def certify_positive(p, a: RationalLike, b: RationalLike) -> SignCertificate:
    """Certify ``p > 0`` on the closed interval ``[a, b]``.

    A zero at ``a`` gives ``BoundaryZero``; a zero at ``b`` is counted by the
    half-open root count and gives ``HasZero``.
    """
    p = _as_intpoly(p)
    a, b = as_rational(a), as_rational(b)
    if not a < b:
        raise ValueError("certify_positive needs a < b")
    if p.is_zero():
        raise ValueError("cannot certify the zero polynomial")
    va, vb = p(a), p(b)
    if p.degree == 0:
        verdict = Verdict.STRICTLY_POSITIVE if va > 0 else Verdict.STRICTLY_NEGATIVE
        return SignCertificate(p, (a, b), 0, 0, 0, (va, vb), verdict, (0,), False)
    seq = sturm_sequence(p)
    sa = sign_changes(_signs(seq, a))
    sb = sign_changes(_signs(seq, b))
    roots = sa - sb
    if va == 0:
        verdict = Verdict.BOUNDARY_ZERO
    elif roots:
        verdict = Verdict.HAS_ZERO
    else:
        verdict = Verdict.STRICTLY_POSITIVE if va > 0 else Verdict.STRICTLY_NEGATIVE
    return SignCertificate(
        p, (a, b), sa, sb, roots, (va, vb), verdict,
        tuple(t.degree for t in seq.terms), seq.multiplicity_discarded,
    )


@dataclass(frozen=True)
class SignResult:
    sign: Sign
    numerator: SignCertificate
    denominator: SignCertificate
    witness: str = ""

    @property
    def positive(self) -> bool:
        return self.sign == Sign.POSITIVE

    def to_json(self) -> dict:
        return {
            "sign": self.sign.value,
            "witness": self.witness,
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
        }


_DEFINITE = (Verdict.STRICTLY_POSITIVE, Verdict.STRICTLY_NEGATIVE)


def certify_sign(f: RatFunc, a: RationalLike, b: RationalLike) -> SignResult:
    """Sign of a rational function on ``[a, b]`` from separate numerator/denominator certificates."""
    f = RatFunc.coerce(f)
    _, n, d = f.int_parts()
    if n.is_zero():
        zero = IntPoly((), f.center)
        a, b = as_rational(a), as_rational(b)
        cert = SignCertificate(zero, (a, b), 0, 0, 0, (Fraction(0), Fraction(0)), Verdict.BOUNDARY_ZERO)
        return SignResult(Sign.INDETERMINATE, cert, certify_positive(d, a, b), "numerator is identically zero")
    cn = certify_positive(n, a, b)
    cd = certify_positive(d, a, b)
    if cn.verdict in _DEFINITE and cd.verdict in _DEFINITE:
        same = (cn.verdict == Verdict.STRICTLY_POSITIVE) == (cd.verdict == Verdict.STRICTLY_POSITIVE)
        return SignResult(Sign.POSITIVE if same else Sign.NEGATIVE, cn, cd)
    bad = cn if cn.verdict not in _DEFINITE else cd
    which = "numerator" if bad is cn else "denominator"
    return SignResult(
        Sign.INDETERMINATE, cn, cd,
        f"{which}: {bad.verdict.value}, roots in (a,b] = {bad.roots_in_half_open}",
    )


def _certify_task(args):
    f, a, b = args
    return certify_sign(f, a, b)


def certify_many(items: Sequence[tuple[RatFunc, Fraction, Fraction]], jobs: int = 1) -> list[SignResult]:
    """Certify many rational functions; results come back in input order."""
    if jobs <= 1 or len(items) < 2:
        return [certify_sign(f, a, b) for f, a, b in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_certify_task, items))
