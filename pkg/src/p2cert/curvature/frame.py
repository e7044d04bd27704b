"""Base and connection quantities of a connection metric on one piece.

All quantities live in the localized ring whose denominators are monomials
in ``v_1, v_2, v_3``; canonical :class:`RatFunc` forms are produced lazily.
Indices are 0-based internally; ``(i, j, k)`` is always a permutation of
``(0, 1, 2)`` and, for the cyclic formulas, a cyclic one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..exactmath.localfrac import LocalFrac, LocalRing
from ..exactmath.poly import Poly
from ..exactmath.ratfunc import RatFunc
from ..metricdef.metric import PiecewiseMetric

CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
ORDERED_PAIRS = ((0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2))


def third(i: int, j: int) -> int:
    return 3 - i - j


@dataclass
class CurvatureFrame:
    """Frame quantities on a single piece (values are :class:`LocalFrac`)."""

    ring: LocalRing
    interval: tuple[Fraction, Fraction]
    v: tuple[Poly, Poly, Poly]
    h: tuple[Poly, Poly, Poly]
    beta: tuple[LocalFrac, ...]
    gamma: tuple[LocalFrac, ...]
    beta_prime: tuple[LocalFrac, ...]
    B: dict[tuple[int, int], LocalFrac]
    C: dict[tuple[int, int], LocalFrac]
    Lbase: tuple[LocalFrac, ...]
    Mbase: tuple[LocalFrac, ...]
    Nbase: tuple[LocalFrac, ...]
    piece: int = 0
    _rf: dict = field(default_factory=dict, repr=False)

    def quantity(self, name: str) -> LocalFrac:
        """Look up ``beta1``, ``gamma2``, ``B12``, ``L3``, ``beta_prime1`` ... (1-based)."""
        if name[0] in "BC" and len(name) == 3:
            table = self.B if name[0] == "B" else self.C
            return table[(int(name[1]) - 1, int(name[2]) - 1)]
        for prefix, vals in (("beta_prime", self.beta_prime), ("beta", self.beta), ("gamma", self.gamma),
                             ("L", self.Lbase), ("M", self.Mbase), ("N", self.Nbase)):
            rest = name[len(prefix):]
            if name.startswith(prefix) and rest.isdigit():
                return vals[int(rest) - 1]
        raise KeyError(name)

    def ratfunc(self, name: str) -> RatFunc:
        rf = self._rf.get(name)
        if rf is None:
            rf = self.quantity(name).to_ratfunc()
            self._rf[name] = rf
        return rf

    def names(self) -> list[str]:
        out = []
        for prefix in ("beta", "gamma", "beta_prime", "L", "M", "N"):
            out += [f"{prefix}{i}" for i in (1, 2, 3)]
        out += [f"B{i + 1}{j + 1}" for i, j in ORDERED_PAIRS]
        out += [f"C{i + 1}{j + 1}" for i, j in ORDERED_PAIRS]
        return out


def frame_from_polys(
    v: Sequence[Poly], h: Sequence[Poly], interval: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1)),
    piece: int = 0,
) -> CurvatureFrame:
    ring = LocalRing(tuple(v))
    P = ring.poly
    inv = ring.inverse_factor
    vv = [P(x) for x in v]
    hh = [P(x) for x in h]
    dv = [P(x.derivative()) for x in v]
    ddv = [P(x.derivative(2)) for x in v]
    dh = [P(x.derivative()) for x in h]
    sq = [x * x for x in vv]
    log_d = [dv[i] * inv(i) for i in range(3)]  # v_i'/v_i

    beta = tuple(dh[i] * inv(i) * Fraction(1, 2) for i in range(3))
    gamma = [None] * 3
    Lb, Mb, Nb = [None] * 3, [None] * 3, [None] * 3
    for i, j, k in CYCLIC:
        gamma[i] = -(hh[i] + hh[j] * hh[k]) * inv(j) * inv(k)
        Lb[k] = -ddv[k] * inv(k)
        top = sq[k] * (sq[i] + sq[j]) * 2 - sq[k] * sq[k] * 3 + (sq[i] - sq[j]) * (sq[i] - sq[j])
        Mb[k] = top * inv(i, 2) * inv(j, 2) * inv(k, 2) - log_d[i] * log_d[j]
        triple = inv(i) * inv(j) * inv(k)
        Nb[k] = (-dv[k] * inv(i) * inv(j) * 2
                 + log_d[i] * (sq[i] + sq[k] - sq[j]) * triple
                 + log_d[j] * (sq[j] + sq[k] - sq[i]) * triple)
    beta_prime = tuple(b.derivative() for b in beta)

    B, C = {}, {}
    for i, j in ORDERED_PAIRS:
        k = third(i, j)
        w1 = hh[j] * inv(j) * 2
        w2 = (sq[k] + sq[i] - sq[j]) * inv(i) * inv(j) * inv(k)
        w3 = log_d[j]
        B[(i, j)] = gamma[k] * w1 + gamma[i] * w2 + beta[i] * w3
        C[(i, j)] = beta[k] * w1 + beta[i] * w2 + gamma[i] * w3

    return CurvatureFrame(
        ring=ring, interval=interval, v=tuple(v), h=tuple(h),
        beta=beta, gamma=tuple(gamma), beta_prime=beta_prime, B=B, C=C,
        Lbase=tuple(Lb), Mbase=tuple(Mb), Nbase=tuple(Nb), piece=piece,
    )


def compute_frame(m: PiecewiseMetric, piece: int) -> CurvatureFrame:
    vs, hs = m.piece_polys(piece)
    return frame_from_polys(vs, hs, m.interval(piece), piece)


def base_curvature(m: PiecewiseMetric, piece: int) -> tuple[tuple[RatFunc, ...], tuple[RatFunc, ...], tuple[RatFunc, ...]]:
    """``(L, M, N)`` triples as canonical rational functions."""
    fr = compute_frame(m, piece)
    return tuple(tuple(fr.ratfunc(f"{p}{i}") for i in (1, 2, 3)) for p in "LMN")
