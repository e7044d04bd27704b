"""Thorpe's trick: the invariant 4-form, the modified curvature operator and its minors.

Blocks are indexed by 2-vectors of the unit frame ``X_i*, Zbar_i, T``.  The
entry of the modified operator at ``(a^b, c^d)`` is ``R(a, b, c, d) +
eta(a, b, c, d)``, with ``eta`` evaluated on the dual basis (so
``e_1^e_2^e_3^e_4`` gives ``1`` on ``(e_1, e_2, e_3, e_4)`` and the sign of
the permutation on any reordering).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .curvature.connection import (
    UNIT_LABELS,
    UnitFrameCurvature,
    X,
    Z,
    canonical,
    connection_curvature,
    eps_poly,
    table_lookup,
)
from .curvature.frame import CYCLIC, CurvatureFrame
from .exactmath.epspoly import EpsPoly
from .exactmath.localfrac import LocalFrac
from .exactmath.ratfunc import RatFunc

_INDEX = {name: n for n, name in enumerate(UNIT_LABELS)}

BLOCK_TRIPLES = {"A12": (0, 1, 2), "A23": (1, 2, 0), "A31": (2, 0, 1)}
BLOCK_LABELS = ("A0", "A12", "A23", "A31")
MODES = ("leading", "exact")
VARIANTS = ("corrected", "printed")

Wedge = tuple[str, str]


# -- the 4-form -------------------------------------------------------------

def _perm_sign(seq: Sequence[int]) -> int:
    s = list(seq)
    sign = 1
    for n in range(len(s)):
        for m in range(n + 1, len(s)):
            if s[n] > s[m]:
                sign = -sign
    return sign


class FourForm:
    """A 4-form on the 7-dimensional unit frame, stored on sorted index tuples."""

    def __init__(self):
        self.coeffs: dict[tuple[int, ...], EpsPoly] = {}

    def add_term(self, labels: Sequence[str], coeff: EpsPoly) -> None:
        idx = [_INDEX[x] for x in labels]
        if len(set(idx)) != 4:
            raise ValueError(f"degenerate wedge {labels}")
        key = tuple(sorted(idx))
        c = coeff if _perm_sign(idx) > 0 else -coeff
        self.coeffs[key] = self.coeffs.get(key, EpsPoly()) + c

    def __call__(self, a, b, c, d) -> EpsPoly:
        idx = [x if isinstance(x, int) else _INDEX[x] for x in (a, b, c, d)]
        if len(set(idx)) != 4:
            return EpsPoly()
        val = self.coeffs.get(tuple(sorted(idx)))
        if val is None:
            return EpsPoly()
        return val if _perm_sign(idx) > 0 else -val

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs.values())


@dataclass(frozen=True)
class PuttmannParams:
    """Coefficients of the invariant 4-form (0-based index ``i`` means ``a_{i+1}``)."""

    a: tuple[EpsPoly, EpsPoly, EpsPoly]
    b: tuple[EpsPoly, EpsPoly, EpsPoly]
    c: tuple[EpsPoly, EpsPoly, EpsPoly]
    d1: EpsPoly
    d2: EpsPoly

    def eta(self) -> FourForm:
        """The invariant 4-form spanned by these parameters."""
        f = FourForm()
        for i, j, k in CYCLIC:
            f.add_term((X(i), X(j), Z(i), Z(j)), self.a[k])
        # b_j X_i ^ Zbar_j ^ X_k ^ T for (i, j, k) cyclic
        for i, j, k in CYCLIC:
            f.add_term((X(i), Z(j), X(k), "T"), self.b[j])
        # c_i has X_i and the Zbar's of the other two indices
        for i, j, k in CYCLIC:
            labels = [Z(0), Z(1), Z(2), "T"]
            labels[i] = X(i)
            f.add_term(labels, self.c[i])
        f.add_term((X(0), X(1), X(2), "T"), self.d1)
        f.add_term((Z(0), Z(1), Z(2), "T"), self.d2)
        return f


def build_params(frame: CurvatureFrame) -> PuttmannParams:
    """The parameter choice used for the shipped metric."""
    g, bt = frame.gamma, frame.beta
    a, b = [None] * 3, [None] * 3
    half = Fraction(1, 2)
    for i, j, k in CYCLIC:
        a[i] = eps_poly((1, g[i]), (2, -(g[j] * g[k])))
        b[i] = eps_poly((1, -bt[i]), (2, (bt[j] * g[k] + bt[k] * g[j]) * half))
    zero = EpsPoly()
    return PuttmannParams(tuple(a), tuple(b), (zero, zero, zero), zero, EpsPoly({0: -frame.Nbase[1]}))


# -- blocks ------------------------------------------------------------------

def block_basis(label: str, size: int = 5) -> tuple[Wedge, ...]:
    """Ordered 2-vectors spanning the block ``label``."""
    if label == "A0":
        return tuple((X(i), Z(i)) for i in range(3))
    if label not in BLOCK_TRIPLES:
        raise KeyError(label)
    i, j, k = BLOCK_TRIPLES[label]
    rows = ((X(i), Z(j)), (Z(i), X(j)), (X(k), "T"), (Z(i), Z(j)), (Z(k), "T"))
    if size == 6:
        return ((X(i), X(j)),) + rows
    if size != 5:
        raise ValueError("A_ij blocks have size 5 or 6")
    return rows


@dataclass
class OperatorBlock:
    label: str
    basis: tuple[Wedge, ...]
    entries: list[list[Any]]
    mode: str = "leading"
    variant: str = "corrected"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_symmetric(self) -> bool:
        n = self.dim
        return all(self.entries[r][c] == self.entries[c][r] for r in range(n) for c in range(r + 1, n))

    def entry(self, r: int, c: int) -> Any:
        """1-based access, matching the row numbering of the displayed matrices."""
        return self.entries[r - 1][c - 1]

    def at_eps(self, eps) -> list[list[Any]]:
        """Entries with a rational ``eps`` substituted (coefficients stay functions of t)."""
        eps = Fraction(eps)
        out = []
        for row in self.entries:
            new_row = []
            for e in row:
                total = None
                for d, c in e.terms.items():
                    term = c * (eps ** d)
                    total = term if total is None else total + term
                new_row.append(total)
            out.append(new_row)
        return out


class TableCurvature:
    """Component access backed by the closed-form table (absent tuples are zero)."""

    def __init__(self, frame: CurvatureFrame, oracle: UnitFrameCurvature | None = None, *, printed: bool = False):
        self.frame = frame
        self.table = table_lookup(connection_curvature(frame, oracle, printed=printed, anticyclic=True))

    def component(self, a, b, c, d) -> EpsPoly:
        idx = [x if isinstance(x, int) else _INDEX[x] for x in (a, b, c, d)]
        key, sign = canonical(*idx)
        if sign == 0 or key not in self.table:
            return EpsPoly()
        val = self.table[key][0]
        return val if sign > 0 else -val


def _entry(curv, eta: FourForm | None, u: Wedge, w: Wedge) -> EpsPoly:
    val = curv.component(u[0], u[1], w[0], w[1])
    if eta is not None:
        val = val + eta(u[0], u[1], w[0], w[1])
    return val


def assemble_from_4form(
    curv,
    eta: FourForm | None,
    labels: Iterable[str] = BLOCK_LABELS,
    size: int = 5,
    mode: str = "leading",
    variant: str = "corrected",
) -> dict[str, OperatorBlock]:
    """Blocks of ``R_hat + eta_hat`` from any component source with ``component(a, b, c, d)``."""
    out = {}
    for label in labels:
        basis = block_basis(label, size)
        for u in basis:
            if len(set(u)) != 2 or any(x not in _INDEX for x in u):
                raise ValueError(f"inconsistent basis element {u} in {label}")
        entries = [[_entry(curv, eta, u, w) for w in basis] for u in basis]
        out[label] = OperatorBlock(label, basis, entries, mode, variant)
    return out


def build_block(
    frame: CurvatureFrame,
    params: PuttmannParams,
    label: str,
    *,
    mode: str = "leading",
    variant: str = "corrected",
    size: int = 5,
    oracle: UnitFrameCurvature | None = None,
) -> OperatorBlock:
    """A block in closed form.

    ``leading`` drops ``eps alpha`` from the ``(4, 5)`` entry; ``exact`` takes
    every entry from the oracle components plus the 4-form.  ``variant``
    selects the ``(3, 4)`` entry: ``-eps (C_ki + C_kj)`` (corrected) or
    ``-eps (C_ij + C_ji)`` (printed).  The 6x6 form has no closed display and
    is assembled from the table.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if mode == "exact":
        oracle = oracle or UnitFrameCurvature(frame)
        return assemble_from_4form(oracle, params.eta(), [label], size, mode, variant)[label]
    if size == 6:
        curv = TableCurvature(frame, printed=variant == "printed")
        return assemble_from_4form(curv, params.eta(), [label], 6, mode, variant)[label]

    fr = frame
    b, g, bp, B, C = fr.beta, fr.gamma, fr.beta_prime, fr.B, fr.C
    half = Fraction(1, 2)
    if label == "A0":
        entries = [[EpsPoly() for _ in range(3)] for _ in range(3)]
        for i in range(3):
            entries[i][i] = eps_poly((2, b[i] * b[i]))
        for i, j, k in CYCLIC:
            off = eps_poly((1, g[k]), (2, -(g[i] * g[j]))) - params.a[k]
            entries[i][j] = entries[j][i] = off
        return OperatorBlock("A0", block_basis("A0"), entries, mode, variant)

    i, j, k = BLOCK_TRIPLES[label]
    zzxt = C[(i, j)] + C[(j, i)] if variant == "printed" else C[(k, i)] + C[(k, j)]
    e = [[None] * 5 for _ in range(5)]

    def put(r, c, val):
        e[r - 1][c - 1] = val
        e[c - 1][r - 1] = val

    put(1, 1, eps_poly((2, g[i] * g[i])))
    put(1, 2, eps_poly((2, g[i] * g[j] - b[i] * b[j])))
    put(1, 3, eps_poly((2, (b[k] * g[i] - b[i] * g[k]) * half)))
    put(1, 4, eps_poly((1, -B[(i, j)])))
    put(1, 5, eps_poly((1, C[(i, j)])))
    put(2, 2, eps_poly((2, g[j] * g[j])))
    put(2, 3, eps_poly((2, (b[k] * g[j] - b[j] * g[k]) * half)))
    put(2, 4, eps_poly((1, -B[(j, i)])))
    put(2, 5, eps_poly((1, C[(j, i)])))
    put(3, 3, eps_poly((2, b[k] * b[k])))
    put(3, 4, eps_poly((1, -zzxt)))
    put(3, 5, eps_poly((1, -bp[k])))
    put(4, 4, eps_poly((0, fr.Mbase[k]), (1, g[k] * g[k] * -3)))
    put(4, 5, EpsPoly({0: fr.Nbase[k]}) + params.d2)
    put(5, 5, eps_poly((0, fr.Lbase[k]), (1, b[k] * b[k] * -3)))
    return OperatorBlock(label, block_basis(label), e, mode, variant)


def off_block_entries(curv, eta: FourForm | None) -> list[tuple[Wedge, Wedge]]:
    """Pairs of 2-vectors in different blocks whose modified entry is nonzero."""
    owner: dict[frozenset, str] = {}
    for label in BLOCK_LABELS:
        for u in block_basis(label, 6 if label != "A0" else 5):
            key = frozenset(u)
            if key in owner:
                raise ValueError(f"{u} lies in two blocks")
            owner[key] = label
    wedges = [(UNIT_LABELS[a], UNIT_LABELS[b]) for a in range(7) for b in range(a + 1, 7)]
    if len(owner) != len(wedges):
        raise ValueError("blocks do not span the 2-vectors")
    bad = []
    for n, u in enumerate(wedges):
        for w in wedges[n + 1:]:
            if owner[frozenset(u)] == owner[frozenset(w)]:
                continue
            if not _entry(curv, eta, u, w).is_zero():
                bad.append((u, w))
    return bad


# -- determinants --------------------------------------------------------------

def _leading_dets(
    entries: Sequence[Sequence[Any]],
    kmax: int,
    mul: Callable[[Any, Any], Any],
    is_zero: Callable[[Any], bool],
    zero: Any,
) -> list[Any]:
    """Determinants of the upper-left ``k x k`` minors, ``k = 1..kmax``.

    Laplace expansion along the last row with memoization on column sets;
    the minors of different sizes share the memo table.
    """
    memo: dict[tuple[int, ...], Any] = {(): None}

    def det(cols: tuple[int, ...]):
        if cols in memo:
            return memo[cols]
        r = len(cols) - 1
        total = zero
        for n, c in enumerate(cols):
            a = entries[r][c]
            if is_zero(a):
                continue
            rest = cols[:n] + cols[n + 1:]
            sub = det(rest) if rest else None
            term = a if sub is None else mul(a, sub)
            if is_zero(term):
                continue
            total = total + term if (r - n) % 2 == 0 else total - term
        memo[cols] = total
        return total

    return [det(tuple(range(k))) for k in range(1, kmax + 1)]


def determinants(block: OperatorBlock, kmax: int | None = None, max_degree: int | None = None) -> list[EpsPoly]:
    """Upper-left minors as :class:`EpsPoly`, exact up to ``eps**max_degree``."""
    kmax = kmax or block.dim
    return _leading_dets(
        block.entries, kmax,
        lambda x, y: x.mul(y, max_degree),
        lambda x: x.is_zero(),
        EpsPoly(),
    )


def determinants_at_eps(block: OperatorBlock, eps, kmax: int | None = None) -> list[Any]:
    """Upper-left minors with ``eps`` substituted; values are functions of ``t``."""
    kmax = kmax or block.dim
    mat = block.at_eps(eps)
    zero = None
    for row in mat:
        for x in row:
            if x is not None:
                zero = x * 0
                break
        if zero is not None:
            break
    mat = [[zero if x is None else x for x in row] for row in mat]
    return _leading_dets(mat, kmax, lambda x, y: x * y, lambda x: x.is_zero(), zero)


class DegenerateMinor(ArithmeticError):
    pass


@dataclass
class MinorSpectrum:
    label: str
    k: int
    det: EpsPoly
    eps_degree: int
    leading_frac: Any
    exact_below: int | None = None
    _rf: RatFunc | None = field(default=None, repr=False)

    @property
    def leading(self) -> RatFunc:
        if self._rf is None:
            c = self.leading_frac
            self._rf = c.to_ratfunc() if isinstance(c, LocalFrac) else RatFunc.coerce(c)
        return self._rf


EXPECTED_DEGREES = (2, 4, 6, 6, 6)


def leading_minors(block: OperatorBlock, kmax: int | None = None, max_degree: int | None = None) -> list[MinorSpectrum]:
    """Lowest-order terms of the Sylvester minors of ``block``.

    With ``max_degree`` the determinants are truncated; the window is widened
    by 2 until every minor has a nonzero coefficient inside it (or until no
    truncation is left), so the reported lowest term is always exact.
    """
    kmax = kmax or block.dim
    bound = sum(max((e.max_degree for e in row if not e.is_zero()), default=0) for row in block.entries)
    window = max_degree
    while True:
        dets = determinants(block, kmax, window)
        if window is None or all(not d.is_zero() for d in dets) or window >= bound:
            break
        window += 2
    out = []
    for k, d in enumerate(dets, start=1):
        if d.is_zero():
            raise DegenerateMinor(f"{block.label}: the {k}x{k} minor vanishes identically")
        deg, coeff = d.lowest_term()
        out.append(MinorSpectrum(block.label, k, d, deg, coeff, window))
    return out


def block_set(
    frame: CurvatureFrame,
    *,
    mode: str = "leading",
    variant: str = "corrected",
    size: int = 5,
    oracle: UnitFrameCurvature | None = None,
    labels: Iterable[str] = ("A12", "A23", "A31"),
) -> dict[str, OperatorBlock]:
    params = build_params(frame)
    return {lab: build_block(frame, params, lab, mode=mode, variant=variant, size=size, oracle=oracle)
            for lab in labels}


def alpha_independence(frame: CurvatureFrame, oracle: UnitFrameCurvature | None = None,
                       variant: str = "corrected") -> dict[str, list[bool]]:
    """Per block, whether the exact-mode lowest coefficients agree with leading mode.

    Degrees must agree too; entries are listed for k = 1..5.
    """
    oracle = oracle or UnitFrameCurvature(frame)
    params = build_params(frame)
    out = {}
    for label in ("A12", "A23", "A31"):
        lead = leading_minors(build_block(frame, params, label, variant=variant), max_degree=6)
        exact = leading_minors(build_block(frame, params, label, mode="exact", oracle=oracle), max_degree=6)
        out[label] = [a.eps_degree == b.eps_degree and a.leading_frac == b.leading_frac
                      for a, b in zip(lead, exact)]
    return out


# -- the k <= 3 conditions -------------------------------------------------------

def eq35_polynomials(frame: CurvatureFrame, label: str) -> dict[str, tuple[LocalFrac, LocalFrac]]:
    """Leading 2x2 and 3x3 minors paired with the quotient-free forms of the ratio conditions.

    ``printed``: ``r = beta/gamma``, ``r_i r_j > 2`` and
    ``6 r_i r_j + 2 r_i r_k + 2 r_j r_k > 4 + r_k^2 (2 - (r_i - r_j)^2)``,
    both multiplied by the square of the gammas involved.
    ``corrected``: ``s = gamma/beta``, ``2 s_i s_j > 1`` and
    ``6 s_i s_j + 2 s_i s_k + 2 s_j s_k > 4 + s_k^2 (2 + (s_i - s_j)^2)``,
    multiplied by the betas.  The corrected forms satisfy
    ``det_2 = beta_i beta_j * beta_i beta_j (2 s_i s_j - 1)`` and
    ``det_3 = beta_i^2 beta_j^2 beta_k^2 * (...) / 4`` identically; the printed
    forms would need ``det_2 = beta_i beta_j * gamma_i gamma_j (r_i r_j - 2)``
    and ``4 det_3 = gamma_i^2 gamma_j^2 gamma_k^2 * (...)``.
    """
    i, j, k = BLOCK_TRIPLES[label]
    b, g = frame.beta, frame.gamma
    bi, bj, bk, gi, gj, gk = b[i], b[j], b[k], g[i], g[j], g[k]
    # det_2 and det_3 leading coefficients, straight from the block entries
    d2 = gi * gi * gj * gj - (gi * gj - bi * bj) * (gi * gj - bi * bj)
    half = Fraction(1, 2)
    m13, m23 = (bk * gi - bi * gk) * half, (bk * gj - bj * gk) * half
    m12 = gi * gj - bi * bj
    d3 = (gi * gi * (gj * gj * bk * bk - m23 * m23)
          - m12 * (m12 * bk * bk - m23 * m13)
          + m13 * (m12 * m23 - gj * gj * m13))
    printed2 = bi * bj - gi * gj * 2
    printed3 = (bi * bj * gi * gj * gk * gk * 6 + bi * bk * gi * gk * gj * gj * 2
                + bj * bk * gj * gk * gi * gi * 2 - gi * gi * gj * gj * gk * gk * 4
                - bk * bk * (gi * gi * gj * gj * 2 - (bi * gj - bj * gi) * (bi * gj - bj * gi)))
    corr2 = (gi * gj * 2 - bi * bj) * bi * bj
    corr3 = (gi * gj * bi * bj * bk * bk * 6 + gi * gk * bi * bk * bj * bj * 2
             + gj * gk * bj * bk * bi * bi * 2 - bi * bi * bj * bj * bk * bk * 4
             - gk * gk * (bi * bi * bj * bj * 2 + (gi * bj - gj * bi) * (gi * bj - gj * bi))) * Fraction(1, 4)
    # each pair must agree identically for the condition to be equivalent to the minor
    return {
        "printed_k2": (d2, bi * bj * printed2),
        "printed_k3": (d3 * 4, printed3),
        "corrected_k2": (d2, corr2),
        "corrected_k3": (d3, corr3),
    }


def eq35_identities(frame: CurvatureFrame) -> dict[str, dict[str, bool]]:
    """Whether each ratio condition is, after clearing, identical to the minor it should encode."""
    out = {}
    for label in ("A12", "A23", "A31"):
        out[label] = {name: lhs == rhs for name, (lhs, rhs) in eq35_polynomials(frame, label).items()}
    return out
