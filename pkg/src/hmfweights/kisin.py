"""Reductions of rank-one and rank-two Kisin modules over F_q[[u]], residue field F_p.

A rank-two extension of M(s; a) by M(t; b) has a basis e, f with

    phi(e) = b u^t e,        phi(f) = a u^s f + y e,

where phi is F_q-linear and sends u to u^p.  Changing basis f -> f + lambda e
moves y to y + b u^t lambda(u^p) - a u^s lambda(u), and these coboundaries are
the only basis changes that preserve both marked pieces.

Normal forms put y on a restricted support, plus possibly one exceptional
degree.  Two things have to be fixed here.  The first is how to read ``[t]``:
``"point"`` (the default) reads it as the single degree t, and ``"interval"``
as {0, ..., t}.  The second is the exceptional degree.  It is derived from
when a nonzero map M(s; a) -> M(t; b) exists, which requires a = b and
(p - 1) | (s - t) with s >= t.  Its degree is then s + (s - t)/(p - 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, Union

from .errors import ConfigError, FieldMismatch, TruncationTooSmall
from .finite_field import GF

Poly = tuple[int, ...]  # coefficients of u^0, u^1, ... (trailing zeros trimmed)


def _trim(c: Iterable[int]) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly(F: GF, terms: Union[dict, Sequence[int], None] = None) -> Poly:
    """Polynomial from a {degree: coeff} dict or a coefficient list."""
    if not terms:
        return ()
    if isinstance(terms, dict):
        deg = max(terms)
        out = [0] * (deg + 1)
        for d, c in terms.items():
            out[d] = F.add(out[d], F.check(c))
        return _trim(out)
    return _trim(F.check(c) for c in terms)


def degree(y: Poly) -> int:
    return len(y) - 1


@dataclass(frozen=True)
class TruncatedSeries:
    """Element of F_q[u]/(u^N)."""

    F: GF
    N: int
    coeffs: Poly = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs[: self.N]))

    @classmethod
    def monomial(cls, F: GF, N: int, deg: int, c: int = 1) -> "TruncatedSeries":
        if deg >= N:
            return cls(F, N)
        return cls(F, N, (0,) * deg + (c,))

    def _lift(self, other: "TruncatedSeries") -> None:
        if other.F is not self.F:
            raise FieldMismatch(f"{self.F!r} vs {other.F!r}")
        if other.N != self.N:
            raise TruncationTooSmall(f"truncations differ: {self.N} vs {other.N}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._lift(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return TruncatedSeries(self.F, self.N, tuple(self.F.add(x, y) for x, y in zip(a, b)))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.F, self.N, tuple(self.F.neg(x) for x in self.coeffs))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._lift(other)
        F = self.F
        out = [0] * min(self.N, max(len(self.coeffs) + len(other.coeffs) - 1, 0))
        for i, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(other.coeffs):
                if i + j >= self.N:
                    break
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return TruncatedSeries(F, self.N, tuple(out))

    def scale(self, c: int) -> "TruncatedSeries":
        return TruncatedSeries(self.F, self.N, tuple(self.F.mul(c, x) for x in self.coeffs))

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by u^k."""
        return TruncatedSeries(self.F, self.N, (0,) * k + self.coeffs)

    def frobenius(self) -> "TruncatedSeries":
        """u -> u^p, coefficients fixed."""
        p = self.F.p
        out = [0] * min(self.N, (len(self.coeffs) - 1) * p + 1 if self.coeffs else 0)
        for i, x in enumerate(self.coeffs):
            if i * p >= self.N:
                break
            out[i * p] = x
        return TruncatedSeries(self.F, self.N, tuple(out))

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class RankOneShape:
    s: int
    a: int

    def __post_init__(self):
        if self.s < 0:
            raise ConfigError(f"exponent s = {self.s} must be >= 0")
        if self.a == 0:
            raise ConfigError("the unit a must be nonzero")


@dataclass(frozen=True)
class RankTwoExtensionShape:
    """Extension of ``quotient`` = M(s; a) by ``sub`` = M(t; b) with polynomial y."""

    F: GF
    sub: RankOneShape
    quotient: RankOneShape
    y: Poly = ()
    r: Optional[int] = None
    exceptional_degree: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "y", _trim(self.F.check(c) for c in self.y))
        if self.r is None:
            object.__setattr__(self, "r", self.quotient.s)
        for u in (self.sub.a, self.quotient.a):
            self.F.check(u)

    @classmethod
    def make(cls, F: GF, s: int, t: int, a: int, b: int, y=None, r: Optional[int] = None,
             exceptional_degree: Optional[int] = None) -> "RankTwoExtensionShape":
        return cls(F, RankOneShape(t, b), RankOneShape(s, a), poly(F, y), r, exceptional_degree)

    @property
    def s(self) -> int:
        return self.quotient.s

    @property
    def t(self) -> int:
        return self.sub.s

    @property
    def a(self) -> int:
        return self.quotient.a

    @property
    def b(self) -> int:
        return self.sub.a

    def phi_matrix(self, N: int) -> list[list[TruncatedSeries]]:
        """Columns are phi of (e, f) in the basis (e, f)."""
        F = self.F
        return [
            [TruncatedSeries.monomial(F, N, self.t, self.b), TruncatedSeries(F, N, self.y)],
            [TruncatedSeries(F, N), TruncatedSeries.monomial(F, N, self.s, self.a)],
        ]

    def max_exponent(self) -> int:
        return max(self.s, self.t, degree(self.y), 0)

    def in_normal_form(self, convention: str = "point") -> bool:
        allowed = y_support(self.s, self.t, self.r, convention)
        exc = self.exceptional_degree
        if exc is None:
            exc = exceptional_degree(self.s, self.t, self.a, self.b, self.F.p)
        if exc is not None:
            allowed = allowed | {exc}
        return all(d in allowed for d, c in enumerate(self.y) if c)


def allowed_st(r: int, eps: int) -> list[tuple[int, int, int]]:
    """(s, t, x) with {s, t} = {r + x, eps - x}, 0 <= x <= eps; r = 0 forces s = 0."""
    out = set()
    for x in range(eps + 1):
        hi, lo = r + x, eps - x
        out.add((hi, lo, x))
        out.add((lo, hi, x))
    if r == 0:
        out = {st for st in out if st[0] == 0}
    return sorted(out)


def y_support(s: int, t: int, r: Optional[int] = None, convention: str = "point") -> frozenset[int]:
    """Degrees allowed for y: [t] u [r, s-1] when t < r, else every degree below s."""
    if r is None:
        r = s
    if convention not in ("point", "interval"):
        raise ConfigError(f"unknown support convention {convention!r}")
    if t < r:
        low = {t} if convention == "point" else set(range(t + 1))
        return frozenset(low | set(range(r, s)))
    return frozenset(range(s))


def exceptional_degree(s: int, t: int, a: int, b: int, p: int) -> Optional[int]:
    """Extra allowed degree s + (s - t)/(p - 1), present exactly when
    Hom(M(s; a), M(t; b)) is nonzero mod p."""
    if a != b or s < t or (s - t) % (p - 1):
        return None
    return s + (s - t) // (p - 1)


def default_truncation(s: int, p: int) -> int:
    return p * (s + 1) + 2


def _coboundary_rows(F: GF, s: int, t: int, a: int, b: int, N: int) -> list[list[int]]:
    rows = []
    for k in range(N):
        row = [0] * N
        if t + F.p * k < N:
            row[t + F.p * k] = b
        if s + k < N:
            row[s + k] = F.sub(row[s + k], a)
        rows.append(row)
    return rows


def _support(s, t, a, b, p, r, exceptional, convention):
    S = set(y_support(s, t, r, convention))
    if exceptional == "default":
        exc = exceptional_degree(s, t, a, b, p)
    else:
        exc = exceptional
    if exc is not None:
        S.add(exc)
    return sorted(S)


def _ext_data(F: GF, s, t, a, b, N, r, exceptional, convention):
    S = _support(s, t, a, b, F.p, r, exceptional, convention)
    if S and max(S) >= N:
        raise TruncationTooSmall(f"support degree {max(S)} does not fit below N = {N}")
    mono = [[1 if d == e else 0 for d in range(N)] for e in S]
    cob = _coboundary_rows(F, s, t, a, b, N)
    dim_v = len(S)
    dim_im = F.rank(cob)
    dim_sum = F.rank(mono + cob)
    inter = dim_v + dim_im - dim_sum
    return S, dim_v - inter


def ext_dimension(s: int, t: int, a: int, b: int, q: int, N: Optional[int] = None,
                  r: Optional[int] = None, exceptional: Union[int, None, str] = "default",
                  convention: str = "point") -> int:
    """dim over F_q of the classes with y on the normal-form support, modulo coboundaries.

    Computed as dim V - dim(V intersect image) inside F_q[u]/(u^N), where V is
    spanned by the monomials on the allowed support.  The answer is recomputed
    at 2N and the two must agree.
    """
    F = GF(q)
    for u in (a, b):
        if not 0 < F.check(u):
            raise ConfigError("units a and b must be nonzero")
    if N is None:
        N = default_truncation(max(s, t), F.p)
    _, d1 = _ext_data(F, s, t, a, b, N, r, exceptional, convention)
    _, d2 = _ext_data(F, s, t, a, b, 2 * N, r, exceptional, convention)
    if d1 != d2:
        raise TruncationTooSmall(f"dimension {d1} at N = {N} but {d2} at N = {2 * N}")
    return d1


def enumerate_extension_classes(s: int, t: int, a: int, b: int, q: int, N: Optional[int] = None,
                                r: Optional[int] = None, exceptional: Union[int, None, str] = "default",
                                convention: str = "point") -> list[Poly]:
    """One y per class, supported on monomials chosen greedily from the allowed support."""
    F = GF(q)
    if N is None:
        N = default_truncation(max(s, t), F.p)
    dim = ext_dimension(s, t, a, b, q, N, r, exceptional, convention)
    S = _support(s, t, a, b, F.p, r, exceptional, convention)
    cob = _coboundary_rows(F, s, t, a, b, N)
    basis: list[int] = []
    current = F.rank(cob)
    rows = list(cob)
    for d in S:
        row = [1 if e == d else 0 for e in range(N)]
        rk = F.rank(rows + [row])
        if rk > current:
            rows.append(row)
            basis.append(d)
            current = rk
    if len(basis) != dim:
        raise TruncationTooSmall("representative selection disagrees with the dimension count")
    reps = []
    for coeffs in itertools.product(range(q), repeat=len(basis)):
        reps.append(poly(F, {d: c for d, c in zip(basis, coeffs) if c} or None))
    return reps


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------


Matrix = list[list[TruncatedSeries]]


@dataclass(frozen=True)
class KisinMorphism:
    """Columns give the images of the source basis (e', f') in the target basis (e'', f'')."""

    F: GF
    entries: tuple[tuple[Poly, Poly], tuple[Poly, Poly]]

    @classmethod
    def make(cls, F: GF, m11, m12, m21, m22) -> "KisinMorphism":
        return cls(F, ((poly(F, m11), poly(F, m12)), (poly(F, m21), poly(F, m22))))

    def max_degree(self) -> int:
        return max(max(degree(c), 0) for row in self.entries for c in row)

    def matrix(self, N: int) -> Matrix:
        return [[TruncatedSeries(self.F, N, c) for c in row] for row in self.entries]


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]


def required_truncation(morphism: KisinMorphism, source: RankTwoExtensionShape,
                        target: RankTwoExtensionShape) -> int:
    """Smallest N at which both sides of the compatibility identity are computed without loss."""
    p = morphism.F.p
    dm = morphism.max_degree()
    return max(dm + source.max_exponent(), target.max_exponent() + p * dm) + 1


def check_phi_morphism(morphism: KisinMorphism, source: RankTwoExtensionShape,
                       target: RankTwoExtensionShape, N: Optional[int] = None) -> bool:
    """Whether M phi_source = phi_target phi(M), i.e. the map commutes with phi."""
    if not (morphism.F is source.F is target.F):
        raise FieldMismatch("morphism and shapes must share one coefficient field")
    need = required_truncation(morphism, source, target)
    if N is None:
        N = need
    elif N < need:
        raise TruncationTooSmall(f"N = {N} but products need N >= {need}")
    M = morphism.matrix(N)
    phiM = [[c.frobenius() for c in row] for row in M]
    lhs = _matmul(M, source.phi_matrix(N))
    rhs = _matmul(target.phi_matrix(N), phiM)
    return all(lhs[i][j] == rhs[i][j] for i in range(2) for j in range(2))


def identity_morphism(F: GF) -> KisinMorphism:
    return KisinMorphism.make(F, [1], None, None, [1])


def family_w_p(F: GF, a: int, b: int, c: int, d: int = 0):
    """(source, target, map) for the w = p family: (p, 1) with y = c u + d u^(p+1)
    onto (1, 1) with y = a b^-1 c + d u, via e' -> e'', f' -> u f'' + b^-1 c e''."""
    p = F.p
    binv_c = F.mul(F.inv(b), c)
    src = RankTwoExtensionShape.make(F, p, 1, a, b, {1: c, p + 1: d})
    tgt = RankTwoExtensionShape.make(F, 1, 1, a, b, {0: F.mul(a, binv_c), 1: d})
    mor = KisinMorphism.make(F, [1], [binv_c], None, [0, 1])
    return src, tgt, mor


def family_w_p1(F: GF, a: int, b: int, c: int, d: int = 0):
    """(source, target, map) for the w = p + 1 family: (p, 0) with y = c + d u^(2p)
    onto (1, 0) with y = a b^-1 c + d u^p, via e -> e'', f -> u f'' + b^-1 c e''."""
    p = F.p
    binv_c = F.mul(F.inv(b), c)
    src = RankTwoExtensionShape.make(F, p, 0, a, b, {0: c, 2 * p: d})
    tgt = RankTwoExtensionShape.make(F, 1, 0, a, b, {0: F.mul(a, binv_c), p: d})
    mor = KisinMorphism.make(F, [1], [binv_c], None, [0, 1])
    return src, tgt, mor


def perturbed_morphism(F: GF) -> KisinMorphism:
    """e' -> e'', f' -> u f'' (the b^-1 c e'' correction dropped)."""
    return KisinMorphism.make(F, [1], None, None, [0, 1])


def twist_shift(shape: RankTwoExtensionShape) -> RankTwoExtensionShape:
    """Tensor with M(1; 1): s, t and r go up by one and y is multiplied by u."""
    exc = shape.exceptional_degree
    return replace(
        shape,
        sub=RankOneShape(shape.t + 1, shape.b),
        quotient=RankOneShape(shape.s + 1, shape.a),
        y=((0,) + shape.y) if shape.y else (),
        r=shape.r + 1,
        exceptional_degree=None if exc is None else exc + 1,
    )
