"""Weight vectors in Z^Sigma and the lattice arithmetic around them.

Hasse weights h_sigma = nu_sigma e_(phi^-1 sigma) - e_sigma span a full-rank
sublattice whose index is prod_p (p^f - 1); the same lattice is the kernel of
the character map lambda.  All solving is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .embeddings import Direction, EmbeddingIndex, EmbeddingSet
from .errors import DimensionMismatch, InternalMismatch
from .linalg import bareiss_det, solve_exact


@dataclass(frozen=True)
class WeightVector:
    eset: EmbeddingSet
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.eset.d:
            raise DimensionMismatch(
                f"expected {self.eset.d} coordinates, got {len(self.coords)}"
            )
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def of(cls, eset: EmbeddingSet, values: Union[Sequence[int], Mapping[EmbeddingIndex, int]]) -> "WeightVector":
        if isinstance(values, Mapping):
            return cls(eset, tuple(int(values.get(s, 0)) for s in eset.embeddings))
        return cls(eset, tuple(values))

    @classmethod
    def zero(cls, eset: EmbeddingSet) -> "WeightVector":
        return cls(eset, (0,) * eset.d)

    @classmethod
    def constant(cls, eset: EmbeddingSet, c: int) -> "WeightVector":
        return cls(eset, (c,) * eset.d)

    @classmethod
    def unit(cls, eset: EmbeddingSet, sigma: EmbeddingIndex) -> "WeightVector":
        pos = eset.position(sigma)
        return cls(eset, tuple(1 if n == pos else 0 for n in range(eset.d)))

    def __getitem__(self, key: Union[int, EmbeddingIndex]) -> int:
        if isinstance(key, EmbeddingIndex):
            return self.coords[self.eset.position(key)]
        return self.coords[key]

    def _check(self, other: "WeightVector") -> None:
        if not isinstance(other, WeightVector) or other.eset != self.eset:
            raise DimensionMismatch("weight vectors live over different embedding sets")

    def __add__(self, other: "WeightVector") -> "WeightVector":
        self._check(other)
        return WeightVector(self.eset, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "WeightVector") -> "WeightVector":
        self._check(other)
        return WeightVector(self.eset, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "WeightVector":
        return WeightVector(self.eset, tuple(-a for a in self.coords))

    def __mul__(self, c: int) -> "WeightVector":
        return WeightVector(self.eset, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self) -> str:
        return f"WeightVector{self.coords}"

    def as_list(self) -> list[int]:
        return list(self.coords)


def delta_vector(eset: EmbeddingSet) -> WeightVector:
    """delta_sigma = j - 1."""
    return WeightVector(eset, tuple(s.j - 1 for s in eset.embeddings))


def hasse_weight(eset: EmbeddingSet, sigma: EmbeddingIndex) -> WeightVector:
    prev = eset.phi(sigma, Direction.INVERSE)
    return eset.nu(sigma) * WeightVector.unit(eset, prev) - WeightVector.unit(eset, sigma)


@dataclass(frozen=True)
class HasseMatrix:
    eset: EmbeddingSet
    columns: tuple[WeightVector, ...]
    determinant: int

    def rows(self) -> list[list[int]]:
        d = self.eset.d
        return [[self.columns[c][r] for c in range(d)] for r in range(d)]


def hasse_matrix(eset: EmbeddingSet) -> HasseMatrix:
    cols = tuple(hasse_weight(eset, s) for s in eset.embeddings)
    rows = [[cols[c][r] for c in range(eset.d)] for r in range(eset.d)]
    return HasseMatrix(eset, cols, bareiss_det(rows))


def lattice_index(eset: EmbeddingSet) -> int:
    """|det A|, checked against prod_p (p^f - 1)."""
    det = abs(hasse_matrix(eset).determinant)
    closed = 1
    for q in eset.primes:
        closed *= q.p ** q.f - 1
    if det != closed:
        raise InternalMismatch(f"|det A| = {det} but prod(p^f - 1) = {closed}")
    return det


def theta_shift(eset: EmbeddingSet, prime_id: str, i: int) -> tuple[WeightVector, WeightVector]:
    """(t_tau, m_shift) for tau = (prime_id, i): t = h_sigma + 2 e_sigma, m_shift = -e_sigma,
    with sigma = sigma_(prime_id, i, e)."""
    q = eset.prime(prime_id)
    sigma = eset.sigma(prime_id, i, q.e)
    e_sigma = WeightVector.unit(eset, sigma)
    return hasse_weight(eset, sigma) + 2 * e_sigma, -e_sigma


def frobenius_weight_shift(eset: EmbeddingSet, prime_id: str, k: WeightVector,
                           m: WeightVector) -> tuple[WeightVector, WeightVector]:
    k2, m2 = k, m
    for s in eset.block(prime_id):
        h = hasse_weight(eset, s)
        k2 = k2 + k[s] * h
        m2 = m2 + m[s] * h
    return k2, m2


def in_min_cone(k: WeightVector, positive: bool = False) -> bool:
    eset = k.eset
    for s in eset.embeddings:
        if eset.nu(s) * k[s] < k[eset.phi(s, Direction.INVERSE)]:
            return False
    if positive and any(c <= 0 for c in k.coords):
        return False
    return True


@dataclass(frozen=True)
class HasseComparison:
    """Result of solving A r = k_hi - k_lo.

    ``comparable`` means r >= 0 (rationally); k_lo <= k_hi in the Hasse order
    requires in addition that r be integral (``le``).
    """

    r: tuple[Fraction, ...]
    nonnegative: bool
    integral: bool

    @property
    def comparable(self) -> bool:
        return self.nonnegative

    @property
    def le(self) -> bool:
        return self.nonnegative and self.integral

    @property
    def kind(self) -> str:
        return "Comparable" if self.comparable else "Incomparable"


def _solve_hasse(eset: EmbeddingSet, diff: WeightVector) -> tuple[Fraction, ...]:
    return solve_exact(hasse_matrix(eset).rows(), diff.coords)


def hasse_compare(k_hi: WeightVector, k_lo: WeightVector) -> HasseComparison:
    diff = k_hi - k_lo
    r = _solve_hasse(k_hi.eset, diff)
    return HasseComparison(
        r, all(x >= 0 for x in r), all(x.denominator == 1 for x in r)
    )


@dataclass(frozen=True)
class CharacterClass:
    """Per-prime exponents of omega_(tau_(p,0)), reduced mod p^f - 1."""

    exponents: tuple[tuple[str, int, int], ...]  # (prime_id, exponent, modulus)

    def exponent(self, prime_id: str) -> int:
        for pid, x, _ in self.exponents:
            if pid == prime_id:
                return x
        raise KeyError(prime_id)

    def to_dict(self) -> dict:
        return {pid: {"exponent": x, "modulus": mod} for pid, x, mod in self.exponents}


def lambda_class(m: WeightVector) -> CharacterClass:
    eset = m.eset
    out = []
    for q in eset.primes:
        mod = q.p ** q.f - 1
        x = sum(m[s] * q.p ** s.i for s in eset.block(q.prime_id))
        out.append((q.prime_id, x % mod if mod > 1 else 0, mod))
    return CharacterClass(tuple(out))


def lambda_equal(m: WeightVector, n: WeightVector) -> bool:
    """True iff m - n lies in the Z-span of the h_sigma (integral solution of A r = m - n)."""
    r = _solve_hasse(m.eset, m - n)
    return all(x.denominator == 1 for x in r)


def is_irreducible_weight(k: WeightVector) -> bool:
    eset = k.eset
    p = eset.p
    for q in eset.primes:
        for i in range(q.f):
            vals = [k[eset.sigma(q.prime_id, i, j)] for j in range(1, q.e + 1)]
            ok = any(
                2 <= vals[jt] <= p + 1 and all(v == 2 for n, v in enumerate(vals) if n != jt)
                for jt in range(q.e)
            )
            if not ok:
                return False
    return True


def dual_weight(k: WeightVector, m: WeightVector) -> tuple[WeightVector, WeightVector]:
    return k, -k - m


def parse_vector(eset: EmbeddingSet, text: Union[str, Iterable[int]]) -> WeightVector:
    if isinstance(text, str):
        vals = [int(tok) for tok in text.replace(" ", "").split(",") if tok != ""]
    else:
        vals = [int(v) for v in text]
    return WeightVector(eset, tuple(vals))
