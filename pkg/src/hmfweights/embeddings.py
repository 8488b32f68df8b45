"""The embedding set Sigma = {sigma_(p,i,j)} attached to the primes above p.

For a prime with residue degree f and ramification index e there are e*f
embeddings, indexed by i in Z/f and 1 <= j <= e.  The permutation phi steps j
forward and, at j = e, wraps to (i+1, 1); nu is p at j = 1 and 1 elsewhere.
Everything here is combinatorial; no number field is constructed.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    DuplicatePrimeId,
    EmptyConfig,
    MixedRationalPrimes,
    NonPositiveDegree,
    NotPrime,
    UnknownEmbedding,
    UnknownPrime,
)
from .finite_field import is_prime


@dataclass(frozen=True)
class PrimeDatum:
    prime_id: str
    p: int
    f: int
    e: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"p = {self.p} is not prime", prime_id=self.prime_id)
        if self.f < 1 or self.e < 1:
            raise NonPositiveDegree(
                f"prime {self.prime_id}: f and e must be >= 1 (got f={self.f}, e={self.e})",
                prime_id=self.prime_id,
            )

    @property
    def residue_modulus(self) -> int:
        """p^f - 1, the order of the niveau-f fundamental characters."""
        return self.p ** self.f - 1


@dataclass(frozen=True, order=True)
class EmbeddingIndex:
    prime_id: str
    i: int
    j: int

    def __str__(self) -> str:
        return f"sigma[{self.prime_id},{self.i},{self.j}]"


class Direction(enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


def _natural_key(s: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", s)]


PrimeSpec = Union[PrimeDatum, Mapping, Sequence[int]]


def _coerce_prime(spec: PrimeSpec, position: int) -> PrimeDatum:
    if isinstance(spec, PrimeDatum):
        return spec
    if isinstance(spec, Mapping):
        try:
            return PrimeDatum(
                str(spec.get("id", spec.get("prime_id", f"p{position + 1}"))),
                int(spec["p"]), int(spec["f"]), int(spec["e"]),
            )
        except KeyError as exc:
            raise EmptyConfig(f"prime entry {position} is missing field {exc.args[0]!r}") from None
    p, f, e = spec
    return PrimeDatum(f"p{position + 1}", int(p), int(f), int(e))


class EmbeddingSet:
    """Canonically ordered Sigma for one rational prime p.

    Ordering is by prime_id (natural order, so p2 < p10), then i, then j.
    Instances are immutable and compare equal when built from the same primes.
    """

    __slots__ = ("primes", "embeddings", "d", "p", "_pos", "_by_id")

    def __init__(self, primes: Iterable[PrimeSpec]):
        plist = [_coerce_prime(s, n) for n, s in enumerate(primes)]
        if not plist:
            raise EmptyConfig("at least one prime is required")
        if len({q.p for q in plist}) != 1:
            raise MixedRationalPrimes(
                "all primes must lie over one rational prime", ps=sorted({q.p for q in plist})
            )
        ids = [q.prime_id for q in plist]
        if len(set(ids)) != len(ids):
            raise DuplicatePrimeId("prime ids must be distinct", ids=ids)
        plist.sort(key=lambda q: _natural_key(q.prime_id))
        object.__setattr__(self, "primes", tuple(plist))
        object.__setattr__(self, "p", plist[0].p)
        object.__setattr__(self, "_by_id", {q.prime_id: q for q in plist})
        emb = tuple(
            EmbeddingIndex(q.prime_id, i, j)
            for q in plist for i in range(q.f) for j in range(1, q.e + 1)
        )
        object.__setattr__(self, "embeddings", emb)
        object.__setattr__(self, "d", len(emb))
        object.__setattr__(self, "_pos", {s: n for n, s in enumerate(emb)})

    def __setattr__(self, name, value):
        raise AttributeError("EmbeddingSet is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, EmbeddingSet) and self.primes == other.primes

    def __hash__(self) -> int:
        return hash(self.primes)

    def __repr__(self) -> str:
        inner = ", ".join(f"{q.prime_id}:(p={q.p},f={q.f},e={q.e})" for q in self.primes)
        return f"EmbeddingSet({inner})"

    def __len__(self) -> int:
        return self.d

    def __iter__(self):
        return iter(self.embeddings)

    def __contains__(self, sigma) -> bool:
        return sigma in self._pos

    # lookups
    def prime(self, prime_id: str) -> PrimeDatum:
        try:
            return self._by_id[prime_id]
        except KeyError:
            raise UnknownPrime(f"no prime with id {prime_id!r}", prime_id=prime_id) from None

    def position(self, sigma: EmbeddingIndex) -> int:
        try:
            return self._pos[sigma]
        except KeyError:
            raise UnknownEmbedding(f"{sigma} is not in {self!r}") from None

    def sigma(self, prime_id: str, i: int, j: int) -> EmbeddingIndex:
        """The index sigma_(prime_id, i mod f, j), validated."""
        q = self.prime(prime_id)
        if not 1 <= j <= q.e:
            raise UnknownEmbedding(f"j = {j} outside [1, {q.e}] for prime {prime_id}")
        return EmbeddingIndex(prime_id, i % q.f, j)

    def block(self, prime_id: str) -> tuple[EmbeddingIndex, ...]:
        self.prime(prime_id)
        return tuple(s for s in self.embeddings if s.prime_id == prime_id)

    def phi(self, sigma: EmbeddingIndex, direction: Direction = Direction.FORWARD) -> EmbeddingIndex:
        self.position(sigma)
        q = self._by_id[sigma.prime_id]
        if direction is Direction.FORWARD:
            if sigma.j < q.e:
                return EmbeddingIndex(q.prime_id, sigma.i, sigma.j + 1)
            return EmbeddingIndex(q.prime_id, (sigma.i + 1) % q.f, 1)
        if sigma.j > 1:
            return EmbeddingIndex(q.prime_id, sigma.i, sigma.j - 1)
        return EmbeddingIndex(q.prime_id, (sigma.i - 1) % q.f, q.e)

    def nu(self, sigma: EmbeddingIndex) -> int:
        self.position(sigma)
        return self.p if sigma.j == 1 else 1

    def to_config(self) -> dict:
        return {"primes": [{"id": q.prime_id, "p": q.p, "f": q.f, "e": q.e} for q in self.primes]}


def build_embedding_set(primes: Iterable[PrimeSpec]) -> EmbeddingSet:
    return EmbeddingSet(primes)


def phi(eset: EmbeddingSet, sigma: EmbeddingIndex, direction: Direction = Direction.FORWARD) -> EmbeddingIndex:
    return eset.phi(sigma, direction)


def nu(eset: EmbeddingSet, sigma: EmbeddingIndex) -> int:
    return eset.nu(sigma)


def from_config(cfg: Mapping) -> EmbeddingSet:
    """Build from ``{"primes": [{"id": "p1", "p": 3, "f": 1, "e": 2}, ...]}``."""
    if not isinstance(cfg, Mapping) or "primes" not in cfg:
        raise EmptyConfig("config must contain a 'primes' list")
    return EmbeddingSet(cfg["primes"])


def ramified_quadratic(p: int) -> EmbeddingSet:
    return EmbeddingSet([PrimeDatum("p1", p, 1, 2)])


def inert_quadratic(p: int) -> EmbeddingSet:
    return EmbeddingSet([PrimeDatum("p1", p, 2, 1)])
