"""Inertial shapes of mod-p local Galois representations.

Characters of inertia are recorded by their exponents on fundamental
characters.  For the ramified quadratic field L/Q_p, omega has order p - 1 and
omega_tau (niveau two, defined on the unramified quadratic extension M of L)
has order p^2 - 1, with omega = omega_tau^(p+1).  A reducible shape

    psi (x) [[chi, c], [0, 1]]

is recorded as (psi, chi, ext); an irreducible one Ind_M^L xi as xi.  The
extension class c enters only through the tag ``ext``: whether c lies in the
distinguished subspace V_chi is input data, not something inertial exponents
can decide.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import (
    ConfigError,
    InconsistentFlags,
    InternalMismatch,
    InvalidWeight,
    NotConjugateDistinct,
    NotQuadoBT,
    NotRamifiedQuadratic,
    OutOfRangeB,
    OutOfRangeW,
    WeightTooSmall,
)
from .finite_field import is_prime
from .weight_lattice import WeightVector


class ExtTag(enum.Enum):
    SPLIT = "split"
    IN_VCHI = "invchi"
    OUTSIDE_VCHI = "outside"

    @classmethod
    def parse(cls, text: str) -> "ExtTag":
        key = text.strip().lower().replace("_", "")
        aliases = {"split": cls.SPLIT, "invchi": cls.IN_VCHI, "outside": cls.OUTSIDE_VCHI,
                   "outsidevchi": cls.OUTSIDE_VCHI}
        if key not in aliases:
            raise ConfigError(f"unknown extension tag {text!r}")
        return aliases[key]


def _check_p(p: int) -> None:
    if not is_prime(p):
        raise NotRamifiedQuadratic(f"p = {p} is not prime")


@dataclass(frozen=True)
class Reducible:
    p: int
    psi: int
    chi: int
    ext: ExtTag = ExtTag.SPLIT

    def __post_init__(self):
        _check_p(self.p)
        object.__setattr__(self, "psi", self.psi % (self.p - 1) if self.p > 2 else 0)
        object.__setattr__(self, "chi", self.chi % (self.p - 1) if self.p > 2 else 0)

    def __str__(self) -> str:
        return f"red:psi={self.psi},chi={self.chi},ext={self.ext.value}"


@dataclass(frozen=True)
class Irreducible:
    p: int
    xi: int

    def __post_init__(self):
        _check_p(self.p)
        mod = self.p ** 2 - 1
        object.__setattr__(self, "xi", self.xi % mod)
        if (self.xi * self.p) % mod == self.xi:
            raise NotConjugateDistinct(
                f"xi = {self.xi} equals its conjugate mod {mod}; the induction is reducible"
            )

    @property
    def conjugate(self) -> int:
        return (self.xi * self.p) % (self.p ** 2 - 1)

    def __str__(self) -> str:
        return f"irr:xi={self.xi}"


LocalRep = Union[Reducible, Irreducible]


def parse_rep(text: str, p: int) -> LocalRep:
    """Parse ``red:psi=0,chi=2,ext=invchi`` or ``irr:xi=2``."""
    m = re.fullmatch(r"\s*(red|irr)\s*:\s*(.*)", text)
    if not m:
        raise ConfigError(f"cannot parse representation {text!r}")
    fields = {}
    for part in filter(None, (s.strip() for s in m.group(2).split(","))):
        if "=" not in part:
            raise ConfigError(f"bad field {part!r} in {text!r}")
        key, val = (s.strip() for s in part.split("=", 1))
        fields[key.lower()] = val
    try:
        if m.group(1) == "red":
            ext = ExtTag.parse(fields.get("ext", "split"))
            return Reducible(p, int(fields["psi"]), int(fields["chi"]), ext)
        return Irreducible(p, int(fields["xi"]))
    except KeyError as exc:
        raise ConfigError(f"missing field {exc.args[0]!r} in {text!r}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def all_shapes(p: int) -> list[LocalRep]:
    """Every inertial shape over the ramified quadratic field: reducible ones with
    each extension tag, and irreducible ones with one representative per
    conjugate pair."""
    out: list[LocalRep] = []
    n1 = max(p - 1, 1)
    for psi, chi in itertools.product(range(n1), repeat=2):
        for ext in ExtTag:
            out.append(Reducible(p, psi, chi, ext))
    mod = p * p - 1
    seen = set()
    for xi in range(mod):
        if (xi * p) % mod == xi or xi in seen:
            continue
        seen.update({xi, (xi * p) % mod})
        out.append(Irreducible(p, xi))
    return out


def twist(rep: LocalRep, ell: int) -> LocalRep:
    """Twist by a character whose inertial restriction is omega^(-ell).

    ``ell`` is the lambda-class of the weight shift (l_1 + l_2 for the ramified
    quadratic field), so weight m moves to m + ell.
    """
    if isinstance(rep, Reducible):
        return Reducible(rep.p, rep.psi - ell, rep.chi, rep.ext)
    return Irreducible(rep.p, rep.xi - (rep.p + 1) * ell)


def twist_by_omega(rep: LocalRep, a: int) -> LocalRep:
    """rep (x) omega^a."""
    return twist(rep, -a)


def is_inertially_unramified(rep: LocalRep) -> bool:
    return isinstance(rep, Reducible) and rep.psi == 0 and rep.chi == 0


# ---------------------------------------------------------------------------
# quado-Barsotti-Tate weights (Kisin-module side)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadoBTWeights:
    """Labelled weights r_(i,j), sorted in j for each i."""

    p: int
    f: int
    e: int
    r: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(sorted(int(x) for x in row)) for row in self.r)
        object.__setattr__(self, "r", rows)
        if len(rows) != self.f or any(len(row) != self.e for row in rows):
            raise NotQuadoBT(f"expected {self.f} rows of length {self.e}")
        for i, row in enumerate(rows):
            if row and (row[0] < 0 or row[-1] > self.p):
                raise NotQuadoBT(f"weights must lie in [0, p], row {i} = {row}")
            if self.e >= 2 and row[self.e - 2] > 1:
                raise NotQuadoBT(f"row {i} = {row} has r_(i,e-1) > 1")

    @classmethod
    def ramified_quadratic(cls, p: int, r1: int, r2: int) -> "QuadoBTWeights":
        return cls(p, 1, 2, ((r1, r2),))

    @classmethod
    def uniform(cls, p: int, f: int, e: int, row: Sequence[int]) -> "QuadoBTWeights":
        return cls(p, f, e, tuple(tuple(row) for _ in range(f)))

    @property
    def modulus(self) -> int:
        return self.p ** self.f - 1


def degeneracy(r: QuadoBTWeights, i: int) -> tuple[int, int]:
    """(delta_i, eps_i): delta = max{j : r_(i,j) = 0} with r_(i,0) = 0, and
    eps = sum_(j<e) r_(i,j), which must equal max(0, e - 1 - delta)."""
    row = r.r[i % r.f]
    delta = max([0] + [j for j in range(1, r.e + 1) if row[j - 1] == 0])
    eps = sum(row[: r.e - 1])
    if eps != max(0, r.e - 1 - delta):
        raise InternalMismatch(f"eps formulas disagree for row {row}: {eps} vs {max(0, r.e - 1 - delta)}")
    return delta, eps


def inertial_pairs(r: QuadoBTWeights) -> frozenset[tuple[int, int]]:
    """Unordered exponent pairs sum_J r_sigma p^i and its complement, over all subsets J.

    Pairs are returned as sorted tuples reduced mod p^f - 1; the exponent of
    omega_sigma for sigma = sigma_(i,j) is p^i.
    """
    mod = r.modulus
    weights = [(row[j] * r.p ** i) for i, row in enumerate(r.r) for j in range(r.e)]
    total = sum(weights)
    out = set()
    for mask in range(1 << len(weights)):
        a = sum(w for n, w in enumerate(weights) if mask >> n & 1)
        pair = (a % mod, (total - a) % mod) if mod > 1 else (0, 0)
        out.add(tuple(sorted(pair)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# decisions for the ramified quadratic field
# ---------------------------------------------------------------------------


def vchi_dim(chi: int, chi_is_trivial_globally: bool, p: int) -> int:
    if chi_is_trivial_globally and chi % max(p - 1, 1) != 0:
        raise InconsistentFlags(f"chi has inertial exponent {chi} but is flagged trivial")
    return 2 if chi_is_trivial_globally else 1


def pw1_lift_decision(rep: LocalRep, w: int, m: int) -> bool:
    """Whether rep has a crystalline lift of weight ((1, w), m) with m = m_1 + m_2.

    For 2 <= w <= p the shapes are the reducible psi (x) [[chi, c], [0, 1]] with
    psi = omega^(-1-w-m), chi = omega^(w-1) and c in V_chi, and the irreducible
    Ind xi with xi = omega^(-1-w-m) omega_tau^(w-1) up to conjugation.  Weight
    w = p + 1 behaves like w = 2.  For w = 1 the condition is that rep (x)
    omega^(2+m) be unramified on inertia.
    """
    p = rep.p
    if not 1 <= w <= p + 1:
        raise OutOfRangeW(f"w = {w} outside [1, {p + 1}]")
    if w == p + 1:
        w = 2
    n1 = max(p - 1, 1)
    base = -1 - w - m
    if w == 1:
        return isinstance(rep, Reducible) and rep.psi == base % n1 and rep.chi == 0
    if isinstance(rep, Reducible):
        return rep.psi == base % n1 and rep.chi == (w - 1) % n1 and rep.ext is not ExtTag.OUTSIDE_VCHI
    mod = p * p - 1
    target = ((p + 1) * base + (w - 1)) % mod
    return rep.xi == target or rep.conjugate == target


def weight2_membership(rep: LocalRep, a: int, b: int) -> str:
    """Whether det^a Sym^b is a Serre weight of rep: "Yes", "No" or "Unknown".

    Irreducible shapes are decided completely by the two niveau-two patterns.
    Reducible shapes are only answered positively, on the patterns available for
    0 <= b <= p - 4 and for b = p - 1; everything else is Unknown.
    """
    p = rep.p
    if not 0 <= b <= p - 1:
        raise OutOfRangeB(f"b = {b} outside [0, {p - 1}]")
    n1 = max(p - 1, 1)
    if isinstance(rep, Irreducible):
        mod = p * p - 1
        targets = {(a * (p + 1) + b + 2) % mod, ((a + 1) * (p + 1) + b) % mod}
        return "Yes" if rep.xi in targets or rep.conjugate in targets else "No"
    in_v = rep.ext is not ExtTag.OUTSIDE_VCHI
    if 0 <= b <= p - 4:
        if rep.psi == a % n1 and rep.chi == (b + 2) % n1 and in_v:
            return "Yes"
        return "Unknown"
    if b == p - 1 and in_v:
        if (rep.psi == a % n1 and rep.chi == 2 % n1) or (rep.psi == (a + 1) % n1 and rep.chi == 0):
            return "Yes"
    return "Unknown"


def theta_cycle_table(rep: LocalRep) -> list[tuple[int, tuple[int, ...]]]:
    p = rep.p
    return [
        (m, tuple(w for w in range(1, p + 1) if pw1_lift_decision(rep, w, m)))
        for m in range(max(p - 1, 1))
    ]


def theta_cycle_csv(rep: LocalRep) -> str:
    lines = ["m_class,w_set"]
    for m, ws in theta_cycle_table(rep):
        lines.append(f"{m},{';'.join(map(str, ws))}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class OrdinaryShape:
    """Upper-triangular inertial shape of an ordinary representation at one prime.

    The sub is an unramified character twisted by omega^sub_exponent, sending
    Frobenius to ``frobenius``; the quotient restricts to inertia as
    omega^quotient_exponent.  Exponents are on omega_(tau_(p,0)) mod ``modulus``.
    """

    prime_id: str
    frobenius: int
    sub_exponent: int
    quotient_exponent: int
    modulus: int


def ordinary_shape(a_unit: int, k: WeightVector, m: WeightVector,
                   prime_id: Optional[str] = None) -> OrdinaryShape:
    """Inertial shape for an ordinary eigenform of weight (k, m) at the prime.

    The sub restricts to inertia as prod omega_sigma^(-1-m_sigma), trivial for
    m = -1, and the determinant as prod omega_sigma^(-1-k_sigma-2m_sigma); the
    quotient is their ratio prod omega_sigma^(-k_sigma-m_sigma).
    """
    eset = k.eset
    q = eset.primes[0] if prime_id is None else eset.prime(prime_id)
    if a_unit == 0:
        raise InvalidWeight("a_unit must be nonzero")
    if any(c < 1 for c in k.coords):
        raise InvalidWeight("ordinary shapes need k_sigma >= 1 everywhere")
    block = eset.block(q.prime_id)
    if all(k[s] == 1 for s in block):
        raise WeightTooSmall(
            "all k_sigma = 1 at this prime: the semisimplification is unramified there",
            prime_id=q.prime_id,
        )
    mod = q.p ** q.f - 1
    sub = sum((-1 - m[s]) * q.p ** s.i for s in block)
    quo = sum((-k[s] - m[s]) * q.p ** s.i for s in block)
    red = (lambda x: x % mod) if mod > 1 else (lambda x: 0)
    return OrdinaryShape(q.prime_id, a_unit, red(sub), red(quo), mod)
