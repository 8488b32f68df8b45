"""Formal truncated q-expansions over a real quadratic field with p ramified.

A form is a table of coefficients r^t_mu indexed by a component label t and
a totally positive (or zero) element mu of O_F, stored by its integer basis
key.  Only indices whose value is known are stored: the key set *is* the
window, and an operator output contains exactly the indices whose value
follows from the input.  Lattices are fixed to M = O_F with local generator
gamma = 1.

Index motions by global totally positive generators follow
r^{u(t)}_mu = alpha^m r^t_{alpha mu}, where alpha^m = sigma_1(alpha)^m_1
sigma_2(alpha)^m_2 reduced at the prime above p.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .embeddings import EmbeddingSet, ramified_quadratic
from .errors import (
    DimensionMismatch,
    InconsistentEigenvalues,
    InvalidComponentModel,
    InvalidGenerator,
    MissingSAction,
    NotInWindow,
    UndeclaredCharacter,
    UnreachableIndex,
    UntrackedPrime,
    WeightInequalityViolated,
    ZeroConstant,
)
from .finite_field import GF
from .quadfield import QuadField
from .weight_lattice import WeightVector, frobenius_weight_shift, hasse_weight, theta_shift

Key = Tuple[int, int]
Index = Tuple[str, Key]

PRIME_ID = "p1"


@dataclass(frozen=True)
class TrackedPrime:
    label: str
    pi: Key
    perm: Mapping[str, str]  # component t -> sigma_v(t)


@dataclass(frozen=True)
class UnitMotion:
    alpha: Key
    perm: Mapping[str, str]


@dataclass(frozen=True)
class Character:
    """A finite-order character on the components.

    ``comp`` gives xi(t), ``at_prime`` gives xi(varpi_v) for tracked v, and the
    twist shifts m by (ell, ell).  ``conductor`` maps tracked primes of prime
    norm to a table residue -> value (unit-condition twist).
    """

    name: str
    comp: Mapping[str, int]
    at_prime: Mapping[str, int]
    ell: int = 0
    conductor: Mapping[str, Mapping[int, int]] = dc_field(default_factory=dict)


class QSetup:
    """Field, coefficient field and component model shared by a family of forms."""

    def __init__(self, field: QuadField, q: int, components: Sequence[str], x_perm: Mapping[str, str],
                 varpi: Key, primes: Iterable[TrackedPrime], units: Iterable[UnitMotion] = (),
                 characters: Iterable[Character] = ()):
        self.field = field
        self.F = GF(q)
        if self.F.p != field.p:
            raise InvalidComponentModel(f"coefficient field F_{q} has the wrong characteristic")
        self.components = tuple(components)
        if not self.components or len(set(self.components)) != len(self.components):
            raise InvalidComponentModel("component labels must be nonempty and distinct")
        self.x = dict(x_perm)
        self._check_perm(self.x, "x")
        self.x_inv = {v: k for k, v in self.x.items()}
        self.varpi = tuple(varpi)
        z = field.from_basis(self.varpi)
        if not z.is_totally_positive() or field.valuation(z) != 1:
            raise InvalidGenerator(f"varpi = {z} must be totally positive with valuation 1")
        self.primes: Dict[str, TrackedPrime] = {}
        for tp in primes:
            zp = field.from_basis(tp.pi)
            if not zp.is_totally_positive():
                raise InvalidGenerator(f"generator of {tp.label} is not totally positive")
            if field.key_norm(tp.pi) % field.p == 0:
                raise InvalidGenerator(f"{tp.label} lies above p")
            self._check_perm(tp.perm, tp.label)
            self.primes[tp.label] = TrackedPrime(tp.label, tuple(tp.pi), dict(tp.perm))
        self.units = []
        for u in units:
            zu = field.from_basis(u.alpha)
            if not zu.is_totally_positive() or abs(zu.norm()) != 1:
                raise InvalidGenerator(f"{zu} is not a totally positive unit")
            self._check_perm(u.perm, "unit")
            self.units.append(UnitMotion(tuple(u.alpha), dict(u.perm)))
        perms = [self.x] + [tp.perm for tp in self.primes.values()] + [u.perm for u in self.units]
        for a in perms:
            for b in perms:
                if any(a[b[t]] != b[a[t]] for t in self.components):
                    raise InvalidComponentModel("component actions must commute")
        self.characters: Dict[str, Character] = {}
        for ch in characters:
            self.declare(ch)
        self.eset: EmbeddingSet = ramified_quadratic(field.p)
        self.epsilon = self.F(self._eps_int())

    def _check_perm(self, perm: Mapping[str, str], what: str) -> None:
        if sorted(perm) != sorted(self.components) or sorted(perm.values()) != sorted(self.components):
            raise InvalidComponentModel(f"action of {what} is not a permutation of the components")

    def _eps_int(self) -> int:
        p = self.field.p
        n = self.field.key_norm(self.varpi)
        # eps = p / Nm(varpi) and Nm(varpi) = p * (unit)
        return pow((n // p) % p, -1, p)

    def __repr__(self) -> str:
        return f"QSetup(D={self.field.D}, p={self.field.p}, q={self.F.q}, T={self.components})"

    # evaluation helpers
    def power(self, alpha: Key, n1: int, n2: int) -> int:
        return self.field.value_power_product(self.field.from_basis(alpha), n1, n2)

    def nm(self, label: str) -> int:
        return self.F(self.field.key_norm(self.prime(label).pi))

    def prime(self, label: str) -> TrackedPrime:
        if label not in self.primes:
            raise UntrackedPrime(f"{label!r} is not a tracked prime", tracked=sorted(self.primes))
        return self.primes[label]

    def character(self, name: str) -> Character:
        if name not in self.characters:
            raise UndeclaredCharacter(f"character {name!r} is not declared")
        return self.characters[name]

    def declare(self, ch: Character) -> None:
        F = self.F
        if sorted(ch.comp) != sorted(self.components) or any(F.check(v) == 0 for v in ch.comp.values()):
            raise InvalidComponentModel(f"{ch.name}: values on every component must be nonzero")
        for v in self.primes:
            if v not in ch.at_prime or ch.at_prime[v] == 0:
                raise InvalidComponentModel(f"{ch.name}: missing value at {v}")
        for v, table in ch.conductor.items():
            pi = self.prime(v).pi
            ell = abs(self.field.key_norm(pi))
            if sorted(table) != list(range(1, ell)):
                raise InvalidComponentModel(f"{ch.name}: table at {v} must cover 1..{ell - 1}")
            for a in range(1, ell):
                for b in range(1, ell):
                    if table[a * b % ell] != F.mul(table[a], table[b]):
                        raise InvalidComponentModel(f"{ch.name}: table at {v} is not multiplicative")
        # xi(sigma_v t) = xi(varpi_v) Nm(pi_v)^(-ell) xi(t)
        for v, tp in self.primes.items():
            corr = F.pow(F(self.field.key_norm(tp.pi)), -ch.ell)
            for t in self.components:
                if ch.comp[tp.perm[t]] != F.mul(F.mul(ch.at_prime[v], corr), ch.comp[t]):
                    raise InvalidComponentModel(f"{ch.name}: incompatible with the action of {v}")
        for u in self.units:
            for t in self.components:
                if ch.comp[u.perm[t]] != ch.comp[t]:
                    raise InvalidComponentModel(f"{ch.name}: not invariant under unit motions")
        self.characters[ch.name] = ch

    def xi_at(self, name: str, v: str) -> int:
        """Effective xi(varpi_v), including the unit-condition tables."""
        ch = self.character(name)
        F = self.F
        val = ch.at_prime[v]
        for c, table in ch.conductor.items():
            if c == v:
                continue
            val = F.mul(val, table[self.field.residue_mod(self.prime(v).pi, self.prime(c).pi)])
        return val


def _ident(ts):
    return {t: t for t in ts}


def default_setup(D: int, p: int, q: Optional[int] = None) -> QSetup:
    """Shipped configurations for (D, p) in {(3, 3), (5, 5), (2, 2)}."""
    F = QuadField(D, p)
    qq = q or p
    if (D, p) == (3, 3):
        T = ("c0", "c1")
        primes = [TrackedPrime("v13a", (4, 1), _ident(T)), TrackedPrime("v13b", (4, -1), _ident(T)),
                  TrackedPrime("v37", (7, 2), _ident(T))]
        chars = [Character("triv", {"c0": 1, "c1": 1}, {v.label: 1 for v in primes}),
                 Character("sgn", {"c0": 1, "c1": GF(qq).neg(1)}, {v.label: 1 for v in primes}),
                 Character("nm", {"c0": 1, "c1": 1}, {v.label: GF(qq)(F.key_norm(v.pi)) for v in primes}, ell=1)]
        return QSetup(F, qq, T, {"c0": "c1", "c1": "c0"}, (6, 1), primes,
                      [UnitMotion((2, 1), _ident(T))], chars)
    if (D, p) == (5, 5):
        T = ("c0",)
        # keys in the basis (1, (1 + sqrt 5)/2)
        primes = [TrackedPrime("v11a", (3, 1), _ident(T)), TrackedPrime("v11b", (4, -1), _ident(T)),
                  TrackedPrime("v19", (4, 1), _ident(T))]
        Fq = GF(qq)
        legendre = {a: (1 if pow(a, 5, 11) == 1 else Fq.neg(1)) for a in range(1, 11)}
        chars = [Character("triv", {"c0": 1}, {v.label: 1 for v in primes}),
                 Character("nm", {"c0": 1}, {v.label: Fq(F.key_norm(v.pi)) for v in primes}, ell=1),
                 Character("leg11", {"c0": 1}, {v.label: 1 for v in primes}, conductor={"v11a": legendre})]
        return QSetup(F, qq, T, _ident(T), (2, 1), primes, [UnitMotion((1, 1), _ident(T))], chars)
    if (D, p) == (2, 2):
        T = ("c0",)
        primes = [TrackedPrime("v7a", (3, 1), _ident(T)), TrackedPrime("v7b", (3, -1), _ident(T)),
                  TrackedPrime("v17", (5, 2), _ident(T))]
        chars = [Character("triv", {"c0": 1}, {v.label: 1 for v in primes})]
        return QSetup(F, qq, T, _ident(T), (2, 1), primes, [UnitMotion((3, 2), _ident(T))], chars)
    raise InvalidComponentModel(f"no shipped setup for (D, p) = ({D}, {p}); supply one explicitly")


@dataclass(frozen=True)
class QExpansion:
    setup: QSetup
    k: WeightVector
    m: WeightVector
    coeffs: Mapping[Index, int]
    trace_bound: int

    def __post_init__(self):
        if self.k.eset != self.setup.eset or self.m.eset != self.setup.eset:
            raise DimensionMismatch("weights must live on the ramified quadratic embedding set")
        object.__setattr__(self, "coeffs", dict(self.coeffs))

    @property
    def window(self) -> frozenset:
        return frozenset(self.coeffs)

    def get(self, t: str, mu: Key) -> Optional[int]:
        return self.coeffs.get((t, tuple(mu)))

    def __getitem__(self, idx: Index) -> int:
        if idx not in self.coeffs:
            raise NotInWindow(f"{idx} is outside the window")
        return self.coeffs[idx]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.coeffs.values())

    def with_coeffs(self, coeffs: Mapping[Index, int], k=None, m=None) -> "QExpansion":
        return QExpansion(self.setup, k if k is not None else self.k, m if m is not None else self.m,
                          coeffs, self.trace_bound)

    def agrees_with(self, other: "QExpansion") -> bool:
        """Equal weights and equal coefficients on the common window."""
        if (self.k, self.m) != (other.k, other.m):
            return False
        return all(self.coeffs[i] == other.coeffs[i] for i in self.window & other.window)

    def common_window(self, other: "QExpansion") -> frozenset:
        return self.window & other.window

    def to_json(self) -> dict:
        f = self.setup.field
        return {
            "field": {"D": f.D, "p": f.p},
            "q": self.setup.F.q,
            "weight": {"k": self.k.as_list(), "m": self.m.as_list()},
            "window": {"trace_bound": self.trace_bound},
            "coeffs": [{"t": t, "mu": list(mu), "val": v} for (t, mu), v in sorted(self.coeffs.items())],
        }


def frame(setup: QSetup, trace_bound: int) -> list[Index]:
    keys = setup.field.window(trace_bound)
    return [(t, mu) for t in setup.components for mu in keys]


def make_form(setup: QSetup, k: Sequence[int], m: Sequence[int], trace_bound: int,
              coeffs: Mapping[Index, int] = None, fill_zero: bool = True) -> QExpansion:
    """Form on the full frame of the trace bound; unlisted indices are 0 when fill_zero."""
    full = frame(setup, trace_bound)
    allowed = set(full)
    out = {i: 0 for i in full} if fill_zero else {}
    for (t, mu), v in (coeffs or {}).items():
        idx = (t, tuple(mu))
        if idx not in allowed:
            raise NotInWindow(f"{idx} is not a window index for trace bound {trace_bound}")
        out[idx] = setup.F.check(v)
    return QExpansion(setup, WeightVector(setup.eset, tuple(k)), WeightVector(setup.eset, tuple(m)),
                      out, trace_bound)


def random_form(setup: QSetup, k: Sequence[int], m: Sequence[int], trace_bound: int,
                rng: random.Random, density: float = 0.5) -> QExpansion:
    q = setup.F.q
    coeffs = {i: (rng.randrange(1, q) if rng.random() < density else 0) for i in frame(setup, trace_bound)}
    return make_form(setup, k, m, trace_bound, coeffs)


def form_from_json(obj: Mapping, setup: Optional[QSetup] = None) -> QExpansion:
    fld = obj["field"]
    setup = setup or default_setup(int(fld["D"]), int(fld["p"]), obj.get("q"))
    w = obj["weight"]
    coeffs = {(c["t"], tuple(c["mu"])): int(c["val"]) for c in obj.get("coeffs", [])}
    return make_form(setup, w["k"], w["m"], int(obj["window"]["trace_bound"]), coeffs)


# ---------------------------------------------------------------- operators


@dataclass(frozen=True)
class SAction:
    """Either a scalar S-eigenvalue or an explicit companion form S f."""

    scalar: Optional[int] = None
    companion: Optional[QExpansion] = None

    def __post_init__(self):
        if (self.scalar is None) == (self.companion is None):
            raise MissingSAction("give exactly one of a scalar or a companion form")

    def lookup(self, f: QExpansion, idx: Index) -> Optional[int]:
        if self.companion is not None:
            return self.companion.coeffs.get(idx)
        v = f.coeffs.get(idx)
        return None if v is None else f.setup.F.mul(f.setup.F.check(self.scalar), v)


def _mvec(w: WeightVector) -> Tuple[int, int]:
    return w.coords[0], w.coords[1]


def op_Tv(f: QExpansion, v: str, s: Optional[SAction] = None, level: bool = False) -> QExpansion:
    """r^t_mu(T_v f) = Nv pi^m r^{sigma_v t}_{pi mu} + pi^(-m) r^{sigma_v^-1 t}_{mu/pi}(S f)."""
    S = f.setup
    tp = S.prime(v)
    if not level and s is None:
        raise MissingSAction(f"T_{v} needs an S-action unless {v} divides the level")
    F, fld = S.F, S.field
    m1, m2 = _mvec(f.m)
    c_up = F.mul(S.nm(v), S.power(tp.pi, m1, m2))
    c_down = S.power(tp.pi, -m1, -m2)
    inv = {b: a for a, b in tp.perm.items()}
    out = {}
    for (t, mu) in f.coeffs:
        up = f.coeffs.get((tp.perm[t], fld.key_mul(tp.pi, mu)))
        if up is None:
            continue
        val = F.mul(c_up, up)
        if not level:
            low = fld.key_div(mu, tp.pi)
            if low is not None:
                d = s.lookup(f, (inv[t], low))
                if d is None:
                    continue
                val = F.add(val, F.mul(c_down, d))
        out[(t, mu)] = val
    return f.with_coeffs(out)


def _tp_inequality(f: QExpansion) -> None:
    k, m = f.k.coords, f.m.coords
    total = sum(min(mi + 1, mi + ki) for ki, mi in zip(k, m))
    if total < 0:
        raise WeightInequalityViolated(f"sum of min(m+1, m+k) = {total} < 0", k=list(k), m=list(m))


def op_Tp(f: QExpansion, s: Optional[SAction] = None) -> QExpansion:
    """eps varpi^(m+1) r^{x^-1 t}_{varpi mu} + varpi^(k+m) r^{xt}_{mu/varpi}(S f).

    A second term whose scalar vanishes needs no S-action."""
    S = f.setup
    _tp_inequality(f)
    F, fld = S.F, S.field
    (k1, k2), (m1, m2) = _mvec(f.k), _mvec(f.m)
    c1 = F.mul(S.epsilon, S.power(S.varpi, m1 + 1, m2 + 1))
    c2 = S.power(S.varpi, k1 + m1, k2 + m2)
    if c2 != 0 and s is None:
        raise MissingSAction("T_p needs an S-action for this weight")
    out = {}
    for (t, mu) in f.coeffs:
        val = 0
        if c1:
            a = f.coeffs.get((S.x_inv[t], fld.key_mul(S.varpi, mu)))
            if a is None:
                continue
            val = F.mul(c1, a)
        if c2:
            low = fld.key_div(mu, S.varpi)
            if low is not None:
                b = s.lookup(f, (S.x[t], low))
                if b is None:
                    continue
                val = F.add(val, F.mul(c2, b))
        out[(t, mu)] = val
    return f.with_coeffs(out)


def op_Vp(f: QExpansion) -> QExpansion:
    """r^t_mu(V f) = r^{xt}_{mu/varpi}(f), zero when varpi does not divide mu."""
    S = f.setup
    fld = S.field
    out = {}
    for t, mu in frame(S, f.trace_bound):
        low = fld.key_div(mu, S.varpi)
        if low is None:
            out[(t, mu)] = 0
            continue
        val = f.coeffs.get((S.x[t], low))
        if val is not None:
            out[(t, mu)] = val
    k2, m2 = frobenius_weight_shift(S.eset, PRIME_ID, f.k, f.m)
    return f.with_coeffs(out, k2, m2)


def depth(setup: QSetup, mu: Key) -> Optional[int]:
    """Relative valuation of mu at the prime above p (None for mu = 0)."""
    return setup.field.key_valuation(mu)


def op_Theta(f: QExpansion) -> QExpansion:
    S = f.setup
    F = S.F
    out = {}
    for (t, mu), val in f.coeffs.items():
        out[(t, mu)] = F.mul(S.field.key_residue(mu), val) if depth(S, mu) == 0 else 0
    t_tau, m_shift = theta_shift(S.eset, PRIME_ID, 0)
    return f.with_coeffs(out, f.k + t_tau, f.m + m_shift)


def mul_Hasse(f: QExpansion, sigma_pos: int, constants: Mapping[str, int], mode: str = "H") -> QExpansion:
    """Multiply by H_sigma (k += h_sigma) or G_sigma (m += h_sigma) with constant q-expansions."""
    S = f.setup
    F = S.F
    for t in S.components:
        if F.check(constants.get(t, 0)) == 0:
            raise ZeroConstant(f"constant on component {t} must be nonzero")
    h = hasse_weight(S.eset, S.eset.embeddings[sigma_pos])
    out = {(t, mu): F.mul(constants[t], v) for (t, mu), v in f.coeffs.items()}
    if mode == "H":
        return f.with_coeffs(out, k=f.k + h)
    if mode == "G":
        return f.with_coeffs(out, m=f.m + h)
    raise ValueError(f"mode must be 'H' or 'G', not {mode!r}")


def twist(f: QExpansion, name: str, mode: str = "plain") -> QExpansion:
    """e_xi f.  'plain' scales by xi(t); 'u1' also applies the unit-condition tables."""
    S = f.setup
    ch = S.character(name)
    F, fld = S.F, S.field
    out = {}
    for (t, mu), v in f.coeffs.items():
        val = F.mul(ch.comp[t], v)
        if mode == "u1":
            for c, table in ch.conductor.items():
                r = fld.residue_mod(mu, S.prime(c).pi)
                val = 0 if r == 0 else F.mul(val, table[r])
        elif mode != "plain":
            raise ValueError(f"mode must be 'plain' or 'u1', not {mode!r}")
        out[(t, mu)] = val
    shift = WeightVector.constant(S.eset, ch.ell)
    return f.with_coeffs(out, m=f.m + shift)


def twisted_s(setup: QSetup, name: str, v: str, scalar: int) -> int:
    """S-eigenvalue of e_xi f at v given that of f: xi(varpi_v)^2 d."""
    F = setup.F
    return F.mul(F.pow(setup.xi_at(name, v), 2), scalar)


def unit_consistent(f: QExpansion) -> bool:
    """r^{u(t)}_mu = alpha^m r^t_{alpha mu} wherever both sides are stored."""
    S = f.setup
    m1, m2 = _mvec(f.m)
    for u in S.units:
        c = S.power(u.alpha, m1, m2)
        for (t, mu), v in f.coeffs.items():
            w = f.coeffs.get((t, S.field.key_mul(u.alpha, mu)))
            if w is not None and f.coeffs.get((u.perm[t], mu), v) != S.F.mul(c, w):
                return False
    return True


def is_strongly_stabilized(f: QExpansion) -> bool:
    return all(v == 0 for (t, mu), v in f.coeffs.items() if depth(f.setup, mu) != 0)


def is_stabilized(f: QExpansion, level_primes: Iterable[str]) -> bool:
    return all(op_Tv(f, v, level=True).is_zero() for v in level_primes)


# ------------------------------------------------------------ eigenforms


@dataclass(frozen=True)
class EigenBuild:
    form: QExpansion
    unreachable: tuple[Index, ...]


def eigen_build(setup: QSetup, k: Sequence[int], m: Sequence[int], trace_bound: int,
                a: Mapping[str, int], d: Mapping[str, int] = None, level: Iterable[str] = (),
                ap_mode: str = "none", a_p: int = 0, d_p: Optional[int] = None,
                base: Index = ("c0", (1, 0)), base_value: int = 1, strict: bool = False) -> EigenBuild:
    """Propagate an eigen system from the base coefficient over the window.

    For a tracked v off the level, T_v f = a_v f with S_v f = d_v f gives
        Nv pi^m r^{sigma t}_{pi mu} = a_v r^t_mu - d_v pi^-m r^{sigma^-1 t}_{mu/pi};
    at level primes the second term is absent.  ap_mode 'T' or 'U' adds the
    analogous T_p (with S-eigenvalue d_p) or U_p recursion, 'none' skips it.
    Indices not reached from the base are reported; strict mode raises.
    """
    S = setup
    F, fld = S.F, S.field
    d = dict(d or {})
    level = set(level)
    for v in list(a) + list(level):
        S.prime(v)
    for v in a:
        if v not in level and v not in d:
            raise MissingSAction(f"no S-eigenvalue for {v}")
    probe = make_form(S, k, m, 0)
    m1, m2 = _mvec(probe.m)
    k1, k2 = _mvec(probe.k)
    full = frame(S, trace_bound)
    window = set(full) - {(t, (0, 0)) for t in S.components}
    base = (base[0], tuple(base[1]))
    if base not in window:
        raise NotInWindow(f"base index {base} is outside the window")

    # lead * r(target) = sum coeff * r(input)
    rules: list[tuple[Index, int, list]] = []

    def add_rule(target, lead, terms):
        rules.append((target, lead, terms))

    if ap_mode not in ("T", "U", "none"):
        raise ValueError(f"ap_mode must be 'T', 'U' or 'none', not {ap_mode!r}")
    hecke = []
    for v, av in a.items():
        tp = S.prime(v)
        inv = {y: z for z, y in tp.perm.items()}
        lead = F.mul(S.nm(v), S.power(tp.pi, m1, m2))
        down = None if v in level else F.neg(F.mul(F.check(d[v]), S.power(tp.pi, -m1, -m2)))
        hecke.append((tp, inv, lead, F.check(av), down))
    motions = [(u, S.power(u.alpha, m1, m2)) for u in S.units]
    p_rule = None
    if ap_mode != "none":
        _tp_inequality(probe)
        lead = F.mul(S.epsilon, S.power(S.varpi, m1 + 1, m2 + 1))
        c2 = S.power(S.varpi, k1 + m1, k2 + m2)
        down = None
        if ap_mode == "T" and c2:
            if d_p is None:
                raise MissingSAction("T_p recursion needs d_p")
            down = F.neg(F.mul(c2, F.check(d_p)))
        if lead:
            p_rule = (lead, F.check(a_p), down)

    for (t, mu) in window:
        for tp, inv, lead, av, down in hecke:
            terms = [((t, mu), av)]
            if down is not None:
                low = fld.key_div(mu, tp.pi)
                if low is not None:
                    terms.append(((inv[t], low), down))
            add_rule((tp.perm[t], fld.key_mul(tp.pi, mu)), lead, terms)
        for u, c in motions:
            # alpha^m r^t_{alpha mu} = r^{u t}_mu, read in both directions
            add_rule((t, fld.key_mul(u.alpha, mu)), c, [((u.perm[t], mu), 1)])
            add_rule((u.perm[t], fld.key_div(mu, u.alpha)), 1, [((t, mu), c)])
        if p_rule is not None:
            lead, ap, down = p_rule
            terms = [((t, mu), ap)]
            if down is not None:
                low = fld.key_div(mu, S.varpi)
                if low is not None:
                    terms.append(((S.x[t], low), down))
            add_rule((S.x_inv[t], fld.key_mul(S.varpi, mu)), lead, terms)

    known: Dict[Index, int] = {base: F.check(base_value)}

    def evaluate(lead, terms):
        acc = 0
        for idx, c in terms:
            if idx not in known:
                return None
            acc = F.add(acc, F.mul(c, known[idx]))
        return F.div(acc, lead)

    watchers: Dict[Index, list] = {}
    for n, (tgt, lead, terms) in enumerate(rules):
        for idx, _ in terms:
            watchers.setdefault(idx, []).append(n)
    todo = [base]
    while todo:
        idx = todo.pop()
        for n in watchers.get(idx, ()):
            tgt, lead, terms = rules[n]
            if tgt in known or tgt not in window:
                continue
            val = evaluate(lead, terms)
            if val is not None:
                known[tgt] = val
                todo.append(tgt)
    for tgt, lead, terms in rules:
        if tgt not in known:
            continue
        val = evaluate(1, terms)
        if val is not None and val != F.mul(lead, known[tgt]):
            raise InconsistentEigenvalues(f"two recursions disagree at {tgt}")
    unreachable = tuple(sorted(window - set(known)))
    if strict and unreachable:
        raise UnreachableIndex(f"{len(unreachable)} window indices are not reachable",
                               first=list(unreachable[:5]))
    form = QExpansion(S, probe.k, probe.m, known, trace_bound)
    return EigenBuild(form, unreachable)


def satisfies_eigen(f: QExpansion, a: Mapping[str, int], d: Mapping[str, int] = None,
                    level: Iterable[str] = ()) -> bool:
    """T_v f = a_v f on the common window for every listed v."""
    F = f.setup.F
    level = set(level)
    for v, av in a.items():
        lv = v in level
        g = op_Tv(f, v, None if lv else SAction(scalar=(d or {})[v]), level=lv)
        if any(g.coeffs[i] != F.mul(F.check(av), f.coeffs[i]) for i in g.window & f.window):
            return False
    return True


def dumps(f: QExpansion) -> str:
    return json.dumps(f.to_json(), sort_keys=True)
