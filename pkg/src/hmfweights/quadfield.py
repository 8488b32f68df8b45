"""Exact arithmetic in a real quadratic field F = Q(sqrt D) with p ramified.

Elements are x + y sqrt(D) with rational x, y.  Integral elements are also
written in the basis (1, omega_D), omega_D = sqrt D or (1 + sqrt D)/2.  The
first real embedding sends sqrt D to the positive root and the second to the
negative one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

from .errors import NegativeValuation, NotSquarefree, PrimeUnramified
from .finite_field import is_prime

Rational = Union[int, Fraction]


def _vp(n: Fraction, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    num, den = n.numerator, n.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class QElt:
    """x + y sqrt(D).  Arithmetic needs the two operands to share D."""

    D: int
    x: Fraction
    y: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def _coerce(self, other) -> "QElt":
        if isinstance(other, QElt):
            if other.D != self.D:
                raise ValueError("elements of different fields")
            return other
        return QElt(self.D, Fraction(other))

    def __add__(self, other) -> "QElt":
        o = self._coerce(other)
        return QElt(self.D, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self) -> "QElt":
        return QElt(self.D, -self.x, -self.y)

    def __sub__(self, other) -> "QElt":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QElt":
        return self._coerce(other) - self

    def __mul__(self, other) -> "QElt":
        o = self._coerce(other)
        return QElt(self.D, self.x * o.x + self.D * self.y * o.y, self.x * o.y + self.y * o.x)

    __rmul__ = __mul__

    def conj(self) -> "QElt":
        return QElt(self.D, self.x, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x - self.D * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def inverse(self) -> "QElt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0")
        c = self.conj()
        return QElt(self.D, c.x / n, c.y / n)

    def __truediv__(self, other) -> "QElt":
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int) -> "QElt":
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QElt(self.D, 1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_totally_positive(self) -> bool:
        # x + y sqrt D > 0 and x - y sqrt D > 0  <=>  x > 0 and x^2 > D y^2
        return self.x > 0 and self.x * self.x > self.D * self.y * self.y

    def embeddings(self) -> tuple[float, float]:
        r = self.D ** 0.5
        return float(self.x + self.y * r), float(self.x - self.y * r)

    def __repr__(self) -> str:
        return f"({self.x} + {self.y}*sqrt({self.D}))"


class QuadField:
    """Q(sqrt D) together with the prime p above which it is ramified."""

    def __init__(self, D: int, p: int):
        if not (D > 1 and is_squarefree(D)):
            raise NotSquarefree(f"D = {D} must be a squarefree integer > 1")
        if not is_prime(p):
            raise PrimeUnramified(f"p = {p} is not prime")
        self.D, self.p = D, p
        self.disc = D if D % 4 == 1 else 4 * D
        if self.disc % p:
            raise PrimeUnramified(f"p = {p} does not divide disc = {self.disc}")
        self.omega = QElt(D, Fraction(1, 2), Fraction(1, 2)) if D % 4 == 1 else QElt(D, 0, 1)
        # residue of sqrt D modulo the prime above p
        self.sqrt_res = 0 if D % p == 0 else 1
        self.one = QElt(D, 1)
        self.sqrtD = QElt(D, 0, 1)

    def __repr__(self) -> str:
        return f"QuadField(D={self.D}, p={self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadField) and (self.D, self.p) == (other.D, other.p)

    def __hash__(self) -> int:
        return hash((self.D, self.p))

    def elt(self, x: Rational, y: Rational = 0) -> QElt:
        """x + y sqrt D."""
        return QElt(self.D, Fraction(x), Fraction(y))

    def from_basis(self, coords: Sequence[int]) -> QElt:
        """a + b omega_D."""
        a, b = coords
        return self.one * a + self.omega * b

    def to_basis(self, z: QElt) -> tuple[Fraction, Fraction]:
        b = z.y / self.omega.y
        return z.x - b * self.omega.x, b

    def basis_key(self, z: QElt) -> Tuple[int, int]:
        """Integer basis coordinates of an element of O_F; ValueError otherwise."""
        a, b = self.to_basis(z)
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError(f"{z} is not integral")
        return int(a), int(b)

    def is_integral(self, z: QElt) -> bool:
        a, b = self.to_basis(z)
        return a.denominator == 1 and b.denominator == 1

    def divides(self, d: QElt, z: QElt) -> bool:
        """d | z in O_F (z may be 0)."""
        return z.is_zero() or self.is_integral(z / d)

    def valuation(self, z: QElt) -> int:
        """v at the prime above p; equals v_p of the norm since the prime is ramified."""
        if z.is_zero():
            raise ValueError("valuation of 0")
        return _vp(z.norm(), self.p)

    def residue(self, z: QElt) -> int:
        """Image in O_F / prime = F_p of an element with nonnegative valuation."""
        if z.is_zero():
            return 0
        if self.valuation(z) < 0:
            raise NegativeValuation(f"{z} is not integral at the prime above {self.p}")
        p = self.p
        # nonnegative valuation forces x, y to be p-integral here
        val = z.x + z.y * self.sqrt_res
        return (val.numerator * pow(val.denominator, -1, p)) % p

    def value_power_product(self, x: QElt, n1: int, n2: int) -> int:
        """sigma_1(x)^n1 sigma_2(x)^n2 reduced at the prime: 0 if it lies in the prime."""
        if x.is_zero():
            raise ValueError("power product of 0")
        z = (x ** n1) * (x.conj() ** n2)
        v = self.valuation(z)
        if v < 0:
            raise NegativeValuation(f"sigma_1(x)^{n1} sigma_2(x)^{n2} has valuation {v}")
        if v > 0:
            return 0
        return self.residue(z)

    def window(self, trace_bound: int, include_zero: bool = True) -> list[Tuple[int, int]]:
        """Basis keys of the totally positive elements of O_F with trace <= bound (and 0)."""
        cache = self.__dict__.setdefault("_window_cache", {})
        if trace_bound not in cache:
            cache[trace_bound] = self._window(trace_bound)
        keys = cache[trace_bound]
        return ([(0, 0)] if include_zero else []) + list(keys)

    def _window(self, bound: int) -> tuple[Tuple[int, int], ...]:
        # for key (a, b): 2x = 2a + s b, 2y = b (s = 1) or 2b (s = 0)
        s = self._sr[0]
        out = []
        bmax = bound // (1 if s else 2) + 1
        for b in range(-bmax, bmax + 1):
            y2 = b if s else 2 * b
            for a in range((-s * b) // 2 - 1, (bound - s * b) // 2 + 1):
                x2 = 2 * a + s * b
                if 0 < x2 <= bound and x2 * x2 > self.D * y2 * y2:
                    out.append((a, b))
        return tuple(sorted(out))

    # Integer-key arithmetic on O_F: key (a, b) <-> a + b omega_D, omega^2 = s omega + r.
    @property
    def _sr(self) -> Tuple[int, int]:
        if self.D % 4 == 1:
            return 1, (self.D - 1) // 4
        return 0, self.D

    def key_mul(self, u: Tuple[int, int], w: Tuple[int, int]) -> Tuple[int, int]:
        s, r = self._sr
        a, b = u
        c, d = w
        return a * c + b * d * r, a * d + b * c + b * d * s

    def key_conj(self, u: Tuple[int, int]) -> Tuple[int, int]:
        a, b = u
        if self.D % 4 == 1:
            return a + b, -b
        return a, -b

    def key_norm(self, u: Tuple[int, int]) -> int:
        return self.key_mul(u, self.key_conj(u))[0]

    def key_trace(self, u: Tuple[int, int]) -> int:
        a, b = u
        return 2 * a + b * self._sr[0]

    def key_div(self, u: Tuple[int, int], w: Tuple[int, int]):
        """u / w as a key if w | u in O_F, else None."""
        n = self.key_norm(w)
        a, b = self.key_mul(u, self.key_conj(w))
        if a % n or b % n:
            return None
        return a // n, b // n

    def key_valuation(self, u: Tuple[int, int]):
        """v at the prime above p, None for 0 (infinite)."""
        if u == (0, 0):
            return None
        n, v = self.key_norm(u), 0
        while n % self.p == 0:
            n //= self.p
            v += 1
        return v

    def key_residue(self, u: Tuple[int, int]) -> int:
        """Residue of an integral element at the prime above p."""
        p = self.p
        if self._sr[0]:
            w = (1 + self.sqrt_res) * pow(2, -1, p) % p
        else:
            w = self.sqrt_res
        return (u[0] + u[1] * w) % p

    def key_is_totally_positive(self, u: Tuple[int, int]) -> bool:
        return self.from_basis(u).is_totally_positive()

    def residue_mod(self, u: Tuple[int, int], pi: Tuple[int, int]) -> int:
        """Image of u in O_F / (pi) = F_l for a prime pi of prime norm l."""
        ell = abs(self.key_norm(pi))
        for r in range(ell):
            if self.key_div((-r, 1), pi) is not None:
                return (u[0] + u[1] * r) % ell
        raise ValueError(f"{pi} does not generate a degree-one prime")
