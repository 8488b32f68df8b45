"""Small finite fields GF(p^k) with table-driven arithmetic.

Elements are plain ints in ``range(q)``: the base-p digits of an element are
its coefficients in the polynomial basis 1, x, ..., x^(k-1).  The prime
subfield is therefore ``range(p)`` with ordinary modular arithmetic, which lets
residues of integers be used as field elements directly.

Fields are cached per q, so ``GF(9) is GF(9)``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p^k, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1 or not is_prime(p):
        raise ValueError(f"{q} is not a prime power")
    return p, k


def _poly_mulmod(a, b, mod, p):
    # a, b: coefficient lists of length k; mod: monic of degree k (length k+1)
    k = len(mod) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for j in range(k + 1):
                prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
    return prod[:k]


def _is_irreducible(mod, p):
    # brute force: no monic factor of degree 1..k//2
    k = len(mod) - 1
    for deg in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            g = list(tail) + [1]
            r = list(mod)
            for d in range(len(r) - 1, deg - 1, -1):
                c = r[d]
                if c:
                    for j in range(deg + 1):
                        r[d - deg + j] = (r[d - deg + j] - c * g[j]) % p
            if not any(r[:deg]):
                return False
    return True


class GF:
    """The field with q elements.  Use ``GF(q)``; instances are cached."""

    _cache: dict[int, "GF"] = {}

    def __new__(cls, q: int):
        if q in cls._cache:
            return cls._cache[q]
        self = super().__new__(cls)
        self._build(q)
        cls._cache[q] = self
        return self

    def _build(self, q: int) -> None:
        p, k = prime_power(q)
        self.q, self.p, self.k = q, p, k
        if k == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = next(
                tuple(list(tail) + [1])
                for tail in itertools.product(range(p), repeat=k)
                if tail[0] != 0 and _is_irreducible(list(tail) + [1], p)
            )
        digits = [self._digits(a) for a in range(q)]
        self._add = [[self._undigits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                      for b in range(q)] for a in range(q)]
        self._neg = [self._undigits([(-x) % p for x in digits[a]]) for a in range(q)]
        # log / antilog tables from a primitive element
        mul_raw = lambda a, b: self._undigits(_poly_mulmod(digits[a], digits[b], self.modulus, p))
        for g in range(1 if q == 2 else 2, q):
            powers, x = [], 1
            for _ in range(q - 1):
                powers.append(x)
                x = mul_raw(x, g)
            if len(set(powers)) == q - 1:
                break
        self.generator = g
        self._exp = powers + powers
        self._log = [0] * q
        for i, x in enumerate(powers):
            self._log[x] = i

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds: Sequence[int]) -> int:
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        return (GF, (self.q,))

    # arithmetic on int-encoded elements
    def __call__(self, n: int) -> int:
        """Image of the integer n (in the prime subfield)."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in " + repr(self))
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def sum(self, xs: Iterable[int]) -> int:
        s = 0
        for x in xs:
            s = self._add[s][x]
        return s

    def check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise ValueError(f"{a!r} is not an element of {self!r}")
        return a

    # linear algebra over the field
    def rank(self, rows: Sequence[Sequence[int]]) -> int:
        return len(self.row_reduce(rows)[1])

    def row_reduce(self, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
        """Reduced row echelon form and pivot columns."""
        m = [list(r) for r in rows]
        if not m:
            return m, []
        ncols = len(m[0])
        pivots: list[int] = []
        row = 0
        for col in range(ncols):
            piv = next((i for i in range(row, len(m)) if m[i][col]), None)
            if piv is None:
                continue
            m[row], m[piv] = m[piv], m[row]
            inv = self.inv(m[row][col])
            m[row] = [self.mul(inv, x) for x in m[row]]
            for i in range(len(m)):
                if i != row and m[i][col]:
                    c = m[i][col]
                    m[i] = [self.sub(x, self.mul(c, y)) for x, y in zip(m[i], m[row])]
            pivots.append(col)
            row += 1
            if row == len(m):
                break
        return m[:row], pivots
