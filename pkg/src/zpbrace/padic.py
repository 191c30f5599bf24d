"""Truncated p-adic integers for odd primes.

An element of Z_p is carried as its residue modulo p**N.  The residue 0 does
not mean "exactly zero": it means the valuation is at least N, and the
functions here report it as ``None`` so callers are forced to branch on it.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .errors import NonUnit, NotASquare


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


@lru_cache(maxsize=None)
def canonical_nonsquare(p: int) -> int:
    """Smallest positive quadratic non-residue modulo the odd prime ``p``."""
    for q in range(2, p):
        if pow(q, (p - 1) // 2, p) == p - 1:
            return q
    raise ValueError(f"no non-residue modulo {p}")


@dataclass(frozen=True)
class PAdicCtx:
    p: int
    N: int

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.N < 1:
            raise ValueError(f"precision N must be >= 1, got {self.N}")

    @property
    def q(self) -> int:
        return canonical_nonsquare(self.p)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def __call__(self, value: int) -> PAdicInt:
        return PAdicInt(self, value % self.modulus)

    def with_precision(self, N: int) -> PAdicCtx:
        return PAdicCtx(self.p, N)


class SquareClass(enum.Enum):
    SQUARE = "square"
    NONSQUARE = "nonsquare"

    def __mul__(self, other: SquareClass) -> SquareClass:
        if self is other:
            return SquareClass.SQUARE
        return SquareClass.NONSQUARE

    def flip(self) -> SquareClass:
        return self * SquareClass.NONSQUARE

    @property
    def rank_key(self) -> int:
        # square sorts before nonsquare
        return 0 if self is SquareClass.SQUARE else 1


def valuation_int(r: int, p: int, N: int) -> int:
    """Valuation of the residue ``r`` mod p**N, capped at N (N means zero)."""
    r %= p ** N
    if r == 0:
        return N
    v = 0
    while r % p == 0:
        r //= p
        v += 1
    return v


def legendre(u: int, p: int) -> int:
    """Euler criterion: 1, -1, or 0."""
    s = pow(u, (p - 1) // 2, p)
    return -1 if s == p - 1 else s


def square_class_int(u: int, p: int) -> SquareClass:
    if u % p == 0:
        raise NonUnit(f"{u} is not a unit modulo {p}")
    if legendre(u, p) == 1:
        return SquareClass.SQUARE
    return SquareClass.NONSQUARE


def _sqrt_mod_prime(a: int, p: int) -> int:
    # Tonelli-Shanks; a is a nonzero residue
    a %= p
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = canonical_nonsquare(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_unit_int(u: int, p: int, N: int) -> int:
    """Square root of a square unit mod p**N, canonical in the lower half mod p."""
    if u % p == 0:
        raise NonUnit(f"{u} is not a unit modulo {p}")
    if legendre(u, p) != 1:
        raise NotASquare(f"{u} is not a square modulo {p}")
    r = _sqrt_mod_prime(u, p)
    if r > (p - 1) // 2:
        r = p - r
    # Newton iteration doubles the number of correct p-adic digits
    k = 1
    while k < N:
        k = min(2 * k, N)
        m = p ** k
        r = (r - (r * r - u) * pow(2 * r, -1, m)) % m
    return r % p ** N


@dataclass(frozen=True)
class PAdicInt:
    ctx: PAdicCtx
    residue: int

    def __post_init__(self):
        if not 0 <= self.residue < self.ctx.modulus:
            object.__setattr__(self, "residue", self.residue % self.ctx.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, PAdicInt):
            if other.ctx != self.ctx:
                raise ValueError("mixing p-adic integers of different contexts")
            return other.residue
        return int(other)

    def __add__(self, other):
        return self.ctx(self.residue + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.ctx(self.residue - self._coerce(other))

    def __rsub__(self, other):
        return self.ctx(self._coerce(other) - self.residue)

    def __mul__(self, other):
        return self.ctx(self.residue * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.ctx(-self.residue)

    def __eq__(self, other):
        if isinstance(other, PAdicInt):
            return self.ctx == other.ctx and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == other % self.ctx.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.residue))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"PAdicInt({self.residue} mod {self.ctx.p}^{self.ctx.N})"

    def inverse(self) -> PAdicInt:
        if self.residue % self.ctx.p == 0:
            raise NonUnit(f"{self!r} is not a unit")
        return self.ctx(pow(self.residue, -1, self.ctx.modulus))

    def to_json(self) -> dict:
        return {"value": str(self.residue), "p": self.ctx.p, "N": self.ctx.N}


def valuation(x: PAdicInt) -> int | None:
    """Exact p-adic valuation, or ``None`` when x vanishes at the working precision."""
    v = valuation_int(x.residue, x.ctx.p, x.ctx.N)
    return None if v >= x.ctx.N else v


def unit_part(x: PAdicInt) -> int:
    """u with x = p^v * u; u is only meaningful modulo p^(N - v)."""
    v = valuation(x)
    if v is None:
        raise NonUnit("zero at precision has no unit part")
    return x.residue // x.ctx.p ** v


def square_class(u: PAdicInt) -> SquareClass:
    if valuation(u) != 0:
        raise NonUnit(f"{u!r} has positive valuation")
    return square_class_int(u.residue, u.ctx.p)


def sqrt_unit(u: PAdicInt) -> PAdicInt:
    if valuation(u) != 0:
        raise NonUnit(f"{u!r} has positive valuation")
    return u.ctx(sqrt_unit_int(u.residue, u.ctx.p, u.ctx.N))
