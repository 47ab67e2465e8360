"""Arithmetic in GF(2^m) with elements stored as polynomial-basis bitmasks.

Bit ``i`` of an element is the coefficient of ``x^i``.  Multiplication is a
carryless product reduced modulo the field's irreducible polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FieldContextError

MAX_M = 16


def _poly(*exponents):
    return sum(1 << e for e in exponents)


DEFAULT_IRREDUCIBLE = {
    1: _poly(1, 0),
    2: _poly(2, 1, 0),
    3: _poly(3, 1, 0),
    4: _poly(4, 1, 0),
    5: _poly(5, 2, 0),
    6: _poly(6, 1, 0),
    7: _poly(7, 1, 0),
    8: _poly(8, 4, 3, 1, 0),
    9: _poly(9, 1, 0),
    10: _poly(10, 3, 0),
    11: _poly(11, 2, 0),
    12: _poly(12, 3, 0),
    13: _poly(13, 4, 3, 1, 0),
    14: _poly(14, 5, 3, 1, 0),
    15: _poly(15, 1, 0),
    16: _poly(16, 5, 3, 2, 0),
}


def clmul(a: int, b: int) -> int:
    """Carryless (GF(2)[x]) product of two bitmasks."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, p: int) -> int:
    dp = p.bit_length()
    while a.bit_length() >= dp:
        a ^= p << (a.bit_length() - dp)
    return a


def is_irreducible(p: int) -> bool:
    """Exhaustive trial division by every polynomial of degree 1..deg(p)//2."""
    deg = p.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if poly_mod(p, q) == 0:
                return False
    return True


def poly_str(p: int) -> str:
    terms = []
    for e in range(p.bit_length() - 1, -1, -1):
        if p >> e & 1:
            terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
    return " + ".join(terms) or "0"


@dataclass(frozen=True)
class FieldContext:
    """GF(2^m) defined by an irreducible polynomial (bitmask incl. the x^m term)."""

    m: int
    irreducible: int | None = None

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or not 1 <= self.m <= MAX_M:
            raise DomainError(f"field degree must be in [1, {MAX_M}], got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        p = DEFAULT_IRREDUCIBLE[self.m] if self.irreducible is None else int(self.irreducible)
        if p.bit_length() - 1 != self.m:
            raise DomainError(f"polynomial {poly_str(p)} does not have degree {self.m}")
        if not is_irreducible(p):
            raise DomainError(f"polynomial {poly_str(p)} is reducible over GF(2)")
        object.__setattr__(self, "irreducible", p)

    @property
    def order(self) -> int:
        return 1 << self.m

    def __call__(self, bits: int) -> "FieldElement":
        return FieldElement(int(bits), self)

    def mul(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.irreducible)

    def mul_array(self, a, b) -> np.ndarray:
        """Elementwise product of two integer arrays of field elements."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for i in range(self.m):
            r ^= np.where((b >> i) & 1, a << i, 0)
        for d in range(2 * self.m - 2, self.m - 1, -1):
            r ^= ((r >> d) & 1) * (self.irreducible << (d - self.m))
        return r

    def trace_array(self, a) -> np.ndarray:
        """Traces of an array of elements, as 0/1 integers."""
        z = np.asarray(a, dtype=np.int64)
        acc = z.copy()
        for _ in range(self.m - 1):
            z = self.mul_array(z, z)
            acc ^= z
        if np.any(acc > 1):
            raise FieldContextError("trace left the prime subfield; field context is corrupt")
        return acc

    def __str__(self):
        return f"GF(2^{self.m}) mod {poly_str(self.irreducible)}"


@dataclass(frozen=True)
class FieldElement:
    bits: int
    ctx: FieldContext

    def __post_init__(self):
        if not 0 <= self.bits < self.ctx.order:
            raise DomainError(f"{self.bits} is not an element of {self.ctx}")

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.ctx != self.ctx:
            raise DomainError(f"cannot combine elements of {self.ctx} and {other.ctx}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.bits ^ other.bits, self.ctx)

    __sub__ = __add__

    def __mul__(self, other):
        return gf_mul(self, other) if isinstance(other, FieldElement) else NotImplemented

    def __pow__(self, e):
        return gf_pow(self, e)

    def __int__(self):
        return self.bits

    def __repr__(self):
        return f"FieldElement({self.bits:#0{self.ctx.m + 2}b}, m={self.ctx.m})"


def gf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if not isinstance(b, FieldElement):
        raise DomainError(f"expected a FieldElement, got {type(b).__name__}")
    a._check(b)
    return FieldElement(a.ctx.mul(a.bits, b.bits), a.ctx)


def gf_pow(a: FieldElement, e: int) -> FieldElement:
    """Square-and-multiply power.  ``0**0`` is taken to be 1."""
    if e < 0:
        raise DomainError("negative exponents are not supported")
    ctx = a.ctx
    result, base = 1, a.bits
    while e:
        if e & 1:
            result = ctx.mul(result, base)
        base = ctx.mul(base, base)
        e >>= 1
    return FieldElement(result, ctx)


def trace(a: FieldElement) -> int:
    """``Tr(a) = a + a^2 + a^4 + ... + a^(2^(m-1))``, returned as 0 or 1."""
    ctx = a.ctx
    z = acc = a.bits
    for _ in range(ctx.m - 1):
        z = ctx.mul(z, z)
        acc ^= z
    if acc > 1:
        raise FieldContextError(f"trace of {a!r} is {acc}, not in GF(2)")
    return acc


def enumerate_field(ctx: FieldContext) -> list[FieldElement]:
    """All elements in increasing bitmask order, zero first."""
    return [FieldElement(b, ctx) for b in range(ctx.order)]
