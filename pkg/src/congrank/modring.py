"""Exact scalar arithmetic: residues mod p^e and cyclotomic numbers in Q(zeta_p).

Residues are plain Python ints kept in canonical form ``[0, p^e)``; the
functions here do the normalizing.  Cyclotomic scalars are polynomials in a
primitive p-th root of unity with Fraction coefficients, reduced modulo
``1 + x + ... + x^(p-1)``, so every root-of-unity identity is decided
exactly rather than in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .errors import NotAUnit

# One-word arithmetic with headroom for a single product.
MAX_MODULUS = 2**31

# Canonical residues are plain ints in [0, p^e).
Residue = int


def is_prime(n: int) -> bool:
    """Trial-division primality test (moduli here are small by design)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class ModulusContext:
    """A prime power p^e together with its structural data.

    All matrix and residue arithmetic in the library is carried out relative
    to one of these contexts.
    """

    p: int
    e: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.e < 1:
            raise ValueError(f"e must be >= 1, got {self.e}")
        if self.p**self.e > MAX_MODULUS:
            raise ValueError(f"p^e = {self.p**self.e} exceeds the cap {MAX_MODULUS}")

    @property
    def q(self) -> int:
        return self.p**self.e

    def __repr__(self) -> str:
        return f"ModulusContext(p={self.p}, e={self.e})"


@lru_cache(maxsize=None)
def modulus(p: int, e: int) -> ModulusContext:
    """Cached ModulusContext constructor."""
    return ModulusContext(p, e)


def normalize(n: int, ctx: ModulusContext) -> Residue:
    """Canonical representative of n mod p^e, in [0, p^e)."""
    return n % ctx.q


def unit_inverse(x: Residue, ctx: ModulusContext) -> Residue:
    """Multiplicative inverse of x mod p^e.

    Raises NotAUnit when p divides x.
    """
    if x % ctx.p == 0:
        raise NotAUnit(f"{x} is divisible by {ctx.p}, not a unit mod {ctx.q}")
    return pow(x, -1, ctx.q)


def p_valuation(x: Residue, ctx: ModulusContext) -> int:
    """Largest j <= e with p^j dividing x; returns e for x = 0."""
    x = x % ctx.q
    if x == 0:
        return ctx.e
    j = 0
    while x % ctx.p == 0:
        x //= ctx.p
        j += 1
    return j


@dataclass(frozen=True)
class CyclotomicScalar:
    """An element of Q(zeta_p), stored as a polynomial in zeta of degree < p-1.

    The basis 1, zeta, ..., zeta^(p-2) is a Q-basis, so equality and zero
    tests are structural.  ``coeffs`` always has length p-1.
    """

    p: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.p - 1:
            raise ValueError(
                f"expected {self.p - 1} coefficients for p={self.p}, got {len(self.coeffs)}"
            )

    @classmethod
    def from_rational(cls, value, p: int) -> CyclotomicScalar:
        coeffs = [Fraction(0)] * (p - 1)
        coeffs[0] = Fraction(value)
        return cls(p, tuple(coeffs))

    @classmethod
    def zero(cls, p: int) -> CyclotomicScalar:
        return cls.from_rational(0, p)

    @classmethod
    def one(cls, p: int) -> CyclotomicScalar:
        return cls.from_rational(1, p)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _check_same(self, other: CyclotomicScalar) -> None:
        if self.p != other.p:
            raise ValueError(f"mixed cyclotomic orders: {self.p} vs {other.p}")

    def __add__(self, other: CyclotomicScalar) -> CyclotomicScalar:
        self._check_same(other)
        return CyclotomicScalar(
            self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: CyclotomicScalar) -> CyclotomicScalar:
        self._check_same(other)
        return CyclotomicScalar(
            self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> CyclotomicScalar:
        return CyclotomicScalar(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other: CyclotomicScalar) -> CyclotomicScalar:
        self._check_same(other)
        p = self.p
        deg = p - 1
        # Convolve, then fold zeta^p = 1 and zeta^(p-1) = -(1 + ... + zeta^(p-2)).
        conv = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    conv[i + j] += a * b
        for m in range(p, 2 * deg - 1):
            conv[m - p] += conv[m]
        reduced = conv[:deg]
        if 2 * deg - 1 > deg:  # p > 2: a zeta^(p-1) term may remain
            top = conv[deg] if deg < len(conv) else Fraction(0)
            if top:
                reduced = [c - top for c in reduced]
        return CyclotomicScalar(p, tuple(reduced))

    def scale(self, value) -> CyclotomicScalar:
        f = Fraction(value)
        return CyclotomicScalar(self.p, tuple(a * f for a in self.coeffs))

    def __repr__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return " + ".join(parts) if parts else "0"


def zeta_power(k: int, p: int) -> CyclotomicScalar:
    """The exact value of zeta^(k mod p) for a primitive p-th root of unity."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    k %= p
    coeffs = [Fraction(0)] * (p - 1)
    if k < p - 1:
        coeffs[k] = Fraction(1)
    else:
        # zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
        coeffs = [Fraction(-1)] * (p - 1)
    return CyclotomicScalar(p, tuple(coeffs))


def as_zeta_power(value: CyclotomicScalar) -> int | None:
    """Return k with value == zeta^k, or None if value is not a root of unity power."""
    for k in range(value.p):
        if value == zeta_power(k, value.p):
            return k
    return None


def random_nonzero_scalar(rng, p: int, span: Iterable[int] = (-2, -1, 1, 2)) -> CyclotomicScalar:
    """Small random nonzero element of Q(zeta_p), for randomized property checks."""
    choices = list(span) + [0]
    while True:
        coeffs = tuple(Fraction(rng.choice(choices)) for _ in range(p - 1))
        if any(coeffs):
            return CyclotomicScalar(p, coeffs)
