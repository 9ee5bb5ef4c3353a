"""Matrices over Z/p^e, the groups SL_n/GL_n, reduction maps, and enumeration.

Group enumeration is a breadth-first closure from generators, deduplicated on
the flat entry tuple; element order inside a GroupTable is lexicographic on
that tuple, fixed once at construction, so witnesses and reports are
reproducible.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from .errors import (
    BadLevel,
    DimensionMismatch,
    GroupTooLarge,
    ModulusMismatch,
    NotInvertible,
    OrderExceedsBound,
)
from .modring import ModulusContext, modulus, unit_inverse

# Enumerations above the hard cap are always refused; the practical cap is
# the configurable default.
DEFAULT_ENUMERATION_CAP = 10_000_000
HARD_ENUMERATION_CAP = 100_000_000

FlatEntries = tuple  # row-major entry tuple, the canonical sort key


class SquareMatrix:
    """An n x n matrix of canonical residues under a shared ModulusContext.

    Instances are immutable; the constructor trusts its inputs to be
    canonical (use ``from_rows`` for arbitrary integer input).
    """

    __slots__ = ("ctx", "rows", "_key", "_hash")

    def __init__(self, ctx: ModulusContext, rows: tuple[tuple[int, ...], ...]):
        self.ctx = ctx
        self.rows = rows
        key = tuple(x for row in rows for x in row)
        self._key = key
        self._hash = hash((ctx.q, key))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ctx: ModulusContext) -> SquareMatrix:
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise DimensionMismatch("rows must form a square array of dimension >= 1")
        q = ctx.q
        return cls(ctx, tuple(tuple(x % q for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int, ctx: ModulusContext) -> SquareMatrix:
        return cls(ctx, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def scalar(cls, c: int, n: int, ctx: ModulusContext) -> SquareMatrix:
        c %= ctx.q
        return cls(ctx, tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def elementary(cls, n: int, i: int, j: int, ctx: ModulusContext, value: int = 1) -> SquareMatrix:
        """Identity plus value in position (i, j); a transvection when i != j."""
        rows = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        rows[i][j] = (rows[i][j] + value) % ctx.q
        return cls(ctx, tuple(tuple(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.rows)

    def key(self) -> FlatEntries:
        return self._key

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SquareMatrix)
            and self.ctx.q == other.ctx.q
            and self._key == other._key
        )

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"[{body}] mod {self.ctx.q}"

    def _check_compatible(self, other: SquareMatrix) -> None:
        if self.n != other.n:
            raise DimensionMismatch(f"dimension {self.n} vs {other.n}")
        if self.ctx.q != other.ctx.q:
            raise ModulusMismatch(f"modulus {self.ctx.q} vs {other.ctx.q}")

    def __mul__(self, other: SquareMatrix) -> SquareMatrix:
        self._check_compatible(other)
        q = self.ctx.q
        a, b = self.rows, other.rows
        n = self.n
        if n == 2:
            (a00, a01), (a10, a11) = a
            (b00, b01), (b10, b11) = b
            return SquareMatrix(
                self.ctx,
                (
                    ((a00 * b00 + a01 * b10) % q, (a00 * b01 + a01 * b11) % q),
                    ((a10 * b00 + a11 * b10) % q, (a10 * b01 + a11 * b11) % q),
                ),
            )
        cols = tuple(zip(*b))
        return SquareMatrix(
            self.ctx,
            tuple(
                tuple(sum(x * y for x, y in zip(row, col)) % q for col in cols)
                for row in a
            ),
        )

    def __pow__(self, k: int) -> SquareMatrix:
        if k < 0:
            return self.inverse() ** (-k)
        result = SquareMatrix.identity(self.n, self.ctx)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n)) % self.ctx.q

    def det(self) -> int:
        """Exact determinant mod p^e (cofactor expansion up to 4x4, Bareiss beyond)."""
        q = self.ctx.q
        n = self.n
        r = self.rows
        if n == 1:
            return r[0][0] % q
        if n == 2:
            return (r[0][0] * r[1][1] - r[0][1] * r[1][0]) % q
        if n == 3:
            return (
                r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
            ) % q
        if n == 4:
            total = 0
            for perm in itertools.permutations(range(4)):
                sign = _perm_sign(perm)
                term = r[0][perm[0]] * r[1][perm[1]] * r[2][perm[2]] * r[3][perm[3]]
                total += sign * term
            return total % q
        return _bareiss_det([list(row) for row in r]) % q

    def inverse(self) -> SquareMatrix:
        """Two-sided inverse via Gauss-Jordan with unit pivots.

        Over the local ring Z/p^e an invertible matrix always has a unit
        pivot available in every column, so no rational arithmetic is needed.
        """
        if self.det() % self.ctx.p == 0:
            raise NotInvertible(f"determinant {self.det()} is divisible by {self.ctx.p}")
        n, q, p = self.n, self.ctx.q, self.ctx.p
        aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(self.rows)]
        for col in range(n):
            piv = next(i for i in range(col, n) if aug[i][col] % p != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = unit_inverse(aug[col][col], self.ctx)
            aug[col] = [(x * inv) % q for x in aug[col]]
            for i in range(n):
                if i != col and aug[i][col]:
                    f = aug[i][col]
                    aug[i] = [(x - f * y) % q for x, y in zip(aug[i], aug[col])]
        result = SquareMatrix(self.ctx, tuple(tuple(row[n:]) for row in aug))
        ident = SquareMatrix.identity(n, self.ctx)
        if result * self != ident or self * result != ident:  # pragma: no cover
            raise NotInvertible("inverse verification failed")
        return result

    def reduce_to(self, j: int) -> SquareMatrix:
        """Entrywise reduction mod p^j, carried by a context with exponent j."""
        if not 1 <= j <= self.ctx.e:
            raise BadLevel(f"level {j} outside [1, {self.ctx.e}]")
        ctx_j = modulus(self.ctx.p, j)
        qj = ctx_j.q
        return SquareMatrix(ctx_j, tuple(tuple(x % qj for x in row) for row in self.rows))

    def in_kernel(self, j: int) -> bool:
        """True iff the matrix is congruent to the identity mod p^j."""
        if not 1 <= j < self.ctx.e:
            raise BadLevel(f"level {j} outside [1, {self.ctx.e})")
        qj = self.ctx.p**j
        for i, row in enumerate(self.rows):
            for k, x in enumerate(row):
                if (x - (1 if i == k else 0)) % qj:
                    return False
        return True

    def order(self, bound: int = 1_000_000) -> int:
        """Least k >= 1 with self^k = I; errors past the bound."""
        ident = SquareMatrix.identity(self.n, self.ctx)
        acc = self
        for k in range(1, bound + 1):
            if acc == ident:
                return k
            acc = acc * self
        raise OrderExceedsBound(f"order exceeds {bound}")


def _perm_sign(perm: Sequence[int]) -> int:
    inversions = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


def _bareiss_det(mat: list[list[int]]) -> int:
    """Fraction-free integer determinant with row swaps."""
    n = len(mat)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if mat[i][k] != 0), None)
            if swap is None:
                return 0
            mat[k], mat[swap] = mat[swap], mat[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
        prev = mat[k][k]
    return sign * mat[n - 1][n - 1]


def group_order_oracle(descriptor: str, n: int, p: int, e: int) -> int:
    """Closed-form order of SL_n or GL_n over Z/p^e.

    |GL_n(F_p)| = prod_{i<n} (p^n - p^i); |SL_n(F_p)| = |GL_n(F_p)|/(p-1);
    lifting to exponent e multiplies by p^(n^2 (e-1)) resp. p^((n^2-1)(e-1)).
    """
    gl_fp = 1
    for i in range(n):
        gl_fp *= p**n - p**i
    if descriptor == "GL":
        return gl_fp * p ** (n * n * (e - 1))
    if descriptor == "SL":
        return (gl_fp // (p - 1)) * p ** ((n * n - 1) * (e - 1))
    raise ValueError(f"no order formula for descriptor {descriptor!r}")


def _unit_group_generators(ctx: ModulusContext) -> list[int]:
    """Generators of (Z/p^e)^x.

    Cyclic for odd p (a primitive root found by search).  For p = 2 the unit
    group is trivial (e=1), cyclic of order 2 (e=2), and otherwise needs the
    two generators -1 and 5.
    """
    p, e, q = ctx.p, ctx.e, ctx.q
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [3]
        return [q - 1, 5]
    target = (p - 1) * p ** (e - 1)
    for u in range(2, q):
        if u % p == 0:
            continue
        k, acc = 1, u
        while acc != 1:
            acc = (acc * u) % q
            k += 1
        if k == target:
            return [u]
    raise RuntimeError(f"no primitive root found mod {q}")  # pragma: no cover


def _flat_identity(n: int) -> FlatEntries:
    return tuple(1 if i == j else 0 for i in range(n) for j in range(n))


def _flat_mul(a: FlatEntries, b: FlatEntries, n: int, q: int) -> FlatEntries:
    if n == 2:
        a0, a1, a2, a3 = a
        b0, b1, b2, b3 = b
        return (
            (a0 * b0 + a1 * b2) % q,
            (a0 * b1 + a1 * b3) % q,
            (a2 * b0 + a3 * b2) % q,
            (a2 * b1 + a3 * b3) % q,
        )
    out = []
    for i in range(n):
        arow = a[i * n : (i + 1) * n]
        for j in range(n):
            out.append(sum(arow[k] * b[k * n + j] for k in range(n)) % q)
    return tuple(out)


def _closure_from_flat(
    n: int, q: int, generators: Sequence[FlatEntries], cap: int
) -> list[FlatEntries]:
    """Breadth-first closure of the generators under right multiplication."""
    ident = _flat_identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for g in generators:
                prod = _flat_mul(a, g, n, q)
                if prod not in seen:
                    if len(seen) >= cap:
                        raise GroupTooLarge(
                            f"closure exceeds cap of {cap} elements"
                        )
                    seen.add(prod)
                    new.append(prod)
        frontier = new
    return sorted(seen)


class GroupTable:
    """A fully enumerated finite matrix group in canonical order.

    ``descriptor`` is "SL", "GL" or "explicit-subgroup"; elements are sorted
    lexicographically by flat entry tuple and never change order afterwards.
    """

    def __init__(
        self,
        descriptor: str,
        n: int,
        ctx: ModulusContext,
        elements: Sequence[SquareMatrix],
    ):
        self.descriptor = descriptor
        self.n = n
        self.ctx = ctx
        self.elements = tuple(sorted(elements, key=SquareMatrix.key))
        self._index = {m.key(): i for i, m in enumerate(self.elements)}
        self.identity = SquareMatrix.identity(n, ctx)
        if self.identity.key() not in self._index:
            raise ValueError("group table must contain the identity")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[SquareMatrix]:
        return iter(self.elements)

    def __contains__(self, m: SquareMatrix) -> bool:
        return m.key() in self._index

    def index(self, m: SquareMatrix) -> int:
        return self._index[m.key()]

    def kernel_table(self, j: int) -> GroupTable:
        """The congruence kernel H_j = ker(pi_j) as an explicit subgroup table."""
        if not 1 <= j < self.ctx.e:
            raise BadLevel(f"level {j} outside [1, {self.ctx.e})")
        mats = [m for m in self.elements if m.in_kernel(j)]
        return GroupTable("explicit-subgroup", self.n, self.ctx, mats)

    def reduced_table(self, j: int) -> GroupTable:
        """The image of the reduction map pi_j as a table over Z/p^j."""
        if not 1 <= j <= self.ctx.e:
            raise BadLevel(f"level {j} outside [1, {self.ctx.e}]")
        image = {m.reduce_to(j) for m in self.elements}
        return GroupTable("explicit-subgroup", self.n, modulus(self.ctx.p, j), image)

    def conjugated_by(self, g: SquareMatrix) -> GroupTable:
        ginv = g.inverse()
        return GroupTable(
            "explicit-subgroup", self.n, self.ctx, [g * m * ginv for m in self.elements]
        )

    def spot_check_closure(self, rng, samples: int = 50) -> None:
        """Sampled closure/inverse checks; raises ValueError on failure."""
        elems = self.elements
        for _ in range(samples):
            a = elems[rng.randrange(len(elems))]
            b = elems[rng.randrange(len(elems))]
            if a * b not in self:
                raise ValueError(f"product {a} * {b} escapes the table")
            if a.inverse() not in self:
                raise ValueError(f"inverse of {a} escapes the table")


def sl_generators(n: int, ctx: ModulusContext) -> list[SquareMatrix]:
    """Transvections I + E_ij, i != j; they generate SL_n over Z/p^e."""
    return [
        SquareMatrix.elementary(n, i, j, ctx)
        for i in range(n)
        for j in range(n)
        if i != j
    ]


def gl_generators(n: int, ctx: ModulusContext) -> list[SquareMatrix]:
    """Transvections plus diag(u, 1, ..., 1) for unit-group generators u."""
    gens = sl_generators(n, ctx)
    for u in _unit_group_generators(ctx):
        rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        rows[0][0] = u % ctx.q
        gens.append(SquareMatrix(ctx, tuple(tuple(r) for r in rows)))
    return gens


def group_from_generators(
    generators: Sequence[SquareMatrix],
    *,
    descriptor: str = "explicit-subgroup",
    max_elements: int = DEFAULT_ENUMERATION_CAP,
) -> GroupTable:
    """Closure of arbitrary invertible generators into a GroupTable."""
    if not generators:
        raise ValueError("need at least one generator")
    n, ctx = generators[0].n, generators[0].ctx
    flats = [g.key() for g in generators]
    closure = _closure_from_flat(n, ctx.q, flats, min(max_elements, HARD_ENUMERATION_CAP))
    mats = [
        SquareMatrix(ctx, tuple(flat[i * n : (i + 1) * n] for i in range(n)))
        for flat in closure
    ]
    return GroupTable(descriptor, n, ctx, mats)


def group_from_elements(
    elements: Iterable[SquareMatrix], *, descriptor: str = "explicit-subgroup"
) -> GroupTable:
    mats = list(dict.fromkeys(elements))
    if not mats:
        raise ValueError("need at least one element")
    return GroupTable(descriptor, mats[0].n, mats[0].ctx, mats)


def enumerate_group(
    descriptor: str,
    n: int,
    ctx: ModulusContext,
    *,
    max_elements: int = DEFAULT_ENUMERATION_CAP,
) -> GroupTable:
    """Complete element list of SL_n or GL_n over Z/p^e, canonically ordered.

    Refuses up front when the closed-form order exceeds the cap; the result
    is checked against that same order formula after closure.
    """
    if descriptor not in ("SL", "GL"):
        raise ValueError(f"enumerate_group handles SL/GL, got {descriptor!r}")
    predicted = group_order_oracle(descriptor, n, ctx.p, ctx.e)
    cap = min(max_elements, HARD_ENUMERATION_CAP)
    if predicted > cap:
        raise GroupTooLarge(
            f"{descriptor}_{n}(Z/{ctx.q}) has {predicted} elements, above the cap {cap}"
        )
    gens = sl_generators(n, ctx) if descriptor == "SL" else gl_generators(n, ctx)
    table = group_from_generators(gens, descriptor=descriptor, max_elements=cap)
    if len(table) != predicted:  # pragma: no cover
        raise RuntimeError(
            f"closure found {len(table)} elements, order formula says {predicted}"
        )
    return table


def unitriangular_group(
    n: int, ctx: ModulusContext, *, max_elements: int = DEFAULT_ENUMERATION_CAP
) -> GroupTable:
    """Upper unitriangular matrices: a Sylow p-subgroup of GL_n(F_p) when e=1."""
    gens = [
        SquareMatrix.elementary(n, i, j, ctx)
        for i in range(n)
        for j in range(n)
        if i < j
    ]
    return group_from_generators(gens, max_elements=max_elements)
