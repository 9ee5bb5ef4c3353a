"""The standard symplectic space of dimension 2r over F_p and its subspaces.

Subspaces are keyed by their reduced row-echelon basis, the unique canonical
representative, and Lagrangians are produced by recursive isotropic extension
with coset-minimal candidates plus canonical-form deduplication.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import DimensionMismatch, SpaceTooLarge
from .modring import is_prime

# Default feasibility cap on p^(r^2); admits (p<=3, r<=3) and (p<=7, r<=2).
DEFAULT_SPACE_CAP = 20_000

Vector = tuple


def rref(rows, p: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row-echelon form over F_p; zero rows are dropped."""
    mat = [list(r) for r in rows]
    if not mat:
        return ()
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] % p), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], -1, p)
        mat[rank] = [(x * inv) % p for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] % p:
                f = mat[i][col]
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return tuple(tuple(x % p for x in row) for row in mat[:rank])


@dataclass(frozen=True)
class SymplecticSpace:
    """F_p^(2r) with the standard alternating form pairing index i with i+r."""

    p: int
    r: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")

    @property
    def dimension(self) -> int:
        return 2 * self.r

    def gram(self) -> tuple[tuple[int, ...], ...]:
        d, r, p = self.dimension, self.r, self.p
        rows = [[0] * d for _ in range(d)]
        for i in range(r):
            rows[i][i + r] = 1
            rows[i + r][i] = p - 1
        return tuple(tuple(row) for row in rows)

    def pairing(self, a: Vector, b: Vector) -> int:
        """gamma(a, b) = sum_i (a_i b_(i+r) - a_(i+r) b_i) mod p."""
        if len(a) != self.dimension or len(b) != self.dimension:
            raise DimensionMismatch(
                f"vectors must have length {self.dimension}, got {len(a)}, {len(b)}"
            )
        r = self.r
        return sum(a[i] * b[i + r] - a[i + r] * b[i] for i in range(r)) % self.p

    def vectors(self):
        return itertools.product(range(self.p), repeat=self.dimension)

    def basis_vector(self, i: int) -> Vector:
        return tuple(1 if j == i else 0 for j in range(self.dimension))


@dataclass(frozen=True)
class SymplecticSubspace:
    """A subspace stored by its canonical reduced-echelon basis."""

    space: SymplecticSpace
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if rref(self.basis, self.space.p) != self.basis:
            raise ValueError("basis is not in reduced row-echelon form")

    @classmethod
    def from_vectors(cls, space: SymplecticSpace, vectors) -> SymplecticSubspace:
        return cls(space, rref(list(vectors), space.p))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def span_vectors(self) -> list[Vector]:
        p, d = self.space.p, self.space.dimension
        out = []
        for combo in itertools.product(range(p), repeat=self.dim):
            v = [0] * d
            for c, row in zip(combo, self.basis):
                if c:
                    for k in range(d):
                        v[k] = (v[k] + c * row[k]) % p
            out.append(tuple(v))
        return out

    def contains(self, v: Vector) -> bool:
        return rref(list(self.basis) + [list(v)], self.space.p) == self.basis

    def extend(self, v: Vector) -> SymplecticSubspace:
        return SymplecticSubspace(
            self.space, rref(list(self.basis) + [list(v)], self.space.p)
        )

    def perp_basis(self) -> tuple[tuple[int, ...], ...]:
        """Basis of the set of vectors pairing to zero with the whole subspace."""
        space = self.space
        constraints = []
        for row in self.basis:
            # gamma(v, row) = 0 is linear in v.
            coeffs = [
                (row[(i + space.r) % space.dimension] * (1 if i < space.r else -1))
                % space.p
                for i in range(space.dimension)
            ]
            constraints.append(coeffs)
        return nullspace_basis(constraints, space.p, space.dimension)


def nullspace_basis(rows, p: int, width: int) -> tuple[tuple[int, ...], ...]:
    """Canonical basis of {v : rows . v = 0} over F_p."""
    reduced = rref(rows, p) if rows else ()
    pivots = []
    for row in reduced:
        pivots.append(next(i for i, x in enumerate(row) if x))
    free = [i for i in range(width) if i not in pivots]
    basis = []
    for f in free:
        v = [0] * width
        v[f] = 1
        for row, piv in zip(reduced, pivots):
            v[piv] = (-row[f]) % p
        basis.append(tuple(v))
    return rref(basis, p)


def is_totally_isotropic(sub: SymplecticSubspace) -> bool:
    """True iff all basis pairs pair to zero (enough, by bilinearity)."""
    for a, b in itertools.combinations(sub.basis, 2):
        if sub.space.pairing(a, b):
            return False
    return True


def is_maximal_isotropic(sub: SymplecticSubspace) -> bool:
    """No vector outside the subspace pairs to zero with all of it."""
    for v in _span_of(sub.perp_basis(), sub.space):
        if not sub.contains(v):
            return False
    return True


def _span_of(basis, space: SymplecticSpace):
    p, d = space.p, space.dimension
    for combo in itertools.product(range(p), repeat=len(basis)):
        v = [0] * d
        for c, row in zip(combo, basis):
            if c:
                for k in range(d):
                    v[k] = (v[k] + c * row[k]) % p
        yield tuple(v)


def _check_cap(space: SymplecticSpace, cap: int) -> None:
    if space.p ** (space.r**2) > cap:
        raise SpaceTooLarge(
            f"p^(r^2) = {space.p ** (space.r ** 2)} exceeds the enumeration cap {cap}"
        )


@lru_cache(maxsize=32)
def _lagrangians_cached(p: int, r: int, cap: int) -> tuple[SymplecticSubspace, ...]:
    space = SymplecticSpace(p, r)
    _check_cap(space, cap)
    level = [SymplecticSubspace(space, ())]
    for _ in range(r):
        seen: dict = {}
        for sub in level:
            span = set(sub.span_vectors())
            for v in sorted(_span_of(sub.perp_basis(), space)):
                if v in span:
                    continue
                # Coset-minimal representative: v least in v + span.
                if any(
                    tuple((x + w) % p for x, w in zip(v, s)) < v for s in span if any(s)
                ):
                    continue
                ext = sub.extend(v)
                seen.setdefault(ext.basis, ext)
        level = [seen[k] for k in sorted(seen)]
    for sub in level:
        if not is_totally_isotropic(sub):  # pragma: no cover
            raise RuntimeError("enumeration produced a non-isotropic subspace")
        if not is_maximal_isotropic(sub):  # pragma: no cover
            raise RuntimeError("a dimension-r isotropic subspace failed maximality")
    return tuple(level)


def enumerate_lagrangians(
    space: SymplecticSpace, *, cap: int = DEFAULT_SPACE_CAP
) -> list[SymplecticSubspace]:
    """All Lagrangian subspaces in canonical echelon form, recursively extended.

    The result is every totally isotropic subspace of dimension r; each is
    verified maximal before being returned, so maximality is checked rather
    than assumed.
    """
    return list(_lagrangians_cached(space.p, space.r, cap))


def _isotropic_of_dim(space: SymplecticSpace, dim: int) -> set:
    """Canonical keys of all totally isotropic subspaces of the given dimension,
    by plain recursive extension without the coset-minimality shortcut."""
    level = {(): SymplecticSubspace(space, ())}
    for _ in range(dim):
        nxt: dict = {}
        for sub in level.values():
            span = set(sub.span_vectors())
            for v in _span_of(sub.perp_basis(), space):
                if v in span:
                    continue
                ext = sub.extend(v)
                nxt.setdefault(ext.basis, ext)
        level = nxt
    return set(level)


def lagrangian_order_check(space: SymplecticSpace, *, cap: int = DEFAULT_SPACE_CAP) -> bool:
    """Every Lagrangian has dimension exactly r, and every totally isotropic
    subspace of dimension r appears in the Lagrangian list.

    The second condition is re-derived by an unfiltered extension sweep, so a
    pruning bug in the main enumeration cannot vacuously pass here.
    """
    lagrangians = enumerate_lagrangians(space, cap=cap)
    keys = {sub.basis for sub in lagrangians}
    if any(sub.dim != space.r for sub in lagrangians):
        return False
    return _isotropic_of_dim(space, space.r) == keys


def lagrangian_count_oracle(p: int, r: int) -> int:
    """Closed-form Lagrangian count prod_{i=1..r} (p^i + 1), used as a cross-check."""
    count = 1
    for i in range(1, r + 1):
        count *= p**i + 1
    return count
