"""The twisted monomial algebra behind a tensor product of degree-p symbol
algebras: 2r generators z_1..z_(2r), adjacent pairs q-commuting through a
primitive p-th root of unity, everything else commuting, and z_j^p central.

Elements are finite maps from exponent vectors in Z^(2r) to exact cyclotomic
coefficients.  Multiplication twists by the 2-cocycle produced by normal
ordering, the valuation reads off the minimal exponent in a last-coordinate-
dominant lexicographic order, and the multiplicative commutator of monomials
recovers a standard symplectic form on exponents mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import (
    DimensionMismatch,
    NonScalarCommutator,
    PresentationMismatch,
    ZeroElement,
)
from .modring import CyclotomicScalar, as_zeta_power, is_prime, zeta_power
from .symplectic import SymplecticSpace

ExponentVector = tuple


@dataclass(frozen=True)
class AlgebraPresentation:
    """Structure constants for 2r generators over Q(zeta_p).

    Relations: z_(2i-1) z_(2i) = zeta z_(2i) z_(2i-1) within each adjacent
    pair (1-based), all other generator pairs commute, and z_j^p is central.
    """

    p: int
    r: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")

    @property
    def num_generators(self) -> int:
        return 2 * self.r

    @property
    def zeta(self) -> CyclotomicScalar:
        return zeta_power(1, self.p)

    def basis_exponent(self, j: int) -> ExponentVector:
        """Exponent vector of the generator z_(j+1) (0-based index j)."""
        return tuple(1 if k == j else 0 for k in range(self.num_generators))


def cocycle(pres: AlgebraPresentation, a: ExponentVector, b: ExponentVector) -> int:
    """The normal-ordering twist: z^a z^b = zeta^sigma(a,b) z^(a+b).

    With normal order z_1 first, moving the b-factors left past the a-tail
    swaps z_(2i) past z_(2i-1) exactly a_(2i) b_(2i-1) times, each costing
    zeta^(-1), so sigma(a, b) = -sum_i a_(2i) b_(2i-1) mod p (1-based).
    """
    if len(a) != pres.num_generators or len(b) != pres.num_generators:
        raise DimensionMismatch(
            f"exponent vectors must have length {pres.num_generators}"
        )
    total = 0
    for i in range(pres.r):
        total += a[2 * i + 1] * b[2 * i]
    return (-total) % pres.p


class AlgebraElement:
    """A finite sum of twisted monomials: map exponent vector -> coefficient.

    Zero coefficients are never stored; the empty map is 0.
    """

    __slots__ = ("presentation", "_terms")

    def __init__(
        self,
        presentation: AlgebraPresentation,
        terms: Mapping[ExponentVector, CyclotomicScalar] | None = None,
    ):
        self.presentation = presentation
        clean = {}
        if terms:
            for exp, coeff in terms.items():
                if len(exp) != presentation.num_generators:
                    raise DimensionMismatch(
                        f"exponent {exp} has wrong length for r={presentation.r}"
                    )
                if coeff:
                    clean[tuple(exp)] = coeff
        self._terms = clean

    @classmethod
    def zero(cls, pres: AlgebraPresentation) -> AlgebraElement:
        return cls(pres)

    @classmethod
    def one(cls, pres: AlgebraPresentation) -> AlgebraElement:
        return cls.monomial(pres, (0,) * pres.num_generators)

    @classmethod
    def monomial(
        cls, pres: AlgebraPresentation, exponent: ExponentVector, coeff=1
    ) -> AlgebraElement:
        if not isinstance(coeff, CyclotomicScalar):
            coeff = CyclotomicScalar.from_rational(Fraction(coeff), pres.p)
        return cls(pres, {tuple(exponent): coeff})

    @classmethod
    def generator(cls, pres: AlgebraPresentation, j: int) -> AlgebraElement:
        return cls.monomial(pres, pres.basis_exponent(j))

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.presentation == other.presentation
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.presentation, frozenset(self._terms.items())))

    def _check_same(self, other: AlgebraElement) -> None:
        if self.presentation != other.presentation:
            raise PresentationMismatch(
                f"{self.presentation} vs {other.presentation}"
            )

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._check_same(other)
        terms = dict(self._terms)
        for exp, coeff in other._terms.items():
            acc = terms.get(exp)
            terms[exp] = coeff if acc is None else acc + coeff
        return AlgebraElement(self.presentation, terms)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(
            self.presentation, {exp: -c for exp, c in self._terms.items()}
        )

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + (-other)

    def __mul__(self, other: AlgebraElement) -> AlgebraElement:
        self._check_same(other)
        pres = self.presentation
        out: dict = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                twist = zeta_power(cocycle(pres, ea, eb), pres.p)
                coeff = ca * cb * twist
                exp = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(exp)
                out[exp] = coeff if acc is None else acc + coeff
        return AlgebraElement(pres, out)

    def scale(self, value) -> AlgebraElement:
        if not isinstance(value, CyclotomicScalar):
            value = CyclotomicScalar.from_rational(Fraction(value), self.presentation.p)
        return AlgebraElement(
            self.presentation, {exp: c * value for exp, c in self._terms.items()}
        )

    def monomial_inverse(self) -> AlgebraElement:
        """Inverse of a single-term element: c^(-1) zeta^(-sigma(a,-a)) z^(-a).

        Only root-of-unity coefficients are inverted here; that covers every
        use in commutator computations.
        """
        if len(self._terms) != 1:
            raise ValueError("only monomials are invertible here")
        (exp, coeff), = self._terms.items()
        pres = self.presentation
        k = as_zeta_power(coeff)
        if k is None:
            raise ValueError("monomial coefficient is not a power of zeta")
        neg = tuple(-x for x in exp)
        twist = (-cocycle(pres, exp, neg) - k) % pres.p
        return AlgebraElement.monomial(pres, neg, zeta_power(twist, pres.p))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = [f"({coeff})*z^{exp}" for exp, coeff in sorted(self._terms.items())]
        return " + ".join(parts)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def leading_term(x: AlgebraElement) -> tuple[ExponentVector, CyclotomicScalar]:
    """Term with minimal exponent, last coordinate most significant."""
    if x.is_zero():
        raise ZeroElement("the zero element has no leading term")
    exp = min(x._terms, key=lambda e: tuple(reversed(e)))
    return exp, x._terms[exp]


def valuation(x: AlgebraElement) -> ExponentVector:
    """Exponent of the leading term."""
    return leading_term(x)[0]


def commutator_pairing(
    pres: AlgebraPresentation, a: ExponentVector, b: ExponentVector
) -> int:
    """k with z^a z^b z^(-a) z^(-b) = zeta^k, computed through real multiplication.

    The result is cross-checked against sigma(a,b) - sigma(b,a) mod p; any
    disagreement or non-scalar product raises NonScalarCommutator.
    """
    x = AlgebraElement.monomial(pres, a)
    y = AlgebraElement.monomial(pres, b)
    product = x * y * x.monomial_inverse() * y.monomial_inverse()
    terms = dict(product.items())
    zero_exp = (0,) * pres.num_generators
    if set(terms) != {zero_exp}:
        raise NonScalarCommutator(f"commutator of {a}, {b} is not scalar: {product}")
    k = as_zeta_power(terms[zero_exp])
    if k is None:
        raise NonScalarCommutator(
            f"commutator coefficient {terms[zero_exp]} is not a power of zeta"
        )
    expected = (cocycle(pres, a, b) - cocycle(pres, b, a)) % pres.p
    if k != expected:
        raise NonScalarCommutator(
            f"commutator gave zeta^{k}, cocycle antisymmetrization gives {expected}"
        )
    return k


def split_permutation(r: int) -> tuple[int, ...]:
    """0-based index map from adjacent-pair convention to the split convention:
    generator 2i goes to slot i, generator 2i+1 to slot i+r."""
    perm = [0] * (2 * r)
    for i in range(r):
        perm[2 * i] = i
        perm[2 * i + 1] = i + r
    return tuple(perm)


def pairing_matches_standard_form(
    pres: AlgebraPresentation, permutation: tuple[int, ...] | None = None
) -> bool:
    """Commutator pairing equals the standard symplectic form after reindexing.

    ``permutation`` maps adjacent-pair generator indices to split-convention
    slots (defaults to split_permutation); the comparison runs over all
    standard basis pairs.
    """
    if permutation is None:
        permutation = split_permutation(pres.r)
    if sorted(permutation) != list(range(pres.num_generators)):
        raise ValueError(f"not a permutation of 0..{pres.num_generators - 1}")
    space = SymplecticSpace(pres.p, pres.r)

    def relocate(j: int) -> tuple[int, ...]:
        return tuple(1 if k == permutation[j] else 0 for k in range(2 * pres.r))

    for j in range(pres.num_generators):
        for k in range(pres.num_generators):
            lhs = commutator_pairing(
                pres, pres.basis_exponent(j), pres.basis_exponent(k)
            )
            rhs = space.pairing(relocate(j), relocate(k))
            if lhs != rhs:
                return False
    return True


def value_group_index(pres: AlgebraPresentation) -> int:
    """Index of the center's exponent lattice pZ^(2r) inside Z^(2r).

    Computed as |det(p I)| and checked against the algebra dimension p^(2r).
    """
    d = pres.num_generators
    mat = [[pres.p if i == j else 0 for j in range(d)] for i in range(d)]
    det = _int_det(mat)
    index = abs(det)
    if index != pres.p**d:  # pragma: no cover
        raise RuntimeError(f"lattice index {index} != algebra dimension {pres.p ** d}")
    return index


def _int_det(mat: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free elimination with swaps)."""
    n = len(mat)
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]
