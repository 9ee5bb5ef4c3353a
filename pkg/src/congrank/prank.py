"""p-rank computation with certifying witnesses, plus the finite group checks
built on top of it: the order-p kernel membership sweep, the reduction-kernel
basis of commuting unipotents, the involution census in SL_2(Z/2^e), and the
rank subadditivity comparison across a reduction map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import GroupTooLarge, SearchBudgetExceeded, Unsupported
from .matgroup import (
    DEFAULT_ENUMERATION_CAP,
    GroupTable,
    SquareMatrix,
    enumerate_group,
    group_from_elements,
    unitriangular_group,
)
from .modring import ModulusContext, modulus

DEFAULT_SEARCH_BUDGET = 10_000_000


@dataclass(frozen=True)
class RankWitness:
    """A basis of pairwise-commuting order-p matrices certifying a rank lower bound.

    ``check`` revalidates all three invariants from scratch, independently of
    the search that produced the witness.
    """

    basis: tuple[SquareMatrix, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def check(self) -> None:
        if not self.basis:
            return
        p = self.basis[0].ctx.p
        ident = SquareMatrix.identity(self.basis[0].n, self.basis[0].ctx)
        for m in self.basis:
            if m == ident or m**p != ident:
                raise ValueError(f"basis element {m} does not have order exactly {p}")
        for a, b in itertools.combinations(self.basis, 2):
            if a * b != b * a:
                raise ValueError(f"basis elements {a} and {b} do not commute")
        span = self.span_elements()
        if len(span) != p**self.rank:
            raise ValueError(
                f"span has {len(span)} elements, expected {p**self.rank}"
            )

    def span_elements(self) -> set[SquareMatrix]:
        """All p^rank products of basis powers."""
        if not self.basis:
            return set()
        p = self.basis[0].ctx.p
        ident = SquareMatrix.identity(self.basis[0].n, self.basis[0].ctx)
        current = {ident}
        for m in self.basis:
            powers = [ident]
            for _ in range(p - 1):
                powers.append(powers[-1] * m)
            current = {s * mk for s in current for mk in powers}
        return current


def order_p_elements(table: GroupTable) -> list[SquareMatrix]:
    """All elements of order exactly p, in the table's canonical order."""
    p = table.ctx.p
    ident = table.identity
    out = []
    for m in table:
        if m == ident:
            continue
        if m**p == ident:
            out.append(m)
    return out


def p_rank(
    table: GroupTable, *, budget: int = DEFAULT_SEARCH_BUDGET
) -> tuple[int, RankWitness]:
    """Exact p-rank of an enumerated group, with a certifying witness.

    Depth-first search over the order-p elements in canonical order.  A
    partial basis is extended only by elements that commute with everything
    chosen so far, lie outside the current span, come strictly after the last
    chosen generator, and are the canonical minimum of the new subgroup they
    create (new-subgroup-minimality implies minimality in their coset modulo
    the current span, and dedupes every subgroup chain exactly once).
    Branches that cannot beat the best rank found are pruned.
    """
    elems = order_p_elements(table)
    p = table.ctx.p
    ident = table.identity
    keys = [m.key() for m in elems]

    comm_cache: dict[tuple[int, int], bool] = {}

    def commutes(i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        hit = comm_cache.get((i, j))
        if hit is None:
            a, b = elems[i], elems[j]
            hit = a * b == b * a
            comm_cache[(i, j)] = hit
        return hit

    best_rank = 0
    best_basis: tuple[SquareMatrix, ...] = ()
    steps = 0

    def extend(basis: list[int], span: dict, candidates: list[int]) -> None:
        nonlocal best_rank, best_basis, steps
        depth = len(basis)
        if depth > best_rank:
            best_rank = depth
            best_basis = tuple(elems[i] for i in basis)
        for pos, i in enumerate(candidates):
            if depth + len(candidates) - pos <= best_rank:
                break
            steps += 1
            if steps > budget:
                raise SearchBudgetExceeded(
                    f"rank search exceeded {budget} extension steps"
                )
            key_i = keys[i]
            if key_i in span:
                continue
            m = elems[i]
            # Build the new coset block span * m^t (t = 1..p-1); reject unless
            # m is the canonical minimum of the block.
            block: list[tuple[tuple, SquareMatrix]] = []
            minimal = True
            power = m
            for _ in range(1, p):
                for s in span.values():
                    x = s * power
                    xk = x.key()
                    if xk < key_i:
                        minimal = False
                        break
                    block.append((xk, x))
                if not minimal:
                    break
                power = power * m
            if not minimal:
                continue
            new_span = dict(span)
            new_span.update(block)
            new_candidates = [j for j in candidates[pos + 1 :] if commutes(i, j)]
            extend(basis + [i], new_span, new_candidates)

    extend([], {ident.key(): ident}, list(range(len(elems))))
    witness = RankWitness(basis=best_basis)
    witness.check()
    return best_rank, witness


def sylow_restricted_rank(descriptor: str, n: int, p: int, e: int = 1) -> int:
    """p-rank computed inside the unitriangular Sylow p-subgroup (e = 1 only).

    Every elementary abelian p-subgroup lies in some Sylow p-subgroup and all
    of those are conjugate to the unitriangular group, so the restriction is
    lossless; the unitriangular group has determinant 1 and therefore lies in
    both SL_n and GL_n.
    """
    if e != 1:
        raise Unsupported(f"Sylow-restricted search requires e = 1, got e = {e}")
    if n > 4:
        raise Unsupported(f"Sylow-restricted search supports n <= 4, got n = {n}")
    if descriptor not in ("SL", "GL"):
        raise ValueError(f"descriptor must be SL or GL, got {descriptor!r}")
    sylow = unitriangular_group(n, modulus(p, 1))
    rank, _ = p_rank(sylow)
    return rank


@dataclass(frozen=True)
class KernelLemmaReport:
    """Result of sweeping all order-p elements of a congruence kernel.

    ``violations`` lists the examined elements that fall outside the target
    kernel H_(e-1), in canonical order; empty means the statement holds.
    """

    descriptor: str
    n: int
    p: int
    e: int
    variant: str
    source_level: int
    target_level: int
    checked_count: int
    violations: tuple[SquareMatrix, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def congruence_kernel_elements(
    descriptor: str,
    n: int,
    ctx: ModulusContext,
    j: int,
    *,
    max_elements: int = DEFAULT_ENUMERATION_CAP,
) -> list[SquareMatrix]:
    """The kernel H_j = {I + p^j A}, constructed directly (det 1 filter for SL).

    Every such matrix is invertible over the local ring, so the set equals
    ker(pi_j) without enumerating the ambient group.
    """
    p, e, q = ctx.p, ctx.e, ctx.q
    if not 1 <= j < e:
        raise ValueError(f"level {j} outside [1, {e})")
    lifts = p ** (e - j)
    count = lifts ** (n * n)
    if count > max_elements:
        raise GroupTooLarge(
            f"kernel H_{j} of {descriptor}_{n}(Z/{q}) needs {count} candidates, above the cap"
        )
    step = p**j
    out = []
    for combo in itertools.product(range(lifts), repeat=n * n):
        rows = tuple(
            tuple(
                ((1 if i == k else 0) + step * combo[i * n + k]) % q
                for k in range(n)
            )
            for i in range(n)
        )
        m = SquareMatrix(ctx, rows)
        if descriptor == "SL" and m.det() != 1:
            continue
        out.append(m)
    out.sort(key=SquareMatrix.key)
    return out


def verify_kernel_lemma(
    descriptor: str,
    n: int,
    p: int,
    e: int,
    *,
    variant: str | None = None,
    probe_h1: bool = False,
    max_elements: int = DEFAULT_ENUMERATION_CAP,
) -> KernelLemmaReport:
    """Check that every order-p element of the source kernel lies in H_(e-1).

    For odd p the source is H_1; for p = 2 it is H_2 (order-2 elements of H_1
    need not reduce to the identity mod 4, which is exactly what the
    deliberately false ``probe_h1`` variant demonstrates: with p = 2 it scans
    H_1 instead and is expected to report violations such as 3I mod 8).
    """
    if variant is None:
        variant = "odd-p" if p % 2 else "p=2"
    if variant == "odd-p":
        if p == 2:
            raise ValueError("odd-p variant requires an odd prime")
        if e < 2:
            raise ValueError("odd-p variant requires e >= 2")
        source = 1
    elif variant == "p=2":
        if p != 2:
            raise ValueError("p=2 variant requires p = 2")
        if e < 3:
            raise ValueError("p=2 variant requires e >= 3")
        source = 1 if probe_h1 else 2
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if probe_h1 and variant != "p=2":
        raise ValueError("the H_1 probe applies to the p=2 variant only")

    ctx = modulus(p, e)
    ident = SquareMatrix.identity(n, ctx)
    target = e - 1
    checked = 0
    violations = []
    for m in congruence_kernel_elements(
        descriptor, n, ctx, source, max_elements=max_elements
    ):
        if m == ident or m**p != ident:
            continue
        checked += 1
        if not m.in_kernel(target):
            violations.append(m)
    return KernelLemmaReport(
        descriptor=descriptor,
        n=n,
        p=p,
        e=e,
        variant=variant + ("/H1-probe" if probe_h1 else ""),
        source_level=source,
        target_level=target,
        checked_count=checked,
        violations=tuple(violations),
    )


def lie_kernel_basis(descriptor: str, n: int, ctx: ModulusContext) -> RankWitness:
    """The witness {I + p^(e-1) E} for E ranging over a basis of the Lie algebra.

    Trace-zero matrices for SL (rank n^2 - 1), all matrices for GL (rank n^2).
    Requires e >= 2; the witness is validated before being returned.
    """
    if ctx.e < 2:
        raise ValueError("lie_kernel_basis requires e >= 2")
    step = ctx.p ** (ctx.e - 1)
    mats = []
    for i in range(n):
        for j in range(n):
            if i != j:
                mats.append(SquareMatrix.elementary(n, i, j, ctx, value=step))
    if descriptor == "SL":
        for i in range(n - 1):
            rows = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
            rows[i][i] = (1 + step) % ctx.q
            rows[i + 1][i + 1] = (1 - step) % ctx.q
            mats.append(SquareMatrix(ctx, tuple(tuple(r) for r in rows)))
    elif descriptor == "GL":
        for i in range(n):
            rows = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
            rows[i][i] = (1 + step) % ctx.q
            mats.append(SquareMatrix(ctx, tuple(tuple(r) for r in rows)))
    else:
        raise ValueError(f"descriptor must be SL or GL, got {descriptor!r}")
    witness = RankWitness(basis=tuple(mats))
    witness.check()
    return witness


def rank_upper_bound(d: int, base_rank: int) -> int:
    """The dimension-plus-base-rank upper bound for ranks over Z/p^e."""
    if d < 0 or base_rank < 0:
        raise ValueError("arguments must be nonnegative")
    return d + base_rank


@dataclass(frozen=True)
class InvolutionCensus:
    """All solutions of M^2 = I in SL_2(Z/2^e) plus their verified structure."""

    e: int
    elements: tuple[SquareMatrix, ...]
    rank: int
    witness: RankWitness
    reference: str
    matches_reference: bool
    form_ok: bool
    is_subgroup: bool
    is_elementary_abelian: bool

    @property
    def count(self) -> int:
        return len(self.elements)


def involution_census_sl2(
    e: int, *, max_elements: int = DEFAULT_ENUMERATION_CAP
) -> InvolutionCensus:
    """Exhaustive census of order-dividing-2 elements of SL_2(Z/2^e), e >= 2.

    For e >= 3 the census must be the preimage of {I, -I} under reduction mod
    2^(e-1): sixteen matrices that are scalar mod 2^(e-1) with equal diagonal
    entries, forming an elementary abelian group of rank 4.  For e = 2 the
    census is the level-1 kernel: eight matrices of rank 3.
    """
    if e < 2:
        raise ValueError("involution census requires e >= 2")
    ctx = modulus(2, e)
    table = enumerate_group("SL", 2, ctx, max_elements=max_elements)
    ident = table.identity
    census = [m for m in table if m * m == ident]

    if e >= 3:
        reference = "preimage of {I, -I} at level e-1"
        minus = SquareMatrix.scalar(-1, 2, modulus(2, e - 1))
        ref_ident = SquareMatrix.identity(2, modulus(2, e - 1))
        ref_set = {
            m.key() for m in table if m.reduce_to(e - 1) in (ref_ident, minus)
        }
    else:
        reference = "level-1 kernel"
        ref_set = {m.key() for m in table if m.in_kernel(1)}
    matches = {m.key() for m in census} == ref_set

    half = 2 ** (e - 1)
    allowed_diag = {1 % half, (half - 1) % half}

    def form(m: SquareMatrix) -> bool:
        (a, b), (c, d) = m.rows
        return a == d and b % half == 0 and c % half == 0 and a % half in allowed_diag

    form_ok = all(form(m) for m in census)

    census_keys = {m.key() for m in census}
    is_subgroup = all((a * b).key() in census_keys for a in census for b in census)
    is_abelian = all(a * b == b * a for a, b in itertools.combinations(census, 2))

    # Greedy independent generators give the rank witness.
    basis: list[SquareMatrix] = []
    span = {ident}
    for m in census:
        if m in span:
            continue
        basis.append(m)
        span = {s * x for s in span for x in (ident, m)}
    witness = RankWitness(basis=tuple(basis))
    witness.check()

    return InvolutionCensus(
        e=e,
        elements=tuple(census),
        rank=witness.rank,
        witness=witness,
        reference=reference,
        matches_reference=matches,
        form_ok=form_ok,
        is_subgroup=is_subgroup,
        is_elementary_abelian=is_subgroup and is_abelian and len(census) == 2**witness.rank,
    )


@dataclass(frozen=True)
class SubadditivityReport:
    """The three exact ranks across a reduction map and the comparison result."""

    level: int
    rank_total: int
    rank_kernel: int
    rank_image: int
    witness_total: RankWitness = field(repr=False)

    @property
    def holds(self) -> bool:
        return self.rank_total <= self.rank_kernel + self.rank_image

    def __bool__(self) -> bool:
        return self.holds


def subadditivity_check(
    table: GroupTable, j: int, *, budget: int = DEFAULT_SEARCH_BUDGET
) -> SubadditivityReport:
    """Verify rank(G) <= rank(H_j) + rank(pi_j(G)) with all three ranks exact."""
    rank_total, witness = p_rank(table, budget=budget)
    rank_kernel, _ = p_rank(table.kernel_table(j), budget=budget)
    rank_image, _ = p_rank(table.reduced_table(j), budget=budget)
    return SubadditivityReport(
        level=j,
        rank_total=rank_total,
        rank_kernel=rank_kernel,
        rank_image=rank_image,
        witness_total=witness,
    )


def expected_sl2_rank(p: int, e: int) -> int:
    """Exact p-rank of SL_2(Z/p^e): 1 at e=1; 3 for odd p (e>=2) and (2,2); 4 for (2, e>=3)."""
    if e == 1:
        return 1
    if p > 2:
        return 3
    return 3 if e == 2 else 4
