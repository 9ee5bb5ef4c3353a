"""Rank-inequality verdicts: the threshold table, the rank bounds feeding it,
and the step-by-step comparison between the valuation-theoretic rank lower
bound and the congruence-group rank upper bound.

The Galois-theoretic inputs enter as labeled axiom steps in the chain; the
finite facts behind them (exact SL_2 ranks, Lagrangian ranks, subadditivity)
are verified computationally by the other modules.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GroupTooLarge
from .modring import is_prime, modulus
from .prank import expected_sl2_rank

AXIOM_LOWER_BOUND = (
    "a splitting Galois group contains a Lagrangian subgroup of the valuation "
    "pairing, which is elementary abelian of rank r"
)
AXIOM_EXTENSION = (
    "a splitting Galois group is an extension of a subgroup of SL_2g(Z/p^e) "
    "by a subgroup of (Z/p^e)^2g"
)
ANCHOR_SL_BOUND = "exact-or-upper p-rank of SL_2g(Z/p^e), uniform over e"
ANCHOR_TORSION_RANK = "p-rank of a subgroup of (Z/p^e)^2g is at most 2g"
ANCHOR_SUBADDITIVITY = "p-rank is subadditive in short exact sequences"
ANCHOR_COMPARISON = "lower bound exceeding the upper bound is a contradiction"


@dataclass(frozen=True)
class VerdictParams:
    """Parameters of one verdict: prime p, torsor dimension g, symbol count r,
    and an optional period exponent e (bounds are uniform over e when absent)."""

    p: int
    g: int
    r: int
    e: int | None = None

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.g < 1 or self.r < 1:
            raise ValueError("g and r must be >= 1")
        if self.e is not None and self.e < 1:
            raise ValueError("e must be >= 1 when given")


@dataclass(frozen=True)
class ChainStep:
    """One inequality step: an identifier, a statement, a value, and the
    mathematical fact justifying it."""

    step_id: str
    statement: str
    value: int | bool
    anchor: str

    def to_dict(self) -> dict:
        return {
            "step_id": self.step_id,
            "statement": self.statement,
            "value": self.value,
            "anchor": self.anchor,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ChainStep:
        return cls(
            step_id=data["step_id"],
            statement=data["statement"],
            value=data["value"],
            anchor=data["anchor"],
        )


@dataclass(frozen=True)
class VerdictReport:
    """Outcome of comparing the rank lower bound r against the upper bound."""

    params: VerdictParams
    lower_bound: int
    upper_bound: int
    threshold: int
    contradiction: bool
    chain: tuple[ChainStep, ...]

    def to_dict(self) -> dict:
        return {
            "params": {
                "p": self.params.p,
                "g": self.params.g,
                "r": self.params.r,
                "e": self.params.e,
            },
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "threshold": self.threshold,
            "contradiction": self.contradiction,
            "chain": [step.to_dict() for step in self.chain],
        }

    @classmethod
    def from_dict(cls, data: dict) -> VerdictReport:
        return cls(
            params=VerdictParams(**data["params"]),
            lower_bound=data["lower_bound"],
            upper_bound=data["upper_bound"],
            threshold=data["threshold"],
            contradiction=data["contradiction"],
            chain=tuple(ChainStep.from_dict(s) for s in data["chain"]),
        )


def threshold(p: int, g: int) -> int:
    """Least r at which the rank comparison becomes contradictory."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if g < 1:
        raise ValueError(f"g must be >= 1, got {g}")
    if g == 1:
        return 6 if p > 2 else 7
    return 5 * g * g + 2 * g if p > 2 else 9 * g * g + 2 * g - 1


def sl_rank_bound(p: int, e: int | None, g: int, *, cross_check: bool = False) -> int:
    """Exact-or-upper p-rank of SL_2g(Z/p^e), uniform over e.

    g = 1 uses the exact values 3 (p odd) / 4 (p = 2); g >= 2 uses 5g^2 - 1
    (p odd) / 9g^2 - 2 (p = 2).  With ``cross_check`` and a small explicit e,
    the g = 1 value is compared against an exhaustive rank search.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if g == 1:
        bound = 3 if p > 2 else 4
    else:
        bound = 5 * g * g - 1 if p > 2 else 9 * g * g - 2
    if cross_check and g == 1 and e is not None:
        from .matgroup import enumerate_group, group_order_oracle
        from .prank import p_rank

        if group_order_oracle("SL", 2, p, e) > 100_000:
            raise GroupTooLarge(f"cross-check of SL_2(Z/{p}^{e}) exceeds the cap")
        computed, _ = p_rank(enumerate_group("SL", 2, modulus(p, e)))
        if computed != expected_sl2_rank(p, e) or computed > bound:
            raise RuntimeError(  # pragma: no cover
                f"cross-check failed: computed rank {computed}, bound {bound}"
            )
    return bound


def galois_rank_bound(p: int, e: int | None, g: int) -> int:
    """Upper bound for the splitting-group rank: sl_rank_bound + 2g."""
    return sl_rank_bound(p, e, g) + 2 * g


def verdict(params: VerdictParams) -> VerdictReport:
    """Assemble the inequality chain and decide whether ranks contradict.

    The report asserts the closed-form identity: contradiction holds exactly
    when r reaches threshold(p, g).
    """
    p, g, r, e = params.p, params.g, params.r, params.e
    sl_bound = sl_rank_bound(p, e, g)
    torsion = 2 * g
    upper = sl_bound + torsion
    contradiction = r > upper
    thresh = threshold(p, g)
    if contradiction != (r >= thresh):  # pragma: no cover
        raise RuntimeError(
            f"threshold identity violated: r={r}, upper={upper}, threshold={thresh}"
        )
    chain = (
        ChainStep(
            "lower-bound",
            f"splitting group rank >= r = {r}",
            r,
            AXIOM_LOWER_BOUND,
        ),
        ChainStep(
            "extension-structure",
            f"splitting group embeds in an extension with quotient in SL_{2 * g}(Z/p^e) "
            f"and kernel in (Z/p^e)^{2 * g}",
            upper,
            AXIOM_EXTENSION,
        ),
        ChainStep(
            "sl-bound",
            f"rank of the SL_{2 * g} part is at most {sl_bound}",
            sl_bound,
            ANCHOR_SL_BOUND,
        ),
        ChainStep(
            "torsion-rank",
            f"rank of the torsion part is at most {torsion}",
            torsion,
            ANCHOR_TORSION_RANK,
        ),
        ChainStep(
            "subadditivity",
            f"splitting group rank <= {sl_bound} + {torsion} = {upper}",
            upper,
            ANCHOR_SUBADDITIVITY,
        ),
        ChainStep(
            "comparison",
            f"{r} > {upper} is {'a contradiction' if contradiction else 'not reached'}",
            contradiction,
            ANCHOR_COMPARISON,
        ),
    )
    return VerdictReport(
        params=params,
        lower_bound=r,
        upper_bound=upper,
        threshold=thresh,
        contradiction=contradiction,
        chain=chain,
    )
