"""Rank layer: witness soundness, exhaustive rank values against the naive
oracle, the kernel membership sweep, the involution census, and subadditivity."""

import random

import pytest

from congrank import (
    RankWitness,
    SearchBudgetExceeded,
    SquareMatrix,
    Unsupported,
    congruence_kernel_elements,
    enumerate_group,
    group_from_elements,
    group_from_generators,
    involution_census_sl2,
    lie_kernel_basis,
    modulus,
    order_p_elements,
    p_rank,
    rank_upper_bound,
    subadditivity_check,
    sylow_restricted_rank,
    unitriangular_group,
    verify_kernel_lemma,
)
from congrank.prank import expected_sl2_rank

import oracles


def test_order_p_elements_counts(table_factory):
    # Exhaustive-filter oracle over all matrices of determinant one.
    for p, e, expected in [(2, 1, 3), (3, 1, 8)]:
        table = table_factory("SL", 2, p, e)
        ours = order_p_elements(table)
        oracle = oracles.order_exactly_p(oracles.all_sl2(p**e), p, p**e)
        assert len(ours) == len(oracle)
        assert [m.key() for m in ours] == oracle
        assert len(ours) == expected


def test_order_p_elements_trivial_group():
    ident = SquareMatrix.identity(2, modulus(3, 1))
    trivial = group_from_elements([ident])
    assert order_p_elements(trivial) == []
    assert p_rank(trivial)[0] == 0


def test_p_rank_table_values(table_factory):
    expectations = {
        (2, 1): 1,
        (3, 1): 1,
        (5, 1): 1,
        (2, 2): 3,
        (3, 2): 3,
        (5, 2): 3,
        (2, 3): 4,
        (3, 3): 3,
        (2, 4): 4,
    }
    for (p, e), expected in expectations.items():
        rank, witness = p_rank(table_factory("SL", 2, p, e))
        assert rank == expected == expected_sl2_rank(p, e)
        witness.check()
        assert witness.rank == rank


def test_p_rank_against_naive_oracle(table_factory):
    # Optimality cross-check on every instance of order <= 5000.
    for p, e in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (2, 4)]:
        table = table_factory("SL", 2, p, e)
        if len(table) > 5000:
            continue
        rank, _ = p_rank(table)
        flats = [m.key() for m in order_p_elements(table)]
        assert oracles.naive_max_rank(flats, p, p**e, max_needed=rank + 1) == rank


def test_p_rank_witness_spans_distinct_products(table_factory):
    _, witness = p_rank(table_factory("SL", 2, 3, 2))
    span = witness.span_elements()
    assert len(span) == 3**witness.rank
    table = table_factory("SL", 2, 3, 2)
    assert all(m in table for m in span)


def test_p_rank_conjugation_invariance(table_factory):
    rng = random.Random(17)
    big = table_factory("SL", 2, 5, 1)
    sylow = unitriangular_group(2, modulus(5, 1))
    g = big.elements[rng.randrange(len(big))]
    conjugated = sylow.conjugated_by(g)
    assert p_rank(conjugated)[0] == p_rank(sylow)[0] == 1
    # Conjugating a full group permutes it onto itself.
    table = table_factory("SL", 2, 2, 2)
    h = table.elements[rng.randrange(len(table))]
    same = table.conjugated_by(h)
    assert [m.key() for m in same] == [m.key() for m in table]
    assert p_rank(same)[0] == p_rank(table)[0]


def test_p_rank_budget():
    table = enumerate_group("SL", 2, modulus(3, 1))
    with pytest.raises(SearchBudgetExceeded):
        p_rank(table, budget=3)


def test_rank_witness_rejects_bad_basis():
    ctx = modulus(3, 1)
    a = SquareMatrix.from_rows([[1, 1], [0, 1]], ctx)
    b = SquareMatrix.from_rows([[1, 0], [1, 1]], ctx)
    with pytest.raises(ValueError):
        RankWitness(basis=(a, b)).check()  # a and b do not commute
    with pytest.raises(ValueError):
        RankWitness(basis=(SquareMatrix.identity(2, ctx),)).check()
    with pytest.raises(ValueError):
        RankWitness(basis=(a, a)).check()  # degenerate span


def test_sylow_restricted_rank_values():
    assert sylow_restricted_rank("SL", 4, 2) == 4
    assert sylow_restricted_rank("SL", 4, 3) == 4
    assert sylow_restricted_rank("SL", 2, 3) == 1
    for p in (2, 3, 5, 7):
        assert sylow_restricted_rank("SL", 2, p) == 1
    with pytest.raises(Unsupported):
        sylow_restricted_rank("SL", 2, 3, e=2)
    with pytest.raises(Unsupported):
        sylow_restricted_rank("SL", 5, 2)


def test_sylow_restriction_agrees_with_full_search(table_factory):
    # Opt-in full-group cross-validation on SL_2 sizes.
    for p in (2, 3, 5, 7):
        full, _ = p_rank(table_factory("SL", 2, p, 1))
        assert sylow_restricted_rank("SL", 2, p) == full


def test_congruence_kernel_matches_table_kernel(table_factory):
    # Direct construction vs filtering the enumerated group.
    for desc, n, p, e, j in [("SL", 2, 3, 2, 1), ("SL", 2, 2, 3, 2), ("GL", 2, 2, 3, 1)]:
        table = table_factory(desc, n, p, e)
        direct = congruence_kernel_elements(desc, n, modulus(p, e), j)
        filtered = [m for m in table if m.in_kernel(j)]
        assert [m.key() for m in direct] == [m.key() for m in filtered]


def test_kernel_lemma_grid():
    grid = [
        ("SL", 2, 3, 3),
        ("GL", 2, 3, 3),
        ("SL", 2, 5, 2),
        ("GL", 2, 5, 2),
        ("SL", 2, 2, 4),
        ("GL", 2, 2, 4),
        ("SL", 2, 3, 2),
    ]
    for desc, n, p, e in grid:
        report = verify_kernel_lemma(desc, n, p, e)
        assert report.passed, (desc, n, p, e, report.violations[:3])
        assert report.checked_count > 0


def test_kernel_lemma_probe_finds_scalar_witness():
    report = verify_kernel_lemma("SL", 2, 2, 3, probe_h1=True)
    assert not report.passed
    witness = SquareMatrix.scalar(3, 2, modulus(2, 3))
    assert witness in report.violations
    assert report.violations[0] == witness  # canonically least violation
    assert report.source_level == 1 and report.target_level == 2


def test_kernel_lemma_validation():
    with pytest.raises(ValueError):
        verify_kernel_lemma("SL", 2, 2, 4, variant="odd-p")
    with pytest.raises(ValueError):
        verify_kernel_lemma("SL", 2, 3, 1)
    with pytest.raises(ValueError):
        verify_kernel_lemma("SL", 2, 2, 2)
    with pytest.raises(ValueError):
        verify_kernel_lemma("SL", 2, 3, 3, probe_h1=True)


def test_lie_kernel_basis(table_factory):
    w = lie_kernel_basis("SL", 2, modulus(3, 2))
    assert w.rank == 3
    w.check()
    expected = {
        SquareMatrix.from_rows([[1, 3], [0, 1]], modulus(3, 2)).key(),
        SquareMatrix.from_rows([[1, 0], [3, 1]], modulus(3, 2)).key(),
        SquareMatrix.from_rows([[4, 0], [0, 7]], modulus(3, 2)).key(),
    }
    assert {m.key() for m in w.basis} == expected

    assert lie_kernel_basis("GL", 2, modulus(2, 3)).rank == 4
    assert lie_kernel_basis("SL", 2, modulus(2, 2)).rank == 3
    assert lie_kernel_basis("SL", 3, modulus(3, 2)).rank == 8


def test_lie_kernel_spans_bottom_kernel(table_factory):
    # H_(e-1) equals the span of the commuting unipotent basis, elementwise.
    for desc, p, e in [("SL", 3, 2), ("GL", 2, 2), ("SL", 2, 3)]:
        table = table_factory(desc, 2, p, e)
        witness = lie_kernel_basis(desc, 2, modulus(p, e))
        kernel = table.kernel_table(e - 1)
        span_keys = {m.key() for m in witness.span_elements()}
        assert span_keys == {m.key() for m in kernel}
        d = 3 if desc == "SL" else 4
        assert len(kernel) == p**d
        ident = table.identity
        assert all(m**p == ident for m in kernel)


def test_rank_upper_bound():
    assert rank_upper_bound(3, 1) == 4
    assert rank_upper_bound(15, 4) == 19
    assert rank_upper_bound(0, 0) == 0
    with pytest.raises(ValueError):
        rank_upper_bound(-1, 0)


def test_involution_census_structure():
    for e in (3, 4, 5):
        census = involution_census_sl2(e)
        assert census.count == 16
        assert census.rank == 4
        assert census.matches_reference
        assert census.form_ok
        assert census.is_subgroup
        assert census.is_elementary_abelian
    census2 = involution_census_sl2(2)
    assert census2.count == 8
    assert census2.rank == 3
    assert census2.matches_reference


def test_involution_census_against_exhaustion():
    for e in (2, 3, 4):
        census = involution_census_sl2(e)
        assert [m.key() for m in census.elements] == oracles.involution_flats(e)


def test_subadditivity_grid(table_factory):
    for p, e in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)]:
        table = table_factory("SL", 2, p, e)
        for j in range(1, e):
            report = subadditivity_check(table, j)
            assert report.holds
            assert report.rank_total == expected_sl2_rank(p, e)
            assert bool(report)


def test_subadditivity_component_values(table_factory):
    report = subadditivity_check(table_factory("SL", 2, 3, 2), 1)
    assert (report.rank_total, report.rank_kernel, report.rank_image) == (3, 3, 1)
    report = subadditivity_check(table_factory("SL", 2, 2, 2), 1)
    assert (report.rank_total, report.rank_kernel, report.rank_image) == (3, 3, 1)
    # For SL_2(Z/8) the full involution group already sits inside H_1.
    report = subadditivity_check(table_factory("SL", 2, 2, 3), 1)
    assert (report.rank_total, report.rank_kernel, report.rank_image) == (4, 4, 1)
