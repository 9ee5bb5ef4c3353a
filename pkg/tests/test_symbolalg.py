"""Algebra layer: the normal-ordering cocycle, exact twisted multiplication,
the commutator pairing against the standard form, and valuation axioms."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congrank import (
    AlgebraElement,
    AlgebraPresentation,
    CyclotomicScalar,
    PresentationMismatch,
    ZeroElement,
    cocycle,
    commutator_pairing,
    leading_term,
    multiply,
    pairing_matches_standard_form,
    split_permutation,
    valuation,
    value_group_index,
    zeta_power,
)


def e_vec(j, r):
    return tuple(1 if k == j else 0 for k in range(2 * r))


def test_cocycle_examples():
    for p in (2, 3, 5):
        pres = AlgebraPresentation(p, 2)
        e1, e2 = e_vec(0, 2), e_vec(1, 2)
        assert cocycle(pres, e1, e2) == 0
        assert cocycle(pres, e2, e1) == (-1) % p
        assert cocycle(pres, e1, (0, 0, 0, 0)) == 0
        assert cocycle(pres, tuple(p * x for x in e2), e1) == 0


def test_multiply_generator_relations():
    pres = AlgebraPresentation(3, 1)
    z1 = AlgebraElement.generator(pres, 0)
    z2 = AlgebraElement.generator(pres, 1)
    forward = z1 * z2
    backward = z2 * z1
    assert dict(forward.items()) == {(1, 1): CyclotomicScalar.one(3)}
    assert dict(backward.items()) == {(1, 1): zeta_power(-1, 3)}
    # z1 z2 = zeta * (z2 z1)
    assert forward == backward.scale(zeta_power(1, 3))


def test_multiply_identity_and_distribution():
    pres = AlgebraPresentation(3, 2)
    one = AlgebraElement.one(pres)
    x = AlgebraElement.monomial(pres, (1, 0, 2, -1), 2) + AlgebraElement.generator(pres, 3)
    assert x * one == x
    assert one * x == x
    assert multiply(x, one) == x


def test_multiply_binomial_expansion():
    # (z1 + z2)(z1 - z2) = z1^2 - z1 z2 + zeta^(-1) z1 z2 - z2^2
    pres = AlgebraPresentation(5, 1)
    z1 = AlgebraElement.generator(pres, 0)
    z2 = AlgebraElement.generator(pres, 1)
    left = (z1 + z2) * (z1 - z2)
    minus_one = CyclotomicScalar.from_rational(-1, 5)
    expected = AlgebraElement(
        pres,
        {
            (2, 0): CyclotomicScalar.one(5),
            (1, 1): minus_one + zeta_power(-1, 5),
            (0, 2): minus_one,
        },
    )
    assert left == expected


def test_presentation_mismatch():
    a = AlgebraElement.one(AlgebraPresentation(3, 1))
    b = AlgebraElement.one(AlgebraPresentation(3, 2))
    with pytest.raises(PresentationMismatch):
        a * b


def _random_element(rng, pres, max_terms=5):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exp = tuple(rng.randint(-3, 3) for _ in range(pres.num_generators))
        coeffs = [Fraction(rng.randint(-2, 2)) for _ in range(pres.p - 1)]
        if not any(coeffs):
            coeffs[0] = Fraction(1)
        terms[exp] = CyclotomicScalar(pres.p, tuple(coeffs))
    return AlgebraElement(pres, terms)


@given(
    seed=st.integers(0, 10_000),
    params=st.sampled_from([(2, 1), (3, 1), (2, 2), (3, 2), (5, 1)]),
)
@settings(deadline=None, max_examples=60)
def test_multiplication_associative(seed, params):
    p, r = params
    pres = AlgebraPresentation(p, r)
    rng = random.Random(seed)
    x = _random_element(rng, pres, max_terms=3)
    y = _random_element(rng, pres, max_terms=3)
    z = _random_element(rng, pres, max_terms=3)
    assert (x * y) * z == x * (y * z)


@given(
    seed=st.integers(0, 10_000),
    params=st.sampled_from([(2, 1), (3, 1), (2, 2), (3, 2)]),
)
@settings(deadline=None, max_examples=60)
def test_valuation_additive_and_no_zero_divisors(seed, params):
    p, r = params
    pres = AlgebraPresentation(p, r)
    rng = random.Random(seed)
    x = _random_element(rng, pres)
    y = _random_element(rng, pres)
    product = x * y
    assert not product.is_zero()
    assert valuation(product) == tuple(
        a + b for a, b in zip(valuation(x), valuation(y))
    )
    # Leading coefficient is the product of leading coefficients up to a
    # power of zeta.
    _, cx = leading_term(x)
    _, cy = leading_term(y)
    _, cp = leading_term(product)
    assert any(cp == cx * cy * zeta_power(k, p) for k in range(p))


def test_leading_term_examples():
    pres = AlgebraPresentation(3, 1)
    z1 = AlgebraElement.generator(pres, 0)
    z2 = AlgebraElement.generator(pres, 1)
    exp, coeff = leading_term(z1 + z2)
    assert exp == (1, 0) and coeff == CyclotomicScalar.one(3)
    one = AlgebraElement.one(pres)
    inv = AlgebraElement.monomial(pres, (-1, 0))
    assert leading_term(one + inv)[0] == (-1, 0)
    assert leading_term(AlgebraElement.monomial(pres, (2, 5)))[0] == (2, 5)
    with pytest.raises(ZeroElement):
        leading_term(AlgebraElement.zero(pres))


def test_valuation_examples():
    pres = AlgebraPresentation(5, 2)
    for j in range(4):
        assert valuation(AlgebraElement.generator(pres, j)) == e_vec(j, 2)
    assert valuation(AlgebraElement.monomial(pres, (0, 0, 0, 0), 7)) == (0, 0, 0, 0)
    with pytest.raises(ZeroElement):
        valuation(AlgebraElement.zero(pres))


def test_commutator_pairing_examples():
    for p in (2, 3, 5):
        pres = AlgebraPresentation(p, 2)
        assert commutator_pairing(pres, e_vec(0, 2), e_vec(1, 2)) == 1 % p
        assert commutator_pairing(pres, e_vec(0, 2), e_vec(0, 2)) == 0
        assert commutator_pairing(pres, e_vec(0, 2), e_vec(2, 2)) == 0


def test_commutator_pairing_biadditive_alternating():
    for p, r in [(2, 1), (3, 1), (5, 1), (3, 2)]:
        pres = AlgebraPresentation(p, r)
        basis = [e_vec(j, r) for j in range(2 * r)]
        for a in basis:
            assert commutator_pairing(pres, a, a) == 0
            for b in basis:
                gamma_ab = commutator_pairing(pres, a, b)
                assert gamma_ab == (-commutator_pairing(pres, b, a)) % p
                for c in basis:
                    bc = tuple(x + y for x, y in zip(b, c))
                    assert commutator_pairing(pres, a, bc) == (
                        gamma_ab + commutator_pairing(pres, a, c)
                    ) % p


def test_centrality_iff_divisible_by_p():
    for p, r in [(2, 1), (3, 1), (3, 2)]:
        pres = AlgebraPresentation(p, r)
        basis = [e_vec(j, r) for j in range(2 * r)]
        for j, a in enumerate(basis):
            central_a = tuple(p * x for x in a)
            assert all(commutator_pairing(pres, central_a, b) == 0 for b in basis)
            assert any(commutator_pairing(pres, a, b) != 0 for b in basis)


def test_split_permutation():
    assert split_permutation(1) == (0, 1)
    assert split_permutation(2) == (0, 2, 1, 3)
    assert split_permutation(3) == (0, 3, 1, 4, 2, 5)


def test_pairing_matches_standard_form_grid():
    for p in (2, 3, 5):
        for r in (1, 2, 3):
            assert pairing_matches_standard_form(AlgebraPresentation(p, r))


def test_pairing_wrong_permutation_fails():
    # Sending both generators of a pair to the same isotropic block breaks it.
    assert not pairing_matches_standard_form(
        AlgebraPresentation(3, 2), permutation=(0, 1, 2, 3)
    )
    with pytest.raises(ValueError):
        pairing_matches_standard_form(AlgebraPresentation(3, 2), permutation=(0, 0, 1, 2))


def test_value_group_index():
    assert value_group_index(AlgebraPresentation(3, 1)) == 9
    assert value_group_index(AlgebraPresentation(2, 2)) == 16
    assert value_group_index(AlgebraPresentation(5, 3)) == 5**6
    for p in (2, 3, 5, 7):
        for r in (1, 2, 3, 4):
            assert value_group_index(AlgebraPresentation(p, r)) == p ** (2 * r)


def test_monomial_inverse_round_trip():
    pres = AlgebraPresentation(3, 2)
    one = AlgebraElement.one(pres)
    for exp in [(1, 0, 0, 0), (2, -1, 3, 1), (0, 0, -2, 0)]:
        m = AlgebraElement.monomial(pres, exp, zeta_power(2, 3))
        assert m * m.monomial_inverse() == one
        assert m.monomial_inverse() * m == one
    with pytest.raises(ValueError):
        (one + AlgebraElement.generator(pres, 0)).monomial_inverse()
