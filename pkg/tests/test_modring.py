"""Scalar layer: canonical residues, unit inversion, valuations, and exact
root-of-unity arithmetic."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congrank import (
    CyclotomicScalar,
    ModulusContext,
    NotAUnit,
    as_zeta_power,
    is_prime,
    modulus,
    normalize,
    p_valuation,
    unit_inverse,
    zeta_power,
)

CTXS = [modulus(2, 3), modulus(3, 2), modulus(5, 1), modulus(7, 2), modulus(2, 1)]


def test_modulus_context_validation():
    assert modulus(2, 3).q == 8
    with pytest.raises(ValueError):
        ModulusContext(4, 2)
    with pytest.raises(ValueError):
        ModulusContext(3, 0)
    with pytest.raises(ValueError):
        ModulusContext(2, 40)  # 2^40 over the cap


def test_is_prime_small():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_normalize_examples():
    assert normalize(9, modulus(2, 3)) == 1
    assert normalize(-1, modulus(3, 2)) == 8
    assert normalize(0, modulus(5, 2)) == 0


def test_unit_inverse_examples():
    assert unit_inverse(3, modulus(2, 3)) == 3
    assert unit_inverse(1, modulus(7, 1)) == 1
    with pytest.raises(NotAUnit):
        unit_inverse(2, modulus(2, 3))


def test_unit_inverse_all_units():
    for ctx in CTXS:
        for x in range(ctx.q):
            if x % ctx.p == 0:
                continue
            assert normalize(x * unit_inverse(x, ctx), ctx) == 1


def test_p_valuation_examples():
    assert p_valuation(4, modulus(2, 3)) == 2
    assert p_valuation(0, modulus(3, 2)) == 2
    assert p_valuation(5, modulus(5, 2)) == 1
    assert p_valuation(1, modulus(7, 2)) == 0


@given(
    a=st.integers(-10**9, 10**9),
    b=st.integers(-10**9, 10**9),
    c=st.integers(-10**9, 10**9),
    ctx=st.sampled_from(CTXS),
)
@settings(deadline=None)
def test_normalize_is_ring_homomorphism(a, b, c, ctx):
    assert normalize(a + b, ctx) == normalize(normalize(a, ctx) + normalize(b, ctx), ctx)
    assert normalize(a * b, ctx) == normalize(normalize(a, ctx) * normalize(b, ctx), ctx)
    assert normalize(a * (b + c), ctx) == normalize(
        normalize(a * b, ctx) + normalize(a * c, ctx), ctx
    )


def test_zeta_power_examples():
    for p in (2, 3, 5, 7):
        assert zeta_power(p, p) == CyclotomicScalar.one(p)
    assert zeta_power(1, 2) == CyclotomicScalar.from_rational(-1, 2)
    z = zeta_power(1, 3)
    minus_one_minus_z = CyclotomicScalar(3, (Fraction(-1), Fraction(-1)))
    assert z * z == minus_one_minus_z


def test_zeta_power_additivity_exhaustive():
    for p in (2, 3, 5, 7):
        for a in range(2 * p):
            for b in range(2 * p):
                assert zeta_power(a, p) * zeta_power(b, p) == zeta_power(a + b, p)


def test_zeta_is_not_one():
    for p in (2, 3, 5, 7):
        assert zeta_power(1, p) != CyclotomicScalar.one(p)


def test_cyclotomic_field_laws():
    p = 5
    xs = [zeta_power(k, p) for k in range(p)] + [
        CyclotomicScalar(p, tuple(Fraction(c) for c in coeffs))
        for coeffs in [(1, 2, 0, -1), (0, 0, 1, 1), (Fraction(1, 2), 0, 0, 0)]
    ]
    for a in xs:
        for b in xs:
            assert a + b == b + a
            assert a * b == b * a
            for c in xs:
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c


def test_as_zeta_power():
    for p in (2, 3, 5):
        for k in range(p):
            assert as_zeta_power(zeta_power(k, p)) == k
    assert as_zeta_power(CyclotomicScalar.from_rational(2, 3)) is None


def test_cyclotomic_mixed_order_rejected():
    with pytest.raises(ValueError):
        zeta_power(1, 3) * zeta_power(1, 5)
