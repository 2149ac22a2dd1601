from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from skewclifford.scalars import (
    QQ,
    FieldMismatch,
    GaloisField,
    QuadraticExtension,
    field_from_spec,
    format_scalar,
    is_zero,
    parse_scalar,
    sqrt_adjoin,
)

PRIMES = [3, 5, 7, 11, 13]

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def elements_of(K):
    if isinstance(K, GaloisField):
        return st.integers(0, K.order - 1).map(K.from_index)
    if isinstance(K, QuadraticExtension):
        return st.tuples(elements_of(K.base), elements_of(K.base)).map(lambda ab: ab[0] + ab[1] * K.gen)
    return fractions


TOWERS = [
    QQ,
    field_from_spec("QQ(i)"),
    field_from_spec("QQ(sqrt(2), sqrt(3))"),
    GaloisField(7),
    GaloisField(3, 2),
    GaloisField(5, 2),
    field_from_spec("GF(5)(sqrt(2))"),
]


@pytest.mark.parametrize("K", TOWERS, ids=lambda K: K.spec)
def test_field_axioms(K):
    @settings(max_examples=150)
    @given(elements_of(K), elements_of(K), elements_of(K))
    def check(x, y, z):
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x and x * y == y * x
        assert x - x == 0
        if x != 0:
            assert x * (1 / x) == 1

    check()


@given(st.sampled_from(PRIMES), st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_prime_field_matches_integers_mod_p(p, a, b):
    F = GaloisField(p)
    assert F(a) + F(b) == F((a + b) % p)
    assert F(a) * F(b) == F((a * b) % p)
    assert F(a) - F(b) == F((a - b) % p)
    if b % p:
        assert F(a) / F(b) == F(a * pow(b, -1, p))


@pytest.mark.parametrize("x, new_field", [(4, False), (-1, True), (2, True), (Fraction(9, 4), False)])
def test_sqrt_adjoin_rationals(x, new_field):
    r, K = sqrt_adjoin(QQ(x))
    assert r * r == x
    assert (K is not QQ) == new_field


@given(fractions.filter(bool))
def test_sqrt_adjoin_squares_back(x):
    r, K = sqrt_adjoin(QQ(x))
    assert is_zero(r * r - x)


@pytest.mark.parametrize("K", [GaloisField(5), GaloisField(3, 2), GaloisField(7)], ids=lambda K: K.spec)
def test_finite_sqrt_uses_one_extension(K):
    fields = set()
    for x in K.elements():
        r, L = sqrt_adjoin(x, K)
        assert r * r == x
        fields.add(L.spec)
    assert len(fields) <= 2


def test_is_zero_examples():
    s2, _ = sqrt_adjoin(QQ(2))
    i, _ = sqrt_adjoin(QQ(-1))
    assert is_zero(s2 * s2 - 2)
    assert is_zero(Fraction(1, 3) + Fraction(2, 3) - 1)
    assert is_zero(i * i + 1)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        GaloisField(5)(1) + GaloisField(7)(1)


def test_parse_and_format_round_trip():
    K = field_from_spec("QQ(i)")
    for text in ["1/2", "-i", "3 + 2*i", "0"]:
        x = parse_scalar(text, K)
        assert parse_scalar(format_scalar(x), K) == x


def test_gf_prime_power_spec():
    assert field_from_spec("GF(9)").order == 9
    assert field_from_spec("GF(3^2)") is field_from_spec("GF(9)")


def test_characteristic_two_rejected():
    with pytest.raises(ValueError):
        GaloisField(2)
