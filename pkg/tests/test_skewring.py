import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import cav_forms, cav_mu, mu3, random_form
from skewclifford.scalars import GaloisField
from skewclifford.skewring import (
    MuError,
    MuParams,
    ProvedFinite,
    SkewPoly,
    Unknown,
    graded_dim,
    ideal_component_dims,
    is_finite_dimensional_quotient,
    multiply,
    normal_form_word,
    parse_skewpoly,
)

nonzero_q = st.fractions(min_value=-7, max_value=7, max_denominator=5).filter(bool)


def bubble_reduce(word, mu, rng):
    """Reference reduction: swap a random adjacent descent until sorted."""
    w = list(word)
    scale = Fraction(1)
    while True:
        descents = [k for k in range(len(w) - 1) if w[k] > w[k + 1]]
        if not descents:
            break
        k = rng.choice(descents)
        # z_j z_i = mu_ij z_i z_j for i < j
        scale *= mu(w[k + 1], w[k])
        w[k], w[k + 1] = w[k + 1], w[k]
    e = [0] * mu.n
    for g in w:
        e[g - 1] += 1
    return SkewPoly(mu, {tuple(e): mu.field(scale)})


def test_mu_validation():
    with pytest.raises(MuError):
        MuParams([[1, 2], [2, 1]])
    with pytest.raises(MuError):
        MuParams([[2, 1], [1, 1]])


def test_word_examples():
    q = Fraction(3, 7)
    mu = MuParams.from_upper(2, {(1, 2): q})
    assert normal_form_word((2, 1), mu) == parse_skewpoly("z1*z2", mu) * q
    one = MuParams.commutative(3)
    assert normal_form_word((3, 1, 2), one) == parse_skewpoly("z1*z2*z3", one)
    m = mu3(2, 5, Fraction(1, 3))
    assert normal_form_word((3, 2, 1), m) == parse_skewpoly("z1*z2*z3", m) * (m(1, 2) * m(1, 3) * m(2, 3))


@settings(max_examples=200)
@given(nonzero_q, nonzero_q, nonzero_q, st.lists(st.integers(1, 3), min_size=0, max_size=7), st.integers(0, 10**6))
def test_reduction_order_does_not_matter(a, b, c, word, seed):
    mu = mu3(a, b, c)
    rng = random.Random(seed)
    ref1 = bubble_reduce(word, mu, rng)
    ref2 = bubble_reduce(word, mu, rng)
    assert ref1 == ref2 == normal_form_word(tuple(word), mu)


@settings(max_examples=200)
@given(nonzero_q, nonzero_q, nonzero_q, st.integers(0, 10**6))
def test_multiply_associative(a, b, c, seed):
    mu = mu3(a, b, c)
    rng = random.Random(seed)
    f, g, h = (random_form(mu, rng) for _ in range(3))
    assert multiply(multiply(f, g), h) == multiply(f, multiply(g, h))


@settings(max_examples=200)
@given(st.integers(0, 10**6))
def test_commutative_specialization(seed):
    import sympy

    rng = random.Random(seed)
    mu = MuParams.commutative(3)
    f, g = random_form(mu, rng), random_form(mu, rng)
    z = sympy.symbols("z1:4")

    def to_sympy(p):
        return sum(sympy.Rational(c.numerator, c.denominator) * z[0] ** e[0] * z[1] ** e[1] * z[2] ** e[2] for e, c in p.terms.items())

    assert sympy.expand(to_sympy(f) * to_sympy(g) - to_sympy(f * g)) == 0


def test_multiply_examples():
    q = Fraction(5, 2)
    mu = MuParams.from_upper(2, {(1, 2): q})
    z1, z2 = SkewPoly.gen(mu, 1), SkewPoly.gen(mu, 2)
    assert z1 * z2 == parse_skewpoly("z1*z2", mu)
    assert z2 * z1 == parse_skewpoly("z1*z2", mu) * q


def test_cav_square():
    mu = cav_mu()
    L = parse_skewpoly("z2 - 1/2*z3 + z4", mu)
    q = cav_forms(mu)
    assert L * L == parse_skewpoly("z2^2 + 1/4*z3^2 + z4^2 - z2*z3", mu)
    assert L * L == (q[1] + q[3] * 4) * Fraction(1, 4)


@pytest.mark.parametrize("n, d, dim", [(4, 2, 10), (3, 3, 10), (2, 5, 6)])
def test_graded_dim(n, d, dim):
    assert graded_dim(n, d) == dim


def test_augmentation_ideal():
    mu = mu3(2, 3, 5)
    gens = [SkewPoly.gen(mu, i) for i in (1, 2, 3)]
    assert [q for _, q in ideal_component_dims(gens, 4)] == [1, 0, 0, 0, 0]


def test_single_square_n4():
    mu = cav_mu()
    dims = ideal_component_dims([parse_skewpoly("z3^2", mu)], 2)
    assert dims[2] == (1, 9)


def test_cav_quotient_is_finite():
    mu = cav_mu()
    res = is_finite_dimensional_quotient(cav_forms(mu), 12)
    assert isinstance(res, ProvedFinite) and res.degree <= 12
    dims = [q for _, q in ideal_component_dims(cav_forms(mu), res.degree)]
    first_zero = dims.index(0)
    assert all(x == 0 for x in dims[first_zero:])


def test_squares_commutative_finite_at_n_plus_1():
    for n in (2, 3, 4):
        mu = MuParams.commutative(n)
        gens = [SkewPoly.gen(mu, i) ** 2 for i in range(1, n + 1)]
        assert is_finite_dimensional_quotient(gens, 8) == ProvedFinite(n + 1)


def test_one_square_n2_unknown():
    mu = MuParams.commutative(2)
    assert is_finite_dimensional_quotient([SkewPoly.gen(mu, 1) ** 2], 9) == Unknown(9)


@given(st.integers(0, 10**6))
def test_quotient_and_span_routes_agree(seed):
    rng = random.Random(seed)
    F = GaloisField(5)
    mu = mu3(*(rng.randrange(1, 5) for _ in range(3)), field=F)
    gens = [random_form(mu, rng, bound=2) for _ in range(rng.randint(1, 3))]
    gens = [g for g in gens if g] or [SkewPoly.gen(mu, 1) ** 2]
    a = ideal_component_dims(gens, 4)
    b = ideal_component_dims(gens, 4, method="span")
    assert a == b
    quot = [q for _, q in a]
    if 0 in quot:
        assert all(x == 0 for x in quot[quot.index(0):])
