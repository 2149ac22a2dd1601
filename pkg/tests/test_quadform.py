import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import cav_forms, cav_mu, mu3, random_form, random_mu3
from skewclifford.quadform import (
    MuSymMatrix,
    NotMuSymmetric,
    abcdef,
    factor_quadratic,
    matrix_of_form,
    mu_minors,
    mu_rank,
    mu_rank3,
    symmetric_rank,
    tau,
)
from skewclifford.scalars import GaloisField, field_from_spec
from skewclifford.skewring import MuParams, SkewPoly, parse_skewpoly

QQi = field_from_spec("QQ(i)")


def check_factorizations(Q, facs):
    for f in facs:
        L1, L2 = f.forms(Q.mu)
        lifted = Q.mu.over(L1.mu.field) if L1.mu.field is not Q.mu.field else Q.mu
        assert L1 * L2 == SkewPoly(lifted, {e: lifted.field(c) for e, c in Q.terms.items()})


def test_mu_symmetry_enforced():
    mu = MuParams.from_upper(2, {(1, 2): 3})
    MuSymMatrix([[0, 3], [1, 0]], mu)
    with pytest.raises(NotMuSymmetric):
        MuSymMatrix([[0, 1], [1, 0]], mu)


def test_tau_examples():
    mu = cav_mu()
    n = 4
    ident = MuSymMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], mu)
    assert tau(ident) == parse_skewpoly("z1^2 + z2^2 + z3^2 + z4^2", mu)
    vals = {(1, 2): 2, (1, 3): 3, (1, 4): 5, (2, 3): 7, (2, 4): -1, (3, 4): Fraction(1, 2)}
    m4 = MuParams.from_upper(4, vals)
    M1 = MuSymMatrix([[0, 1, 0, 0], [m4(2, 1), 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 2]], m4)
    assert tau(M1) == parse_skewpoly("2*z1*z2 + 2*z4^2", m4)
    assert matrix_of_form(tau(M1)) == M1
    lam = Fraction(7, 3)
    one = MuParams.commutative(2)
    assert tau(MuSymMatrix([[2, lam], [lam, 0]], one)) == parse_skewpoly("2*z1^2", one) + parse_skewpoly("z1*z2", one) * (2 * lam)


def test_matrix_of_form_examples():
    mu = mu3(2, 3, 5)
    M = matrix_of_form(parse_skewpoly("z1^2", mu))
    assert M.entries == [[1, 0, 0], [0, 0, 0], [0, 0, 0]]
    assert matrix_of_form(SkewPoly(mu, {})).is_zero()


@settings(max_examples=200)
@given(st.integers(0, 10**6))
def test_tau_matrix_round_trip(seed):
    rng = random.Random(seed)
    mu = mu3(*(Fraction(rng.choice([1, -1])) * rng.randint(1, 5) / rng.randint(1, 4) for _ in range(3)))
    Q = random_form(mu, rng, bound=5)
    assert tau(matrix_of_form(Q)) == Q
    M = matrix_of_form(Q)
    assert matrix_of_form(tau(M)) == M


def test_mu_minor_examples():
    a, b, c = 2, 3, 5
    one = MuParams.commutative(3)
    D, _ = mu_minors(parse_skewpoly(f"{a}*z1^2 + {b}*z2^2 + {c}*z3^2", one))
    assert D == [-4 * a * b, -4 * a * c, -4 * b * c, 0, 0, 0]
    mu = mu3(2, 3, 5)
    D, _ = mu_minors(parse_skewpoly("z1^2", mu))
    assert not any(D)
    D, d7 = mu_minors(parse_skewpoly("z1*z2", mu))
    assert abcdef(parse_skewpoly("z1*z2", mu))[3] == Fraction(1, 2)
    assert D[0] == 1 and d7 == 0


def test_mu_rank_examples():
    mu = mu3(2, 3, 5)
    assert mu_rank3(parse_skewpoly("z3^2", mu)) == 1
    assert mu_rank3(parse_skewpoly("z1*z2", mu)) == 2
    one = MuParams.commutative(3)
    assert mu_rank3(parse_skewpoly("z1^2 + z2^2 + z3^2", one)) == 3
    assert mu_rank3(SkewPoly(mu, {})) == 0


def test_factor_examples():
    mu = mu3(2, 3, 5)
    Q = parse_skewpoly("z1*z2", mu)
    facs = factor_quadratic(Q)
    assert len(facs) == 2
    check_factorizations(Q, facs)
    pairs = {(f.left, f.right) for f in facs}
    assert ((1, 0, 0), (0, 1, 0)) in pairs
    # z2 * (c z1) = c mu12 z1 z2, so c = mu21
    assert ((0, 1, 0), (mu(2, 1), 0, 0)) in pairs
    one = MuParams.commutative(3)
    assert factor_quadratic(parse_skewpoly("z1^2 + z2^2 + z3^2", one)) == []


def test_cav_square_factorizations():
    mu = cav_mu()
    q = cav_forms(mu)
    Q = q[1] + q[3] * 4
    facs = factor_quadratic(Q)
    assert len(facs) == 2 and all(f.proportional() for f in facs)
    check_factorizations(Q, facs)
    half = Fraction(1, 2)
    lefts = {f.left for f in facs}
    assert lefts == {(0, 1, -half, 1), (0, 1, -half, -1)}


def test_symmetric_rank_examples():
    assert symmetric_rank([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]) == 2
    assert symmetric_rank([[0] * 4 for _ in range(4)]) == 0
    one = MuParams.commutative(4)
    assert symmetric_rank(matrix_of_form(parse_skewpoly("z1^2 - z2^2", one))) == 2


@settings(max_examples=200)
@given(st.sampled_from([3, 5, 7]), st.integers(0, 10**6))
def test_factorizations_scale_and_verify(p, seed):
    rng = random.Random(seed)
    mu = random_mu3(p, rng)
    Q = random_form(mu, rng)
    if not Q:
        return
    lam = GaloisField(p)(rng.randrange(1, p))
    f1, f2 = factor_quadratic(Q), factor_quadratic(Q * lam)
    assert len(f1) == len(f2)
    check_factorizations(Q, f1)
    assert (mu_rank3(Q) <= 2) == bool(f1)
    assert (mu_rank3(Q) == 1) == any(f.proportional() for f in f1)


@settings(max_examples=100)
@given(st.integers(0, 10**6))
def test_commutative_rank_matches(seed):
    rng = random.Random(seed)
    one = MuParams.commutative(3)
    Q = random_form(one, rng, bound=5)
    assert mu_rank3(Q) == symmetric_rank(matrix_of_form(Q))


def test_more_than_two_factorizations():
    # four factorizations (z1 + a z2 + b z3)(z1 - a z2 - b z3), a^2 = 1, b^2 = -1
    mu = mu3(1, 1, -1, QQi)
    Q = parse_skewpoly("z1^2 - z2^2 + z3^2", mu)
    i = QQi.gen
    expected = {(1, a, b) for a in (1, -1) for b in (i, -i)}
    for a, b0, b1 in expected:
        L1 = SkewPoly.gen(mu, 1) + SkewPoly.gen(mu, 2) * b0 + SkewPoly.gen(mu, 3) * b1
        L2 = SkewPoly.gen(mu, 1) - SkewPoly.gen(mu, 2) * b0 - SkewPoly.gen(mu, 3) * b1
        assert L1 * L2 == Q
    facs = factor_quadratic(Q)
    assert len(facs) == 4
    assert {f.left for f in facs} == expected
    check_factorizations(Q, facs)


def test_mu_rank_general_n(rng):
    mu = cav_mu()
    assert mu_rank(parse_skewpoly("z3^2", mu)) == 1
    # a square in two ways: rank one, two factorizations
    Q = parse_skewpoly("z3^2 + 4*(z2^2 + z4^2 - z2*z3)", mu)
    assert mu_rank(Q) == 1 and len(factor_quadratic(Q)) == 2
    assert mu_rank(parse_skewpoly("z1*z2", mu)) == 2
    assert mu_rank(parse_skewpoly("z1^2 + z2^2 + z3^2 + z4^2", MuParams.commutative(4))) == 3
    assert mu_rank(SkewPoly(mu, {})) == 0
    m3 = mu3(1, 2, 3)
    for _ in range(20):
        Q = random_form(m3, rng)
        assert mu_rank(Q) == mu_rank3(Q)
