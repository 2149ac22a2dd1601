import itertools
import random
from fractions import Fraction

import pytest

from conftest import cav_forms, cav_mu, mu3
from skewclifford.clifford import (
    GSCASpec,
    NotEliminable,
    associated_quadrics,
    build_relations,
    check_base_point_free,
    check_normal_in_degree,
    check_normalizing,
    check_regularity,
    eliminate_y,
)
from skewclifford.freealg import algebra_dims, koszul_orthogonal
from skewclifford.linalg import same_span
from skewclifford.quadform import MuSymMatrix, matrix_of_form, tau
from skewclifford.scalars import QQ, GaloisField
from skewclifford.skewring import MuParams, ProvedFinite, SkewPoly, Unknown, graded_dim, parse_skewpoly
from skewclifford.tensor import NCPoly, parse_ncpoly


def nc_vectors(polys):
    return [{w: c for w, c in p.terms.items()} for p in polys]


def random_spec(mu, rng):
    K = mu.field
    n = mu.n
    mats = []
    for _ in range(n):
        M = [[K.zero] * n for _ in range(n)]
        for i in range(n):
            M[i][i] = K(rng.randrange(K.order))
            for j in range(i + 1, n):
                M[j][i] = K(rng.randrange(K.order))
                M[i][j] = mu.m[i][j] * M[j][i]
        mats.append(M)
    return GSCASpec(mu, mats)


def four_matrix_spec():
    vals = {(1, 2): 2, (1, 3): 3, (1, 4): 5, (2, 3): 7, (2, 4): -1, (3, 4): Fraction(1, 2)}
    mu = MuParams.from_upper(4, vals)
    m = mu
    M1 = [[0, 1, 0, 0], [m(2, 1), 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 2]]
    M2 = [[0, 0, 1, 0], [0, 2, 0, 0], [m(3, 1), 0, 0, 0], [0, 0, 0, 0]]
    M3 = [[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 2, 0], [m(4, 1), 0, 0, 0]]
    M4 = [[2, 0, 0, 0], [0, 0, 1, 0], [0, m(3, 2), 0, 0], [0, 0, 0, 0]]
    return GSCASpec(mu, [M1, M2, M3, M4])


def test_gca_relations():
    lam = Fraction(3)
    one = MuParams.commutative(2)
    spec = GSCASpec(one, [[[2, lam], [lam, 0]], [[0, 0], [0, 1]]])
    rels = {(r.i, r.j): r for r in build_relations(spec).relations}
    x11 = NCPoly({(0, 0): 1})
    assert rels[(0, 0)].lhs == x11 * 2 and rels[(0, 0)].coeffs == [2, 0]
    # (M2)_22 = 1 gives 2 x2^2 = y2
    assert rels[(1, 1)].lhs == NCPoly({(1, 1): 2}) and rels[(1, 1)].coeffs == [0, 1]
    assert rels[(0, 1)].lhs == NCPoly({(0, 1): 1, (1, 0): 1}) and rels[(0, 1)].coeffs == [lam, 0]
    P = eliminate_y(build_relations(spec)).eliminated
    assert same_span(nc_vectors(P.W), nc_vectors([NCPoly({(0, 1): 1, (1, 0): 1, (0, 0): -lam})]))


def test_diagonal_units():
    one = MuParams.commutative(3)
    E = [[[1 if (i == j == k) else 0 for j in range(3)] for i in range(3)] for k in range(3)]
    pres = build_relations(GSCASpec(one, E))
    for r in pres.relations:
        if r.i == r.j:
            assert r.coeffs == [1 if k == r.i else 0 for k in range(3)]
        else:
            assert not any(r.coeffs)
            assert r.lhs == NCPoly({(r.i, r.j): 1, (r.j, r.i): 1})


def test_four_matrix_example():
    spec = four_matrix_spec()
    mu = spec.mu
    P = eliminate_y(build_relations(spec)).eliminated
    texts = [
        f"x1*x2 + ({mu(1, 2)})*x2*x1 - x4^2",
        f"x2*x4 + ({mu(2, 4)})*x4*x2",
        f"x1*x3 + ({mu(1, 3)})*x3*x1 - x2^2",
        f"x1*x4 + ({mu(1, 4)})*x4*x1 - x3^2",
        f"x2*x3 + ({mu(2, 3)})*x3*x2 - x1^2",
        f"x3*x4 + ({mu(3, 4)})*x4*x3",
    ]
    from_matrices = [parse_ncpoly(t, 4, QQ) for t in texts]
    assert same_span(nc_vectors(P.W), nc_vectors(from_matrices))
    # printed variant pairs x1x3 with x3^2 and x1x4 with x2^2; the matrices do not
    swapped = list(from_matrices)
    swapped[2] = parse_ncpoly(f"x1*x3 + ({mu(1, 3)})*x3*x1 - x3^2", 4, QQ)
    swapped[3] = parse_ncpoly(f"x1*x4 + ({mu(1, 4)})*x4*x1 - x2^2", 4, QQ)
    assert not same_span(nc_vectors(P.W), nc_vectors(swapped))


def test_nvz_relations(nvz_spec):
    P = eliminate_y(build_relations(nvz_spec)).eliminated
    half = Fraction(1, 2)
    mats = ["x1*x2 + x2*x1 - x3^2", "x1*x3 + 2*x3*x1", f"x2*x3 + {half}*x3*x2"]
    assert same_span(nc_vectors(P.W), nc_vectors([parse_ncpoly(t, 3, QQ) for t in mats]))
    printed = ["x1*x2 + x2*x1", "x1*x3 + 2*x3*x1", f"x2*x3 + {half}*x3*x2 - x3^2"]
    assert not same_span(nc_vectors(P.W), nc_vectors([parse_ncpoly(t, 3, QQ) for t in printed]))


def test_dependent_matrices():
    one = MuParams.commutative(2)
    with pytest.raises(NotEliminable):
        eliminate_y(build_relations(GSCASpec(one, [[[1, 0], [0, 0]], [[2, 0], [0, 0]]])))


def test_associated_quadrics_cav():
    mu = cav_mu()
    qs = cav_forms(mu)
    spec = GSCASpec(mu, [matrix_of_form(q) for q in qs])
    assert associated_quadrics(spec) == qs


def test_associated_quadrics_identity_and_zero():
    one = MuParams.commutative(3)
    E = [[[1 if (i == j == k) else 0 for j in range(3)] for i in range(3)] for k in range(3)]
    assert associated_quadrics(GSCASpec(one, E)) == [SkewPoly.gen(one, k) ** 2 for k in (1, 2, 3)]
    assert not tau(MuSymMatrix([[0] * 3 for _ in range(3)], one))


@pytest.mark.parametrize("seed", range(5))
def test_everything_normal_when_commutative(seed):
    rng = random.Random(seed)
    qs = [tau(M) for M in random_spec(MuParams.commutative(3, GaloisField(5)), rng).matrices]
    certs = check_normalizing(qs)
    assert all(c.normal for c in certs)
    for order in itertools.permutations(range(3)):
        assert all(c.normal for c in check_normalizing(qs, order=list(order)))


def test_cav_normalizing_and_generic_failure():
    assert all(c.normal for c in check_normalizing(cav_forms()))
    generic = MuParams.from_upper(4, {(1, 2): 2, (1, 3): 3, (1, 4): 5, (2, 3): 7, (2, 4): 11, (3, 4): 13})
    assert not all(c.normal for c in check_normalizing(cav_forms(generic)))


def test_normality_degree_four_cross_check():
    qs = cav_forms()
    for j in range(4):
        assert check_normal_in_degree(qs, j, 1)
        assert check_normal_in_degree(qs, j, 2)


def test_base_point_free():
    assert isinstance(check_base_point_free(cav_forms(), 12), ProvedFinite)
    one = MuParams.commutative(2)
    assert check_base_point_free([SkewPoly.gen(one, 1) ** 2], 10) == Unknown(10)
    one4 = MuParams.commutative(4)
    sv = ["z1^2 - z2^2", "z1^2 - z3^2", "z1^2 - z4^2", "z1^2 - (z1 + z2 + z3 + z4)^2"]
    assert isinstance(check_base_point_free([parse_skewpoly(t, one4) for t in sv], 12), ProvedFinite)


def test_regularity_verdicts(nvz_spec):
    mu = cav_mu()
    rep = check_regularity(GSCASpec(mu, [matrix_of_form(q) for q in cav_forms(mu)]), 12, 5)
    assert rep.regular and rep.hilbert_dims == [1, 4, 10, 20, 35, 56]
    rep = check_regularity(nvz_spec, 12, 6)
    assert rep.regular and rep.hilbert_dims == [graded_dim(3, d) for d in range(7)]
    generic = MuParams.from_upper(4, {(1, 2): 2, (1, 3): 3, (1, 4): 5, (2, 3): 7, (2, 4): 11, (3, 4): 13})
    rep = check_regularity(GSCASpec(generic, [matrix_of_form(q) for q in cav_forms(generic)]), 8, 4)
    assert rep.verdict == "NotRegular" and rep.reason.startswith("normalizing")


def test_round_trip_eliminate(nvz_spec):
    for spec in (nvz_spec, four_matrix_spec()):
        g = eliminate_y(build_relations(spec))
        subst = []
        for rel in g.relations:
            r = rel.lhs
            for k, c in enumerate(rel.coeffs):
                if c:
                    r = r - g.y_values[k] * c
            subst.append(r)
        assert all(not subst[i] for i in g.pivots)
        assert same_span(nc_vectors([s for s in subst if s]), nc_vectors(g.eliminated.W))


def test_koszul_consistency_random_f5():
    # even seeds use mu = 1 (always normalizing), odd seeds mu = +-1 so that regular cases occur
    F = GaloisField(5)
    regular = 0
    for seed in range(200):
        rng = random.Random(seed)
        signs = (1, 1, 1) if seed % 2 == 0 else tuple(rng.choice([1, 4]) for _ in range(3))
        mu = mu3(*signs, field=F)
        spec = random_spec(mu, rng)
        if not spec.independent():
            continue
        rep = check_regularity(spec, 8, 4)
        if not rep.regular:
            continue
        regular += 1
        assert rep.hilbert_dims == [graded_dim(3, d) for d in range(5)]
        P = eliminate_y(build_relations(spec)).eliminated
        K = koszul_orthogonal(P, mu)
        assert same_span([q.terms for q in K.q_part], [q.terms for q in associated_quadrics(spec)])
    assert regular >= 50


def test_nvz_dims_match_regular(nvz_spec):
    P = eliminate_y(build_relations(nvz_spec)).eliminated
    assert algebra_dims(P, 6) == [graded_dim(3, d) for d in range(7)]
