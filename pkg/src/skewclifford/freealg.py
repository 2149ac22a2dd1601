"""Quadratic algebras T(V)/<W> and the Koszul orthogonal of their relations."""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Echelon, nullspace, row_space_basis
from .scalars import join_fields, field_of
from .skewring import MuParams, SkewPoly, normal_form_word
from .tensor import GradedQuotient, NCPoly, parse_ncpoly


class NotCompatible(ValueError):
    """The mu-commutation relations are not orthogonal to W."""


def _vector(r: NCPoly, n: int) -> dict:
    out = {}
    for w, c in r.terms.items():
        if len(w) != 2:
            raise ValueError("relations must be homogeneous of degree 2")
        out[w[0] * n + w[1]] = c
    return out


class QuadraticPresentation:
    """Generators x1..xn and a space W of degree-2 relations (kept as a reduced basis)."""

    def __init__(self, n: int, relations, field=None):
        self.n = n
        rels = [r for r in relations if r]
        for r in rels:
            if r.degrees != {2}:
                raise ValueError("relations must be homogeneous of degree 2")
        coeffs = [c for r in rels for c in r.terms.values()]
        self.field = field or join_fields(field_of(c) for c in coeffs if not isinstance(c, int))
        self.given = rels
        basis = row_space_basis([_vector(r, n) for r in rels])
        self.W = [NCPoly({divmod(k, n): v for k, v in row.items()}) for row in basis]

    @classmethod
    def from_text(cls, n, texts, field):
        return cls(n, [parse_ncpoly(t, n, field) for t in texts], field)

    @property
    def dim_W(self):
        return len(self.W)

    def vectors(self):
        return [_vector(r, self.n) for r in self.W]

    def engine(self):
        return GradedQuotient(self.n, self.W)


def algebra_dims(P: QuadraticPresentation, dmax: int, method: str = "quotient") -> list:
    """dim A_d for d = 0..dmax."""
    if method == "span":
        return _dims_by_span(P, dmax)
    return P.engine().dims(dmax)


def _dims_by_span(P, dmax):
    """Span {u w v} over all words u, v directly in the free algebra (slow route)."""
    from itertools import product

    n = P.n
    out = []
    for d in range(dmax + 1):
        if d < 2:
            out.append(n**d)
            continue
        E = Echelon()
        for a in range(d - 1):
            for u in product(range(n), repeat=a):
                for v in product(range(n), repeat=d - 2 - a):
                    for r in P.W:
                        E.add({u + w + v: c for w, c in r.terms.items()})
        out.append(n**d - E.rank)
    return out


@dataclass
class KoszulPair:
    W: list
    W_perp: list
    U: list
    q_part: list

    def dims(self):
        return len(self.W), len(self.W_perp), len(self.U), len(self.q_part)


def koszul_orthogonal(P: QuadraticPresentation, mu: MuParams) -> KoszulPair:
    """W^perp under the pairing <x_i x_j, z_k z_l> = delta_ik delta_jl, and its image in S_2."""
    n = P.n
    if mu.n != n:
        raise ValueError("mu has the wrong size")
    K = join_fields([P.field, mu.field])
    zero = K.zero
    perp = nullspace(P.vectors(), n * n, zero)
    U = []
    for i in range(n):
        for j in range(i + 1, n):
            v = [zero] * (n * n)
            v[j * n + i] = K.one
            v[i * n + j] = -mu.m[i][j]
            U.append(v)
    E = Echelon({k: x for k, x in enumerate(v) if x} for v in perp)
    for u in U:
        if not E.contains({k: x for k, x in enumerate(u) if x}):
            raise NotCompatible("mu-commutation relations are not orthogonal to W")
    images = []
    for v in perp:
        q = SkewPoly(mu, {})
        for k, x in enumerate(v):
            if x:
                q = q + normal_form_word((k // n + 1, k % n + 1), mu) * x
        images.append(q.terms)
    basis = row_space_basis(images)
    q_part = [SkewPoly(mu, row) for row in basis]
    W_perp = [NCPoly({divmod(k, n): x for k, x in enumerate(v) if x}) for v in perp]
    U_nc = [NCPoly({divmod(k, n): x for k, x in enumerate(v) if x}) for v in U]
    return KoszulPair(P.W, W_perp, U_nc, q_part)
