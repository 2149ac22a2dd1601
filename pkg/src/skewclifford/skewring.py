"""The quantum polynomial ring S = k<z_1..z_n> / (z_j z_i - mu_ij z_i z_j).

Elements are stored in the PBW basis of sorted monomials z_1^e1 ... z_n^en.
Ideal and quotient components are computed with the graded quotient engine in
``tensor``; a direct spanning computation is kept as an independent route.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb

from .linalg import Echelon, inverse
from .scalars import QQ, FieldMismatch, evaluate_expression, field_of, join_fields
from .tensor import GradedQuotient, NCPoly


class MuError(ValueError):
    pass


class MuParams:
    """Commutation scalars mu_ij (1-based accessors, 0-based storage)."""

    def __init__(self, matrix, field=None):
        n = len(matrix)
        K = field or join_fields(field_of(x) for row in matrix for x in row if not isinstance(x, int))
        self.n = n
        self.field = K
        self.m = [[K(x) for x in row] for row in matrix]
        for i in range(n):
            if len(self.m[i]) != n:
                raise MuError("mu must be square")
            if self.m[i][i] != 1:
                raise MuError(f"mu_{i + 1}{i + 1} must be 1")
            for j in range(n):
                if not self.m[i][j]:
                    raise MuError(f"mu_{i + 1}{j + 1} is zero")
                if self.m[i][j] * self.m[j][i] != 1:
                    raise MuError(f"mu_{i + 1}{j + 1} * mu_{j + 1}{i + 1} != 1")

    @classmethod
    def commutative(cls, n, field=QQ):
        return cls([[1] * n for _ in range(n)], field)

    @classmethod
    def from_upper(cls, n, values: dict, field=QQ):
        """Build from ``{(i, j): mu_ij}`` with 1-based i < j; unspecified entries are 1."""
        m = [[field(1)] * n for _ in range(n)]
        for (i, j), v in values.items():
            v = field(v)
            m[i - 1][j - 1] = v
            m[j - 1][i - 1] = inverse(v)
        return cls(m, field)

    def __call__(self, i, j):
        """mu_ij with 1-based indices."""
        return self.m[i - 1][j - 1]

    def is_commutative(self):
        return all(x == 1 for row in self.m for x in row)

    def over(self, field):
        return MuParams(self.m, field)

    def __eq__(self, other):
        return isinstance(other, MuParams) and self.n == other.n and all(
            a == b for r1, r2 in zip(self.m, other.m) for a, b in zip(r1, r2)
        )

    def __hash__(self):
        return hash((self.n, tuple(str(x) for r in self.m for x in r)))

    def __repr__(self):
        return f"MuParams(n={self.n}, {self.m})"


def graded_dim(n: int, d: int) -> int:
    """dim S_d for S on n generators."""
    return comb(n + d - 1, d)


def monomials(n: int, d: int) -> list:
    """Exponent vectors of degree d, in increasing graded-lex order."""
    out = []
    for c in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in c:
            e[i] += 1
        out.append(tuple(e))
    out.sort()
    return out


def _mono_product_scale(mu, e, f):
    """z^e * z^f = scale * z^(e+f): each z_i of f moves left past each z_j (j > i) of e."""
    scale = 1
    n = len(e)
    for i in range(n):
        if not f[i]:
            continue
        for j in range(i + 1, n):
            if e[j]:
                scale = scale * mu.m[i][j] ** (e[j] * f[i])
    return scale


class SkewPoly:
    """Element of S: ``{exponent tuple: coefficient}``."""

    __slots__ = ("mu", "terms")

    def __init__(self, mu: MuParams, terms=None):
        self.mu = mu
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def gen(cls, mu, i):
        """z_i (1-based)."""
        e = [0] * mu.n
        e[i - 1] = 1
        return cls(mu, {tuple(e): mu.field.one})

    @classmethod
    def const(cls, mu, c):
        return cls(mu, {(0,) * mu.n: mu.field(c)})

    def _check(self, other):
        if other.mu is not self.mu and other.mu != self.mu:
            raise FieldMismatch("SkewPolys over different mu")

    def _lift(self, other):
        if isinstance(other, SkewPoly):
            self._check(other)
            return other
        return SkewPoly.const(self.mu, other)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._lift(other)
        return self.terms.keys() == other.terms.keys() and all(
            self.terms[e] == other.terms[e] for e in self.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SkewPoly(self.mu, out)

    __radd__ = __add__

    def __neg__(self):
        return SkewPoly(self.mu, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, SkewPoly):
            return SkewPoly(self.mu, {e: c * other for e, c in self.terms.items()})
        return multiply(self, other)

    def __rmul__(self, other):
        return SkewPoly(self.mu, {e: other * c for e, c in self.terms.items()})

    def __truediv__(self, scalar):
        inv = inverse(scalar)
        return SkewPoly(self.mu, {e: c * inv for e, c in self.terms.items()})

    def __pow__(self, k):
        out = SkewPoly.const(self.mu, 1)
        for _ in range(k):
            out = out * self
        return out

    @property
    def degrees(self):
        return {sum(e) for e in self.terms}

    @property
    def degree(self):
        return max(self.degrees, default=-1)

    def is_homogeneous(self):
        return len(self.degrees) <= 1

    def coefficient(self, *indices):
        """Coefficient of z_{i1} z_{i2} ... (1-based, any order of the sorted monomial)."""
        e = [0] * self.mu.n
        for i in indices:
            e[i - 1] += 1
        return self.terms.get(tuple(e), self.mu.field.zero)

    def lift(self) -> NCPoly:
        """Representative in the free algebra: each monomial as its ascending word."""
        out = {}
        for e, c in self.terms.items():
            w = tuple(i for i in range(self.mu.n) for _ in range(e[i]))
            out[w] = c
        return NCPoly(out)

    def __str__(self):
        if not self.terms:
            return "0"
        from .polys import _join_terms, _term

        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            mono = "*".join(
                (f"z{i + 1}" if k == 1 else f"z{i + 1}^{k}") for i, k in enumerate(e) if k
            )
            parts.append(_term(self.terms[e], mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"SkewPoly({self})"


def multiply(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    f._check(g)
    mu = f.mu
    out = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2 * _mono_product_scale(mu, e1, e2)
    return SkewPoly(mu, out)


def normal_form_word(word, mu: MuParams) -> SkewPoly:
    """Sort a word in the generators (1-based indices) into the PBW basis."""
    scale = mu.field.one
    w = list(word)
    for a in range(len(w)):
        for b in range(a + 1, len(w)):
            j, i = w[a], w[b]
            if j > i:
                # z_j ... z_i: every inversion costs one mu_ij
                scale = scale * mu(i, j)
    e = [0] * mu.n
    for i in w:
        if not 1 <= i <= mu.n:
            raise IndexError(f"generator index {i} out of range")
        e[i - 1] += 1
    return SkewPoly(mu, {tuple(e): scale})


def parse_skewpoly(text: str, mu: MuParams) -> SkewPoly:
    """Parse ``"3/2*z1^2*z3 - z2*z4"``; products are taken in S, so order matters."""
    names = dict(mu.field.generators())
    for i in range(1, mu.n + 1):
        names[f"z{i}"] = SkewPoly.gen(mu, i)
    value = evaluate_expression(text, names, mu.field)
    if not isinstance(value, SkewPoly):
        value = SkewPoly.const(mu, value)
    return value


def commutation_relations(mu: MuParams) -> list:
    """z_j z_i - mu_ij z_i z_j for i < j, as free-algebra elements."""
    out = []
    for i in range(mu.n):
        for j in range(i + 1, mu.n):
            out.append(NCPoly({(j, i): mu.field.one, (i, j): -mu.m[i][j]}))
    return out


def quotient_engine(gens, mu: MuParams) -> GradedQuotient:
    """Graded quotient S/<gens> presented as a quotient of the tensor algebra."""
    for g in gens:
        if not g.is_homogeneous():
            raise ValueError("generators must be homogeneous")
    return GradedQuotient(mu.n, commutation_relations(mu) + [g.lift() for g in gens if g])


def ideal_component_dims(gens, dmax: int, mu: MuParams | None = None, method: str = "quotient"):
    """``[(dim I_d, dim (S/I)_d) for d in 0..dmax]`` for I = <gens>."""
    gens = list(gens)
    if mu is None:
        mu = gens[0].mu
    for g in gens:
        if not g.is_homogeneous():
            raise ValueError("generators must be homogeneous")
    if method == "span":
        return _ideal_dims_by_span(gens, dmax, mu)
    Q = quotient_engine(gens, mu)
    out = []
    for d in range(dmax + 1):
        q = Q.dim(d)
        out.append((graded_dim(mu.n, d) - q, q))
    return out


def _ideal_dims_by_span(gens, dmax, mu):
    """Span {m1 * g * m2} directly inside S_d (slow, independent route)."""
    out = []
    for d in range(dmax + 1):
        E = Echelon()
        mons = {k: [SkewPoly(mu, {e: mu.field.one}) for e in monomials(mu.n, k)] for k in range(d + 1)}
        for g in gens:
            if not g:
                continue
            k = g.degree
            if k > d:
                continue
            for a in range(d - k + 1):
                for m1 in mons[a]:
                    left = m1 * g
                    for m2 in mons[d - k - a]:
                        E.add((left * m2).terms)
        total = graded_dim(mu.n, d)
        out.append((E.rank, total - E.rank))
    return out


@dataclass(frozen=True)
class ProvedFinite:
    degree: int

    def to_json(self):
        return {"status": "ProvedFinite", "degree": self.degree}


@dataclass(frozen=True)
class Unknown:
    dmax: int

    def to_json(self):
        return {"status": "Unknown", "dmax": self.dmax}


def is_finite_dimensional_quotient(gens, dmax: int = 12, mu: MuParams | None = None):
    gens = list(gens)
    if mu is None:
        mu = gens[0].mu
    Q = quotient_engine(gens, mu)
    for d in range(dmax + 1):
        if Q.dim(d) == 0:
            return ProvedFinite(d)
    return Unknown(dmax)


def quotient_dims(gens, dmax, mu=None):
    gens = list(gens)
    if mu is None:
        mu = gens[0].mu
    return quotient_engine(gens, mu).dims(dmax)
