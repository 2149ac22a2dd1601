"""Noncommutative polynomials and graded quotients of tensor algebras.

``GradedQuotient`` computes the components of T(V)/<R> for homogeneous
relations R one degree at a time.  Degree d is spanned by the words
``w * x_i`` with ``w`` a normal word of degree d-1, and the only new
relations in degree d are ``u * r`` for normal words ``u`` and relations
``r`` (everything of the form ``u * r * v`` with ``v`` nonempty already died
in degree d-1).  Each component is cut out by exact row reduction.
"""

from __future__ import annotations

from math import comb

from .linalg import Echelon, inverse
from .scalars import evaluate_expression, format_scalar


class NCPoly:
    """Element of the free algebra: ``{word (tuple of 0-based indices): coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def word(cls, w, coeff=1):
        return cls({tuple(w): coeff})

    @classmethod
    def gen(cls, i):
        return cls({(i,): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            other = NCPoly({(): other})
        return self.terms.keys() == other.terms.keys() and all(
            self.terms[w] == other.terms[w] for w in self.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms))

    def _lift(self, other):
        return other if isinstance(other, NCPoly) else NCPoly({(): other})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in self._lift(other).terms.items():
            out[w] = out.get(w, 0) + c
        return NCPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return NCPoly({w: c * other for w, c in self.terms.items()})
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return NCPoly(out)

    def __rmul__(self, other):
        return NCPoly({w: other * c for w, c in self.terms.items()})

    def __truediv__(self, scalar):
        inv = inverse(scalar)
        return NCPoly({w: c * inv for w, c in self.terms.items()})

    def __pow__(self, k):
        out = NCPoly({(): 1})
        for _ in range(k):
            out = out * self
        return out

    @property
    def degrees(self):
        return {len(w) for w in self.terms}

    @property
    def degree(self):
        return max(self.degrees, default=-1)

    def is_homogeneous(self):
        return len(self.degrees) <= 1

    def fmt(self, prefix="x"):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            mono = "*".join(f"{prefix}{i + 1}" for i in w)
            s = format_scalar(c)
            if not mono:
                parts.append(s)
            elif s == "1":
                parts.append(mono)
            elif s == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({s})*{mono}" if " " in s else f"{s}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"NCPoly({self.fmt()})"


def parse_ncpoly(text: str, n: int, field, prefix: str = "x") -> NCPoly:
    """Parse e.g. ``"x1*x2 + (1/2)*x2*x1 - x3^2"`` keeping the order of factors."""
    names = dict(field.generators())
    for i in range(n):
        names[f"{prefix}{i + 1}"] = NCPoly.gen(i)
    value = evaluate_expression(text, names, field)
    if not isinstance(value, NCPoly):
        value = NCPoly({(): field(value)})
    return NCPoly({w: field(c) for w, c in value.terms.items()})


class GradedQuotient:
    """Components of T(V)/<relations> for homogeneous relations in ``n`` generators."""

    def __init__(self, n: int, relations):
        self.n = n
        rels = []
        for r in relations:
            if not r:
                continue
            if not r.is_homogeneous():
                raise ValueError("relations must be homogeneous")
            if r.degree == 0:
                raise ValueError("a nonzero constant relation kills everything")
            rels.append(r)
        self.relations = rels
        self.bases = [[()]]
        self.index = [{(): 0}]
        # right multiplication: rmul[d][(normal word of degree d-1, letter)] -> vector in degree d
        self.rmul = [None]

    @property
    def computed_degree(self):
        return len(self.bases) - 1

    def dim(self, d: int) -> int:
        self.compute(d)
        return len(self.bases[d])

    def dims(self, dmax: int) -> list:
        self.compute(dmax)
        return [len(b) for b in self.bases[: dmax + 1]]

    def basis(self, d: int) -> list:
        self.compute(d)
        return self.bases[d]

    def compute(self, dmax: int):
        while self.computed_degree < dmax:
            self._next_degree()

    def _next_degree(self):
        d = len(self.bases)
        prev = self.bases[d - 1]
        if not prev:
            self.bases.append([])
            self.index.append({})
            self.rmul.append({})
            return
        echelon = Echelon()
        for r in self.relations:
            k = r.degree
            if k > d:
                continue
            for u in self.bases[d - k]:
                row = self._push({u: 1}, d - k, r)
                if row:
                    echelon.add(row)
        echelon.fully_reduce()
        cands = [w + (i,) for w in prev for i in range(self.n)]
        normal = [c for c in cands if c not in echelon.pivots]
        normal.sort()
        maps = {}
        for c in cands:
            row = echelon.pivots.get(c)
            if row is None:
                maps[(c[:-1], c[-1])] = {c: 1}
            else:
                maps[(c[:-1], c[-1])] = {k: -v for k, v in row.items() if k != c}
        self.bases.append(normal)
        self.index.append({w: j for j, w in enumerate(normal)})
        self.rmul.append(maps)

    def _push(self, vec: dict, d: int, poly: NCPoly) -> dict:
        """Normal form of ``vec * poly`` where ``vec`` lives in degree d.

        Words of ``poly`` are appended letter by letter, except the last
        letter of each word, which is kept as a raw candidate column so the
        caller can reduce it against the new degree being built.
        """
        out = {}
        for w, c in poly.terms.items():
            cur = {u: a * c for u, a in vec.items()}
            for j, letter in enumerate(w[:-1]):
                cur = self._apply(cur, d + j, letter)
            for u, a in cur.items():
                key = u + (w[-1],)
                out[key] = out.get(key, 0) + a
        return {k: v for k, v in out.items() if v}

    def _apply(self, vec: dict, d: int, letter: int) -> dict:
        """Right-multiply a normal-form vector of degree d by a generator."""
        self.compute(d + 1)
        maps = self.rmul[d + 1]
        out = {}
        for u, a in vec.items():
            for k, v in maps[(u, letter)].items():
                out[k] = out.get(k, 0) + a * v
        return {k: v for k, v in out.items() if v}

    def normal_form(self, poly: NCPoly) -> dict:
        """Normal form of a homogeneous element, as ``{normal word: coefficient}``."""
        out = {}
        for w, c in poly.terms.items():
            cur = {(): c}
            for j, letter in enumerate(w):
                cur = self._apply(cur, j, letter)
            for u, a in cur.items():
                out[u] = out.get(u, 0) + a
        return {k: v for k, v in out.items() if v}

    def is_zero(self, poly: NCPoly) -> bool:
        return not self.normal_form(poly)


def free_dim(n: int, d: int) -> int:
    return n**d


def polynomial_dim(n: int, d: int) -> int:
    return comb(n + d - 1, d)
