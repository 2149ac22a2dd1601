"""Point schemes of quadratic algebras on three generators via the determinant cubic."""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from itertools import combinations

from .freealg import QuadraticPresentation
from .linalg import inverse, rank
from .polys import InfiniteZeroSet, MPoly, find_roots, projective_zeros
from .scalars import format_scalar, join_fields

NAMES = ["a1", "a2", "a3"]


class IdenticallyZero:
    """det M(a) vanishes identically: every a is the first coordinate of a point."""

    def __repr__(self):
        return "IdenticallyZero"

    def __bool__(self):
        return False


IDENTICALLY_ZERO = IdenticallyZero()


@dataclass
class MultilinearSystem:
    """Relation r evaluated at (a, b) equals (row r of matrix) . b."""

    relations: list
    matrix: list
    opposite: bool = False

    def evaluate(self, r, a, b):
        out = 0
        for w, c in self.relations[r].terms.items():
            i, j = (w[1], w[0]) if self.opposite else w
            out = out + c * a[i] * b[j]
        return out

    def identity_holds(self) -> bool:
        """Check the defining identity as a polynomial identity in a1..a3, b1..b3."""
        v = MPoly.gens(6)
        a, b = v[:3], v[3:]
        for r, rel in enumerate(self.relations):
            lhs = MPoly(6)
            for w, c in rel.terms.items():
                i, j = (w[1], w[0]) if self.opposite else w
                lhs = lhs + a[i] * b[j] * c
            rhs = MPoly(6)
            for j in range(3):
                rhs = rhs + self.matrix[r][j].subs(a) * b[j]
            if lhs != rhs:
                return False
        return True

    def rows_as_strings(self):
        return [[e.fmt(NAMES) for e in row] for row in self.matrix]


def multilinearize(P, opposite: bool = False, use_given: bool = True) -> MultilinearSystem:
    """M(a)_{rj} = sum_i c^(r)_{ij} a_i (left slot to a; ``opposite`` swaps the slots)."""
    rels = P.given if (use_given and isinstance(P, QuadraticPresentation)) else getattr(P, "W", P)
    rels = list(rels)
    if len(rels) != 3 or any(max((max(w) for w in r.terms), default=0) > 2 for r in rels):
        raise ValueError("need exactly 3 relations in 3 generators")
    for r in rels:
        if r.degrees != {2}:
            raise ValueError("relations must be homogeneous quadratic")
    a = MPoly.gens(3)
    M = [[MPoly(3) for _ in range(3)] for _ in range(3)]
    for r, rel in enumerate(rels):
        for w, c in rel.terms.items():
            i, j = (w[1], w[0]) if opposite else w
            M[r][j] = M[r][j] + a[i] * c
    sys = MultilinearSystem(rels, M, opposite)
    assert sys.identity_holds()
    return sys


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def normalize_form(f: MPoly) -> MPoly:
    """Scale so the coefficient of the lexicographically first monomial is 1."""
    if not f:
        return f
    e0 = max(f.terms)
    return f * inverse(f.terms[e0])


def point_scheme_cubic(sys: MultilinearSystem):
    f = _det3(sys.matrix)
    if not f:
        return IDENTICALLY_ZERO
    return normalize_form(f)


def rank_deficient_points(sys: MultilinearSystem):
    """Points a where M(a) has rank < 2 (their fibres in b are positive dimensional)."""
    minors = []
    for rows in combinations(range(3), 2):
        for cols in combinations(range(3), 2):
            m = [[sys.matrix[i][j] for j in cols] for i in rows]
            d = m[0][0] * m[1][1] - m[0][1] * m[1][0]
            if d:
                minors.append(d)
    if not minors:
        raise InfiniteZeroSet("all 2x2 minors vanish")
    return projective_zeros(minors)


# ---------------------------------------------------------------- plane cubics


@dataclass
class Component:
    form: MPoly
    kind: str
    multiplicity: int = 1
    singularity: str | None = None
    singular_points: list = dfield(default_factory=list)

    @property
    def degree(self):
        return self.form.degree

    def to_json(self):
        out = {"form": self.form.fmt(NAMES), "type": self.kind, "multiplicity": self.multiplicity}
        if self.singularity is not None:
            out["singularity"] = self.singularity
            out["singular_points"] = [[format_scalar(x) for x in p] for p in self.singular_points]
        return out


@dataclass
class PlaneCubicClassification:
    cubic: MPoly | IdenticallyZero
    components: list
    exact: bool = True

    @property
    def identically_zero(self):
        return isinstance(self.cubic, IdenticallyZero)

    @property
    def types(self):
        return sorted(c.kind for c in self.components)

    def product(self):
        out = MPoly.const(3, 1)
        for c in self.components:
            out = out * c.form ** c.multiplicity
        return out

    def to_json(self):
        if self.identically_zero:
            return {"cubic": "0", "identically_zero": True, "components": [], "types": []}
        return {
            "cubic": self.cubic.fmt(NAMES),
            "identically_zero": False,
            "components": [c.to_json() for c in self.components],
            "types": self.types,
            "exact": self.exact,
        }


def _field(f):
    return f.coefficient_field()


def _shear(f):
    """(u, v) with f(1, u, v) != 0, and f in coordinates x = x', y = y' + u x', z = z' + v x'."""
    X, Y, Z = MPoly.gens(3)
    for u, v in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (3, -1), (-2, 5), (4, 7)]:
        if f(1, u, v):
            return u, v, f.subs([X, Y + X * u, Z + X * v])
    raise ArithmeticError("no shear with f(1, u, v) != 0 found")


def _unshear_linear(line, u, v):
    """Linear form in new coordinates -> old (y' = y - u x, z' = z - v x)."""
    X, Y, Z = MPoly.gens(3)
    return line.subs([X, Y - X * u, Z - X * v])


def _divide_by_line(f, beta, gamma):
    """f / (x - beta y - gamma z), assuming exact divisibility; returns None otherwise."""
    X, Y, Z = MPoly.gens(3)
    g = f.subs([X + Y * beta + Z * gamma, Y, Z])
    out = {}
    for e, c in g.terms.items():
        if e[0] == 0:
            return None
        out[(e[0] - 1, e[1], e[2])] = c
    q = MPoly(3, out)
    return q.subs([X - Y * beta - Z * gamma, Y, Z])


def _linear_factors(g):
    """Lines x - beta y - gamma z dividing g (g monic-ish in x), with multiplicities."""
    X, Y, Z = MPoly.gens(3)
    found = []
    exact = True
    while g.degree > 0:
        by = g.to_upoly(0, [None, 1, 0])
        bz = g.to_upoly(0, [None, 0, 1])
        rb, rc = find_roots(by), find_roots(bz)
        if rb.unresolved or rc.unresolved:
            exact = False
        hit = None
        for beta in rb.roots:
            for gamma in rc.roots:
                q = _divide_by_line(g, beta, gamma)
                if q is not None:
                    hit = (beta, gamma, q)
                    break
            if hit:
                break
        if hit is None:
            break
        beta, gamma, g = hit
        found.append((X - Y * beta - Z * gamma).normalized())
    return found, g, exact


def _conic_rank(q):
    K = join_fields([_field(q)])
    half = inverse(2)
    M = [[K.zero] * 3 for _ in range(3)]
    for e, c in q.terms.items():
        idx = [i for i in range(3) for _ in range(e[i])]
        i, j = idx
        if i == j:
            M[i][i] = M[i][i] + c
        else:
            M[i][j] = M[i][j] + c * half
            M[j][i] = M[j][i] + c * half
    return rank(M)


def _hessian_at(f, p):
    return [[f.diff(i).diff(j)(*p) for j in range(3)] for i in range(3)]


def classify_plane_cubic(f) -> PlaneCubicClassification:
    if isinstance(f, IdenticallyZero) or not f:
        return PlaneCubicClassification(IDENTICALLY_ZERO, [])
    if f.n != 3 or not f.is_homogeneous() or f.degree != 3:
        raise ValueError("expected a homogeneous cubic in three variables")
    K = _field(f)
    if K.characteristic == 3:
        raise ValueError("the singularity test needs characteristic other than 2 and 3")
    f = normalize_form(f)
    u, v, g = _shear(f)
    lines, rest, exact = _linear_factors(g)
    comps = []
    for l in lines:
        old = _unshear_linear(l, u, v).normalized()
        for c in comps:
            if c.form == old:
                c.multiplicity += 1
                break
        else:
            comps.append(Component(old, "line"))
    rest = _unshear_linear(rest, u, v)
    if rest.degree == 2:
        r = _conic_rank(rest)
        comps.append(Component(normalize_form(rest), "smooth conic" if r == 3 else f"conic of rank {r}"))
        if r < 3:
            exact = False
    elif rest.degree == 3:
        comp = Component(normalize_form(rest), "irreducible cubic")
        partials = [rest.diff(i) for i in range(3)]
        try:
            sing = projective_zeros(partials)
        except InfiniteZeroSet:
            sing = None
        if sing is None:
            comp.singularity = "non-reduced"
            exact = False
        else:
            pts = list(sing.points)
            comp.singular_points = pts
            if not pts:
                comp.singularity = "smooth" if not sing.unresolved else "unresolved"
            else:
                r = rank(_hessian_at(rest, pts[0]))
                comp.singularity = {2: "nodal", 1: "cuspidal"}.get(r, f"hessian rank {r}")
            # a reducible cubic is singular along its intersections, and a lone node or
            # cusp cannot come from conjugate lines, so these outcomes certify irreducibility
            certified = sing.exact and not sing.unresolved and len(pts) <= 1
            exact = certified and comp.singularity in ("smooth", "nodal", "cuspidal")
        comps.append(comp)
    out = PlaneCubicClassification(f, comps, exact)
    total = sum(c.degree * c.multiplicity for c in comps)
    assert total == 3, "component degrees must add up to 3"
    return out
