"""Noncommutative quadratic forms: mu-symmetric matrices, mu-rank, factorizations."""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from itertools import product as iproduct

from .linalg import inverse, rank
from .polys import MPoly, find_roots
from .scalars import QExt, field_of, format_scalar, join_fields, sqrt_adjoin
from .skewring import MuParams, SkewPoly


class NotMuSymmetric(ValueError):
    pass


def _sub(x):
    return x.in_subfield() if isinstance(x, QExt) else x


@dataclass
class MuSymMatrix:
    """Matrix with entries M_ij = mu_ij * M_ji (0-based storage)."""

    entries: list
    mu: MuParams

    def __post_init__(self):
        K = self.mu.field
        self.entries = [[K(x) for x in row] for row in self.entries]
        n = self.mu.n
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise NotMuSymmetric(f"expected a {n}x{n} matrix")
        for i in range(n):
            for j in range(n):
                if self.entries[i][j] != self.mu.m[i][j] * self.entries[j][i]:
                    raise NotMuSymmetric(f"entry ({i + 1},{j + 1}) breaks M_ij = mu_ij M_ji")

    @property
    def n(self):
        return self.mu.n

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_zero(self):
        return not any(x for r in self.entries for x in r)

    def rows_as_strings(self):
        return [[format_scalar(x) for x in r] for r in self.entries]


def tau(M: MuSymMatrix) -> SkewPoly:
    """z^T M z in S."""
    mu = M.mu
    n = mu.n
    out = {}
    for i in range(n):
        for j in range(i, n):
            e = [0] * n
            e[i] += 1
            e[j] += 1
            c = M.entries[i][i] if i == j else M.entries[i][j] + mu.m[i][j] * M.entries[j][i]
            out[tuple(e)] = c
    return SkewPoly(mu, out)


def form_coefficients(Q: SkewPoly) -> dict:
    """``{(i, j): c_ij}`` (0-based, i <= j) with Q = sum c_ij z_i z_j."""
    if Q and Q.degrees != {2}:
        raise ValueError("not a quadratic form")
    n = Q.mu.n
    out = {}
    for e, c in Q.terms.items():
        idx = [i for i in range(n) for _ in range(e[i])]
        out[(idx[0], idx[1])] = c
    return out


def matrix_of_form(Q: SkewPoly) -> MuSymMatrix:
    mu = Q.mu
    n = mu.n
    K = mu.field
    c = form_coefficients(Q)
    half = Fraction(1, 2)
    M = [[K.zero] * n for _ in range(n)]
    for (i, j), v in c.items():
        if i == j:
            M[i][i] = v
        else:
            M[i][j] = v * half
            M[j][i] = mu.m[j][i] * v * half
    return MuSymMatrix(M, mu)


def symmetric_rank(M) -> int:
    rows = M.entries if isinstance(M, MuSymMatrix) else M
    return rank(rows)


# ---------------------------------------------------------------- n = 3 invariants


def abcdef(Q: SkewPoly):
    """Coefficients with Q = a z1^2 + b z2^2 + c z3^2 + 2d z1z2 + 2e z1z3 + 2f z2z3."""
    if Q.mu.n != 3:
        raise ValueError("needs n = 3")
    K = Q.mu.field
    c = form_coefficients(Q)
    g = lambda i, j: c.get((i, j), K.zero)
    half = Fraction(1, 2)
    return g(0, 0), g(1, 1), g(2, 2), g(0, 1) * half, g(0, 2) * half, g(1, 2) * half


@dataclass
class MuRankAnalysis:
    rank: int
    scaling: object
    minors: list
    d7: object
    d8: list
    X: object = None
    Y: object = None
    extension: str = ""

    def to_json(self):
        return {
            "mu_rank": self.rank,
            "scaling": format_scalar(self.scaling),
            "minors": [format_scalar(x) for x in self.minors],
            "D7": format_scalar(self.d7),
            "D8": [format_scalar(x) for x in self.d8],
            "X": None if self.X is None else format_scalar(self.X),
            "Y": None if self.Y is None else format_scalar(self.Y),
            "extension": self.extension,
        }


def mu_minors(Q: SkewPoly):
    """The 2x2 mu-minors D1..D6 and D7."""
    mu = Q.mu
    a, b, c, d, e, f = abcdef(Q)
    m12, m13, m23 = mu(1, 2), mu(1, 3), mu(2, 3)
    m21, m31 = mu(2, 1), mu(3, 1)
    D = [
        4 * d * d - (1 + m12) ** 2 * a * b,
        4 * e * e - (1 + m13) ** 2 * a * c,
        4 * f * f - (1 + m23) ** 2 * b * c,
        2 * (1 + m23) * d * e - (1 + m12) * (1 + m13) * a * f,
        2 * (1 + m12) * e * f - (1 + m13) * (1 + m23) * c * d,
        2 * (1 + m13) * d * f - (1 + m12) * (1 + m23) * b * e,
    ]
    d7 = (m23 * c * d * d - 2 * d * e * f + b * e * e) * (
        m13 * m21 * c * d * d - 2 * d * e * f + m12 * m23 * m31 * b * e * e
    )
    return D, d7


def mu_determinant_d8(Q: SkewPoly):
    """D8 for all sign choices of X, Y (square roots adjoined as needed)."""
    mu = Q.mu
    a, b, c, d, e, f = abcdef(Q)
    K = mu.field
    X, L = sqrt_adjoin(K(d * d - mu(1, 2) * a * b), K)
    Y, L = sqrt_adjoin(L(e * e - mu(1, 3) * a * c), L)
    m21, kappa = mu(2, 1), mu(2, 3) * mu(3, 1)
    values = []
    for sx, sy in iproduct((1, -1), repeat=2):
        x, y = X * sx, Y * sy
        values.append(m21 * (d + x) * (e - y) + kappa * (d - x) * (e + y) - 2 * a * f)
    return values, X, Y, L


def mu_rank3(Q: SkewPoly, analysis: bool = False):
    """mu-rank of a ternary form via the D-functions (a normalized to 0 or 1)."""
    if Q.mu.n != 3:
        raise ValueError("mu_rank3 needs n = 3")
    if not Q:
        res = MuRankAnalysis(0, 1, [0] * 6, 0, [])
        return res if analysis else 0
    a = abcdef(Q)[0]
    scale = inverse(a) if a else 1
    Qn = Q * scale
    D, d7 = mu_minors(Qn)
    d8, X, Y, L = [], None, None, None
    if a:
        d8, X, Y, L = mu_determinant_d8(Qn)
    if not any(D):
        r = 1
    elif (not a and not d7) or (a and any(not v for v in d8)):
        r = 2
    else:
        r = 3
    if not analysis:
        return r
    ext = L.spec if L is not None else Q.mu.field.spec
    return MuRankAnalysis(r, scale, D, d7, d8, X, Y, ext)


# ---------------------------------------------------------------- factorization


@dataclass
class Factorization:
    """Q = left * right with left scaled so its first nonzero coefficient is 1."""

    left: tuple
    right: tuple
    field: object = dfield(default=None, compare=False)

    def is_square(self):
        return all(x == y for x, y in zip(self.left, self.right))

    def proportional(self):
        """True when right is a scalar multiple of left (a square up to scalar)."""
        p = next(i for i, x in enumerate(self.left) if x)
        lam = self.right[p]
        return all(y == lam * x for x, y in zip(self.left, self.right))

    def forms(self, mu):
        L = join_fields([self.field or mu.field, mu.field])
        muL = mu.over(L) if L is not mu.field else mu
        mk = lambda v: SkewPoly(muL, {tuple(1 if k == i else 0 for k in range(mu.n)): L(x) for i, x in enumerate(v)})
        return mk(self.left), mk(self.right)

    def to_json(self):
        fmt = lambda v: [format_scalar(x) for x in v]
        return {"L1": fmt(self.left), "L2": fmt(self.right), "field": getattr(self.field, "spec", "QQ")}


def factor_quadratic(Q: SkewPoly) -> list:
    """All factorizations Q = L1 L2 up to (c L1, L2 / c), over square-root towers."""
    if Q and Q.degrees != {2}:
        raise ValueError("not homogeneous of degree 2")
    if not Q:
        return []
    mu = Q.mu
    n = mu.n
    coeffs = form_coefficients(Q)
    K = mu.field
    C = lambda i, j: coeffs.get((min(i, j), max(i, j)), K.zero)
    found = []
    for p in range(n):
        for a_vals in _pivot_solutions(C, mu, p):
            L = join_fields(field_of(x) for x in a_vals if not isinstance(x, int))
            L = join_fields([L, K])
            a = [L(x) for x in a_vals]
            cpp = L(C(p, p))
            b = [None] * n
            for i in range(p):
                b[i] = L(C(i, p)) * inverse(mu.m[i][p])
            b[p] = cpp
            for j in range(p + 1, n):
                b[j] = L(C(p, j)) - mu.m[p][j] * a[j] * cpp
            if not _verify(a, b, C, mu):
                continue
            left, right = tuple(_sub(x) for x in a), tuple(_sub(x) for x in b)
            where = join_fields(field_of(x) for x in left + right if not isinstance(x, int))
            fac = Factorization(left, right, join_fields([where, K]))
            if not any(_same(fac, g) for g in found):
                found.append(fac)
    return found


def mu_rank(Q: SkewPoly) -> int:
    """0 for Q = 0, 1 for a square factorization, 2 for any other factorization, else 3 (meaning "at least 3")."""
    if not Q:
        return 0
    if Q.mu.n == 3:
        return mu_rank3(Q)
    facs = factor_quadratic(Q)
    if not facs:
        return 3
    return 1 if any(f.proportional() for f in facs) else 2


def _same(f, g):
    try:
        return f.left == g.left and f.right == g.right
    except Exception:
        return False


def _verify(a, b, C, mu):
    n = mu.n
    for i in range(n):
        if a[i] * b[i] != C(i, i):
            return False
        for j in range(i + 1, n):
            if a[i] * b[j] + mu.m[i][j] * a[j] * b[i] != C(i, j):
                return False
    return True


def _pivot_solutions(C, mu, p):
    """Candidate coefficient vectors a (a_p = 1, a_i = 0 for i < p) of L1."""
    n = mu.n
    K = mu.field
    for i in range(p):
        if C(i, i):
            return []
        for j in range(i + 1, p):
            if C(i, j):
                return []
    m = n - p - 1
    if m == 0:
        return [[K.zero] * p + [K.one]]
    gens = MPoly.gens(m)
    av = {p: MPoly.const(m, 1)}
    for j in range(p + 1, n):
        av[j] = gens[j - p - 1]
    for i in range(p):
        av[i] = MPoly(m)
    cpp = C(p, p)
    bv = {}
    for i in range(p):
        bv[i] = MPoly.const(m, C(i, p) * inverse(mu.m[i][p]))
    bv[p] = MPoly.const(m, cpp)
    for j in range(p + 1, n):
        bv[j] = C(p, j) - av[j] * (mu.m[p][j] * cpp)
    eqs = []
    for i in range(n):
        for j in range(i, n):
            if i < p and j <= p:
                continue
            if i == j:
                eq = av[i] * bv[i] - C(i, i)
            else:
                eq = av[i] * bv[j] + av[j] * bv[i] * mu.m[i][j] - C(i, j)
            if eq:
                eqs.append(eq)
    sols = solve_system(eqs, m)
    return [[K.zero] * p + [K.one] + list(s) for s in sols]


# ---------------------------------------------------------------- small polynomial systems


class InfiniteSolutions(ArithmeticError):
    pass


def _vars_of(f: MPoly):
    return {i for e in f.terms for i, k in enumerate(e) if k}


def _substitute(f: MPoly, var: int, value) -> MPoly:
    imgs = [MPoly.var(f.n, i) for i in range(f.n)]
    imgs[var] = value if isinstance(value, MPoly) else MPoly.const(f.n, value)
    return f.subs(imgs)


def solve_system(eqs, m: int, assignment=None) -> list:
    """All solutions in square-root towers of polynomial equations in ``m`` unknowns.

    Equations are handled in this order: constants (consistency), univariate
    equations (branch on roots), equations of degree one in some variable with
    a constant coefficient (substitute), then elimination by resultants.
    """
    assignment = dict(assignment or {})
    eqs = [e for e in eqs if e]
    for e in eqs:
        if not _vars_of(e):
            return []
    free = [v for v in range(m) if v not in assignment]
    if not free:
        return [tuple(assignment[v] for v in range(m))]
    if not eqs:
        raise InfiniteSolutions("underdetermined system")
    for e in sorted(eqs, key=lambda f: f.degree):
        vs = _vars_of(e)
        if len(vs) == 1:
            (v,) = vs
            uni = e.to_upoly(v, [0] * m)
            out = []
            for r in find_roots(uni).roots:
                out.extend(_branch(eqs, m, assignment, v, r))
            return out
    for e in eqs:
        for v in sorted(_vars_of(e)):
            by_deg = {}
            for ex, c in e.terms.items():
                by_deg.setdefault(ex[v], {})[ex] = c
            if max(by_deg) != 1:
                continue
            lin = MPoly(m, {tuple(0 if k == v else x for k, x in enumerate(ex)): c for ex, c in by_deg[1].items()})
            if _vars_of(lin):
                continue
            coef = lin.terms[(0,) * m]
            rest = MPoly(m, by_deg.get(0, {}))
            expr = rest * (-inverse(coef))
            sub_eqs = [_substitute(f, v, expr) for f in eqs if f is not e]
            out = []
            for sol in solve_system(sub_eqs, m, {**assignment, v: None}):
                vals = list(sol)
                point = [x if x is not None else 0 for x in vals]
                vals[v] = expr(*point)
                out.append(tuple(vals))
            return out
    # elimination: remove one variable using resultants against a pivot equation
    v = min(set().union(*(_vars_of(e) for e in eqs)) - set(assignment))
    with_v = [e for e in eqs if v in _vars_of(e)]
    without = [e for e in eqs if v not in _vars_of(e)]
    pivot = min(with_v, key=lambda f: (max(ex[v] for ex in f.terms), len(f.terms)))
    if len(with_v) == 1 and not without:
        raise InfiniteSolutions("underdetermined system")
    reduced = list(without)
    for e in with_v:
        if e is not pivot:
            reduced.append(_resultant_in(pivot, e, v))
    out = []
    for sol in solve_system(reduced, m, {**assignment, v: None}):
        part = {k: x for k, x in enumerate(sol) if k != v and k not in assignment}
        rest_eqs = eqs
        for k, x in part.items():
            rest_eqs = [_substitute(f, k, x) for f in rest_eqs]
        for s in solve_system(rest_eqs, m, {**assignment, **part}):
            if s not in out:
                out.append(s)
    return out


def _branch(eqs, m, assignment, v, r):
    sub = [_substitute(f, v, r) for f in eqs]
    return solve_system(sub, m, {**assignment, v: r})


def _resultant_in(f: MPoly, g: MPoly, v: int) -> MPoly:
    def coeffs(h):
        out = {}
        for ex, c in h.terms.items():
            k = ex[v]
            e2 = tuple(0 if i == v else x for i, x in enumerate(ex))
            out.setdefault(k, {})[e2] = c
        top = max(out)
        return [MPoly(h.n, out.get(k, {})) for k in range(top + 1)]

    return _sylvester_det(coeffs(f), coeffs(g))


def _sylvester_det(f, g):
    df, dg = len(f) - 1, len(g) - 1
    n = df + dg
    zero = MPoly(f[0].n)
    rows = []
    for i in range(dg):
        rows.append([zero] * i + list(reversed(f)) + [zero] * (n - i - df - 1))
    for i in range(df):
        rows.append([zero] * i + list(reversed(g)) + [zero] * (n - i - dg - 1))
    return _laplace(rows)


def _laplace(rows):
    if len(rows) == 1:
        return rows[0][0]
    total = MPoly(rows[0][0].n)
    for j, x in enumerate(rows[0]):
        if not x:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = x * _laplace(minor)
        total = total + term if j % 2 == 0 else total - term
    return total
