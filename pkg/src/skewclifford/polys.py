"""Commutative polynomials over the scalar fields.

Univariate polynomials (gcd, squarefree parts, factorization and root finding
over square-root towers) and multivariate polynomials in a handful of
variables, with resultants and common projective zeros of plane curves.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from .scalars import (
    QQ,
    GaloisField,
    QExt,
    QuadraticExtension,
    TowerOverflow,
    field_of,
    format_scalar,
    join_fields,
    nonresidue,
    sqrt_adjoin,
)


def _field_of_coeffs(cs):
    return join_fields(field_of(c) for c in cs if not isinstance(c, int))


def _inv(x):
    return Fraction(1, x) if isinstance(x, int) else 1 / x


# ---------------------------------------------------------------- univariate


class UPoly:
    """Dense univariate polynomial, coefficients low degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [Fraction(x) if isinstance(x, int) else x for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = c

    @classmethod
    def x(cls):
        return cls([0, 1])

    @property
    def deg(self):
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1]

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other])
        return len(self.c) == len(other.c) and all(a == b for a, b in zip(self.c, other.c))

    def __hash__(self):
        return hash(tuple(self.c))

    def __add__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other])
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        return UPoly([x + y for x, y in zip(a, b)] + a[len(b):])

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-x for x in self.c])

    def __sub__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            return UPoly([x * other for x in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return UPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        out = UPoly([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.c):
            acc = acc * x + c
        return acc

    def __divmod__(self, other):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return UPoly(), UPoly(r)
        q = [0] * (dq + 1)
        inv = _inv(other.lc)
        m = len(other.c)
        for k in range(dq, -1, -1):
            coef = r[k + m - 1]
            if not coef:
                continue
            coef = coef * inv
            q[k] = coef
            for j, y in enumerate(other.c):
                r[k + j] = r[k + j] - coef * y
        return UPoly(q), UPoly(r[: m - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if not self.c:
            return self
        inv = _inv(self.lc)
        return UPoly([x * inv for x in self.c])

    def derivative(self):
        return UPoly([i * x for i, x in enumerate(self.c)][1:])

    def compose_shift(self, s):
        """f(t + s)."""
        out = UPoly()
        lin = UPoly([s, 1])
        for c in reversed(self.c):
            out = out * lin + c
        return out

    def map(self, fn):
        return UPoly([fn(x) for x in self.c])

    def field(self):
        return _field_of_coeffs(self.c)

    def __repr__(self):
        return f"UPoly({self})"

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for i in range(self.deg, -1, -1):
            x = self.c[i]
            if x:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(_term(x, mono))
        return _join_terms(terms)


def _term(coef, mono):
    s = format_scalar(coef)
    if not mono:
        return s
    if s == "1":
        return mono
    if s == "-1":
        return "-" + mono
    if " " in s:
        s = f"({s})"
    return f"{s}*{mono}"


def _join_terms(terms):
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    while b:
        a, b = b, a % b
    return a.monic()


def powmod(base: UPoly, e: int, mod: UPoly) -> UPoly:
    out = UPoly([1])
    base = base % mod
    while e:
        if e & 1:
            out = out * base % mod
        base = base * base % mod
        e >>= 1
    return out


def _pth_root(f: UPoly, K) -> UPoly:
    p = K.characteristic
    q = K.order
    # c -> c^(q/p) inverts the Frobenius on a finite field
    return UPoly([f.c[i] ** (q // p) for i in range(0, len(f.c), p)])


def squarefree_part(f: UPoly) -> UPoly:
    """Product of the distinct monic irreducible factors of ``f``."""
    if f.deg <= 0:
        return UPoly([1])
    f = f.monic()
    d = f.derivative()
    K = f.field()
    if not d:
        return squarefree_part(_pth_root(f, K))
    g = upoly_gcd(f, d)
    h = f // g
    if not K.is_finite:
        return h.monic()
    rest = g
    while True:
        c = upoly_gcd(rest, h)
        if c.deg <= 0:
            break
        rest = rest // c
    if rest.deg <= 0:
        return h.monic()
    return (h * squarefree_part(_pth_root(rest.monic(), K))).monic()


# ---------------------------------------------------------------- factorization


def _random_elem(K, rng):
    if isinstance(K, GaloisField):
        return K.from_index(rng.randrange(K.order))
    return K.random_element(rng)


def _finite_factor(f: UPoly, K) -> list:
    """Distinct- then equal-degree factorization of a monic squarefree f."""
    q = K.order
    x = UPoly([K.zero, K.one])
    out = []
    rest = f
    h = x
    i = 0
    while rest.deg >= 2 * (i + 1):
        i += 1
        h = powmod(h, q, rest)
        g = upoly_gcd(rest, h - x)
        if g.deg > 0:
            out.extend(_equal_degree(g, i, K))
            rest = rest // g
            h = h % rest
    if rest.deg > 0:
        out.append(rest.monic())
    return out


def _equal_degree(g: UPoly, d: int, K) -> list:
    if g.deg == d:
        return [g.monic()]
    rng = random.Random(g.deg * 7919 + d)
    e = (K.order**d - 1) // 2
    while True:
        a = UPoly([_random_elem(K, rng) for _ in range(g.deg)])
        if a.deg <= 0:
            continue
        h = upoly_gcd(g, powmod(a, e, g) - 1)
        if 0 < h.deg < g.deg:
            return _equal_degree(h, d, K) + _equal_degree(g // h, d, K)


def _rational_factor(f: UPoly) -> list:
    import sympy

    t = sympy.Symbol("t")
    coeffs = [sympy.Rational(c.numerator, c.denominator) for c in map(Fraction, reversed(f.c))]
    _, facs = sympy.Poly(coeffs, t, domain=sympy.QQ).factor_list()
    out = []
    for g, _mult in facs:
        cs = [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())]
        out.append(UPoly(cs).monic())
    return out


def _descend(f: UPoly):
    """Rewrite f over the smallest tower level holding all its coefficients."""
    cs = [c.in_subfield() if isinstance(c, QExt) else c for c in f.c]
    return UPoly(cs), _field_of_coeffs(cs)


def _extension_factor(f: UPoly, K) -> list:
    """Irreducible factors over K = F(sqrt d) in characteristic 0 (norm method)."""
    F = K.base
    for s in range(0, 12):
        shift = K.gen * s
        fs = f.compose_shift(shift) if s else f
        conj = UPoly([K(c).conjugate() for c in fs.c])
        norm = fs * conj
        if any(K(c).b for c in norm.c):
            raise ArithmeticError("norm left the base field")
        normF = UPoly([K(c).a for c in norm.c])
        if upoly_gcd(normF, normF.derivative()).deg > 0:
            continue
        out = []
        rest = fs
        for h in irreducible_factors(normF, F):
            g = upoly_gcd(rest, UPoly([K(c) for c in h.c]))
            if g.deg > 0:
                out.append(g)
                rest = rest // g
        if rest.deg > 0:
            out.append(rest.monic())
        return [g.compose_shift(-shift) if s else g for g in out]
    return [f]


def irreducible_factors(f: UPoly, K=None) -> list:
    """Monic irreducible factors of a squarefree ``f`` over ``K`` (default: its coefficient field)."""
    f = f.monic()
    if f.deg <= 1:
        return [f] if f.deg == 1 else []
    if K is None:
        f, K = _descend(f)
    if K is QQ:
        return _rational_factor(f)
    if K.is_finite:
        return _finite_factor(f, K)
    f = UPoly([K(c) for c in f.c])
    return _extension_factor(f, K)


@dataclass
class RootSet:
    """Distinct roots found, plus how many distinct roots could not be expressed."""

    roots: list = field(default_factory=list)
    unresolved: int = 0

    @property
    def count(self):
        return len(self.roots) + self.unresolved


def _square_free_rational(x: Fraction):
    """Write x = s^2 * m with m a squarefree integer (trial division on small primes)."""
    m = x.numerator * x.denominator
    s = Fraction(1, x.denominator)
    p = 2
    while p * p <= abs(m) and p < 10000:
        while m % (p * p) == 0:
            m //= p * p
            s *= p
        p += 1
    return s, m


def _quadratic_roots(g: UPoly):
    g = g.monic()
    c0, c1 = g.c[0], g.c[1]
    K = _field_of_coeffs(g.c)
    half = c1 * Fraction(1, 2)
    disc = K(half * half - c0)
    if K is QQ:
        s, m = _square_free_rational(disc)
        r, L = sqrt_adjoin(Fraction(m), QQ)
        r = r * s
    else:
        r, L = sqrt_adjoin(disc, K)
    return [-L(half) + r, -L(half) - r]


def _finite_tower_roots(g: UPoly, K):
    """Roots of an irreducible g of degree 2^k over a finite field, via k canonical quadratic steps."""
    L = K
    d = g.deg
    while d > 1:
        if d % 2:
            return None
        L = QuadraticExtension(L, nonresidue(L))
        d //= 2
    lifted = UPoly([L(c) for c in g.c])
    return [-h.c[0] for h in _finite_factor(lifted, L)]


def find_roots(f: UPoly, extend: bool = True) -> RootSet:
    """Distinct roots of ``f``, adjoining square roots when ``extend`` is set."""
    if not f:
        raise ValueError("zero polynomial has every point as a root")
    f = squarefree_part(f)
    out = RootSet()
    if f.deg <= 0:
        return out
    f, K = _descend(f)
    for g in irreducible_factors(f, K):
        if g.deg == 1:
            out.roots.append(-g.c[0] * _inv(g.c[1]))
        elif not extend:
            continue
        elif g.deg == 2:
            try:
                out.roots.extend(_quadratic_roots(g))
            except TowerOverflow:
                out.unresolved += 2
        elif K.is_finite:
            try:
                rs = _finite_tower_roots(g, K)
            except TowerOverflow:
                rs = None
            if rs is None:
                out.unresolved += g.deg
            else:
                out.roots.extend(rs)
        else:
            out.unresolved += g.deg
    return out


def count_distinct_roots(f: UPoly) -> int:
    """Number of distinct roots over the algebraic closure."""
    return max(squarefree_part(f).deg, 0)


# ---------------------------------------------------------------- multivariate


class MPoly:
    """Sparse commutative polynomial in ``n`` variables."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, n, i):
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def const(cls, n, c):
        return cls(n, {(0,) * n: c})

    @classmethod
    def gens(cls, n):
        return [cls.var(n, i) for i in range(n)]

    def _wrap(self, other):
        if isinstance(other, MPoly):
            return other
        return MPoly.const(self.n, other)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._wrap(other)
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __add__(self, other):
        other = self._wrap(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return MPoly(self.n, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(self.n, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * _inv(scalar)

    def __pow__(self, k):
        out = MPoly.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def __call__(self, *point):
        acc = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x**k
            acc = acc + t
        return acc

    def subs(self, images):
        """Substitute MPolys (in a possibly different ring) for the variables."""
        m = images[0].n
        out = MPoly(m)
        cache = {}
        for e, c in self.terms.items():
            t = MPoly.const(m, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    t = t * cache[key]
            out = out + t
        return out

    def diff(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = out.get(tuple(e2), 0) + e[i] * c
        return MPoly(self.n, out)

    def to_upoly(self, var, values):
        """Evaluate every variable except ``var`` at ``values[j]``; univariate in ``var``."""
        out = {}
        for e, c in self.terms.items():
            t = c
            for j, k in enumerate(e):
                if j != var and k:
                    t = t * values[j] ** k
            out[e[var]] = out.get(e[var], 0) + t
        top = max(out, default=-1)
        return UPoly([out.get(i, 0) for i in range(top + 1)])

    def coefficient_field(self):
        return _field_of_coeffs(self.terms.values())

    def leading_coefficient(self):
        """Coefficient of the lexicographically largest exponent."""
        return self.terms[max(self.terms)] if self.terms else 0

    def normalized(self):
        """Scaled so the lexicographically largest monomial has coefficient 1."""
        if not self.terms:
            return self
        return self / self.leading_coefficient()

    def fmt(self, names):
        if not self.terms:
            return "0"
        terms = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            terms.append(_term(self.terms[e], mono))
        return _join_terms(terms)

    def __repr__(self):
        return f"MPoly({self.fmt([f'x{i + 1}' for i in range(self.n)])})"


def proportional(f: MPoly, g: MPoly) -> bool:
    """True when f = c*g for a nonzero scalar c."""
    if not f or not g:
        return not f and not g
    if set(f.terms) != set(g.terms):
        return False
    e0 = next(iter(f.terms))
    ratio = f.terms[e0] * _inv(g.terms[e0])
    return all(f.terms[e] == ratio * g.terms[e] for e in f.terms)


# ---------------------------------------------------------------- resultants


def _bareiss_det(m):
    """Determinant of a square matrix with UPoly entries (fraction-free)."""
    m = [list(r) for r in m]
    n = len(m)
    sign = 1
    prev = UPoly([1])
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if m[r][k]), None)
        if piv is None:
            return UPoly()
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                q, r = divmod(num, prev)
                assert not r, "Bareiss division must be exact"
                m[i][j] = q
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def resultant(f: list, g: list) -> UPoly:
    """Sylvester resultant of polynomials given as coefficient lists (low first) of UPolys."""
    f = _trim(f)
    g = _trim(g)
    df, dg = len(f) - 1, len(g) - 1
    if df < 0 or dg < 0:
        return UPoly()
    if df == 0:
        return f[0] ** dg
    if dg == 0:
        return g[0] ** df
    size = df + dg
    zero = UPoly()
    rows = []
    fh = list(reversed(f))
    gh = list(reversed(g))
    for i in range(dg):
        rows.append([zero] * i + fh + [zero] * (size - i - df - 1))
    for i in range(df):
        rows.append([zero] * i + gh + [zero] * (size - i - dg - 1))
    return _bareiss_det(rows)


def _trim(cs):
    cs = list(cs)
    while cs and not cs[-1]:
        cs.pop()
    return cs


def _as_z_poly(F: MPoly):
    """View F(x, 1, z) as a polynomial in z whose coefficients are UPolys in x."""
    by_z = {}
    for (ex, _ey, ez), c in F.terms.items():
        by_z.setdefault(ez, {})
        by_z[ez][ex] = by_z[ez].get(ex, 0) + c
    top = max(by_z, default=-1)
    out = []
    for k in range(top + 1):
        d = by_z.get(k, {})
        out.append(UPoly([d.get(i, 0) for i in range(max(d, default=-1) + 1)]))
    return out


# ---------------------------------------------------------------- plane curves


class InfiniteZeroSet(ArithmeticError):
    """The forms share a curve component."""


@dataclass
class ZeroSet:
    points: list = field(default_factory=list)
    unresolved: int = 0
    exact: bool = True

    @property
    def count(self):
        return len(self.points) + self.unresolved


def normalize_point(p):
    """Projective representative with first nonzero coordinate 1; descends tower levels."""
    lead = next(x for x in p if x)
    out = []
    for x in p:
        y = x * _inv(lead)
        out.append(y.in_subfield() if isinstance(y, QExt) else y)
    return tuple(out)


def _shears(K):
    base = [(0, 0), (1, 0), (0, 1), (1, 2), (2, -1), (3, 5), (-2, 7), (5, -3), (7, 11), (-11, 4)]
    if K.is_finite:
        q = K.order if hasattr(K, "order") else K.p
        els = K.elements() if q <= 400 else [K(v) for v in range(K.characteristic)]
        return [(a, b) for a in els for b in els]
    return base


def projective_zeros(forms) -> ZeroSet:
    """Distinct common zeros in P^2 of homogeneous forms of equal degree.

    With two forms every root of the projected resultant is a genuine
    intersection, so roots that cannot be written in a square-root tower are
    still counted (``unresolved``).  With more forms they are only candidates
    and make the result inexact.
    """
    forms = [f for f in forms if f]
    if not forms:
        raise InfiniteZeroSet("no equations")
    degs = {f.degree for f in forms}
    if len(degs) != 1 or not all(f.is_homogeneous() for f in forms):
        raise ValueError("forms must be homogeneous of one degree")
    if degs == {0}:
        return ZeroSet()
    K = join_fields(f.coefficient_field() for f in forms)
    X, Y, Z = MPoly.gens(3)
    for a, b in _shears(K):
        if all(f(a, b, 1) for f in forms):
            break
    else:
        raise ArithmeticError("no generic projection centre over this field")
    # old coordinates in terms of new ones: x = x' + a z', y = y' + b z', z = z'
    moved = [f.subs([X + Z * a, Y + Z * b, Z]) for f in forms]
    rng = random.Random(17)
    if len(moved) == 1:
        raise InfiniteZeroSet("a single curve")
    if len(moved) == 2:
        P = moved
    else:
        P = []
        for _ in range(3):
            P.append(sum((f * rng.randint(1, 97) for f in moved), MPoly(3)))
    zp = [_as_z_poly(p) for p in P]
    R = resultant(zp[0], zp[1])
    for extra in zp[2:]:
        R = upoly_gcd(R, resultant(zp[0], extra)) if R else R
    if not R:
        raise InfiniteZeroSet("forms share a component")
    out = ZeroSet()
    seen = set()

    def collect(x, y):
        fibre = UPoly()
        for f in moved:
            fibre = upoly_gcd(fibre, f.to_upoly(2, [x, y, None]))
        if not fibre:
            raise InfiniteZeroSet("a whole line of zeros")
        rs = find_roots(fibre)
        out.unresolved += rs.unresolved
        if rs.unresolved:
            out.exact = False
        for z in rs.roots:
            pt = normalize_point((x + a * z, y + b * z, z))
            if pt not in seen:
                seen.add(pt)
                out.points.append(pt)

    if R.deg > 0:
        rs = find_roots(R)
        if rs.unresolved:
            if len(moved) == 2:
                out.unresolved += rs.unresolved
            else:
                out.exact = False
                out.unresolved += rs.unresolved
        for r in rs.roots:
            collect(r, 1)
    collect(1, 0)
    out.points.sort(key=lambda p: tuple(map(str, p)))
    return out


def plane_points_over(forms, K):
    """All common zeros with coordinates in the finite field K (brute force)."""
    els = K.elements()
    pts = []
    for x, y in iproduct(els, els):
        if all(not f(x, y, K.one) for f in forms):
            pts.append((x, y, K.one))
    for x in els:
        if all(not f(x, K.one, K.zero) for f in forms):
            pts.append((x, K.one, K.zero))
    if all(not f(K.one, K.zero, K.zero) for f in forms):
        pts.append((K.one, K.zero, K.zero))
    return pts
