"""Counting point modules through rank and factorization loci of quadric spans.

A GCA has 2*r2 + r1 point modules (r_j = members of the quadric span of rank j)
and a GSCA has 2*f2 + f1 (f_j = members of mu-rank <= 2 whose form factors in
j ways).  Three strategies with different guarantees:

* ``pencil``: exact enumeration along a pencil by univariate gcds;
* ``candidates``: verify user-supplied members, no completeness claim;
* ``scan``: every member rational over a finite field, evidence only.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dfield
from fractions import Fraction
from itertools import product as iproduct

from .linalg import inverse, rank
from .polys import (
    MPoly,
    UPoly,
    _descend,
    find_roots,
    irreducible_factors,
    normalize_point,
    projective_zeros,
    squarefree_part,
    upoly_gcd,
)
from .quadform import MuSymMatrix, abcdef, factor_quadratic, mu_rank, mu_rank3, symmetric_rank, tau
from .scalars import GaloisField, GFElement, QExt, field_of, format_scalar, join_fields
from .skewring import MuParams

SCAN_LIMIT = 10**7


class PencilError(ValueError):
    pass


class ScanTooLarge(ValueError):
    pass


class NoEmbedding(ValueError):
    """A coefficient has no image in the requested finite field."""


def _fmt_point(t):
    return [format_scalar(x) for x in t]


# ---------------------------------------------------------------- families


_MU_CACHE: dict = {}


def mu_over(mu: MuParams, L):
    if L is mu.field:
        return mu
    key = (id(mu), L)
    if key not in _MU_CACHE:
        _MU_CACHE[key] = (mu, mu.over(L))
    return _MU_CACHE[key][1]


@dataclass
class SpanFamily:
    """Projectivized span of mu-symmetric matrices; member(t) = sum t_k M_k."""

    basis: list

    def __post_init__(self):
        if not self.basis:
            raise ValueError("empty span")
        mu = self.basis[0].mu
        for M in self.basis:
            if M.mu != mu:
                raise ValueError("basis matrices use different mu")
        rows = [[x for r in M.entries for x in r] for M in self.basis]
        if rank(rows) != len(rows):
            raise ValueError("basis matrices are linearly dependent")

    @classmethod
    def from_forms(cls, forms):
        from .quadform import matrix_of_form

        return cls([matrix_of_form(q) for q in forms])

    @property
    def mu(self) -> MuParams:
        return self.basis[0].mu

    @property
    def m(self):
        return len(self.basis)

    @property
    def n(self):
        return self.mu.n

    @property
    def field(self):
        return self.mu.field

    def member(self, t) -> MuSymMatrix:
        if len(t) != self.m:
            raise ValueError(f"need {self.m} parameters")
        L = join_fields([self.field] + [field_of(x) for x in t if not isinstance(x, int)])
        mu = mu_over(self.mu, L)
        n = self.n
        out = [[L.zero] * n for _ in range(n)]
        for tk, M in zip(t, self.basis):
            if not tk:
                continue
            for i in range(n):
                for j in range(n):
                    if M.entries[i][j]:
                        out[i][j] = out[i][j] + L(tk) * M.entries[i][j]
        return MuSymMatrix(out, mu)

    def form(self, t):
        return tau(self.member(t))


# ---------------------------------------------------------------- reports


@dataclass
class PointCountReport:
    mode: str
    first: int | None
    second: int | None
    witnesses: list
    completeness: str
    fields: list = dfield(default_factory=list)
    anomalies: list = dfield(default_factory=list)
    unresolved: int = 0

    @property
    def total(self):
        if self.first is None or self.second is None:
            return None
        return 2 * self.second + self.first

    def to_json(self):
        return {
            "mode": self.mode,
            "first": self.first,
            "second": self.second,
            "total": self.total if self.total is not None else "infinite",
            "witnesses": self.witnesses,
            "completeness": self.completeness,
            "fields": self.fields,
            "anomalies": self.anomalies,
            "unresolved": self.unresolved,
        }


def _mode_of(family, mode):
    if mode is None:
        return "commutative" if family.mu.is_commutative() else "skew"
    if mode not in ("commutative", "skew"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "commutative" and not family.mu.is_commutative():
        raise ValueError("commutative mode needs mu = 1")
    return mode


def classify_member(M: MuSymMatrix, mode: str) -> dict:
    """Rank (commutative) or factorizations (skew) of one member."""
    if mode == "commutative":
        return {"rank": symmetric_rank(M)}
    Q = tau(M)
    facs = factor_quadratic(Q)
    out = {"factorizations": len(facs), "factors": [f.to_json() for f in facs]}
    out["mu_rank"] = mu_rank(Q)
    return out


def _slot(info, mode):
    """0 for first, 1 for second, None when the member does not count."""
    if mode == "commutative":
        return {1: 0, 2: 1}.get(info["rank"])
    k = info["factorizations"]
    if k == 0:
        return None
    return {1: 0, 2: 1}.get(k, "excess")


def _tally(items, mode, completeness, fields):
    """items: (parameter point, info).  Builds the report and its anomaly list."""
    counts = [0, 0]
    witnesses, anomalies = [], []
    for t, info in items:
        s = _slot(info, mode)
        if s is None:
            continue
        w = {"t": _fmt_point(t)}
        w.update({k: v for k, v in info.items() if k != "factors"})
        if "factors" in info:
            w["factors"] = info["factors"]
        witnesses.append(w)
        if s == "excess":
            anomalies.append(f"member {w['t']} factors in {info['factorizations']} ways (more than two)")
            continue
        counts[s] += 1
        if mode == "skew" and info.get("mu_rank", 3) > 2:
            anomalies.append(f"member {w['t']} factors but has mu-rank 3")
    if mode == "commutative" and counts[0] > 1:
        anomalies.append(f"r1 = {counts[0]} > 1: not a base-point-free system with finitely many point modules")
    return PointCountReport(mode, counts[0], counts[1], witnesses, completeness, fields, anomalies)



# ---------------------------------------------------------------- pencils


@dataclass
class PencilRoot:
    """A member t0*Ma + t1*Mb of rank <= 2; ``point`` is None when the root is not expressible."""

    point: tuple | None
    rank: int
    minpoly: UPoly | None = None

    @property
    def count(self):
        return 1 if self.point is not None else self.minpoly.deg


@dataclass
class AllOfPencil:
    """Every member (except possibly ``exceptions``) has rank <= 2."""

    exceptions: list = dfield(default_factory=list)


def _upoly_matrix(Ma, Mb):
    """Entries of s*Ma + Mb as polynomials in s."""
    return [[UPoly([b, a]) for a, b in zip(ra, rb)] for ra, rb in zip(Ma.entries, Mb.entries)]


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    out = None
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _det(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out if out is not None else m[0][0] * 0


def _minors_gcd(m, k):
    from itertools import combinations

    n = len(m)
    g = UPoly()
    for rows in combinations(range(n), k):
        for cols in combinations(range(n), k):
            d = _det([[m[i][j] for j in cols] for i in rows])
            if d:
                g = upoly_gcd(g, d)
                if g.deg == 0:
                    return g
    return g


def _roots_by_factor(g: UPoly):
    """Split squarefree g into resolved roots and irreducible factors without tower roots."""
    resolved, unresolved = [], []
    if g.deg <= 0:
        return resolved, unresolved
    g, K = _descend(squarefree_part(g))
    for h in irreducible_factors(g, K):
        rs = find_roots(h)
        if rs.unresolved:
            unresolved.append(h)
        else:
            resolved.extend(rs.roots)
    return resolved, unresolved


def _divides(h, g):
    return not g or not (g % h)


def pencil_rank_le2_members(Ma: MuSymMatrix, Mb: MuSymMatrix, mode: str | None = None):
    """Members of the pencil t0*Ma + t1*Mb of (mu-)rank <= 2, as distinct projective roots.

    Returns a list of ``PencilRoot`` or ``AllOfPencil``.  Parameter points are
    (t0, t1) normalized with first nonzero coordinate 1.
    """
    fam = SpanFamily([Ma, Mb])
    mode = _mode_of(fam, mode)
    if mode == "commutative":
        return _pencil_commutative(fam)
    if fam.n != 3:
        raise PencilError("exact skew pencils need n = 3")
    return _pencil_skew3(fam)


def _pencil_commutative(fam):
    Ma, Mb = fam.basis
    n = fam.n
    if n < 3:
        return AllOfPencil()
    m = _upoly_matrix(Ma, Mb)
    g3 = _minors_gcd(m, 3)
    if not g3:
        return AllOfPencil()
    g2 = _minors_gcd(m, 2)
    resolved, unresolved = _roots_by_factor(g3)
    out = []
    if symmetric_rank(Ma) <= 2:
        out.append(PencilRoot((1, 0), symmetric_rank(Ma)))
    for s in resolved:
        out.append(PencilRoot(normalize_point((s, 1)), symmetric_rank(fam.member((s, 1)))))
    for h in unresolved:
        out.append(PencilRoot(None, 1 if _divides(h, g2) else 2, h))
    return out


def _skew_pencil_polys(fam):
    """a..f, D1..D6, D7 and the radical-free D8 product along s*Ma + Mb."""
    mu = fam.mu
    ca = abcdef(tau(fam.basis[0]))
    cb = abcdef(tau(fam.basis[1]))
    a, b, c, d, e, f = (UPoly([y, x]) for x, y in zip(ca, cb))
    m12, m13, m23 = mu(1, 2), mu(1, 3), mu(2, 3)
    m21, m31 = mu(2, 1), mu(3, 1)
    D = [
        d * d * 4 - a * b * (1 + m12) ** 2,
        e * e * 4 - a * c * (1 + m13) ** 2,
        f * f * 4 - b * c * (1 + m23) ** 2,
        d * e * (2 * (1 + m23)) - a * f * ((1 + m12) * (1 + m13)),
        e * f * (2 * (1 + m12)) - c * d * ((1 + m13) * (1 + m23)),
        d * f * (2 * (1 + m13)) - b * e * ((1 + m12) * (1 + m23)),
    ]
    d7 = (c * d * d * m23 - d * e * f * 2 + b * e * e) * (
        c * d * d * (m13 * m21) - d * e * f * 2 + b * e * e * (m12 * m23 * m31)
    )
    # product of mu21(d+X)(e-Y) + kappa(d-X)(e+Y) - 2af over the four sign choices,
    # with X^2 = d^2 - mu12 ab and Y^2 = e^2 - mu13 ac (a need not be 1 here)
    kappa = m23 * m31
    X2 = d * d - a * b * m12
    Y2 = e * e - a * c * m13
    P = d * e * (m21 + kappa) - a * f * 2
    alpha = e * (m21 - kappa)
    beta = d * (kappa - m21)
    gamma = -(m21 + kappa)
    R = P * P + X2 * Y2 * (gamma * gamma) - alpha * alpha * X2 - beta * beta * Y2
    W = P * gamma - alpha * beta
    N = R * R - W * W * X2 * Y2 * 4
    return a, D, d7, N


def _pencil_skew3(fam):
    Ma, _ = fam.basis
    a, D, d7, N = _skew_pencil_polys(fam)
    if not a:
        cond = d7
    else:
        cond = N
        if a.deg == 1:
            s0 = -a.c[0] * inverse(a.c[1])
            if not d7(s0):
                # member with a = 0 is decided by D7
                cond = N * UPoly([-s0, 1])
    g1 = UPoly()
    for x in D:
        g1 = upoly_gcd(g1, x)
    out = []
    rank_inf = mu_rank3(tau(Ma))
    if not cond:
        exc = [] if rank_inf <= 2 else [(1, 0)]
        if a and a.deg == 1:
            s0 = -a.c[0] * inverse(a.c[1])
            if d7(s0):
                exc.append(normalize_point((s0, 1)))
        return AllOfPencil(exc)
    if rank_inf <= 2:
        out.append(PencilRoot((1, 0), rank_inf))
    resolved, unresolved = _roots_by_factor(cond)
    for s in resolved:
        r = mu_rank3(fam.form((s, 1)))
        if r <= 2:
            out.append(PencilRoot(normalize_point((s, 1)), r))
    for h in unresolved:
        # a(s) != 0 at such roots (deg h >= 3), so N(s) = 0 means mu-rank <= 2
        out.append(PencilRoot(None, 1 if _divides(h, g1) else 2, h))
    return out


# ---------------------------------------------------------------- specialization to F_q


def _specializer(Fq):
    cache = {}

    def sp(x):
        if isinstance(x, int):
            return Fq(x)
        if isinstance(x, Fraction):
            if x.denominator % Fq.characteristic == 0:
                raise NoEmbedding(f"{x} has a denominator divisible by {Fq.characteristic}")
            return Fq(x)
        if isinstance(x, GFElement):
            if x.field is Fq:
                return x
            if x.field.characteristic == Fq.characteristic and x.field.m == 1:
                return Fq(x.v)
            raise NoEmbedding(f"cannot map {x.field.spec} into {Fq.spec}")
        if isinstance(x, QExt):
            K = x.field
            if K not in cache:
                r = Fq.sqrt(sp(K.radicand))
                if r is None:
                    raise NoEmbedding(f"{format_scalar(K.radicand)} is not a square in {Fq.spec}")
                cache[K] = r
            return sp(x.a) + sp(x.b) * cache[K]
        raise TypeError(f"cannot specialize {x!r}")

    return sp


def specialize(family: SpanFamily, p: int, e: int = 1) -> SpanFamily:
    """The family with coefficients mapped into F_{p^e}; square roots map to the field's canonical root."""
    Fq = GaloisField(p, e)
    sp = _specializer(Fq)
    mu = MuParams([[sp(x) for x in row] for row in family.mu.m], Fq)
    return SpanFamily([MuSymMatrix([[sp(x) for x in row] for row in M.entries], mu) for M in family.basis])


def projective_points(K, m):
    """P^{m-1}(K), first nonzero coordinate 1, in a fixed order."""
    els = K.elements()
    for lead in range(m):
        for rest in iproduct(els, repeat=m - 1 - lead):
            yield (K.zero,) * lead + (K.one,) + rest


def _scan_chunk(args):
    family, mode, lead, first_idx = args
    K = family.field
    els = K.elements()
    m = family.m
    out = []
    tails = iproduct(els, repeat=m - 2 - lead) if m - 2 - lead >= 0 else [()]
    for rest in tails:
        if lead == m - 1:
            t = (K.zero,) * lead + (K.one,)
        else:
            t = (K.zero,) * lead + (K.one, els[first_idx]) + rest
        info = classify_member(family.member(t), mode)
        if _slot(info, mode) is not None:
            out.append((t, info))
    return out


def scan_parameter_space(family: SpanFamily, p: int, e: int = 1, mode: str | None = None, threads: int | None = None):
    """Classify every member with parameters in P^{m-1}(F_{p^e}); evidence, not proof."""
    mode = _mode_of(family, mode)
    q = p**e
    npts = sum(q**k for k in range(family.m))
    if npts > SCAN_LIMIT:
        raise ScanTooLarge(f"{npts} parameter points exceed the limit {SCAN_LIMIT}")
    fam = specialize(family, p, e)
    if threads is None:
        threads = int(os.environ.get("SCK_THREADS", "1") or 1)
    jobs = []
    for lead in range(fam.m):
        if lead == fam.m - 1:
            jobs.append((fam, mode, lead, 0))
        else:
            jobs.extend((fam, mode, lead, k) for k in range(q))
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(j) for j in jobs]
    items = [it for part in parts for it in part]
    return _tally(items, mode, "ScanEvidence", [fam.field.spec])


# ---------------------------------------------------------------- entry point


def count_point_modules(
    family: SpanFamily,
    mode: str | None = None,
    strategy: str = "candidates",
    candidates=None,
    scan=None,
    threads=None,
) -> PointCountReport:
    mode = _mode_of(family, mode)
    if strategy == "candidates":
        items = []
        seen = set()
        for t in candidates or []:
            t = normalize_point(tuple(t))
            if t in seen:
                continue
            seen.add(t)
            items.append((t, classify_member(family.member(t), mode)))
        fields = sorted({join_fields([family.field] + [field_of(x) for x in t if not isinstance(x, int)]).spec for t in seen})
        return _tally(items, mode, "CertifiedCandidates", fields)
    if strategy == "scan":
        p, e = scan if scan is not None else (7, 1)
        return scan_parameter_space(family, p, e, mode, threads)
    if strategy == "pencil":
        if family.m != 2:
            raise PencilError(f"exact pencil enumeration needs a 2-dimensional span, got {family.m}")
        roots = pencil_rank_le2_members(*family.basis, mode=mode)
        if isinstance(roots, AllOfPencil):
            rep = PointCountReport(mode, None, None, [], "ExactPencil", [family.field.spec])
            rep.anomalies.append("every member of the pencil has rank <= 2")
            return rep
        items = [(r.point, classify_member(family.member(r.point), mode)) for r in roots if r.point is not None]
        fields = sorted({join_fields([family.field] + [field_of(x) for x in t if not isinstance(x, int)]).spec for t, _ in items} | {family.field.spec})
        rep = _tally(items, mode, "ExactPencil", fields)
        extra = [r for r in roots if r.point is None]
        if extra:
            if mode == "commutative":
                for r in extra:
                    if r.rank == 1:
                        rep.first += r.count
                    else:
                        rep.second += r.count
                    rep.witnesses.append({"minpoly": str(r.minpoly), "rank": r.rank, "conjugates": r.count})
            else:
                rep.unresolved = sum(r.count for r in extra)
                rep.anomalies.append(f"{rep.unresolved} members lie outside square-root towers; factorizations not counted")
        return rep
    raise ValueError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------- planar cubic divisors


def _restriction(linear_form, n, K):
    """n x (n-1) matrix P with z = P w parametrizing the hyperplane linear_form = 0."""
    l = [K(x) for x in linear_form]
    k = max((i for i in range(n) if l[i]), default=None)
    if k is None:
        raise ValueError("linear form is zero")
    keep = [i for i in range(n) if i != k]
    P = [[K.zero] * (n - 1) for _ in range(n)]
    for col, i in enumerate(keep):
        P[i][col] = K.one
        P[k][col] = -l[i] * inverse(l[k])
    return P


def planar_rank2_divisor(net: SpanFamily, linear_form) -> MPoly:
    """det of the net restricted to the hyperplane linear_form = 0, a cubic in t1, t2, t3."""
    if not net.mu.is_commutative():
        raise ValueError("planar divisors are defined for commuting variables")
    if net.m != 3 or net.n != 4:
        raise ValueError("need a net of quadrics in 4 variables")
    K = net.field
    P = _restriction(linear_form, 4, K)
    t = MPoly.gens(3)
    mat = [[MPoly(3) for _ in range(3)] for _ in range(3)]
    for tk, M in zip(t, net.basis):
        R = [[sum((P[i][a] * M.entries[i][j] * P[j][b] for i in range(4) for j in range(4)), K.zero) for b in range(3)] for a in range(3)]
        for a in range(3):
            for b in range(3):
                if R[a][b]:
                    mat[a][b] = mat[a][b] + tk * R[a][b]
    return _det(mat)


def intersect_plane_cubics(F1: MPoly, F2: MPoly):
    """Distinct common zeros of two plane curves; raises InfiniteZeroSet on a shared component."""
    return projective_zeros([F1, F2])


def verify_sv_bounds(m: int, r1: int, r2: int) -> bool:
    return m - r1 <= r2 <= 2 * (m - r1) + 1


@dataclass
class WebConstruction:
    divisors: tuple
    intersections: list
    members: list
    m: int


def rank2_members_through(web: SpanFamily, q_index: int = 0, factors=None) -> WebConstruction:
    """Rank <= 2 members of a web, built from the planar divisors of Q = basis[q_index].

    Q must factor as a product of two independent linear forms (given or
    found).  Each intersection point t of the two divisors gives a net member
    N_t, and the rank <= 2 members of the pencil (Q, N_t) are collected.
    """
    if web.m != 4:
        raise ValueError("need a web")
    Q = web.basis[q_index]
    net_idx = [k for k in range(4) if k != q_index]
    net = SpanFamily([web.basis[k] for k in net_idx])
    if factors is None:
        facs = factor_quadratic(tau(Q))
        if not facs or facs[0].proportional():
            raise ValueError("Q is not a product of two independent linear forms")
        factors = (facs[0].left, facs[0].right)
    F = tuple(planar_rank2_divisor(net, l) for l in factors)
    pts = intersect_plane_cubics(*F)
    members = []
    seen = set()

    def add(tweb, r):
        key = normalize_point(tweb)
        if key not in seen:
            seen.add(key)
            members.append((key, r))

    for t in pts.points:
        full = [0] * 4
        for k, x in zip(net_idx, t):
            full[k] = x
        Nt = web.member(full)
        roots = pencil_rank_le2_members(Q, Nt, "commutative")
        if isinstance(roots, AllOfPencil):
            raise ValueError("a pencil through Q consists of rank <= 2 quadrics")
        for r in roots:
            if r.point is None:
                continue
            s0, s1 = r.point
            tweb = [s1 * x for x in full]
            tweb[q_index] = tweb[q_index] + s0
            add(tweb, r.rank)
    return WebConstruction(F, pts.points, members, pts.count)
