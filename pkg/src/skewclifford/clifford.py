"""Graded (skew) Clifford algebras from mu-symmetric matrices and their regularity checks."""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .freealg import QuadraticPresentation, algebra_dims
from .linalg import Echelon, rank, solve
from .quadform import MuSymMatrix, tau
from .scalars import format_scalar
from .skewring import (
    MuParams,
    SkewPoly,
    Unknown,
    graded_dim,
    is_finite_dimensional_quotient,
    quotient_engine,
)
from .tensor import NCPoly

DEFAULT_DMAX = 12


class NotEliminable(ValueError):
    """The matrices are linearly dependent, so the y's are not all quadratic in the x's."""


@dataclass
class GSCASpec:
    mu: MuParams
    matrices: list

    def __post_init__(self):
        self.matrices = [m if isinstance(m, MuSymMatrix) else MuSymMatrix(m, self.mu) for m in self.matrices]
        if len(self.matrices) != self.mu.n:
            raise ValueError("need exactly n matrices")

    @property
    def n(self):
        return self.mu.n

    @property
    def field(self):
        return self.mu.field

    def independent(self) -> bool:
        rows = [[x for r in M.entries for x in r] for M in self.matrices]
        return rank(rows) == len(rows)


@dataclass
class Relation:
    """x_i x_j + mu_ij x_j x_i = sum_k coeffs[k] y_k."""

    i: int
    j: int
    lhs: NCPoly
    coeffs: list

    def fmt(self):
        rhs = " + ".join(
            (f"y{k + 1}" if c == 1 else f"({format_scalar(c)})*y{k + 1}") for k, c in enumerate(self.coeffs) if c
        )
        return f"{self.lhs.fmt()} = {rhs or '0'}"


@dataclass
class GSCAPresentation:
    spec: GSCASpec
    relations: list
    eliminated: QuadraticPresentation | None = None
    y_values: list | None = None
    pivots: list = dfield(default_factory=list)


def build_relations(spec: GSCASpec) -> GSCAPresentation:
    n, mu = spec.n, spec.mu
    rels = []
    for i in range(n):
        for j in range(i, n):
            lhs = NCPoly({(i, j): 1}) + NCPoly({(j, i): mu.m[i][j]})
            rels.append(Relation(i, j, lhs, [M.entries[i][j] for M in spec.matrices]))
    return GSCAPresentation(spec, rels)


def eliminate_y(pres: GSCAPresentation) -> GSCAPresentation:
    """Solve for the y's on the lexicographically first invertible set of relations."""
    spec = pres.spec
    n = spec.n
    E = Echelon()
    chosen = []
    for r_idx, rel in enumerate(pres.relations):
        if E.add({k: c for k, c in enumerate(rel.coeffs) if c}):
            chosen.append(r_idx)
        if len(chosen) == n:
            break
    if len(chosen) < n:
        raise NotEliminable("M_1..M_n are linearly dependent")
    A = [pres.relations[r].coeffs for r in chosen]
    # y = A^{-1} * (lhs of chosen relations); columns of A^{-1} via unit solves
    inv_cols = []
    for r in range(n):
        unit = [1 if k == r else 0 for k in range(n)]
        inv_cols.append(solve(A, unit, spec.field.zero))
    y_vals = []
    for k in range(n):
        y = NCPoly()
        for r in range(n):
            c = inv_cols[r][k]
            if c:
                y = y + pres.relations[chosen[r]].lhs * c
        y_vals.append(y)
    remaining = []
    for idx, rel in enumerate(pres.relations):
        if idx in chosen:
            continue
        r = rel.lhs
        for k, c in enumerate(rel.coeffs):
            if c:
                r = r - y_vals[k] * c
        remaining.append(r)
    P = QuadraticPresentation(n, remaining, spec.field)
    return GSCAPresentation(spec, pres.relations, P, y_vals, chosen)


def associated_quadrics(spec: GSCASpec) -> list:
    return [tau(M) for M in spec.matrices]


# ---------------------------------------------------------------- checks


@dataclass
class NormalityCertificate:
    index: int
    rank_left: int
    rank_right: int
    rank_sum: int
    normal: bool

    def to_json(self):
        return {
            "q": self.index + 1,
            "rank_zq": self.rank_left,
            "rank_qz": self.rank_right,
            "rank_sum": self.rank_sum,
            "normal": self.normal,
        }


def _nf_rows(engine, polys):
    return [engine.normal_form(p.lift()) for p in polys]


def check_normalizing(qs, mu: MuParams | None = None, order=None) -> list:
    """For each q_j, compare span{z_i q_j} and span{q_j z_i} in degree 3 of S/<q_1..q_{j-1}>.

    The quotient is generated in degree one, so q_j is normal there exactly
    when left and right multiples by generators agree in degree 3.
    """
    qs = list(qs)
    if mu is None:
        mu = qs[0].mu
    if order is not None:
        qs = [qs[k] for k in order]
    for q in qs:
        if q and q.degrees != {2}:
            raise ValueError("normalizing check needs quadratic forms")
    certs = []
    z = [SkewPoly.gen(mu, i) for i in range(1, mu.n + 1)]
    for j, q in enumerate(qs):
        engine = quotient_engine(qs[:j], mu)
        left = _nf_rows(engine, [zi * q for zi in z])
        right = _nf_rows(engine, [q * zi for zi in z])
        rl = Echelon(left).rank
        rr = Echelon(right).rank
        rs = Echelon(left + right).rank
        certs.append(NormalityCertificate(j, rl, rr, rs, rl == rr == rs))
    return certs


def check_normal_in_degree(qs, j, d, mu=None) -> bool:
    """q_j S_d == S_d q_j in the quotient by q_1..q_{j-1}, checked directly in degree d+2."""
    from .skewring import monomials

    if mu is None:
        mu = qs[0].mu
    engine = quotient_engine(qs[:j], mu)
    q = qs[j]
    mons = [SkewPoly(mu, {e: mu.field.one}) for e in monomials(mu.n, d)]
    left = _nf_rows(engine, [m * q for m in mons])
    right = _nf_rows(engine, [q * m for m in mons])
    rl, rr, rs = Echelon(left).rank, Echelon(right).rank, Echelon(left + right).rank
    return rl == rr == rs


def check_base_point_free(qs, dmax: int = DEFAULT_DMAX, mu: MuParams | None = None):
    return is_finite_dimensional_quotient(qs, dmax, mu)


@dataclass
class RegularityReport:
    normalizing: list
    bpf: object
    hilbert_dims: list
    hilbert_expected: list
    dmax: int
    hilbert_dmax: int
    verdict: str
    reason: str = ""

    @property
    def hilbert_ok(self):
        return self.hilbert_dims == self.hilbert_expected

    @property
    def regular(self):
        return self.verdict == "Regular"

    def to_json(self):
        return {
            "normalizing": [c.to_json() for c in self.normalizing],
            "bpf": self.bpf.to_json(),
            "hilbert_ok": self.hilbert_ok,
            "hilbert_dims": self.hilbert_dims,
            "hilbert_expected": self.hilbert_expected,
            "dmax": self.dmax,
            "hilbert_dmax": self.hilbert_dmax,
            "verdict": self.verdict,
            "reason": self.reason,
            "note": "criteria bundle: normalizing + base-point free + Hilbert function; not a homological proof",
        }


def check_regularity(spec: GSCASpec, dmax: int = DEFAULT_DMAX, hilbert_dmax: int | None = None) -> RegularityReport:
    """Normalizing + base-point-free + Hilbert function of the eliminated presentation."""
    hd = dmax if hilbert_dmax is None else hilbert_dmax
    qs = associated_quadrics(spec)
    pres = eliminate_y(build_relations(spec))
    certs = check_normalizing(qs, spec.mu)
    bpf = check_base_point_free(qs, dmax, spec.mu)
    dims = algebra_dims(pres.eliminated, hd)
    expected = [graded_dim(spec.n, d) for d in range(hd + 1)]
    if not all(c.normal for c in certs):
        bad = [c.index + 1 for c in certs if not c.normal]
        verdict, reason = "NotRegular", f"normalizing fails at q{bad[0]}"
    elif dims != expected:
        verdict, reason = "NotRegular", "Hilbert function differs from 1/(1-t)^n"
    elif isinstance(bpf, Unknown):
        verdict, reason = "Inconclusive", f"quotient dimension not proved finite by degree {dmax}"
    else:
        verdict, reason = "Regular", ""
    return RegularityReport(certs, bpf, dims, expected, dmax, hd, verdict, reason)
