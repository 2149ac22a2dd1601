"""Rank-two members of the four-square web: construction over QQ, then exhaustive scans of the net."""

import argparse

from skewclifford.points import SpanFamily, count_point_modules, rank2_members_through, scan_parameter_space, verify_sv_bounds
from skewclifford.skewring import MuParams, parse_skewpoly

def fmt(t):
    return "(" + ", ".join(str(x) for x in t) + ")"


FORMS = ["z1^2 - z2^2", "z1^2 - z3^2", "z1^2 - z4^2", "z1^2 - (z1 + z2 + z3 + z4)^2"]

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", type=int, nargs="+", default=[7, 11])
    args = ap.parse_args()

    one = MuParams.commutative(4)
    web = SpanFamily.from_forms([parse_skewpoly(t, one) for t in FORMS])
    con = rank2_members_through(web)
    print("divisors:")
    for f in con.divisors:
        print("  ", f)
    print(f"intersection points (m={con.m}):", " ".join(fmt(t) for t in con.intersections))
    rep = count_point_modules(web, candidates=[t for t, _ in con.members])
    print(f"members: r2={rep.second} r1={rep.first} total={rep.total} bounds ok={verify_sv_bounds(con.m, rep.first, rep.second)}")
    for t, r in con.members:
        print("  ", fmt(t), "rank", r)
    net = SpanFamily(web.basis[:3])
    for p in args.primes:
        s = scan_parameter_space(net, p)
        print(f"net over F_{p}: r1={s.first} r2={s.second}")
