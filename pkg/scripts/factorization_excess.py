"""Search skew ternary quadrics over F_p for more than two factorizations.

    python3 scripts/factorization_excess.py --p 3 5 7 --limit 10
"""

import argparse
import itertools

from skewclifford.quadform import factor_quadratic, mu_rank3
from skewclifford.scalars import GaloisField
from skewclifford.skewring import MuParams, SkewPoly

PAIRS = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]


def mono(i, j):
    e = [0, 0, 0]
    e[i] += 1
    e[j] += 1
    return tuple(e)


def diagonal_search(p, limit):
    # diagonal forms already show the effect; full search over all 6 coefficients is p^6 per mu
    F = GaloisField(p)
    hits = []
    for mu_vals in itertools.product(range(1, p), repeat=3):
        mu = MuParams.from_upper(3, dict(zip([(1, 2), (1, 3), (2, 3)], mu_vals)), F)
        for d in itertools.product(range(p), repeat=3):
            if not any(d):
                continue
            Q = SkewPoly(mu, {mono(i, i): F(c) for i, c in enumerate(d) if c})
            facs = factor_quadratic(Q)
            if len(facs) > 2:
                hits.append((mu_vals, d, mu_rank3(Q), len(facs)))
                if len(hits) >= limit:
                    return hits
    return hits


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, nargs="+", default=[3, 5])
    ap.add_argument("--limit", type=int, default=10)
    args = ap.parse_args()
    for p in args.p:
        hits = diagonal_search(p, args.limit)
        print(f"F_{p}: {len(hits)} diagonal forms with > 2 factorizations (limit {args.limit})")
        for mu_vals, d, r, n in hits:
            print(f"  mu={mu_vals} diag={d} mu_rank={r} factorizations={n}")
