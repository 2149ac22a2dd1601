import json
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings

from skewclifford.scalars import QQ, GaloisField, field_from_spec
from skewclifford.skewring import MuParams, SkewPoly, parse_skewpoly

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "skewclifford" / "fixtures"


def fixture_json(name):
    return json.loads((FIXTURES / f"{name}.json").read_text())


def mu3(m12, m13, m23, field=QQ):
    return MuParams.from_upper(3, {(1, 2): m12, (1, 3): m13, (2, 3): m23}, field)


def cav_mu():
    K = field_from_spec("QQ(i)")
    i = K.gen
    vals = {(1, 2): 1, (1, 3): -i, (1, 4): i, (2, 3): 1, (2, 4): -1, (3, 4): -1}
    return MuParams.from_upper(4, vals, K)


def cav_forms(mu=None):
    mu = mu or cav_mu()
    texts = ["z1*z2", "z3^2", "z1^2 - z2*z4", "z2^2 + z4^2 - z2*z3"]
    return [parse_skewpoly(t, mu) for t in texts]


def random_form(mu, rng, bound=3):
    """Random quadratic SkewPoly with small integer coefficients."""
    n = mu.n
    terms = {}
    for i in range(n):
        for j in range(i, n):
            c = rng.randint(-bound, bound)
            if c:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = mu.field(c)
    return SkewPoly(mu, terms)


def random_mu3(p, rng):
    F = GaloisField(p)
    return mu3(*(rng.randrange(1, p) for _ in range(3)), field=F)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def nvz_spec():
    from skewclifford.clifford import GSCASpec

    mu = mu3(1, 2, Fraction(1, 2))
    M1 = [[2, 0, 0], [0, 0, 0], [0, 0, 0]]
    M2 = [[0, 0, 0], [0, 2, 0], [0, 0, 0]]
    M3 = [[0, 1, 0], [1, 0, 0], [0, 0, 2]]
    return GSCASpec(mu, [M1, M2, M3])
