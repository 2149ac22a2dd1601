"""Exact scalar fields.

Three kinds of field are supported, all of characteristic different from 2:

* ``QQ``, the rationals, whose elements are plain :class:`fractions.Fraction`;
* ``GaloisField(p, m)``, the finite field with ``p**m`` elements, built on the
  least (lexicographic) monic irreducible polynomial of degree ``m`` over F_p;
* ``QuadraticExtension(base, d)``, the field ``base(sqrt(d))`` for a non-square
  ``d`` of ``base``.  Chains of these form square-root towers.

Algebraic closure is approximated lazily: :func:`sqrt_adjoin` returns a square
root of its argument, extending the tower by one level when no root exists yet.
Elements of a subfield mix freely with elements of any tower above it; mixing
elements of unrelated towers raises :class:`FieldMismatch`.
"""

from __future__ import annotations

import ast
import itertools
import re
from fractions import Fraction
from functools import reduce

MAX_TOWER = 6


class FieldMismatch(TypeError):
    pass


class TowerOverflow(ArithmeticError):
    pass


class ScalarParseError(ValueError):
    pass


class Field:
    characteristic = 0
    level = 0
    base = None

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def prime_field(self):
        f = self
        while f.base is not None:
            f = f.base
        return f

    @property
    def is_finite(self):
        return self.characteristic != 0

    def contains(self, other: "Field") -> bool:
        f = self
        while f is not None:
            if f is other:
                return True
            f = f.base
        return False

    def generators(self) -> dict:
        """Names usable in scalar literals, mapped to elements of this field."""
        names = {}
        f = self
        while f is not None:
            if isinstance(f, QuadraticExtension):
                names[f"s{f.level}"] = self(f.gen)
                if f.radicand == -1 and "i" not in names:
                    names["i"] = self(f.gen)
            elif isinstance(f, GaloisField) and f.m > 1:
                names["g"] = self(f.gen)
            f = f.base
        return names

    def __repr__(self):
        return self.spec


# ---------------------------------------------------------------- rationals


class RationalField(Field):
    spec = "QQ"

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return parse_scalar(x, self)
        if isinstance(x, FieldElement):
            raise FieldMismatch(f"cannot coerce {x!r} into QQ")
        raise TypeError(f"cannot coerce {type(x).__name__} into QQ")

    def sqrt(self, x):
        x = Fraction(x)
        if x < 0:
            return None
        num, den = x.numerator, x.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            return None
        return Fraction(rn, rd)

    def __reduce__(self):
        return (_get_qq, ())


def _isqrt_exact(n: int):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


QQ = RationalField()


def _get_qq():
    return QQ


# ---------------------------------------------------------------- element base


class FieldElement:
    __slots__ = ()

    def _coerce(self, other):
        """Return ``other`` inside ``self.field`` or None if it lives above it."""
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        if isinstance(other, FieldElement):
            if other.field is self.field:
                return other
            if self.field.contains(other.field):
                return self.field(other)
            if other.field.contains(self.field):
                return None
            raise FieldMismatch(f"{self.field.spec} and {other.field.spec} are unrelated")
        return NotImplemented

    def _lift_to(self, other):
        """self moved into the larger field of ``other`` (same-type operands skip reflection)."""
        return other.field(self)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return self._lift_to(other)._add(other)
        return self._add(o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return self._lift_to(other)._add(other._neg())
        return self._add(o._neg())

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return other._add(self._lift_to(other)._neg())
        return o._add(self._neg())

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return self._lift_to(other)._mul(other)
        return self._mul(o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return self._lift_to(other)._mul(other._inv())
        return self._mul(o._inv())

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return other._mul(self._lift_to(other)._inv())
        return o._mul(self._inv())

    def __neg__(self):
        return self._neg()

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self._inv() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result._mul(base)
            base = base._mul(base)
            e >>= 1
        return result

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except FieldMismatch:
            return False
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return other == self
        return self._eq(o)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __bool__(self):
        return not self._eq(self.field.zero)

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"<{format_scalar(self)} in {self.field.spec}>"


# ---------------------------------------------------------------- finite fields


def _poly_mulmod(a, b, mod, p):
    """Multiply coefficient lists (low degree first) modulo a monic ``mod``."""
    m = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    for k in range(len(res) - 1, m - 1, -1):
        c = res[k]
        if c:
            for j in range(m + 1):
                res[k - m + j] = (res[k - m + j] - c * mod[j]) % p
    return (res + [0] * m)[:m]


def _is_irreducible(mod, p):
    """Irreducibility of a monic polynomial over F_p by trial division."""
    m = len(mod) - 1
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            rem = list(mod)
            for k in range(len(rem) - 1, d - 1, -1):
                c = rem[k]
                if c:
                    for j in range(d + 1):
                        rem[k - d + j] = (rem[k - d + j] - c * div[j]) % p
            if not any(rem[:d]):
                return False
    return True


def _least_irreducible(p, m):
    # lexicographic on (c_{m-1}, ..., c_0), the monic polynomial's coefficients
    for coeffs in itertools.product(range(p), repeat=m):
        mod = list(reversed(coeffs)) + [1]
        if mod[0] and _is_irreducible(mod, p):
            return tuple(mod)
    raise ValueError(f"no irreducible polynomial of degree {m} over F_{p}")


def _is_prime(n):
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


class GaloisField(Field):
    """F_{p^m}; elements encode their coefficient vector in base p."""

    _cache: dict = {}
    TABLE_LIMIT = 1 << 20

    def __new__(cls, p: int, m: int = 1):
        key = (p, m)
        if key in cls._cache:
            return cls._cache[key]
        if not _is_prime(p) or p == 2:
            raise ValueError(f"GF({p}^{m}): characteristic must be an odd prime")
        if m < 1:
            raise ValueError("extension degree must be positive")
        self = super().__new__(cls)
        self.p, self.m = p, m
        self.characteristic = p
        self.order = p**m
        self.modulus = _least_irreducible(p, m) if m > 1 else (0, 1)
        self._exp = self._log = None
        if m > 1 and self.order <= cls.TABLE_LIMIT:
            self._build_tables()
        cls._cache[key] = self
        return self

    def __reduce__(self):
        return (GaloisField, (self.p, self.m))

    @property
    def spec(self):
        return f"GF({self.p})" if self.m == 1 else f"GF({self.p}^{self.m})"

    def _digits(self, v):
        out = []
        for _ in range(self.m):
            v, r = divmod(v, self.p)
            out.append(r)
        return out

    def _undigits(self, ds):
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def _slow_mul(self, u, v):
        return self._undigits(_poly_mulmod(self._digits(u), self._digits(v), self.modulus, self.p))

    def _build_tables(self):
        q = self.order
        for cand in range(self.p, q):
            exp = [0] * (q - 1)
            x = 1
            seen_one = False
            for k in range(q - 1):
                exp[k] = x
                x = self._slow_mul(x, cand)
                if x == 1 and k < q - 2:
                    seen_one = True
                    break
            if not seen_one:
                log = [0] * q
                for k, e in enumerate(exp):
                    log[e] = k
                self._exp, self._log = exp, log
                return

    @property
    def gen(self):
        return GFElement(self, self.p if self.m > 1 else 1)

    def __call__(self, x):
        if isinstance(x, GFElement):
            if x.field is self:
                return x
            raise FieldMismatch(f"cannot coerce {x.field.spec} element into {self.spec}")
        if isinstance(x, int):
            return GFElement(self, x % self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.spec}")
            return GFElement(self, x.numerator * pow(x.denominator, -1, self.p) % self.p)
        if isinstance(x, str):
            return parse_scalar(x, self)
        if isinstance(x, FieldElement):
            raise FieldMismatch(f"cannot coerce {x!r} into {self.spec}")
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.spec}")

    def elements(self):
        return [GFElement(self, v) for v in range(self.order)]

    def from_index(self, v):
        return GFElement(self, v)

    def _add(self, u, v):
        if self.m == 1:
            return (u + v) % self.p
        du, dv = self._digits(u), self._digits(v)
        return self._undigits([(a + b) % self.p for a, b in zip(du, dv)])

    def _neg(self, u):
        if self.m == 1:
            return -u % self.p
        return self._undigits([-a % self.p for a in self._digits(u)])

    def _mul(self, u, v):
        if self.m == 1:
            return u * v % self.p
        if not u or not v:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[u] + self._log[v]) % (self.order - 1)]
        return self._slow_mul(u, v)

    def _inv(self, u):
        if not u:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(u, -1, self.p)
        if self._exp is not None:
            return self._exp[(-self._log[u]) % (self.order - 1)]
        return (GFElement(self, u) ** (self.order - 2)).v

    def is_square(self, x):
        if not x:
            return True
        return x ** ((self.order - 1) // 2) == 1

    def _nonresidue(self):
        if not hasattr(self, "_nr"):
            self._nr = next(e for e in map(self.from_index, range(1, self.order)) if not self.is_square(e))
        return self._nr

    def sqrt(self, x):
        """Tonelli-Shanks; returns the root with the smaller encoding, or None."""
        x = self(x)
        if not x:
            return x
        if not self.is_square(x):
            return None
        q = self.order
        s, t = 0, q - 1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        z = self._nonresidue() if s > 1 else None
        r = x ** ((t + 1) // 2)
        if s > 1:
            c = z**t
            u = x**t
            m = s
            while u != 1:
                i, uu = 0, u
                while uu != 1:
                    uu, i = uu * uu, i + 1
                b = c ** (1 << (m - i - 1))
                r, c = r * b, b * b
                u, m = u * c, i
        other = -r
        return r if r.v <= other.v else other


class GFElement(FieldElement):
    __slots__ = ("field", "v")

    def __init__(self, field, v):
        self.field = field
        self.v = v

    def _add(self, o):
        return GFElement(self.field, self.field._add(self.v, o.v))

    def _neg(self):
        return GFElement(self.field, self.field._neg(self.v))

    def _mul(self, o):
        return GFElement(self.field, self.field._mul(self.v, o.v))

    def _inv(self):
        return GFElement(self.field, self.field._inv(self.v))

    def _eq(self, o):
        return self.v == o.v

    def __hash__(self):
        return hash(self.v) if self.field.m == 1 else hash((self.field.p, self.field.m, self.v))

    def __reduce__(self):
        return (GFElement, (self.field, self.v))


# ---------------------------------------------------------------- quadratic towers


class QuadraticExtension(Field):
    """``base(sqrt(radicand))`` with ``radicand`` a non-square of ``base``."""

    _cache: dict = {}

    def __new__(cls, base: Field, radicand):
        radicand = base(radicand)
        key = (id(base), _key_of(radicand))
        if key in cls._cache:
            return cls._cache[key]
        if base.sqrt(radicand) is not None:
            raise ValueError(f"{format_scalar(radicand)} is already a square in {base.spec}")
        if base.level + 1 > MAX_TOWER:
            raise TowerOverflow(f"square-root tower capped at {MAX_TOWER} adjunctions")
        self = super().__new__(cls)
        self.base = base
        self.radicand = radicand
        self.level = base.level + 1
        self.characteristic = base.characteristic
        if base.is_finite:
            self.order = base.order**2
        cls._cache[key] = self
        return self

    def __reduce__(self):
        return (QuadraticExtension, (self.base, self.radicand))

    @property
    def spec(self):
        rads = []
        f = self
        while isinstance(f, QuadraticExtension):
            rads.append(f"sqrt({format_scalar(f.radicand)})")
            f = f.base
        return f"{f.spec}({', '.join(reversed(rads))})"

    @property
    def radicands(self):
        out = []
        f = self
        while isinstance(f, QuadraticExtension):
            out.append(f.radicand)
            f = f.base
        return list(reversed(out))

    @property
    def gen(self):
        return QExt(self, self.base.zero, self.base.one)

    def __call__(self, x):
        if isinstance(x, QExt) and x.field is self:
            return x
        if isinstance(x, str):
            return parse_scalar(x, self)
        if isinstance(x, FieldElement) and not self.contains(x.field):
            raise FieldMismatch(f"cannot coerce {x.field.spec} element into {self.spec}")
        return QExt(self, self.base(x), self.base.zero)

    def sqrt(self, x):
        """A square root of ``x`` inside this field, or None."""
        x = self(x)
        a, b, d = x.a, x.b, self.radicand
        base = self.base
        if not b:
            r = base.sqrt(a)
            if r is not None:
                return self(r)
            r = base.sqrt(a / d)
            if r is not None:
                return QExt(self, base.zero, r)
            return None
        n = base.sqrt(a * a - d * b * b)
        if n is None:
            return None
        for t in ((a + n) / 2, (a - n) / 2):
            s = base.sqrt(t)
            if s is not None and s:
                return QExt(self, s, b / (2 * s))
        return None

    def random_element(self, rng, bound=5):
        return QExt(self, _random_in(self.base, rng, bound), _random_in(self.base, rng, bound))

    def elements(self):
        if not self.is_finite:
            raise ValueError("infinite field")
        bs = self.base.elements()
        return [QExt(self, a, b) for b in bs for a in bs]


def _random_in(field, rng, bound):
    if field is QQ:
        return Fraction(rng.randint(-bound, bound))
    if isinstance(field, GaloisField):
        return field.from_index(rng.randrange(field.order))
    return field.random_element(rng, bound)


def _key_of(x):
    if isinstance(x, Fraction):
        return ("Q", x)
    if isinstance(x, GFElement):
        return ("G", x.field.p, x.field.m, x.v)
    return ("E", id(x.field), _key_of(x.a), _key_of(x.b))


class QExt(FieldElement):
    __slots__ = ("field", "a", "b")

    def __init__(self, field, a, b):
        self.field = field
        self.a = a
        self.b = b

    def _add(self, o):
        return QExt(self.field, self.a + o.a, self.b + o.b)

    def _neg(self):
        return QExt(self.field, -self.a, -self.b)

    def _mul(self, o):
        a, b, c, e = self.a, self.b, o.a, o.b
        if not b and not e:
            return QExt(self.field, a * c, b)
        return QExt(self.field, a * c + self.field.radicand * b * e, a * e + b * c)

    def _inv(self):
        a, b = self.a, self.b
        if not b:
            return QExt(self.field, 1 / a, b)
        nrm = a * a - self.field.radicand * b * b
        return QExt(self.field, a / nrm, -b / nrm)

    def _eq(self, o):
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash(self.a) if not self.b else hash((self.a, self.b))

    def __reduce__(self):
        return (QExt, (self.field, self.a, self.b))

    def conjugate(self):
        return QExt(self.field, self.a, -self.b)

    def in_subfield(self):
        """Descend to the smallest tower level holding this value."""
        if self.b:
            return self
        a = self.a
        return a.in_subfield() if isinstance(a, QExt) else a


# ---------------------------------------------------------------- helpers


def field_of(x) -> Field:
    if isinstance(x, FieldElement):
        return x.field
    if isinstance(x, (int, Fraction)):
        return QQ
    raise TypeError(f"not a field element: {x!r}")


def join_fields(fields) -> Field:
    """The largest field of a chain of nested fields."""
    top = None
    for f in fields:
        if f is QQ:
            continue
        if top is None or f.contains(top):
            top = f
        elif not top.contains(f):
            raise FieldMismatch(f"{top.spec} and {f.spec} are unrelated")
    return QQ if top is None else top


def common_field(*values) -> Field:
    return join_fields(field_of(v) for v in values if not isinstance(v, int))


def is_zero(x) -> bool:
    return x == 0


def sqrt_adjoin(x, field: Field | None = None):
    """Return ``(r, K)`` with ``r*r == x`` and ``K`` the (possibly new) field of ``r``."""
    K = field if field is not None else field_of(x)
    x = K(x)
    r = K.sqrt(x)
    if r is not None:
        return r, K
    if K.is_finite:
        # all quadratic extensions of a finite field agree; always build the same one
        L = QuadraticExtension(K, nonresidue(K))
        return L.sqrt(x), L
    L = QuadraticExtension(K, x)
    return L.gen, L


def nonresidue(K: Field):
    """Deterministic non-square of a finite field."""
    if isinstance(K, GaloisField):
        return K._nonresidue()
    if not hasattr(K, "_nr"):
        import random

        rng = random.Random(K.order)
        while True:
            x = K.random_element(rng)
            if x and K.sqrt(x) is None:
                K._nr = x
                break
    return K._nr


def lift(x, field: Field):
    """Coerce ``x`` into ``field`` (which must contain the field of ``x``)."""
    return field(x)


def to_subfield(x):
    """Drop trailing zero tower coordinates so small values stay small."""
    return x.in_subfield() if isinstance(x, QExt) else x


# ---------------------------------------------------------------- literal syntax


def format_scalar(x) -> str:
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, GFElement):
        F = x.field
        if F.m == 1:
            return str(x.v)
        ds = F._digits(x.v)
        terms = []
        for k in range(F.m - 1, -1, -1):
            c = ds[k]
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mon = "g" if k == 1 else f"g^{k}"
                terms.append(mon if c == 1 else f"{c}*{mon}")
        return " + ".join(terms) if terms else "0"
    if isinstance(x, QExt):
        gen = f"s{x.field.level}"
        parts = []
        if x.a:
            parts.append(format_scalar(x.a))
        if x.b:
            cb = format_scalar(x.b)
            if cb == "1":
                parts.append(gen)
            elif cb == "-1":
                parts.append(f"-{gen}")
            elif re.fullmatch(r"-?[0-9]+(/[0-9]+)?", cb):
                parts.append(f"{cb}*{gen}")
            else:
                parts.append(f"({cb})*{gen}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out
    raise TypeError(f"not a scalar: {x!r}")


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def evaluate_expression(text: str, names: dict, lift_int):
    """Safely evaluate an arithmetic expression over the given named values.

    ``lift_int`` turns integer literals into ring elements so that ``1/2``
    divides exactly.  ``^`` is accepted as exponentiation.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ScalarParseError(f"cannot parse {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return lift_int(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ScalarParseError(f"unknown name {node.id!r} in {text!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    e = node.right
                    if isinstance(e, ast.UnaryOp) and isinstance(e.op, ast.USub) and isinstance(e.operand, ast.Constant):
                        return ev(node.left) ** (-e.operand.value)
                    raise ScalarParseError(f"exponents must be integer literals in {text!r}")
                return ev(node.left) ** node.right.value
            if type(node.op) in _BINOPS:
                return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ScalarParseError(f"unsupported syntax in {text!r}")

    return ev(tree)


def parse_scalar(text, field: Field):
    if isinstance(text, (int, Fraction)):
        return field(text)
    if not isinstance(text, str):
        raise ScalarParseError(f"scalar literal must be a string, got {text!r}")
    value = evaluate_expression(text, field.generators(), field)
    return field(value)


_GF_RE = re.compile(r"^GF\(\s*(\d+)\s*(?:\^\s*(\d+))?\s*\)")


def _split_top(s):
    depth, cur, out = 0, "", []
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def field_from_spec(spec: str) -> Field:
    """Parse ``QQ``, ``QQ(i)``, ``QQ(sqrt(2), sqrt(1+s1))``, ``GF(7)``, ``GF(3^2)``..."""
    s = spec.replace(" ", "")
    if s.startswith("QQ"):
        F, rest = QQ, s[2:]
    else:
        m = _GF_RE.match(s)
        if not m:
            raise ScalarParseError(f"unknown field {spec!r}")
        q = int(m.group(1))
        e = int(m.group(2) or 1)
        if m.group(2) is None and not _is_prime(q):
            for p in range(3, q + 1):
                if _is_prime(p) and q % p == 0:
                    k, r = 0, q
                    while r % p == 0:
                        r, k = r // p, k + 1
                    if r != 1:
                        raise ScalarParseError(f"{q} is not a prime power")
                    q, e = p, k
                    break
        F, rest = GaloisField(q, e), s[m.end():]
    if not rest:
        return F
    if not (rest.startswith("(") and rest.endswith(")")):
        raise ScalarParseError(f"malformed field spec {spec!r}")
    for item in _split_top(rest[1:-1]):
        if item in ("i", "I"):
            rad = F(-1)
        else:
            mm = re.fullmatch(r"sqrt\((.*)\)", item)
            if not mm:
                raise ScalarParseError(f"expected sqrt(...) in field spec, got {item!r}")
            rad = parse_scalar(mm.group(1), F)
        F = QuadraticExtension(F, rad)
    return F


def product(values, one=1):
    return reduce(lambda a, b: a * b, values, one)
