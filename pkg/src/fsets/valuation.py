"""Factorization in F_p[t] and factored (valuation-vector) torus coordinates.

A torus coordinate in F_p(t)^* is stored as ``unit * prod(pi^e)`` over
monic irreducibles ``pi``.  Unique factorization makes that form canonical,
and Frobenius acts on it by scaling every exponent by p^k while fixing the
unit, so arbitrarily high Frobenius iterates stay cheap.
"""

import random
from functools import lru_cache

from .errors import InvalidArgument, UnsupportedCoordinate
from .exactfield import Poly, RatFunc, TowerElem, poly_gcd


def powmod(base, e, mod):
    result = Poly.const(1, base.p)
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        e >>= 1
        if e:
            base = (base * base) % mod
    return result


def _pth_root(f):
    p = f.p
    return Poly(f.c[::p], p)


def squarefree_decomposition(f):
    """[(g, m)] with f = lc * prod g^m, each g squarefree and pairwise coprime."""
    f = f.monic()
    out = []
    if f.degree < 1:
        return out
    w = f.derivative()
    if w.is_zero:
        return [(g, m * f.p) for g, m in squarefree_decomposition(_pth_root(f))]
    c = poly_gcd(f, w)
    w = f.exact_div(c)
    i = 1
    while not w.is_one:
        y = poly_gcd(w, c)
        z = w.exact_div(y)
        if not z.is_one:
            out.append((z, i))
        i += 1
        w, c = y, c.exact_div(y)
    if not c.is_one:
        out += [(g, m * f.p) for g, m in squarefree_decomposition(_pth_root(c))]
    return out


def distinct_degree(f):
    out = []
    t = Poly.t(f.p)
    h = t
    i = 1
    while f.degree >= 2 * i:
        h = powmod(h, f.p, f)
        g = poly_gcd(f, h - t)
        if not g.is_one:
            out.append((g, i))
            f = f.exact_div(g)
            h = h % f
        i += 1
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def equal_degree(f, d, rng):
    if f.degree == d:
        return [f]
    p = f.p
    e = (p**d - 1) // 2
    while True:
        a = Poly([rng.randrange(p) for _ in range(f.degree)], p)
        if a.degree < 1:
            continue
        g = poly_gcd(f, powmod(a, e, f) - 1)
        if 0 < g.degree < f.degree:
            return equal_degree(g, d, rng) + equal_degree(f.exact_div(g), d, rng)


@lru_cache(maxsize=4096)
def factor_poly(f):
    """(leading coefficient, ((prime, exponent), ...)) sorted by prime."""
    if f.is_zero:
        raise InvalidArgument("cannot factor zero")
    rng = random.Random(f.degree * 7919 + f.p)
    exps = {}
    for g, m in squarefree_decomposition(f):
        for block, d in distinct_degree(g):
            for pi in equal_degree(block, d, rng):
                exps[pi] = exps.get(pi, 0) + m
    return f.lc, tuple(sorted(exps.items(), key=lambda kv: kv[0].key()))


@lru_cache(maxsize=None)
def primitive_root(p):
    fs, n, d = set(), p - 1, 2
    while d * d <= n:
        while n % d == 0:
            fs.add(d)
            n //= d
        d += 1
    if n > 1:
        fs.add(n)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fs):
            return g
    return 1


@lru_cache(maxsize=None)
def _dlog_table(p):
    g = primitive_root(p)
    table, x = {}, 1
    for i in range(p - 1):
        table[x] = i
        x = x * g % p
    return table


def dlog(u, p):
    """Discrete log of u in F_p^* to the base primitive_root(p)."""
    return _dlog_table(p)[u % p]


class FactoredUnit:
    """unit * prod pi^e in F_p(t)^*, exps sorted by prime, no zero exponents."""

    __slots__ = ("p", "unit", "exps", "_h")

    def __init__(self, p, unit, exps):
        self.p = p
        self.unit = unit % p
        if self.unit == 0:
            raise InvalidArgument("zero is not a unit")
        self.exps = exps
        self._h = None

    @classmethod
    def one(cls, p):
        return cls(p, 1, ())

    @classmethod
    def from_ratfunc(cls, r):
        if r.is_zero:
            raise InvalidArgument("zero has no factorization")
        lc_n, fn = factor_poly(r.num)
        _, fd = factor_poly(r.den)
        exps = dict(fn)
        for pi, e in fd:
            exps[pi] = exps.get(pi, 0) - e
        return cls._build(r.p, lc_n, exps)

    @classmethod
    def from_tower(cls, x):
        if not isinstance(x, TowerElem) or not x.in_base:
            raise UnsupportedCoordinate(f"torus coordinate {x} does not lie in F_p(t)")
        return cls.from_ratfunc(x.a)

    @classmethod
    def _build(cls, p, unit, exps):
        items = tuple(sorted(((k, v) for k, v in exps.items() if v), key=lambda kv: kv[0].key()))
        return cls(p, unit, items)

    def __mul__(self, other):
        exps = dict(self.exps)
        for pi, e in other.exps:
            exps[pi] = exps.get(pi, 0) + e
        return FactoredUnit._build(self.p, self.unit * other.unit, exps)

    def inv(self):
        return FactoredUnit(self.p, pow(self.unit, -1, self.p), tuple((pi, -e) for pi, e in self.exps))

    def __pow__(self, n):
        if n == 0:
            return FactoredUnit.one(self.p)
        unit = pow(self.unit, n, self.p) if n > 0 else pow(pow(self.unit, -1, self.p), -n, self.p)
        return FactoredUnit(self.p, unit, tuple((pi, e * n) for pi, e in self.exps))

    def __truediv__(self, other):
        return self * other.inv()

    def frobenius(self, k):
        """Raise to p^k: units of F_p are fixed, exponents scale."""
        if k == 0:
            return self
        s = self.p**k
        return FactoredUnit(self.p, self.unit, tuple((pi, e * s) for pi, e in self.exps))

    @property
    def is_one(self):
        return self.unit == 1 and not self.exps

    def support(self):
        return [pi for pi, _ in self.exps]

    def valuation(self, place):
        """Exponent at a prime; ``None`` means minus the valuation at infinity."""
        if place is None:
            return sum(e * pi.degree for pi, e in self.exps)
        for pi, e in self.exps:
            if pi == place:
                return e
        return 0

    def degree(self):
        pos = sum(e * pi.degree for pi, e in self.exps if e > 0)
        neg = sum(-e * pi.degree for pi, e in self.exps if e < 0)
        return max(pos, neg)

    def to_ratfunc(self):
        p = self.p
        num = Poly.const(self.unit, p)
        den = Poly.const(1, p)
        for pi, e in self.exps:
            if e > 0:
                num = num * pi**e
            else:
                den = den * pi ** (-e)
        return RatFunc._raw(num, den)

    def __eq__(self, other):
        return isinstance(other, FactoredUnit) and self.unit == other.unit and self.exps == other.exps

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.unit, self.exps))
        return self._h

    def __repr__(self):
        return f"FactoredUnit({self})"

    def __str__(self):
        parts = [str(self.unit)] if self.unit != 1 or not self.exps else []
        for pi, e in self.exps:
            base = f"({pi})" if pi.nnz > 1 else str(pi)
            parts.append(base if e == 1 else f"{base}^{e}")
        return "*".join(parts)


def coordinate_valuation(x, place):
    """Valuation of a torus coordinate (TowerElem in F_p(t) or FactoredUnit)."""
    if isinstance(x, FactoredUnit):
        return x.valuation(place)
    if isinstance(x, TowerElem):
        if not x.in_base:
            return None
        r = x.a
    else:
        r = x
    if place is None:
        return r.degree_at_infinity()
    return r.valuation(place)


def coordinate_support(x, max_degree=64):
    """Primes dividing a torus coordinate, or None when not factorable here."""
    if isinstance(x, FactoredUnit):
        return x.support()
    if isinstance(x, TowerElem):
        if not x.in_base:
            return None
        x = x.a
    if max(x.num.degree, x.den.degree) > max_degree:
        return None
    return FactoredUnit.from_ratfunc(x).support()
