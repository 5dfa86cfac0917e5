"""Independent reference implementations used as test oracles.

Nothing here imports the package.  Polynomials are plain lists (lowest
degree first) of ints mod p; finite fields GF(p^k) are built from a brute
force irreducible; curve points over GF(p^k) use the textbook formulas.
"""

import itertools


# ------------------------------------------------------- list polynomials


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def psub(a, b, p):
    return padd(a, [(-c) % p for c in b], p)


def pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def pdivmod(a, b, p):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and r:
        c = r[-1] * inv % p
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] = (r[i + k] - c * y) % p
        r = trim(r)
    return trim(q), r


def ppow(a, e, p):
    out = [1]
    for _ in range(e):
        out = pmul(out, a, p)
    return out


def pgcd(a, b, p):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pdivmod(a, b, p)[1]
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


# ------------------------------------------------------------- GF(p^k)


def _irreducible(p, k):
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if f[0] == 0:
            continue
        ok = True
        for d in range(1, k // 2 + 1):
            for g in itertools.product(range(p), repeat=d):
                if not pdivmod(f, list(g) + [1], p)[1]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return f
    raise AssertionError("no irreducible found")


class GF:
    """GF(p^k) with elements as coefficient tuples of length k."""

    def __init__(self, p, k):
        self.p, self.k = p, k
        self.mod = _irreducible(p, k)
        self.q = p**k

    def elements(self):
        return [tuple(c) for c in itertools.product(range(self.p), repeat=self.k)]

    def norm(self, a):
        a = trim(list(a))
        return tuple(a + [0] * (self.k - len(a)))

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        return self.norm(pdivmod(pmul(trim(list(a)), trim(list(b)), self.p), self.mod, self.p)[1])

    def const(self, c):
        return self.norm([c % self.p])

    @property
    def zero(self):
        return (0,) * self.k

    def pow(self, a, e):
        out, base = self.const(1), a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a):
        return self.pow(a, self.q - 2)


def count_points_gf(a4, a6, p, k):
    """#E(GF(p^k)) by trying every (x, y) pair."""
    F = GF(p, k)
    squares = {}
    for y in F.elements():
        squares[F.mul(y, y)] = squares.get(F.mul(y, y), 0) + 1
    total = 1
    A4, A6 = F.const(a4), F.const(a6)
    for x in F.elements():
        r = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(A4, x)), A6)
        total += squares.get(r, 0)
    return total


class GFCurve:
    """y^2 = x^3 + a4 x + a6 over GF(p^k); None is the point at infinity."""

    def __init__(self, F, a4, a6):
        self.F, self.a4, self.a6 = F, F.const(a4), F.const(a6)

    def on_curve(self, P):
        if P is None:
            return True
        F = self.F
        x, y = P
        return F.mul(y, y) == F.add(F.add(F.mul(F.mul(x, x), x), F.mul(self.a4, x)), self.a6)

    def add(self, P, Q):
        F = self.F
        if P is None:
            return Q
        if Q is None:
            return P
        (x1, y1), (x2, y2) = P, Q
        if x1 == x2:
            if F.add(y1, y2) == F.zero:
                return None
            lam = F.mul(F.add(F.mul(F.const(3), F.mul(x1, x1)), self.a4), F.inv(F.mul(F.const(2), y1)))
        else:
            lam = F.mul(F.sub(y2, y1), F.inv(F.sub(x2, x1)))
        x3 = F.sub(F.sub(F.mul(lam, lam), x1), x2)
        return x3, F.sub(F.mul(lam, F.sub(x1, x3)), y1)

    def neg(self, P):
        return None if P is None else (P[0], self.F.sub(self.F.zero, P[1]))

    def mul(self, n, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        out = None
        while n:
            if n & 1:
                out = self.add(out, P)
            P = self.add(P, P)
            n >>= 1
        return out

    def frob(self, P, e=1):
        if P is None:
            return None
        q = self.F.p**e
        return self.F.pow(P[0], q), self.F.pow(P[1], q)

    def some_points(self, count):
        """The first ``count`` affine points by x, using Euler's criterion then a y search."""
        F = self.F
        out = []
        half = (F.q - 1) // 2
        for x in F.elements():
            r = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(self.a4, x)), self.a6)
            if r == F.zero or F.pow(r, half) != F.const(1):
                continue
            for y in F.elements():
                if F.mul(y, y) == r:
                    out.append((x, y))
                    break
            if len(out) == count:
                break
        return out


def recurrence_oracle(h, n):
    """x^n mod h by repeated multiplication by x (monic integer h, lowest first)."""
    m = len(h) - 1
    a = [1] + [0] * (m - 1)
    for _ in range(n):
        top = a[-1]
        a = [0] + a[:-1]
        a = [ai - top * hi for ai, hi in zip(a, h[:-1])]
    return a


# ----------------------------------------------------- torus membership


def rat_eq(a, b, p):
    """(n1, d1) == (n2, d2) as rational functions, by cross multiplication."""
    return pmul(a[0], b[1], p) == pmul(b[0], a[1], p)


def rat_mul(a, b, p):
    return pmul(a[0], b[0], p), pmul(a[1], b[1], p)


def rat_pow(a, e, p):
    if e < 0:
        a, e = (a[1], a[0]), -e
    return ppow(a[0], e, p), ppow(a[1], e, p)


def torus_bounded_oracle(x, gens, B, p):
    """Lexicographically first c in [-B, B]^r with prod gens[i]^c_i == x coordinatewise.

    ``x`` and each generator are tuples of (num, den) list pairs.
    """
    r = len(gens)
    for c in itertools.product(range(-B, B + 1), repeat=r):
        ok = True
        for j in range(len(x)):
            acc = ([1], [1])
            for g, e in zip(gens, c):
                if e:
                    acc = rat_mul(acc, rat_pow(g[j], e, p), p)
            if not rat_eq(acc, x[j], p):
                ok = False
                break
        if ok:
            return list(c)
    return None
