"""Exact arithmetic: F_p, F_p[t], F_p(t) and the quadratic tower F_p(t)[s]/(s^2 - d(t)).

All values are immutable.  Polynomials keep their coefficients in a trimmed
int64 array (lowest degree first); the hot loops live in ``_kernels``.
"""

from functools import lru_cache

import numpy as np

from . import _kernels as K
from .errors import InvalidArgument, ModulusMismatch

__all__ = [
    "is_prime",
    "FpElem",
    "fp_inv",
    "Poly",
    "poly_gcd",
    "RatFunc",
    "TowerField",
    "TowerElem",
    "tower_mul",
    "tower_inv",
    "tower_pow",
    "qth_power",
    "log_p",
]


@lru_cache(maxsize=None)
def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p):
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise InvalidArgument(f"{p} is not prime")
    if p < 5:
        raise InvalidArgument("only primes p >= 5 are supported (chord-tangent law)")
    if p >= K.MAX_PRIME:
        raise InvalidArgument(f"p must be below {K.MAX_PRIME}")
    return int(p)


def log_p(q, p):
    """Return k with q == p**k (k >= 1), else raise."""
    k, r = 0, q
    while r > 1 and r % p == 0:
        r //= p
        k += 1
    if r != 1 or k == 0:
        raise InvalidArgument(f"{q} is not a positive power of {p}")
    return k


class FpElem:
    __slots__ = ("value", "p")

    def __init__(self, value, p):
        self.p = int(p)
        self.value = int(value) % self.p

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ModulusMismatch(f"F_{self.p} vs F_{other.p}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * fp_inv(FpElem(o, self.p))

    def __pow__(self, e):
        if e < 0:
            return fp_inv(self) ** (-e)
        return FpElem(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpElem({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


def fp_inv(x):
    if x.value == 0:
        raise ZeroDivisionError(f"0 has no inverse in F_{x.p}")
    return FpElem(pow(x.value, -1, x.p), x.p)


class Poly:
    """Polynomial in F_p[t], coefficients lowest degree first."""

    __slots__ = ("p", "c", "_h")

    def __init__(self, coeffs, p):
        if isinstance(coeffs, np.ndarray):
            arr = coeffs.astype(np.int64) % p
        else:
            arr = np.array([int(x) % p for x in coeffs], dtype=np.int64)
        self.p = int(p)
        self.c = K.np_trim(arr)
        self._h = None

    @classmethod
    def _raw(cls, arr, p):
        obj = cls.__new__(cls)
        obj.p = p
        obj.c = arr
        obj._h = None
        return obj

    @classmethod
    def const(cls, value, p):
        return cls([value], p)

    @classmethod
    def monomial(cls, k, p, coeff=1):
        arr = np.zeros(k + 1, dtype=np.int64)
        arr[k] = coeff % p
        return cls._raw(K.np_trim(arr), p)

    @classmethod
    def t(cls, p):
        return cls.monomial(1, p)

    # -- basic queries
    @property
    def degree(self):
        return self.c.size - 1

    @property
    def is_zero(self):
        return self.c.size == 0

    @property
    def is_one(self):
        return self.c.size == 1 and self.c[0] == 1

    @property
    def lc(self):
        return int(self.c[-1]) if self.c.size else 0

    @property
    def nnz(self):
        return int(np.count_nonzero(self.c))

    def is_monic(self):
        return self.lc == 1

    def coeff(self, k):
        return int(self.c[k]) if 0 <= k < self.c.size else 0

    def __call__(self, x):
        acc = 0
        for a in self.c[::-1]:
            acc = (acc * x + int(a)) % self.p
        return acc

    # -- arithmetic
    def _check(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, np.integer, FpElem)):
                return Poly.const(int(other), self.p)
            return None
        if other.p != self.p:
            raise ModulusMismatch(f"F_{self.p}[t] vs F_{other.p}[t]")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        n = max(self.c.size, o.c.size)
        arr = np.zeros(n, dtype=np.int64)
        arr[: self.c.size] += self.c
        arr[: o.c.size] += o.c
        return Poly._raw(K.np_trim(arr % self.p), self.p)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw((-self.c) % self.p, self.p)

    def __sub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return Poly._raw(K.EMPTY, self.p)
        if o.c.size == 1:
            return Poly._raw((self.c * o.c[0]) % self.p, self.p)
        if self.c.size == 1:
            return Poly._raw((o.c * self.c[0]) % self.p, self.p)
        return Poly._raw(K.poly_mul(self.c, o.c, self.p), self.p)

    __rmul__ = __mul__

    def __divmod__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if o.c.size == 1:
            inv = pow(int(o.c[0]), -1, self.p)
            return Poly._raw((self.c * inv) % self.p, self.p), Poly._raw(K.EMPTY, self.p)
        q, r = K.poly_divmod(self.c, o.c, self.p)
        return Poly._raw(q, self.p), Poly._raw(r, self.p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ArithmeticError("inexact polynomial division")
        return q

    def scale(self, k):
        return Poly._raw((self.c * (int(k) % self.p)) % self.p, self.p) if k % self.p else Poly._raw(K.EMPTY, self.p)

    def monic(self):
        if self.is_zero or self.lc == 1:
            return self
        return self.scale(pow(self.lc, -1, self.p))

    def stretch(self, e):
        """f(t^e)."""
        if e == 1 or self.c.size <= 1:
            return self
        arr = np.zeros((self.c.size - 1) * e + 1, dtype=np.int64)
        arr[::e] = self.c
        return Poly._raw(arr, self.p)

    def frobenius(self, k=1):
        """f^(p^k); coefficients lie in F_p so this is f(t^(p^k))."""
        return self.stretch(self.p**k)

    def _pow_small(self, e):
        result, base = Poly._raw(np.ones(1, dtype=np.int64), self.p), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __pow__(self, e):
        if e < 0:
            raise InvalidArgument("negative power of a polynomial")
        # base-p digits: f^e = prod_k f(t^(p^k))^(d_k)
        result = Poly._raw(np.ones(1, dtype=np.int64), self.p)
        k = 1
        while e:
            e, d = divmod(e, self.p)
            if d:
                result = result * self.stretch(k)._pow_small(d)
            k *= self.p
        return result

    def derivative(self):
        if self.c.size <= 1:
            return Poly._raw(K.EMPTY, self.p)
        arr = (self.c[1:] * np.arange(1, self.c.size, dtype=np.int64)) % self.p
        return Poly._raw(K.np_trim(arr), self.p)

    # -- identity
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.p == other.p and np.array_equal(self.c, other.c)
        if isinstance(other, (int, np.integer)):
            return self == Poly.const(int(other), self.p)
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.p, self.c.tobytes()))
        return self._h

    def key(self):
        """Sort key: degree first, then coefficients from the top."""
        return (self.degree, tuple(int(x) for x in self.c[::-1]))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            a = int(self.c[k])
            if not a:
                continue
            if k == 0:
                terms.append(str(a))
            else:
                mono = "t" if k == 1 else f"t^{k}"
                terms.append(mono if a == 1 else f"{a}*{mono}")
        return " + ".join(terms)


def poly_gcd(f, g):
    """Monic gcd; gcd(0, 0) = 0."""
    if f.p != g.p:
        raise ModulusMismatch("gcd across different primes")
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    if f.c.size == 1 or g.c.size == 1:
        return Poly.const(1, f.p)
    return Poly._raw(K.poly_gcd(f.c, g.c, f.p), f.p)


class RatFunc:
    """Element of F_p(t) in reduced form: gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        p = num.p
        if den is None:
            den = Poly.const(1, p)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            num, den = num, Poly.const(1, p)
        elif not den.is_one:
            g = poly_gcd(num, den)
            if not g.is_one:
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc
            if lc != 1:
                inv = pow(lc, -1, p)
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num, den):
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def const(cls, value, p):
        return cls._raw(Poly.const(value, p), Poly.const(1, p))

    @property
    def p(self):
        return self.num.p

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_poly(self):
        return self.den.is_one

    @property
    def is_constant(self):
        return self.num.degree <= 0 and self.den.is_one

    def degree(self):
        """Height proxy max(deg num, deg den)."""
        return max(self.num.degree, self.den.degree, 0)

    def degree_at_infinity(self):
        """deg num - deg den, i.e. minus the valuation at the infinite place."""
        if self.is_zero:
            raise InvalidArgument("degree of zero")
        return self.num.degree - self.den.degree

    def valuation(self, prime):
        """Exponent of the monic irreducible ``prime`` in this function."""
        if self.is_zero:
            raise InvalidArgument("valuation of zero")
        return _poly_val(self.num, prime) - _poly_val(self.den, prime)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.p != self.p:
                raise ModulusMismatch("F_p(t) with different p")
            return other
        if isinstance(other, Poly):
            return RatFunc._raw(other, Poly.const(1, self.p))
        if isinstance(other, (int, np.integer, FpElem)):
            return RatFunc.const(int(other), self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        if self.den == o.den:
            num = self.num + o.num
            if self.den.is_one or num.is_zero:
                return RatFunc(num) if num.is_zero else RatFunc._raw(num, self.den)
            g = poly_gcd(num, self.den)
            return RatFunc._raw(num.exact_div(g), self.den.exact_div(g))
        g = poly_gcd(self.den, o.den)
        d1, d2 = self.den.exact_div(g), o.den.exact_div(g)
        num = self.num * d2 + o.num * d1
        den = d1 * o.den
        if num.is_zero:
            return RatFunc(num)
        h = poly_gcd(num, g)
        if not h.is_one:
            num, den = num.exact_div(h), den.exact_div(h)
        return RatFunc._raw(num, den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return RatFunc.const(0, self.p)
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = (self.num, o.den) if g1.is_one else (self.num.exact_div(g1), o.den.exact_div(g1))
        n2, d1 = (o.num, self.den) if g2.is_one else (o.num.exact_div(g2), self.den.exact_div(g2))
        return RatFunc._raw(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inv(self):
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero in F_p(t)")
        lc = self.num.lc
        if lc == 1:
            return RatFunc._raw(self.den, self.num)
        inv = pow(lc, -1, self.p)
        return RatFunc._raw(self.den.scale(inv), self.num.scale(inv))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        return RatFunc._raw(self.num**e, self.den**e)

    def frobenius(self, k=1):
        return RatFunc._raw(self.num.frobenius(k), self.den.frobenius(k))

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, TowerElem) else None
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.is_one:
            return str(self.num)
        num, den = str(self.num), str(self.den)
        if " + " in num:
            num = f"({num})"
        if self.den.nnz > 1 or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"


def _poly_val(f, prime):
    if prime.degree == 1 and prime.nnz == 1:
        return int(np.flatnonzero(f.c)[0])
    if f.degree >= prime.p and f.derivative().is_zero:
        # f = g^p with g the p-th root of f
        return prime.p * _poly_val(Poly._raw(f.c[:: prime.p].copy(), prime.p), prime)
    v = 0
    while True:
        q, r = divmod(f, prime)
        if not r.is_zero:
            return v
        f = q
        v += 1


class TowerField:
    """L = F_p(t)[s]/(s^2 - d(t)) with d nonconstant and squarefree."""

    __slots__ = ("p", "d", "_half_powers")

    def __init__(self, p, d):
        p = check_prime(p)
        if not isinstance(d, Poly):
            d = Poly(d, p)
        if d.p != p:
            raise ModulusMismatch("modulus over a different prime")
        if d.degree < 1:
            raise InvalidArgument("tower modulus must be nonconstant")
        if not poly_gcd(d, d.derivative()).is_one:
            raise InvalidArgument("tower modulus must be squarefree")
        self.p = p
        self.d = d
        self._half_powers = {}

    def __eq__(self, other):
        return isinstance(other, TowerField) and self.p == other.p and self.d == other.d

    def __hash__(self):
        return hash(("TowerField", self.p, self.d))

    def __repr__(self):
        return f"TowerField(p={self.p}, d={self.d})"

    def __call__(self, a, b=0):
        return TowerElem(self._rf(a), self._rf(b), self)

    def _rf(self, x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return RatFunc._raw(x, Poly.const(1, self.p))
        return RatFunc.const(int(x), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def t(self):
        return self(Poly.t(self.p))

    @property
    def s(self):
        return self(0, 1)

    def half_power(self, q):
        """d^((q-1)/2), memoized per q (s^q = s * d^((q-1)/2))."""
        hp = self._half_powers.get(q)
        if hp is None:
            hp = RatFunc._raw(self.d ** ((q - 1) // 2), Poly.const(1, self.p))
            self._half_powers[q] = hp
        return hp


class TowerElem:
    """a + b*s with a, b in F_p(t)."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field):
        self.a = a
        self.b = b
        self.field = field

    @property
    def p(self):
        return self.field.p

    @property
    def is_zero(self):
        return self.a.is_zero and self.b.is_zero

    @property
    def in_base(self):
        return self.b.is_zero

    @property
    def is_constant(self):
        return self.b.is_zero and self.a.is_constant

    def degree(self):
        return max(self.a.degree(), self.b.degree())

    def _coerce(self, other):
        if isinstance(other, TowerElem):
            if other.field != self.field:
                raise ModulusMismatch("tower elements with different moduli")
            return other
        if isinstance(other, (RatFunc, Poly, int, np.integer)):
            return self.field(other if not isinstance(other, np.integer) else int(other))
        if isinstance(other, FpElem):
            return self.field(int(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TowerElem(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __neg__(self):
        return TowerElem(-self.a, -self.b, self.field)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TowerElem(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return tower_mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return tower_mul(self, tower_inv(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return tower_mul(o, tower_inv(self))

    def __pow__(self, e):
        return tower_pow(self, e)

    def inv(self):
        return tower_inv(self)

    def square(self):
        return tower_mul(self, self)

    def __eq__(self, other):
        if isinstance(other, TowerElem):
            return self.field == other.field and self.a == other.a and self.b == other.b
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self == o

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"TowerElem({self})"

    def __str__(self):
        if self.b.is_zero:
            return str(self.a)
        bs = "s" if self.b == 1 else f"({self.b})*s"
        if self.a.is_zero:
            return bs
        return f"{self.a} + {bs}"


def tower_mul(x, y):
    if x.field != y.field:
        raise ModulusMismatch("tower elements with different moduli")
    d = x.field.d
    if x.b.is_zero and y.b.is_zero:
        return TowerElem(x.a * y.a, y.b, x.field)
    if x.b.is_zero:
        return TowerElem(x.a * y.a, x.a * y.b, x.field)
    if y.b.is_zero:
        return TowerElem(x.a * y.a, x.b * y.a, x.field)
    a = x.a * y.a + (x.b * y.b) * d
    b = x.a * y.b + x.b * y.a
    return TowerElem(a, b, x.field)


def tower_inv(x):
    if x.is_zero:
        raise ZeroDivisionError("inverse of zero in the tower")
    if x.b.is_zero:
        return TowerElem(x.a.inv(), x.b, x.field)
    norm = x.a * x.a - (x.b * x.b) * x.field.d
    # d squarefree and nonconstant, so a^2 = b^2 d forces a = b = 0
    assert not norm.is_zero, "norm vanished for a nonzero element"
    ninv = norm.inv()
    return TowerElem(x.a * ninv, -(x.b * ninv), x.field)


def _pow_small(x, n):
    result = x.field.one
    base = x
    while n:
        if n & 1:
            result = tower_mul(result, base)
        n >>= 1
        if n:
            base = tower_mul(base, base)
    return result


def tower_pow(x, n):
    """x^n via base-p digits, x^n = prod_k (x^(p^k))^(d_k), with cheap q-th powers.

    Negative exponents go through the inverse.
    """
    if n < 0:
        x, n = tower_inv(x), -n
    if x.b.is_zero:
        return TowerElem(x.a**n, x.b, x.field)
    p = x.field.p
    result = x.field.one
    k = 1
    while n:
        n, d = divmod(n, p)
        if d:
            result = tower_mul(result, _pow_small(qth_power(x, k) if k > 1 else x, d))
        k *= p
    return result


def qth_power(x, q):
    """x^q for q a positive power of p.

    Uses that Frobenius fixes F_p: (a + b s)^q = a(t^q) + b(t^q) d^((q-1)/2) s.
    """
    k = log_p(q, x.p)
    a = x.a.frobenius(k)
    if x.b.is_zero:
        return TowerElem(a, x.b, x.field)
    b = x.b.frobenius(k) * x.field.half_power(q)
    return TowerElem(a, b, x.field)
