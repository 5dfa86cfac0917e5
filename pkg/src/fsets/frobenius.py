"""Frobenius endomorphism: application, point counting, integral relations h(F) = 0."""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels as K
from .errors import InvalidArgument, ResourceLimit
from .exactfield import is_prime, log_p
from .groupmodel import ECPoint, ec_scalar_mul

MAX_COUNT_Q = 10**6


def prime_of(q):
    """The prime p with q = p^k (k >= 1)."""
    if q < 2:
        raise InvalidArgument(f"{q} is not a prime power")
    f = 2
    while f * f <= q:
        if q % f == 0:
            break
        f += 1
    else:
        return q
    log_p(q, f)
    return f


@dataclass(frozen=True)
class FrobeniusOp:
    """The q-power Frobenius, q = p^k with k >= 1."""

    q: int

    def __post_init__(self):
        p = prime_of(self.q)
        if not is_prime(p):  # pragma: no cover - prime_of returns a prime
            raise InvalidArgument(f"{self.q} is not a prime power")

    @property
    def p(self):
        return prime_of(self.q)

    @property
    def k(self):
        return log_p(self.q, self.p)

    def apply(self, P, n=1):
        return frob_apply(self, P, n)


def frob_apply(op, P, n=1):
    """F^n(P): every coordinate raised to q^n.  Formal points delegate."""
    if n < 0:
        raise InvalidArgument("negative Frobenius iterate")
    if n == 0:
        return P
    if isinstance(P, ECPoint):
        return P.frobenius(op.q**n)
    if hasattr(P, "frobenius_pow"):
        return P.frobenius_pow(op.k * n)
    return P.frobenius(op.q, n)


class IntPoly:
    """Monic integer polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [int(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if len(cs) < 2 or cs[-1] != 1:
            raise InvalidArgument(f"IntPoly must be monic of degree >= 1, got {cs}")
        self.coeffs = tuple(cs)

    @classmethod
    def linear(cls, root):
        return cls([-root, 1])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other):
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def tolist(self):
        return list(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if k == 0:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}{mono}"
            terms.append(("-" if c < 0 else "+", s))
        out = terms[0][1] if terms[0][0] == "+" else "-" + terms[0][1]
        for sign, s in terms[1:]:
            out += f" {sign} {s}"
        return out


def _qpoly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        d = len(a) - len(b)
        q[d] = c
        for i, bc in enumerate(b):
            a[i + d] -= c * bc
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


def int_poly_lcm(f, g):
    """lcm of monic integer polynomials (monic gcd over Q is integral)."""
    a = [Fraction(c) for c in f.coeffs]
    b = [Fraction(c) for c in g.coeffs]
    x, y = a, b
    while y and any(y):
        _, r = _qpoly_divmod(x, y)
        x, y = y, r
    gcd = [c / x[-1] for c in x]
    quot, rem = _qpoly_divmod(a, gcd)
    assert not any(rem)
    prod = [Fraction(0)] * (len(quot) + len(b) - 1)
    for i, u in enumerate(quot):
        for j, v in enumerate(b):
            prod[i + j] += u * v
    assert all(c.denominator == 1 for c in prod)
    return IntPoly([int(c) for c in prod])


# -- finite field tables for counting over F_{p^k}


def _irreducible_modulus(p, k):
    """First monic irreducible of degree k over F_p (digits lowest first)."""
    from itertools import product

    for tail in product(range(p), repeat=k):
        m = list(tail) + [1]
        if m[0] == 0:
            continue
        if not any(_has_root_or_factor(m, p, d) for d in range(1, k // 2 + 1)):
            return m
    raise AssertionError("no irreducible found")  # pragma: no cover


def _has_root_or_factor(m, p, d):
    from itertools import product

    from .exactfield import Poly

    M = Poly(m, p)
    for tail in product(range(p), repeat=d):
        f = Poly(list(tail) + [1], p)
        if (M % f).is_zero:
            return True
    return False


@lru_cache(maxsize=8)
def _gf_tables(p, k):
    """(exp, log, digits) for F_{p^k}; elements are base-p codes of residues mod m(z)."""
    q = p**k
    m = _irreducible_modulus(p, k)
    pw = np.array([p**i for i in range(k)], dtype=np.int64)

    def mul_by(code_digits, g):
        # multiply a digit vector by the digit vector g, reduce mod m
        prod = np.convolve(code_digits, g) % p
        for d in range(len(prod) - 1, k - 1, -1):
            c = prod[d]
            if c:
                prod[d - k : d + 1] = (prod[d - k : d + 1] - c * np.array(m)) % p
        return prod[:k]

    for gcode in range(p, q):
        g = (gcode // pw) % p
        exp = np.empty(q - 1, dtype=np.int64)
        cur = np.zeros(k, dtype=np.int64)
        cur[0] = 1
        ok = True
        for i in range(q - 1):
            code = int(cur @ pw)
            if i and code == 1:
                ok = False
                break
            exp[i] = code
            cur = mul_by(cur, g)
        if ok:
            log = np.full(q, -1, dtype=np.int64)
            log[exp] = np.arange(q - 1)
            digits = (np.arange(q, dtype=np.int64)[:, None] // pw) % p
            return exp, log, digits, pw
    raise AssertionError("no generator")  # pragma: no cover


def count_points(curve, q):
    """#E(F_q) including infinity, by enumerating every x in F_q."""
    if q > MAX_COUNT_Q:
        raise ResourceLimit(f"q = {q} exceeds the enumeration limit {MAX_COUNT_Q}")
    k = log_p(q, curve.p)
    if k == 1:
        return int(K.count_points_prime(curve.a4, curve.a6, q))
    p = curve.p
    exp, log, digits, pw = _gf_tables(p, k)
    n = q - 1

    def mul(a, b):
        out = np.zeros_like(a)
        nz = (a != 0) & (b != 0)
        out[nz] = exp[(log[a[nz]] + log[b[nz]]) % n]
        return out

    def add(a, b):
        return (((digits[a] + digits[b]) % p) @ pw).astype(np.int64)

    xs = np.arange(q, dtype=np.int64)
    a4 = np.full(q, curve.a4, dtype=np.int64)
    a6 = np.full(q, curve.a6, dtype=np.int64)
    f = add(add(mul(mul(xs, xs), xs), mul(a4, xs)), a6)
    zero = f == 0
    square = ~zero & (log[np.where(zero, 1, f)] % 2 == 0)
    return 1 + int(zero.sum()) + 2 * int(square.sum())


def frobenius_trace(curve, q):
    return q + 1 - count_points(curve, q)


def char_poly_frobenius(curve, q):
    """x^2 - a x + q with a = q + 1 - #E(F_q)."""
    a = frobenius_trace(curve, q)
    if a * a > 4 * q:
        raise AssertionError(f"Hasse bound violated: a = {a}, q = {q}")
    return IntPoly([q, -a, 1])


def trace_from_prime_field(curve, q):
    """Trace over F_q obtained from the F_p trace by the power-sum recurrence."""
    p = curve.p
    k = log_p(q, p)
    a1 = frobenius_trace(curve, p)
    s_prev, s = 2, a1
    for _ in range(k - 1):
        s_prev, s = s, a1 * s - p * s_prev
    return s


def minimal_poly_curve(curve, q):
    """Minimal polynomial of F_q in End(E).

    It is the characteristic polynomial unless that has a double root r, in
    which case F = [r] (End(E) tensor Q has no nilpotents).
    """
    h = char_poly_frobenius(curve, q)
    q_, a = h.coeffs[0], -h.coeffs[1]
    if a * a == 4 * q_:
        return IntPoly.linear(a // 2)
    return h


def minimal_poly_on_G(G, q=None):
    """Monic h with h(F) = 0 on G: lcm of x - q (torus) and the elliptic minimal polynomials."""
    q = G.q if q is None else q
    h = IntPoly.linear(q) if G.n_torus or not G.curves else None
    for curve in dict.fromkeys(G.curves):
        mc = minimal_poly_curve(curve, q)
        h = mc if h is None else int_poly_lcm(h, mc)
    return h


def _is_identity(P):
    if isinstance(P, ECPoint):
        return P.is_infinity
    return P.is_identity


def apply_poly(h, op, P):
    """sum_i c_i F^i(P)."""
    acc = None
    Fi = P
    for i, c in enumerate(h.coeffs):
        if i:
            Fi = frob_apply(op, Fi, 1)
        if c:
            term = ec_scalar_mul(c, Fi) if isinstance(Fi, ECPoint) else c * Fi
            acc = term if acc is None else acc + term
    return acc


def verify_relation(h, op, samples):
    """True iff h(F)(P) is the identity for every sample."""
    return all(_is_identity(apply_poly(h, op, P)) for P in samples)


def rational_points(curve, field):
    """All F_p-rational affine points as ECPoints over ``field`` (plus O)."""
    p = curve.p
    squares = {}
    for y in range(p):
        squares.setdefault(y * y % p, []).append(y)
    pts = [ECPoint.infinity(curve, field)]
    for x in range(p):
        r = (x**3 + curve.a4 * x + curve.a6) % p
        for y in squares.get(r, []):
            pts.append(ECPoint(field(x), field(y), curve, field))
    return pts


def sample_points(curve, base, op, count=20, seed=0, max_multiple=3, max_frob=1):
    """Deterministic samples: small multiples and Frobenius images of ``base`` plus F_p points."""
    rng = random.Random(seed)
    pool = list(rational_points(curve, base.field))
    for m in range(1, max_multiple + 1):
        Pm = ec_scalar_mul(m, base)
        for i in range(max_frob + 1):
            pool.append(frob_apply(op, Pm, i))
            pool.append(-frob_apply(op, Pm, i))
    rng.shuffle(pool)
    out = pool[:count]
    while len(out) < count:
        out.append(pool[rng.randrange(len(pool))])
    return out
