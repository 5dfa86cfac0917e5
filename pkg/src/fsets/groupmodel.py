"""Points and homomorphisms of G = G_m^N x E_1 x ... x E_e over the tower field."""

import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import GroupMismatch, InvalidArgument
from .exactfield import TowerElem, TowerField, check_prime, poly_gcd, qth_power
from . import intlinalg

# Test builds set FSETS_CHECK_CURVE=1 to assert the curve equation on every sum.
CHECK_CURVE = os.environ.get("FSETS_CHECK_CURVE", "") not in ("", "0")


@dataclass(frozen=True)
class CurveParams:
    """y^2 = x^3 + a4 x + a6 over F_p."""

    p: int
    a4: int
    a6: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "a4", self.a4 % self.p)
        object.__setattr__(self, "a6", self.a6 % self.p)
        if (4 * self.a4**3 + 27 * self.a6**2) % self.p == 0:
            raise InvalidArgument(f"singular curve {self}")

    def rhs(self, x):
        return x * x * x + x * self.a4 + self.a6

    def __str__(self):
        return f"y^2 = x^3 + {self.a4}*x + {self.a6} over F_{self.p}"


class ECPoint:
    """Affine point (x, y) or the point at infinity (x is None)."""

    __slots__ = ("x", "y", "curve", "field")

    def __init__(self, x, y, curve, field, check=True):
        self.x = x
        self.y = y
        self.curve = curve
        self.field = field
        if check and x is not None and not self.on_curve():
            raise InvalidArgument(f"({x}, {y}) is not on {curve}")

    @classmethod
    def infinity(cls, curve, field):
        return cls(None, None, curve, field, check=False)

    @property
    def is_infinity(self):
        return self.x is None

    def on_curve(self):
        if self.x is None:
            return True
        if isinstance(self.x, TowerElem) and isinstance(self.y, TowerElem):
            return _tower_on_curve(self.x, self.y, self.curve)
        return self.y * self.y == self.curve.rhs(self.x)

    def is_constant(self):
        return self.is_infinity or (self.x.is_constant and self.y.is_constant)

    def degree(self):
        return 0 if self.is_infinity else max(self.x.degree(), self.y.degree())

    def __neg__(self):
        if self.x is None:
            return self
        return ECPoint(self.x, -self.y, self.curve, self.field, check=False)

    def __add__(self, other):
        return ec_add(self, other)

    def __sub__(self, other):
        return ec_add(self, -other)

    def __mul__(self, n):
        return ec_scalar_mul(n, self)

    __rmul__ = __mul__

    def frobenius(self, q):
        if self.x is None:
            return self
        return ECPoint(qth_power(self.x, q), qth_power(self.y, q), self.curve, self.field, check=False)

    def __eq__(self, other):
        if not isinstance(other, ECPoint):
            return NotImplemented
        if self.curve != other.curve:
            return False
        if self.x is None or other.x is None:
            return self.x is None and other.x is None
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.curve, None if self.x is None else (self.x, self.y)))

    def __repr__(self):
        return f"ECPoint({self})"

    def __str__(self):
        return "O" if self.x is None else f"({self.x}, {self.y})"


def _common_den(e):
    """(A, B, m) with e = (A + B s) / m and m = lcm of the two denominators."""
    a, b = e.a, e.b
    g = poly_gcd(a.den, b.den)
    m = a.den * b.den.exact_div(g)
    return a.num * m.exact_div(a.den), b.num * m.exact_div(b.den), m


def _base_on_curve(x, y, curve, d):
    # x = n/m in F_p(t) and y = u/v or y = (u/v) s.  N/m^3 with
    # N = n^3 + a4 n m^2 + a6 m^3 is already reduced (gcd(N, m) = gcd(n^3, m)),
    # so both sides can be compared as reduced fractions.
    n, m = x.a.num, x.a.den
    m2 = m * m
    m3 = m2 * m
    N = n * (n * n + m2.scale(curve.a4)) + m3.scale(curve.a6)
    u, v = (y.a.num, y.a.den) if y.b.is_zero else (y.b.num, y.b.den)
    num, den = u * u, v * v
    if not y.b.is_zero:
        g = poly_gcd(d, den)
        num, den = d.exact_div(g) * num, den.exact_div(g)
    return den == m3 and num == N


def _tower_on_curve(x, y, curve):
    d = x.field.d
    if x.b.is_zero and (y.a.is_zero or y.b.is_zero):
        return _base_on_curve(x, y, curve, d)
    # Same equation as y^2 = rhs(x), multiplied through by v^2 m^3 so that
    # only polynomial products are needed (no gcd normalisation).
    d = x.field.d
    X0, X1, m = _common_den(x)
    Y0, Y1, v = _common_den(y)
    m2 = m * m
    m3 = m2 * m
    v2 = v * v
    lhs0 = m3 * (Y0 * Y0 + d * (Y1 * Y1))
    lhs1 = m3 * (Y0 * Y1).scale(2)
    X1sq = X1 * X1
    rhs0 = v2 * (X0 * (X0 * X0 + (d * X1sq).scale(3) + m2.scale(curve.a4)) + m3.scale(curve.a6))
    rhs1 = v2 * (X1 * ((X0 * X0).scale(3) + d * X1sq + m2.scale(curve.a4)))
    return lhs0 == rhs0 and lhs1 == rhs1


def ec_add(P, Q):
    if P.curve != Q.curve or P.field != Q.field:
        raise GroupMismatch("points on different curves or towers")
    if P.x is None:
        return Q
    if Q.x is None:
        return P
    if P.x == Q.x:
        if (P.y + Q.y).is_zero:
            return ECPoint.infinity(P.curve, P.field)
        lam = (P.x * P.x * 3 + P.curve.a4) / (P.y * 2)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    R = ECPoint(x3, y3, P.curve, P.field, check=False)
    if CHECK_CURVE:
        assert R.on_curve(), "group law left the curve"
    return R


def ec_scalar_mul(n, P):
    if n < 0:
        return ec_scalar_mul(-n, -P)
    R = ECPoint.infinity(P.curve, P.field)
    if n == 0 or P.is_infinity:
        return R
    # left-to-right double-and-add
    for bit in bin(n)[2:]:
        R = ec_add(R, R)
        if bit == "1":
            R = ec_add(R, P)
    return R


@dataclass(frozen=True)
class GroupDescriptor:
    """Shape of G_m^N x E_1 x ... x E_e defined over F_q, coordinates in ``field``."""

    field: TowerField
    q: int
    n_torus: int
    curves: tuple = ()

    def __post_init__(self):
        from .exactfield import log_p

        log_p(self.q, self.field.p)
        object.__setattr__(self, "curves", tuple(self.curves))
        for c in self.curves:
            if c.p != self.field.p:
                raise InvalidArgument("curve over a different prime than the tower")

    @property
    def p(self):
        return self.field.p

    @property
    def n_elliptic(self):
        return len(self.curves)

    @property
    def dimension(self):
        return self.n_torus + len(self.curves)

    def identity(self):
        one = self.field.one
        return ProductPoint(
            tuple(one for _ in range(self.n_torus)),
            tuple(ECPoint.infinity(c, self.field) for c in self.curves),
            self,
        )

    def point(self, torus=(), elliptic=()):
        """Build a validated point; elliptic entries are (x, y) pairs, ECPoints or None."""
        torus = tuple(self.field(c) if not isinstance(c, TowerElem) else c for c in torus)
        ell = []
        for c, e in zip(self.curves, elliptic):
            if e is None:
                ell.append(ECPoint.infinity(c, self.field))
            elif isinstance(e, ECPoint):
                ell.append(e)
            else:
                ell.append(ECPoint(e[0], e[1], c, self.field))
        return ProductPoint(tuple(torus), tuple(ell), self)

    def with_q(self, q):
        return GroupDescriptor(self.field, q, self.n_torus, self.curves)

    def __str__(self):
        parts = [f"G_m^{self.n_torus}"] if self.n_torus else []
        parts += [f"E({c.a4},{c.a6})" for c in self.curves]
        return " x ".join(parts) or "trivial"


class ProductPoint:
    """Point of G: torus block (multiplicative) and elliptic block (additive)."""

    __slots__ = ("torus", "elliptic", "group")

    def __init__(self, torus, elliptic, group):
        if len(torus) != group.n_torus or len(elliptic) != group.n_elliptic:
            raise GroupMismatch(f"point shape does not match {group}")
        for c in torus:
            if c.is_zero:
                raise InvalidArgument("torus coordinates must be nonzero")
        for e, curve in zip(elliptic, group.curves):
            if e.curve != curve:
                raise GroupMismatch("elliptic block on the wrong curve")
        self.torus = tuple(torus)
        self.elliptic = tuple(elliptic)
        self.group = group

    def _same(self, other):
        if not isinstance(other, ProductPoint):
            raise GroupMismatch(f"cannot combine ProductPoint with {type(other).__name__}")
        if other.group.field != self.group.field or (other.group.n_torus, other.group.curves) != (
            self.group.n_torus,
            self.group.curves,
        ):
            raise GroupMismatch("points of different groups")

    def __add__(self, other):
        return prod_add(self, other)

    def __neg__(self):
        return ProductPoint(tuple(c.inv() for c in self.torus), tuple(-e for e in self.elliptic), self.group)

    def __sub__(self, other):
        return prod_add(self, -other)

    def __mul__(self, n):
        return ProductPoint(
            tuple(c**n for c in self.torus), tuple(ec_scalar_mul(n, e) for e in self.elliptic), self.group
        )

    __rmul__ = __mul__

    def frobenius(self, q, n=1):
        """Raise every coordinate to the power q^n."""
        if n == 0:
            return self
        Q = q**n
        return ProductPoint(
            tuple(qth_power(c, Q) for c in self.torus), tuple(e.frobenius(Q) for e in self.elliptic), self.group
        )

    @property
    def is_identity(self):
        return all(c == 1 for c in self.torus) and all(e.is_infinity for e in self.elliptic)

    def torus_degrees(self):
        return tuple(c.degree() for c in self.torus)

    def __eq__(self, other):
        if not isinstance(other, ProductPoint):
            return NotImplemented
        return self.torus == other.torus and self.elliptic == other.elliptic

    def __hash__(self):
        return hash((self.torus, self.elliptic))

    def __repr__(self):
        return f"ProductPoint{self}"

    def __str__(self):
        return "(" + ", ".join([str(c) for c in self.torus] + [str(e) for e in self.elliptic]) + ")"


def prod_add(P, Q):
    P._same(Q)
    return ProductPoint(
        tuple(a * b for a, b in zip(P.torus, Q.torus)),
        tuple(ec_add(a, b) for a, b in zip(P.elliptic, Q.elliptic)),
        P.group,
    )


class GroupHom:
    """Block homomorphism: monomial map on tori, (u + v F) entries on elliptic factors.

    ``torus_matrix`` has one row per target torus coordinate; entry (i, j) is
    the exponent of source coordinate j.  ``elliptic_matrix[i][j] = (u, v)``
    sends source factor j to target factor i by u*id + v*F, F the Frobenius
    of the source group.  Nonzero entries need identical curves.
    """

    def __init__(self, source, target, torus_matrix=(), elliptic_matrix=()):
        tm = [list(map(int, row)) for row in torus_matrix]
        em = [[tuple(map(int, e)) for e in row] for row in elliptic_matrix]
        if len(tm) != target.n_torus or any(len(r) != source.n_torus for r in tm):
            raise InvalidArgument("torus matrix shape does not match the groups")
        if len(em) != target.n_elliptic or any(len(r) != source.n_elliptic for r in em):
            raise InvalidArgument("elliptic matrix shape does not match the groups")
        for i, row in enumerate(em):
            for j, (u, v) in enumerate(row):
                if (u or v) and target.curves[i] != source.curves[j]:
                    raise InvalidArgument("elliptic entries only between identical curves")
        if source.field != target.field:
            raise GroupMismatch("homomorphism between different towers")
        self.source = source
        self.target = target
        self.torus_matrix = tuple(tuple(r) for r in tm)
        self.elliptic_matrix = tuple(tuple(r) for r in em)

    @classmethod
    def identity(cls, G):
        tm = intlinalg.identity(G.n_torus)
        em = [[(1, 0) if i == j else (0, 0) for j in range(G.n_elliptic)] for i in range(G.n_elliptic)]
        return cls(G, G, tm, em)

    @property
    def is_surjective(self):
        tr = intlinalg.rank(self.torus_matrix) if self.target.n_torus else 0
        return tr == self.target.n_torus and elliptic_rank(self) == self.target.n_elliptic

    def __call__(self, P):
        return hom_apply(self, P)

    def __repr__(self):
        return f"GroupHom({self.source} -> {self.target}, T={self.torus_matrix}, E={self.elliptic_matrix})"


def hom_apply(h, P):
    if not isinstance(P, ProductPoint):
        return P.apply_hom(h)  # formal points carry their own implementation
    if (P.group.n_torus, P.group.curves) != (h.source.n_torus, h.source.curves):
        raise GroupMismatch("point is not in the source of the homomorphism")
    one = h.target.field.one
    torus = []
    for row in h.torus_matrix:
        acc = one
        for c, e in zip(P.torus, row):
            if e:
                acc = acc * (c**e)
        torus.append(acc)
    ell = []
    q = h.source.q
    for i, row in enumerate(h.elliptic_matrix):
        acc = ECPoint.infinity(h.target.curves[i], h.target.field)
        for (u, v), e in zip(row, P.elliptic):
            if u:
                acc = acc + ec_scalar_mul(u, e)
            if v:
                acc = acc + ec_scalar_mul(v, e.frobenius(q))
        ell.append(acc)
    return ProductPoint(tuple(torus), tuple(ell), h.target)


class _QuadElem:
    """u + v*alpha in Q(alpha), alpha^2 = tr*alpha - nm (or alpha = r when linear)."""

    __slots__ = ("u", "v", "tr", "nm")

    def __init__(self, u, v, tr, nm):
        self.u, self.v, self.tr, self.nm = Fraction(u), Fraction(v), tr, nm

    def is_zero(self):
        return self.u == 0 and self.v == 0

    def __sub__(self, o):
        return _QuadElem(self.u - o.u, self.v - o.v, self.tr, self.nm)

    def __mul__(self, o):
        # (a + b al)(c + d al) = ac + (ad + bc) al + bd (tr al - nm)
        a, b, c, d = self.u, self.v, o.u, o.v
        return _QuadElem(a * c - b * d * self.nm, a * d + b * c + b * d * self.tr, self.tr, self.nm)

    def inv(self):
        # conjugate: a + b (tr - al); norm = a^2 + ab tr + b^2 nm
        a, b = self.u, self.v
        n = a * a + a * b * self.tr + b * b * self.nm
        return _QuadElem((a + b * self.tr) / n, -b / n, self.tr, self.nm)


def _field_rank(rows):
    rows = [list(r) for r in rows]
    rk, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = rows[rk][c].inv()
        for i in range(len(rows)):
            if i != rk and not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        rk += 1
    return rk


def elliptic_rank(h):
    """Rank of the elliptic block over End(E) tensor Q, summed over curves."""
    from .frobenius import minimal_poly_curve

    total = 0
    for curve in set(h.source.curves) | set(h.target.curves):
        rows_idx = [i for i, c in enumerate(h.target.curves) if c == curve]
        cols_idx = [j for j, c in enumerate(h.source.curves) if c == curve]
        if not rows_idx or not cols_idx:
            continue
        mp = minimal_poly_curve(curve, h.source.q).coeffs
        if len(mp) == 2:  # F = [r]
            r = -mp[0]
            rows = [[_QuadElem(h.elliptic_matrix[i][j][0] + r * h.elliptic_matrix[i][j][1], 0, 0, 0) for j in cols_idx] for i in rows_idx]
        else:
            nm, tr = mp[0], -mp[1]
            rows = [[_QuadElem(*h.elliptic_matrix[i][j], tr, nm) for j in cols_idx] for i in rows_idx]
        total += _field_rank(rows)
    return total


def hom_kernel_dim(h):
    tr = intlinalg.rank(h.torus_matrix) if h.target.n_torus and h.source.n_torus else 0
    return (h.source.n_torus - tr) + (h.source.n_elliptic - elliptic_rank(h))
