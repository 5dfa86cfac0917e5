"""Finitely generated subgroups, Z[F]-module spans, enumeration and membership.

Two point representations are supported side by side:

* concrete ``ProductPoint`` values with explicit tower coordinates, and
* ``SpanPoint`` values in ``SpanCoordinates``: torus coordinates kept in
  factored form and elliptic coordinates as integer vectors over the basis
  F^i(B_j), 0 <= i < m, where m is the degree of the minimal polynomial of
  the p-power Frobenius on the curve.

The formal form makes F^n cheap for any n (companion action plus exponent
scaling), so desk-scale bounds like B = 130 or F^24 stay instant.  A formal
point is converted back with ``materialize`` under an explicit budget.
"""

import itertools
import math

from . import intlinalg
from .errors import InvalidArgument, InvalidRelation, ResourceLimit, UnsupportedCoordinate
from .exactfield import log_p
from .frobenius import FrobeniusOp, IntPoly, apply_poly, frob_apply, minimal_poly_curve, verify_relation
from .groupmodel import ECPoint, ProductPoint, ec_scalar_mul
from .valuation import FactoredUnit, dlog

DEFAULT_BUDGET = 2_000_000
DEFAULT_MAX_DEGREE = 100_000


class Subgroup:
    """Gamma = <generators> inside an ambient group."""

    def __init__(self, generators, ambient=None):
        gens = tuple(generators)
        if not gens:
            raise InvalidArgument("a subgroup needs at least one generator")
        self.generators = gens
        self.ambient = ambient if ambient is not None else getattr(gens[0], "group", None)
        shape = _shape(gens[0])
        for g in gens[1:]:
            if _shape(g) != shape:
                raise InvalidArgument("generators live in different groups")

    @property
    def rank(self):
        return len(self.generators)

    def identity(self):
        return self.generators[0] * 0

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"Subgroup({', '.join(map(str, self.generators))})"


def _shape(P):
    return (len(P.torus), len(P.elliptic))


def evaluate(gamma, c):
    """sum_j c_j * gamma_j."""
    c = list(c)
    if len(c) != gamma.rank:
        raise InvalidArgument(f"coefficient vector of length {len(c)} for {gamma.rank} generators")
    acc = gamma.identity()
    for cj, g in zip(c, gamma.generators):
        if cj:
            acc = acc + g * cj
    return acc


def group_size(rank, B):
    return (2 * B + 1) ** rank


def _check_budget(rank, B, budget):
    if B < 0:
        raise InvalidArgument("bound must be nonnegative")
    count = group_size(rank, B)
    if count > budget:
        raise ResourceLimit(f"enumerating {count} elements exceeds the budget of {budget}")
    return count


def _multiples(g, B):
    """[m*g for m in -B..B] by repeated addition."""
    pos = [g * 0]
    for _ in range(B):
        pos.append(pos[-1] + g)
    neg = [-x for x in reversed(pos[1:])]
    return neg + pos


def enumerate_group(gamma, B, budget=DEFAULT_BUDGET, first=None):
    """Yield (c, point) for all ||c||_inf <= B in lexicographic order.

    ``first`` optionally restricts the leading coordinate to a range, which is
    how workers split the stream into contiguous blocks.
    """
    _check_budget(gamma.rank, B, budget)
    table = [_multiples(g, B) for g in gamma.generators]
    r = gamma.rank
    ranges = [range(-B, B + 1)] * r
    if first is not None:
        ranges[0] = first
    prefix = [gamma.identity()] + [None] * r
    prev = None
    for c in itertools.product(*ranges):
        start = 0
        if prev is not None:
            while c[start] == prev[start]:
                start += 1
        for i in range(start, r):
            prefix[i + 1] = prefix[i] + table[i][c[i] + B]
        prev = c
        yield c, prefix[r]


class TorusBlock:
    """The torus part of a point, as a group element on its own."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(coords)

    @property
    def torus(self):
        return self.coords

    @property
    def elliptic(self):
        return ()

    def __add__(self, other):
        return TorusBlock(a * b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return TorusBlock(c.inv() for c in self.coords)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n):
        return TorusBlock(c**n for c in self.coords)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, TorusBlock) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)


def torus_block(P):
    return TorusBlock(P.torus)


def bounded_membership(x, gamma, B, budget=DEFAULT_BUDGET):
    """First c (lexicographic) with ||c||_inf <= B and evaluate(gamma, c) == x.

    Candidates whose torus block differs from x are rejected before any
    elliptic arithmetic happens.  ``None`` only means "no witness within B".
    """
    tx = torus_block(x)
    tgamma = Subgroup([torus_block(g) for g in gamma.generators])
    full = not x.elliptic
    for c, tp in enumerate_group(tgamma, B, budget):
        if tp != tx:
            continue
        if full or evaluate(gamma, c) == x:
            return list(c)
    return None


def _as_factored(c):
    if isinstance(c, FactoredUnit):
        return c
    return FactoredUnit.from_tower(c)


def _torus_system(gens_torus, x_torus, p):
    """Rows (A, b, moduli) expressing x = prod g_j^{c_j} coordinatewise.

    Returns None when x has a prime outside the generators' support, which
    already decides non-membership.
    """
    A, b, mods = [], [], []
    r = len(gens_torus)
    for i in range(len(x_torus)):
        gi = [g[i] for g in gens_torus]
        xi = x_torus[i]
        support = {}
        for g in gi:
            for pi in g.support():
                support.setdefault(pi.key(), pi)
        for pi in xi.support():
            if pi.key() not in support:
                return None
        for key in sorted(support):
            pi = support[key]
            A.append([g.valuation(pi) for g in gi])
            b.append(xi.valuation(pi))
            mods.append(0)
        A.append([dlog(g.unit, p) for g in gi])
        b.append(dlog(xi.unit, p))
        mods.append(p - 1)
    if not A:
        A, b, mods = [[0] * r], [0], [0]
    return A, b, mods


def _size_reduce(x, kernel):
    """Shorten x by integer kernel combinations (greedy, deterministic)."""
    x = list(x)
    kernel = [v for v in kernel if any(v)]
    changed = True
    while changed and kernel:
        changed = False
        for v in kernel:
            vv = sum(a * a for a in v)
            f = (2 * sum(a * b for a, b in zip(x, v)) + vv) // (2 * vv)
            if f:
                y = [a - f * b for a, b in zip(x, v)]
                if sum(a * a for a in y) < sum(a * a for a in x):
                    x, changed = y, True
    return x


def torus_membership(x, gamma):
    """Exact decision of x in gamma for pure-torus points.

    Coordinates are factored into monic irreducibles plus a unit of F_p^*;
    membership becomes an integer system with one congruence row per
    coordinate for the unit part.  Returns a witness c or None.
    """
    if x.elliptic or any(g.elliptic for g in gamma.generators):
        raise InvalidArgument("torus_membership needs a pure torus group")
    gens = [[_as_factored(c) for c in g.torus] for g in gamma.generators]
    xt = [_as_factored(c) for c in x.torus]
    p = gens[0][0].p if gens and gens[0] else None
    if p is None:
        return [0] * gamma.rank
    system = _torus_system(gens, xt, p)
    if system is None:
        return None
    sol = intlinalg.solve_mixed(*system)
    if sol is None:
        return None
    x0, kernel = sol
    c = _size_reduce(x0, kernel)
    # the unit rows only hold mod p-1, so confirm with real arithmetic
    if evaluate(Subgroup([_factored_point(g) for g in gens]), c) != _factored_point(xt):
        raise AssertionError("torus witness does not evaluate back to x")  # pragma: no cover
    return c


def _factored_point(coords):
    return TorusBlock(coords)


# ---------------------------------------------------------------- Z[F]-spans


class ModuleSpan:
    """Generators F^i(gamma_j), 0 <= i < deg h, ordered j outer, i inner."""

    def __init__(self, base, h, op, span_gens):
        self.base = base
        self.h = h
        self.op = op
        self.span_generators = tuple(span_gens)

    @property
    def subgroup(self):
        return Subgroup(self.span_generators, self.base.ambient)

    @property
    def rank(self):
        return len(self.span_generators)

    def frobenius_coeffs(self, c):
        """Coefficients of F(x) for x = evaluate(span, c), using h(F) = 0."""
        m = self.h.degree
        hc = self.h.coeffs
        out = []
        for j in range(self.base.rank):
            blk = list(c[j * m : (j + 1) * m])
            top = blk[-1]
            new = [0] + blk[:-1]
            out += [a - top * hc[i] for i, a in enumerate(new)]
        return out


def span_generators(gamma, h, op=None, check=True):
    """The Z[F]-span of gamma as a finitely generated group, given h(F) = 0."""
    if not isinstance(h, IntPoly):
        h = IntPoly(h)
    if op is None:
        op = FrobeniusOp(gamma.ambient.q)
    if check:
        _check_relation(gamma, h, op)
    gens = []
    for g in gamma.generators:
        Fi = g
        for i in range(h.degree):
            if i:
                Fi = frob_apply(op, Fi, 1)
            gens.append(Fi)
    return ModuleSpan(gamma, h, op, gens)


def _check_relation(gamma, h, op):
    for g in gamma.generators:
        if isinstance(g, SpanPoint):
            ok = apply_poly(h, op, g).is_identity
        else:
            hq = h(op.q)
            ok = all(c**hq == 1 for c in g.torus) if hq else True
            ok = ok and verify_relation(h, op, [e for e in g.elliptic if not e.is_infinity])
        if not ok:
            raise InvalidRelation(f"h = {h} does not annihilate the generator {g}")


# ------------------------------------------------------ formal coordinates


def _poly_mulmod(a, b, m):
    """(a * b) mod m over Z, m monic (coefficient lists, lowest first)."""
    d = len(m) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for i in range(d + 1):
                prod[k - d + i] -= c * m[i]
    prod = prod[:d] + [0] * max(0, d - len(prod))
    return prod


class CurvePool:
    """Basis points B_j on one curve and the Frobenius action on their span."""

    def __init__(self, curve, field):
        self.curve = curve
        self.field = field
        self.minpoly = minimal_poly_curve(curve, curve.p)
        self.m = self.minpoly.degree
        self.bases = []
        self.names = []
        self._images = {}  # concrete point -> formal vector
        self._xpow = {}

    def frob_vector_power(self, k):
        """x^k mod minpoly as a coefficient list of length m."""
        r = self._xpow.get(k)
        if r is None:
            mod = list(self.minpoly.coeffs)
            result = [1] + [0] * (self.m - 1)
            base = _poly_mulmod([0, 1], [1], mod)
            e = k
            while e:
                if e & 1:
                    result = _poly_mulmod(result, base, mod)
                e >>= 1
                if e:
                    base = _poly_mulmod(base, base, mod)
            r = tuple(result)
            self._xpow[k] = r
        return r

    def frobenius(self, vec, k):
        if k == 0 or not vec:
            return vec
        r = list(self.frob_vector_power(k))
        mod = list(self.minpoly.coeffs)
        m = self.m
        out = []
        for j in range(0, len(vec), m):
            blk = list(vec[j : j + m]) + [0] * (m - len(vec[j : j + m]))
            out += _poly_mulmod(blk, r, mod)
        return _strip(out)

    def add_base(self, P, name=None):
        if P.curve != self.curve:
            raise InvalidArgument("base point on the wrong curve")
        j = len(self.bases)
        self.bases.append(P)
        self.names.append(name or f"B{j}")
        Fi = P
        for i in range(3):
            if i:
                Fi = Fi.frobenius(self.curve.p)
            v = _strip([0] * (j * self.m) + list(self.frob_vector_power(i)))
            self._images.setdefault(Fi, v)
            self._images.setdefault(-Fi, _neg(v))
        return j

    def lift(self, P):
        if P.is_infinity:
            return ()
        v = self._images.get(P)
        if v is None:
            raise UnsupportedCoordinate(f"elliptic point {P} is not a registered basis image")
        return tuple(v)

    @property
    def independent(self):
        """True when the formal coordinates are provably faithful.

        A single nonconstant base point B is nontorsion (torsion of a curve
        over F_p has constant coordinates) and a + bF is a nonzero isogeny
        for (a, b) != 0 because the minimal polynomial is irreducible, so
        B, ..., F^{m-1} B are Z-independent.
        """
        if not self.bases:
            return True
        return len(self.bases) == 1 and not self.bases[0].is_constant()

    def format(self, vec):
        """Human-readable sum such as ``125*P - 5*F(P)``; ``O`` for zero."""
        terms = []
        for idx, w in enumerate(vec):
            if not w:
                continue
            j, i = divmod(idx, self.m)
            name = self.names[j]
            pt = name if i == 0 else (f"F({name})" if i == 1 else f"F^{i}({name})")
            terms.append((w, pt))
        if not terms:
            return "O"
        out = ""
        for k, (w, pt) in enumerate(terms):
            sign = "-" if w < 0 else ("+" if k else "")
            mag = "" if abs(w) == 1 else f"{abs(w)}*"
            out += (f" {sign} " if k else sign) + mag + pt
        return out

    def frob_image(self, j, i):
        P = self.bases[j]
        return P.frobenius(self.curve.p**i) if i else P

    def materialize(self, vec, max_degree=DEFAULT_MAX_DEGREE):
        p = self.curve.p
        est = 0.0
        for idx, w in enumerate(vec):
            if w:
                j, i = divmod(idx, self.m)
                est += abs(w) * math.sqrt(p**i) * math.sqrt(max(self.bases[j].degree(), 1))
        if est * est > max_degree:
            raise ResourceLimit(f"materializing the elliptic vector {list(vec)} needs degree about {int(est * est)}")
        acc = ECPoint.infinity(self.curve, self.field)
        for idx, w in enumerate(vec):
            if w:
                j, i = divmod(idx, self.m)
                acc = acc + ec_scalar_mul(w, self.frob_image(j, i))
        return acc


def _unit(i, m):
    v = [0] * m
    v[i] = 1
    return v


def _strip(v):
    v = list(v)
    while v and v[-1] == 0:
        v.pop()
    return tuple(v)


def _neg(v):
    return tuple(-a for a in v)


def _vadd(a, b):
    if len(a) < len(b):
        a, b = b, a
    return _strip([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])


class SpanCoordinates:
    """Formal coordinate system for one group: shared curve pools plus the group shape."""

    def __init__(self, group, pools=None):
        self.group = group
        self.p = group.p
        self.pools = pools if pools is not None else {}
        for c in group.curves:
            if c not in self.pools:
                self.pools[c] = CurvePool(c, group.field)
        self._children = {}

    @classmethod
    def from_points(cls, group, points=()):
        space = cls(group)
        for P in points:
            space.register(P)
        return space

    def for_group(self, H):
        """Coordinates for another group over the same tower, sharing bases."""
        if H == self.group:
            return self
        key = (H.q, H.n_torus, H.curves)
        sp = self._children.get(key)
        if sp is None:
            sp = SpanCoordinates(H, self.pools)
            self._children[key] = sp
        return sp

    def register(self, P, name=None):
        """Make every elliptic coordinate of P representable (new base if needed).

        P may be a ProductPoint or a single ECPoint on one of the curves.
        """
        ells = [P] if isinstance(P, ECPoint) else P.elliptic
        for e in ells:
            pool = self.pools[e.curve]
            if not e.is_infinity and e not in pool._images:
                pool.add_base(e, name)

    def lift(self, P):
        if isinstance(P, SpanPoint):
            return P
        torus = tuple(_as_factored(c) for c in P.torus)
        ell = tuple(self.pools[e.curve].lift(e) for e in P.elliptic)
        return SpanPoint(torus, ell, self)

    def identity(self):
        one = FactoredUnit.one(self.p)
        return SpanPoint(tuple(one for _ in range(self.group.n_torus)), tuple(() for _ in self.group.curves), self)

    @property
    def independent(self):
        return all(self.pools[c].independent for c in self.group.curves)

    def solve(self, gens, x):
        """All integer c with sum c_j gens_j == x, as (c0, kernel) or None.

        Exact in the formal coordinates; it decides membership in the true
        group whenever ``independent`` holds.
        """
        r = len(gens)
        sys_ = _torus_system([g.torus for g in gens], x.torus, self.p) if self.group.n_torus else ([], [], [])
        if sys_ is None:
            return None
        A, b, mods = (list(z) for z in sys_)
        for i in range(self.group.n_elliptic):
            L = max([len(g.elliptic[i]) for g in gens] + [len(x.elliptic[i])])
            for k in range(L):
                A.append([g.elliptic[i][k] if k < len(g.elliptic[i]) else 0 for g in gens])
                b.append(x.elliptic[i][k] if k < len(x.elliptic[i]) else 0)
                mods.append(0)
        if not A:
            return [0] * r, intlinalg.identity(r)
        return intlinalg.solve_mixed(A, b, mods)


class SpanPoint:
    """Point of G in formal coordinates: factored torus block, elliptic vectors."""

    __slots__ = ("torus", "elliptic", "space")

    def __init__(self, torus, elliptic, space):
        self.torus = tuple(torus)
        self.elliptic = tuple(_strip(v) for v in elliptic)
        self.space = space

    @property
    def group(self):
        return self.space.group

    def _check(self, other):
        if not isinstance(other, SpanPoint):
            raise InvalidArgument(f"cannot combine a formal point with {type(other).__name__}")
        if other.space is not self.space and other.group != self.group:
            raise InvalidArgument("formal points of different groups")

    def __add__(self, other):
        self._check(other)
        return SpanPoint(
            tuple(a * b for a, b in zip(self.torus, other.torus)),
            tuple(_vadd(a, b) for a, b in zip(self.elliptic, other.elliptic)),
            self.space,
        )

    def __neg__(self):
        return SpanPoint(tuple(c.inv() for c in self.torus), tuple(_neg(v) for v in self.elliptic), self.space)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n):
        n = int(n)
        return SpanPoint(
            tuple(c**n for c in self.torus),
            tuple(_strip(a * n for a in v) for v in self.elliptic),
            self.space,
        )

    __rmul__ = __mul__

    def frobenius_pow(self, k):
        """Apply the p-power Frobenius k times."""
        if k == 0:
            return self
        pools = self.space.pools
        return SpanPoint(
            tuple(c.frobenius(k) for c in self.torus),
            tuple(pools[c].frobenius(v, k) for c, v in zip(self.group.curves, self.elliptic)),
            self.space,
        )

    def frobenius(self, q, n=1):
        return self.frobenius_pow(log_p(q, self.space.p) * n)

    def apply_hom(self, h):
        if (h.source.n_torus, h.source.curves) != (self.group.n_torus, self.group.curves):
            raise InvalidArgument("point is not in the source of the homomorphism")
        target = self.space.for_group(h.target)
        one = FactoredUnit.one(self.space.p)
        torus = []
        for row in h.torus_matrix:
            acc = one
            for c, e in zip(self.torus, row):
                if e:
                    acc = acc * c**e
            torus.append(acc)
        kq = log_p(h.source.q, self.space.p)
        ell = []
        for i, row in enumerate(h.elliptic_matrix):
            pool = self.space.pools[h.target.curves[i]]
            acc = ()
            for (u, v), w in zip(row, self.elliptic):
                if u:
                    acc = _vadd(acc, tuple(u * a for a in w))
                if v:
                    acc = _vadd(acc, tuple(v * a for a in pool.frobenius(w, kq)))
            ell.append(acc)
        return SpanPoint(torus, ell, target)

    @property
    def is_identity(self):
        return all(c.is_one for c in self.torus) and not any(self.elliptic)

    def torus_degrees(self):
        return tuple(c.degree() for c in self.torus)

    def torus_values(self):
        """Torus coordinates as tower elements."""
        field = self.group.field
        return tuple(field(c.to_ratfunc()) for c in self.torus)

    def elliptic_point(self, i, max_degree=DEFAULT_MAX_DEGREE):
        return self.space.pools[self.group.curves[i]].materialize(self.elliptic[i], max_degree)

    def materialize(self, max_degree=DEFAULT_MAX_DEGREE):
        ell = tuple(self.elliptic_point(i, max_degree) for i in range(len(self.elliptic)))
        return ProductPoint(self.torus_values(), ell, self.group)

    def __eq__(self, other):
        if not isinstance(other, SpanPoint):
            return NotImplemented
        return self.torus == other.torus and self.elliptic == other.elliptic

    def __hash__(self):
        return hash((self.torus, self.elliptic))

    def __repr__(self):
        return f"SpanPoint{self}"

    def __str__(self):
        parts = [str(c) for c in self.torus]
        pools = self.space.pools
        parts += [pools[c].format(v) for c, v in zip(self.group.curves, self.elliptic)]
        return "(" + ", ".join(parts) + ")"


def formal_membership(x, gamma):
    """Exact membership of a formal point in a formal subgroup.

    Returns (witness or None, certified) where ``certified`` says whether a
    None answer is a proof of absence.
    """
    space = x.space
    sol = space.solve(gamma.generators, x)
    if sol is None:
        return None, space.independent
    x0, kernel = sol
    return _size_reduce(x0, kernel), True
