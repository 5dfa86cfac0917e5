"""Groupless, generalized and pseudo-generalized F-sets.

A groupless F-set is ``alpha_0 + sum_i F^{k_i n_i}(alpha_i)`` with every
``n_i >= 0``.  Summands may be *linked* so that several of them share one
exponent, which is how sets like ``F^{2n}(Q1) + F^{4n}(Q2)`` are written.
Exponent tuples always have one entry per link group.
"""

import itertools
import math
from dataclasses import dataclass

from .errors import InvalidArgument, UnsupportedShape
from .frobenius import FrobeniusOp, frob_apply
from .groupmodel import hom_apply, hom_kernel_dim
from .valuation import coordinate_support, coordinate_valuation
from .zfmodule import DEFAULT_BUDGET, Subgroup, bounded_membership, enumerate_group, evaluate


class GrouplessFSet:
    def __init__(self, base, summands=(), op=None, links=None, label=None):
        self.base = base
        self.summands = tuple((P, int(k)) for P, k in summands)
        for P, k in self.summands:
            if k < 1:
                raise InvalidArgument("strides must be positive")
            if (len(P.torus), len(P.elliptic)) != (len(base.torus), len(base.elliptic)):
                raise InvalidArgument("summands live in a different group than the base point")
        if op is None:
            op = FrobeniusOp(base.group.q)
        self.op = op
        r = len(self.summands)
        if links is None:
            links = [(i,) for i in range(r)]
        links = tuple(tuple(sorted(g)) for g in links)
        flat = sorted(i for g in links for i in g)
        if flat != list(range(r)) or any(not g for g in links):
            raise InvalidArgument("links must partition the summand indices")
        self.links = links
        self.label = label

    @property
    def r(self):
        return len(self.summands)

    @property
    def n_exponents(self):
        return len(self.links)

    @property
    def linked(self):
        return any(len(g) > 1 for g in self.links)

    def point(self, exps):
        """alpha_0 + sum F^{k_i n_g(i)}(alpha_i) for one exponent tuple."""
        if len(exps) != self.n_exponents:
            raise InvalidArgument(f"expected {self.n_exponents} exponents")
        acc = self.base
        for g, n in zip(self.links, exps):
            if n < 0:
                raise InvalidArgument("exponents must be nonnegative")
            for i in g:
                P, k = self.summands[i]
                acc = acc + frob_apply(self.op, P, k * n)
        return acc

    def __repr__(self):
        if self.label:
            return f"GrouplessFSet({self.label})"
        return f"GrouplessFSet(r={self.r}, strides={[k for _, k in self.summands]}, q={self.op.q})"


def normalize_common_k(S):
    """Rewrite S as a union of sets sharing the stride k = lcm(k_i).

    n_i = (k / k_i) m + r_i with 0 <= r_i < k / k_i turns F^{k_i n_i} into
    F^{k m} applied to F^{k_i r_i}(alpha_i); one output per residue tuple.
    """
    if S.linked:
        raise UnsupportedShape("linked exponents have no common-stride normal form")
    if not S.summands:
        return [S]
    ks = [k for _, k in S.summands]
    K = math.lcm(*ks)
    out = []
    for res in itertools.product(*[range(K // k) for k in ks]):
        summands = [(frob_apply(S.op, P, k * r), K) for (P, k), r in zip(S.summands, res)]
        T = GrouplessFSet(S.base, summands, S.op)
        T.origin = tuple((r, K // k) for r, k in zip(res, ks))
        out.append(T)
    return out


def original_caps(T, N):
    """Exponent caps on a normalized set matching n_i <= N in the original set.

    n_i = a_i m + r_i <= N  iff  m <= (N - r_i) // a_i.  None means the
    residue class itself already exceeds N.
    """
    origin = getattr(T, "origin", None)
    if origin is None:
        return [N] * T.n_exponents
    caps = []
    for r, a in origin:
        if r > N:
            return None
        caps.append((N - r) // a)
    return caps


def enumerate_fset(S, N, caps=None):
    """[(exponent tuple, point)] for all tuples in [0, N]^n, lexicographic.

    ``caps`` optionally gives a separate cap per exponent.
    """
    if N < 0:
        raise InvalidArgument("cap must be nonnegative")
    caps = [N] * S.n_exponents if caps is None else list(caps)
    cache = {}

    def image(i, e):
        key = (i, e)
        v = cache.get(key)
        if v is None:
            P, _ = S.summands[i]
            v = frob_apply(S.op, P, e)
            cache[key] = v
        return v

    out = []
    for exps in itertools.product(*[range(c + 1) for c in caps]):
        acc = S.base
        for g, n in zip(S.links, exps):
            for i in g:
                acc = acc + image(i, S.summands[i][1] * n)
        out.append((exps, acc))
    return out


@dataclass(frozen=True)
class Membership:
    """Outcome of an F-set membership query.

    ``exponents`` is the lexicographically first witness or None.  When it is
    None, ``certified`` tells whether absence holds for every exponent (True)
    or only up to the cap (False).
    """

    exponents: tuple = None
    certified: bool = True

    @property
    def found(self):
        return self.exponents is not None

    def __bool__(self):
        return self.found


def _valuation(P, j, place):
    return coordinate_valuation(P.torus[j], place)


def _places(points, j):
    places = {(): None}
    for P in points:
        sup = coordinate_support(P.torus[j])
        if sup is None:
            continue
        for pi in sup:
            places.setdefault(pi.key(), pi)
    return [places[k] for k in sorted(places)]


def exponent_bounds(x, S, N):
    """Per link group, the largest exponent any solution can use (capped at N+1).

    Every torus valuation (each place of F_p(t), including infinity) is a
    homomorphism that F scales by q.  For a functional that is nonnegative
    on every summand, the sum is monotone in each exponent, which bounds the
    groups it sees.  Returns None when some functional already rules out
    every tuple.
    """
    q = S.op.q
    best = [None] * S.n_exponents
    pts = [S.base, x] + [P for P, _ in S.summands]
    for j in range(len(x.torus)):
        for place in _places(pts, j):
            w = [_valuation(P, j, place) for P, _ in S.summands]
            vx, v0 = _valuation(x, j, place), _valuation(S.base, j, place)
            if vx is None or v0 is None or any(a is None for a in w):
                continue
            T = vx - v0
            for sign in (1, -1):
                ws = [sign * a for a in w]
                Ts = sign * T
                if any(a < 0 for a in ws) or not any(ws):
                    continue
                total = sum(ws)
                if Ts < total:
                    return None
                for gi, g in enumerate(S.links):
                    if not any(ws[i] for i in g):
                        continue
                    rest = total - sum(ws[i] for i in g)
                    n = 0
                    while n <= N:
                        nxt = rest + sum(ws[i] * q ** (S.summands[i][1] * (n + 1)) for i in g)
                        if nxt > Ts:
                            break
                        n += 1
                    best[gi] = n if best[gi] is None else min(best[gi], n)
    return best


def fset_membership(x, S, N):
    """Search x = alpha_0 + sum F^{k_i n}(alpha_i) over exponents <= N.

    Valuation bounds shrink the box; when they confine every exponent to
    [0, N] the search is exhaustive and a miss is certified for all n.
    """
    if not S.summands:
        return Membership(() if x == S.base else None, True)
    bounds = exponent_bounds(x, S, N)
    if bounds is None:
        return Membership(None, True)
    hi = [N if b is None else min(b, N) for b in bounds]
    certified = all(b is not None and b <= N for b in bounds)
    for exps in itertools.product(*[range(h + 1) for h in hi]):
        if S.point(exps) == x:
            return Membership(tuple(exps), True)
    return Membership(None, certified)


def _same_shape(P, G):
    return (len(P.torus), len(P.elliptic)) == (G.n_torus, G.n_elliptic)


class GeneralizedFSet:
    """(pi restricted to Gamma)^{-1}(S) with dim ker(pi) > 0 and pi surjective."""

    def __init__(self, hom, image_set, group, label=None):
        if hom_kernel_dim(hom) <= 0:
            raise InvalidArgument("a generalized F-set needs a homomorphism with positive-dimensional kernel")
        if not hom.is_surjective:
            raise InvalidArgument("the homomorphism is not surjective")
        if not _same_shape(image_set.base, hom.target):
            raise InvalidArgument("the image set does not live in the target group")
        for g in group.generators:
            if not _same_shape(g, hom.source):
                raise InvalidArgument("the subgroup does not live in the source group")
        self.hom = hom
        self.image_set = image_set
        self.group = group
        self.label = label

    def contains(self, x, N):
        """Membership of a point already known to lie in Gamma."""
        return fset_membership(hom_apply(self.hom, x), self.image_set, N)

    def __repr__(self):
        return f"GeneralizedFSet({self.label or self.image_set})"


class PseudoGeneralizedFSet:
    """x_0 + (pi restricted to Gamma_0)^{-1}(S), with x_0 in Gamma witnessed."""

    def __init__(self, offset, subgroup, hom, image_set, gamma, witness=None, bound=10, label=None):
        if not hom.is_surjective:
            raise InvalidArgument("the homomorphism is not surjective")
        if not _same_shape(image_set.base, hom.target):
            raise InvalidArgument("the image set does not live in the target group")
        if witness is None:
            witness = find_witness(offset, gamma, bound)
            if witness is None:
                raise InvalidArgument("offset is not a member of Gamma within the search bound")
        elif evaluate(gamma, witness) != offset:
            raise InvalidArgument("the supplied witness does not evaluate to the offset")
        self.offset = offset
        self.subgroup = subgroup
        self.hom = hom
        self.image_set = image_set
        self.gamma = gamma
        self.witness = list(witness)
        self.label = label

    def __repr__(self):
        return f"PseudoGeneralizedFSet({self.label or self.image_set})"


def find_witness(x, gamma, bound=10):
    """Exact formal membership when available, bounded search otherwise."""
    from .zfmodule import SpanPoint, formal_membership

    if isinstance(x, SpanPoint):
        c, _ = formal_membership(x, gamma)
        return c
    return bounded_membership(x, gamma, bound)


@dataclass
class FSetUnion:
    groupless: list
    generalized: list
    pseudo: list

    @classmethod
    def empty(cls):
        return cls([], [], [])

    def __len__(self):
        return len(self.groupless) + len(self.generalized) + len(self.pseudo)


def pullback_verdicts(T, B, N, budget=DEFAULT_BUDGET):
    """[(c, point, Membership)] for c with ||c|| <= B and pi(point) in S."""
    out = []
    for c, P in enumerate_group(T.group, B, budget):
        m = fset_membership(hom_apply(T.hom, P), T.image_set, N)
        if m.found:
            out.append((list(c), P, m))
    return out


def pullback_enumerate(T, B, N, budget=DEFAULT_BUDGET):
    """All coefficient vectors c, ||c||_inf <= B, with pi(evaluate(Gamma, c)) in S."""
    return [c for c, _, _ in pullback_verdicts(T, B, N, budget)]


def pseudo_enumerate(T, B, N, budget=DEFAULT_BUDGET):
    """[(c0, point)] with point = x_0 + evaluate(Gamma_0, c0) and pi(.) in S."""
    out = []
    for c, P in enumerate_group(T.subgroup, B, budget):
        if fset_membership(hom_apply(T.hom, P), T.image_set, N).found:
            out.append((list(c), T.offset + P))
    return out


def pseudo_membership(x, T, N, bound):
    """Membership of x in a pseudo-generalized set; Gamma_0 part searched to ``bound``."""
    from .zfmodule import SpanPoint, formal_membership

    y = x - T.offset
    if isinstance(y, SpanPoint):
        c, cert = formal_membership(y, T.subgroup)
        if c is None:
            return Membership(None, cert)
    else:
        c = bounded_membership(y, T.subgroup, bound)
        if c is None:
            return Membership(None, False)
    return fset_membership(hom_apply(T.hom, y), T.image_set, N)

