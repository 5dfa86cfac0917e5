import random

import pytest

import oracles
from fsets.errors import InvalidArgument, InvalidRelation, ResourceLimit
from fsets.exactfield import Poly, TowerField
from fsets.frobenius import FrobeniusOp, IntPoly, frob_apply, minimal_poly_curve, minimal_poly_on_G
from fsets.groupmodel import CurveParams, ECPoint, GroupDescriptor
from fsets.zfmodule import (
    SpanCoordinates,
    Subgroup,
    bounded_membership,
    enumerate_group,
    evaluate,
    formal_membership,
    group_size,
    span_generators,
    torus_membership,
)

P = 5


@pytest.fixture(scope="module")
def torus2():
    L = TowerField(P, Poly([1, 0, 0, 1], P))
    return L, GroupDescriptor(L, P, 2, ())


def test_enumeration_is_lexicographic_and_complete(torus2):
    L, G = torus2
    gamma = Subgroup([G.point((L.t, L(1))), G.point((L(1), L.t + 1))], G)
    items = list(enumerate_group(gamma, 2))
    assert len(items) == group_size(2, 2) == 25
    assert [c for c, _ in items] == sorted(c for c, _ in items)
    for c, x in items:
        assert x == evaluate(gamma, c)


def test_budget_guard(torus2):
    L, G = torus2
    gamma = Subgroup([G.point((L.t, L(1)))] * 3, G)
    with pytest.raises(ResourceLimit):
        list(enumerate_group(gamma, 200, budget=1000))


def test_subgroup_needs_generators():
    with pytest.raises(InvalidArgument):
        Subgroup([])


def test_bounded_membership_is_lexicographically_first(torus2):
    L, G = torus2
    g = G.point((L.t, L(1)))
    gamma = Subgroup([g, g * 2], G)
    x = g * 3
    c = bounded_membership(x, gamma, 3)
    assert c == [-3, 3]  # first in lexicographic order among all representations


def test_torus_membership_examples(torus2):
    L, G = torus2
    gamma = Subgroup([G.point((L.t, L.t + 1)), G.point((L.t + 1, L(2)))], G)
    x = G.point((L.t**2 * (L.t + 1), (L.t + 1) ** 2 * 2))
    assert torus_membership(x, gamma) == [2, 1]
    assert torus_membership(G.point((L.t + 2, L(1))), gamma) is None
    assert torus_membership(G.identity(), gamma) == [0, 0]


def _rand_poly(rng):
    while True:
        c = [rng.randrange(P) for _ in range(rng.randrange(1, 3))] + [1]
        if c[0]:
            return c


def test_torus_membership_unit_parts():
    """Units of F_5 only constrain coefficients mod 4."""
    L = TowerField(P, Poly([1, 0, 0, 1], P))
    G = GroupDescriptor(L, P, 1, ())
    gamma = Subgroup([G.point((L(2),)), G.point((L.t,))], G)
    x = G.point((L.t**3 * 3,))  # 3 = 2^3 in F_5
    c = torus_membership(x, gamma)
    assert c is not None and evaluate(gamma, c) == x
    assert torus_membership(G.point((L.t ** 3 * 3,)), Subgroup([G.point((L(4),)), G.point((L.t,))], G)) is None


def test_torus_membership_against_naive_oracle():
    rng = random.Random(99)
    L = TowerField(P, Poly([1, 0, 0, 1], P))
    for trial in range(15):
        n = rng.randrange(1, 3)
        G = GroupDescriptor(L, P, n, ())
        raw = [[(_rand_poly(rng), [rng.randrange(1, P)]) for _ in range(n)] for _ in range(2)]
        gens = [G.point(tuple(L(Poly(a, P)) / L(Poly(b, P)) for a, b in g)) for g in raw]
        gamma = Subgroup(gens, G)
        c = [rng.randint(-2, 2) for _ in gens]
        x = evaluate(gamma, c)
        xr = tuple((list(map(int, v.a.num.c)), list(map(int, v.a.den.c))) for v in x.torus)
        want = oracles.torus_bounded_oracle(xr, raw, 2, P)
        got = torus_membership(x, gamma)
        assert want is not None and got is not None
        assert evaluate(gamma, got) == x


@pytest.fixture(scope="module")
def ordinary():
    L = TowerField(P, Poly([0, 1, 0, 1], P))
    E = CurveParams(P, 1, 0)
    Pt = ECPoint(L.t, L.s, E, L)
    G = GroupDescriptor(L, P, 1, (E,))
    space = SpanCoordinates(G)
    space.register(Pt, "P")
    return L, E, Pt, G, space


def test_span_generators_shape(ordinary):
    L, E, Pt, G, space = ordinary
    q = space.lift(G.point((L.t,), (Pt,)))
    gamma = Subgroup([q], G)
    with pytest.raises(InvalidRelation):
        span_generators(gamma, minimal_poly_curve(E, P))  # misses the torus factor x - 5
    span = span_generators(gamma, minimal_poly_on_G(G))
    assert span.rank == 3
    op = FrobeniusOp(P)
    assert span.span_generators == (q, frob_apply(op, q, 1), frob_apply(op, q, 2))


def test_formal_frobenius_matches_relation(ordinary):
    L, E, Pt, G, space = ordinary
    x = space.lift(G.point((L(1),), (Pt,)))
    op = FrobeniusOp(P)
    F2 = frob_apply(op, x, 2)
    assert F2 == frob_apply(op, x, 1) * 2 - x * 5


def test_formal_materialize_agrees_with_concrete(ordinary):
    L, E, Pt, G, space = ordinary
    base = G.point((L.t + 1,), (Pt,))
    fx = space.lift(base)
    op = FrobeniusOp(P)
    for k in range(4):
        for m in (-2, 1, 3):
            assert (frob_apply(op, fx, k) * m).materialize() == frob_apply(op, base, k) * m


def test_formal_membership(ordinary):
    L, E, Pt, G, space = ordinary
    q = space.lift(G.point((L.t,), (Pt,)))
    gamma = span_generators(Subgroup([q], G), IntPoly([-5, 1]) * minimal_poly_curve(E, P)).subgroup
    op = FrobeniusOp(P)
    x = frob_apply(op, q, 5) - q * 7
    c, certified = formal_membership(x, gamma)
    assert certified and evaluate(gamma, c) == x
    y = space.lift(G.point((L.t + 1,), (Pt,)))
    c, certified = formal_membership(y, gamma)
    assert c is None and certified
