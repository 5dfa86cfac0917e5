import pytest

import oracles
from fsets.errors import InvalidRelation, ResourceLimit
from fsets.exactfield import Poly, TowerField
from fsets.frobenius import (
    FrobeniusOp,
    IntPoly,
    apply_poly,
    char_poly_frobenius,
    count_points,
    frob_apply,
    int_poly_lcm,
    minimal_poly_curve,
    minimal_poly_on_G,
    sample_points,
    trace_from_prime_field,
    verify_relation,
)
from fsets.groupmodel import CurveParams, ECPoint, GroupDescriptor

CURVES = [(0, 1), (1, 0), (2, 1), (1, 1), (4, 2)]


@pytest.mark.parametrize("a4,a6", CURVES)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_point_count_matches_brute_force(a4, a6, k):
    E = CurveParams(5, a4, a6)
    assert count_points(E, 5**k) == oracles.count_points_gf(a4, a6, 5, k)


@pytest.mark.parametrize("a4,a6", CURVES)
def test_trace_recurrence_matches_direct_count(a4, a6):
    E = CurveParams(5, a4, a6)
    for k in (1, 2, 3, 4):
        q = 5**k
        assert trace_from_prime_field(E, q) == q + 1 - count_points(E, q)


def test_known_characteristic_polynomials():
    assert char_poly_frobenius(CurveParams(5, 0, 1), 5).tolist() == [5, 0, 1]
    assert char_poly_frobenius(CurveParams(5, 1, 0), 5).tolist() == [5, -2, 1]
    # over F_25 the supersingular curve has F = [-5]
    assert minimal_poly_curve(CurveParams(5, 0, 1), 25).tolist() == [5, 1]


def test_count_limit():
    with pytest.raises(ResourceLimit):
        count_points(CurveParams(5, 0, 1), 5**10)


def test_int_poly_lcm():
    a, b = IntPoly([5, 0, 1]), IntPoly([-5, 1])
    assert int_poly_lcm(a, b) == a * b
    assert int_poly_lcm(a, a) == a


def _tower(d, a4, a6):
    L = TowerField(5, Poly(d, 5))
    E = CurveParams(5, a4, a6)
    return L, E, ECPoint(L.t, L.s, E, L)


@pytest.mark.parametrize("d,a4,a6", [([1, 0, 0, 1], 0, 1), ([0, 1, 0, 1], 1, 0)])
def test_relation_on_tower_points(d, a4, a6):
    L, E, P = _tower(d, a4, a6)
    op = FrobeniusOp(5)
    h = minimal_poly_curve(E, 5)
    samples = sample_points(E, P, op, count=20, seed=1)
    assert verify_relation(h, op, samples)
    wrong = IntPoly([5, 1, 1])
    assert not verify_relation(wrong, op, [P])


def test_frobenius_on_G_with_torus():
    L, E, P = _tower([0, 1, 0, 1], 1, 0)
    G = GroupDescriptor(L, 5, 1, (E,))
    h = minimal_poly_on_G(G)
    assert h == IntPoly([-5, 1]) * IntPoly([5, -2, 1])
    x = G.point((L.t + 2,), (P,))
    assert apply_poly(h, FrobeniusOp(5), x).is_identity


def test_frob_apply_composes():
    L, E, P = _tower([1, 0, 0, 1], 0, 1)
    op = FrobeniusOp(5)
    assert frob_apply(op, frob_apply(op, P, 1), 1) == frob_apply(op, P, 2)
    assert frob_apply(FrobeniusOp(25), P, 1) == frob_apply(op, P, 2)


def test_span_rejects_false_relation():
    from fsets.zfmodule import Subgroup, span_generators

    L, E, P = _tower([1, 0, 0, 1], 0, 1)
    G = GroupDescriptor(L, 5, 0, (E,))
    gamma = Subgroup([G.point((), (P,))], G)
    with pytest.raises(InvalidRelation):
        span_generators(gamma, IntPoly([5, -2, 1]))
