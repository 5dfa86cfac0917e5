import pytest

from fsets.errors import GroupMismatch, InvalidArgument
from fsets.exactfield import Poly, TowerField
from fsets.groupmodel import (
    CHECK_CURVE,
    CurveParams,
    ECPoint,
    GroupDescriptor,
    GroupHom,
    ec_add,
    ec_scalar_mul,
    elliptic_rank,
    hom_apply,
    hom_kernel_dim,
)


@pytest.fixture
def setting():
    L = TowerField(5, Poly([1, 0, 0, 1], 5))
    E = CurveParams(5, 0, 1)
    return L, E, ECPoint(L.t, L.s, E, L)


def test_curve_checking_enabled_under_tests():
    assert CHECK_CURVE


def test_singular_curve_rejected():
    with pytest.raises(InvalidArgument):
        CurveParams(5, 0, 0)


def test_point_off_curve_rejected(setting):
    L, E, _ = setting
    with pytest.raises(InvalidArgument):
        ECPoint(L.t, L.t, E, L)


def test_cleared_curve_check_matches_field_arithmetic(setting):
    L, E, P = setting
    pts = [ec_scalar_mul(n, P) for n in (1, 2, 3)]
    pts += [ec_add(Q, ECPoint(L(0), L(1), E, L)) for Q in pts]  # x and y with both tower parts
    assert any(not Q.x.in_base for Q in pts)
    for Q in pts:
        assert Q.on_curve() and Q.y * Q.y == E.rhs(Q.x)
        for bad in (
            ECPoint(Q.x, Q.y + 1, E, L, check=False),
            ECPoint(Q.x + L.s, Q.y, E, L, check=False),
            ECPoint(Q.x * L.t, Q.y, E, L, check=False),
        ):
            assert bad.on_curve() == (bad.y * bad.y == E.rhs(bad.x))


def test_doubling_and_inverse(setting):
    L, E, P = setting
    O = ECPoint.infinity(E, L)
    assert ec_add(P, -P) == O
    assert ec_add(P, O) == P
    assert ec_add(P, P) == ec_scalar_mul(2, P)
    assert ec_scalar_mul(-3, P) == -ec_scalar_mul(3, P)
    assert ec_scalar_mul(0, P).is_infinity


def test_two_torsion_doubles_to_infinity(setting):
    L, E, _ = setting
    T = ECPoint(L(4), L(0), E, L)  # x^3 + 1 = 0 at x = -1
    assert ec_add(T, T).is_infinity


def test_scalar_mul_matches_repeated_addition(setting):
    L, E, P = setting
    acc = ECPoint.infinity(E, L)
    for n in range(1, 12):
        acc = ec_add(acc, P)
        assert ec_scalar_mul(n, P) == acc


def test_product_group_identity_and_mismatch(setting):
    L, E, P = setting
    G = GroupDescriptor(L, 5, 2, (E,))
    x = G.point((L.t, L.t + 1), (P,))
    assert x + G.identity() == x
    assert (x - x).is_identity
    assert x * 3 == x + x + x
    H = GroupDescriptor(L, 5, 1, (E,))
    with pytest.raises(GroupMismatch):
        x + H.point((L.t,), (P,))
    with pytest.raises(InvalidArgument):
        G.point((L.t, L.zero), (P,))


def test_frobenius_on_product(setting):
    L, E, P = setting
    G = GroupDescriptor(L, 5, 1, (E,))
    x = G.point((L.t + 1,), (P,))
    y = x.frobenius(5)
    assert y.torus[0] == (L.t + 1) ** 5
    assert y.elliptic[0] == P.frobenius(5)


def test_homomorphism_shapes_and_kernel(setting):
    L, E, P = setting
    G = GroupDescriptor(L, 5, 2, (E,))
    H = GroupDescriptor(L, 5, 2, ())
    pi = GroupHom(G, H, [[1, 0], [0, 1]], [])
    assert pi.is_surjective and hom_kernel_dim(pi) == 1
    x = G.point((L.t, L.t + 1), (P,))
    assert hom_apply(pi, x) == H.point((L.t, L.t + 1))
    ident = GroupHom.identity(G)
    assert hom_kernel_dim(ident) == 0 and hom_apply(ident, x) == x
    with pytest.raises(InvalidArgument):
        GroupHom(G, H, [[1, 0]], [])
    onto_E = GroupHom(G, GroupDescriptor(L, 5, 0, (E,)), [], [[(2, 1)]])
    assert elliptic_rank(onto_E) == 1
    assert hom_apply(onto_E, x).elliptic[0] == ec_add(ec_scalar_mul(2, P), P.frobenius(5))
