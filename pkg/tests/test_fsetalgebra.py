import pytest

from fsets.errors import InvalidArgument, UnsupportedShape
from fsets.frobenius import FrobeniusOp, frob_apply
from fsets.fsetalgebra import (
    GeneralizedFSet,
    GrouplessFSet,
    PseudoGeneralizedFSet,
    enumerate_fset,
    fset_membership,
    normalize_common_k,
    original_caps,
    pseudo_enumerate,
    pseudo_membership,
    pullback_enumerate,
)
from fsets.groupmodel import GroupDescriptor, GroupHom
from fsets.zfmodule import Subgroup


@pytest.fixture(scope="module")
def pts(ex1):
    return ex1.points, ex1.space, FrobeniusOp(5)


def test_point_and_enumeration_agree(pts):
    p, space, op = pts
    S = GrouplessFSet(p["Q"], [(p["Q1"], 1), (p["Q2"], 2)], op)
    items = enumerate_fset(S, 3)
    assert len(items) == 16
    for exps, x in items:
        assert x == S.point(exps)
    assert S.point((1, 2)) == p["Q"] + frob_apply(op, p["Q1"], 1) + frob_apply(op, p["Q2"], 4)


def test_strides_and_links_validated(pts):
    p, _, op = pts
    with pytest.raises(InvalidArgument):
        GrouplessFSet(p["Q"], [(p["Q1"], 0)], op)
    with pytest.raises(InvalidArgument):
        GrouplessFSet(p["Q"], [(p["Q1"], 1), (p["Q2"], 1)], op, links=[(0,)])


def test_normalize_small_case(pts):
    p, space, op = pts
    S = GrouplessFSet(space.identity(), [(p["Q1"], 2), (p["Q2"], 3)], op)
    parts = normalize_common_k(S)
    assert len(parts) == 3 * 2 and all(k == 6 for T in parts for _, k in T.summands)
    N = 5
    lhs = {x for _, x in enumerate_fset(S, N)}
    rhs = set()
    for T in parts:
        caps = original_caps(T, N)
        if caps is not None:
            rhs |= {x for _, x in enumerate_fset(T, N, caps)}
    assert lhs == rhs


def test_normalize_rejects_linked(ex1):
    with pytest.raises(UnsupportedShape):
        normalize_common_k(ex1.certificate.claimed.groupless[0])


def test_membership_and_certified_absence(pts):
    p, space, op = pts
    S = GrouplessFSet(space.identity(), [(p["Q1"], 1)], op)
    m = fset_membership(frob_apply(op, p["Q1"], 7), S, 3)
    assert not m.found and not m.certified  # n = 7 lies beyond the cap, so absence is only bounded
    m = fset_membership(frob_apply(op, p["Q1"], 2), S, 3)
    assert m.exponents == (2,)
    m = fset_membership(p["Q"], S, 3)
    assert not m.found and m.certified


def test_membership_without_torus_is_bounded(pts):
    p, space, op = pts
    S = GrouplessFSet(space.identity(), [(p["Q2"], 1)], op)
    m = fset_membership(p["Q2"] * 3, S, 2)
    assert not m.found  # elliptic-only points carry no valuation functional


def test_linked_set_points(ex1):
    S1, S2 = ex1.certificate.claimed.groupless
    Q = ex1.points["Q"]
    for n in range(4):
        assert S1.point((n,)) == Q * 25**n
        assert S2.point((n,)) == Q * 5 ** (2 * n + 1)


def test_generalized_requires_kernel_and_surjectivity(ex1):
    G = ex1.group
    with pytest.raises(InvalidArgument):
        GeneralizedFSet(GroupHom.identity(G), ex1.certificate.claimed.groupless[0], ex1.gamma)
    H = GroupDescriptor(G.field, G.q, 2, ())
    not_onto = GroupHom(G, H, [[1, 0], [2, 0]], [])
    S = GrouplessFSet(ex1.space.for_group(H).identity(), (), FrobeniusOp(5))
    with pytest.raises(InvalidArgument):
        GeneralizedFSet(not_onto, S, ex1.gamma)


def test_pullback_enumeration(ex2):
    T = ex2.certificate.claimed.generalized[0]
    assert pullback_enumerate(T, 30, 3) == [[1], [5], [25]]


def test_pseudo_set(ex2):
    from fsets.intersector import projection_certificate

    T = projection_certificate(ex2).claimed.generalized[0]
    Q = ex2.points["Q"]
    off = Q * 5
    sub = Subgroup([Q], ex2.group)
    S = PseudoGeneralizedFSet(off, sub, T.hom, T.image_set, ex2.gamma, label="5Q + pi^-1(...)")
    assert S.witness == [5]
    got = pseudo_enumerate(S, 30, 3)
    assert [c for c, _ in got] == [[1], [5], [25]]
    assert [x for _, x in got] == [Q * 6, Q * 10, Q * 30]
    assert pseudo_membership(Q * 30, S, 3, 30).found
    assert not pseudo_membership(Q * 25, S, 3, 30).found
    with pytest.raises(InvalidArgument):
        PseudoGeneralizedFSet(off, sub, T.hom, T.image_set, ex2.gamma, witness=[4])
