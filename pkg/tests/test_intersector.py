import oracles
from fsets.errors import ResourceLimit
from fsets.fsetalgebra import FSetUnion
from fsets.intersector import (
    Certificate,
    brute_intersect,
    check_certificate,
    example3_data,
    example3_intersection,
    projection_certificate,
    recurrence_coeffs,
    recurrence_report,
    tautological_certificate,
)
from fsets.frobenius import IntPoly
from fsets.variety import Subvariety

import pytest


def test_threads_do_not_change_the_answer(ex1):
    a = brute_intersect(ex1.variety, ex1.gamma, 40, threads=1)
    b = brute_intersect(ex1.variety, ex1.gamma, 40, threads=4)
    assert a.coefficients == b.coefficients == [[1], [5], [25]]


def test_full_group_gives_every_element(ex1):
    X = Subvariety.from_strings(2, 1, 5)
    res = brute_intersect(X, ex1.gamma, 2)
    assert res.coefficients == [[c] for c in range(-2, 3)]


def test_budget_is_enforced(ex1):
    with pytest.raises(ResourceLimit):
        brute_intersect(ex1.variety, ex1.gamma, 10, budget=5)


def test_empty_certificate_fails(ex1):
    cert = Certificate(FSetUnion.empty(), 3, 30)
    rep = check_certificate(ex1.variety, ex1.gamma, cert)
    assert rep.verdict == "FAIL" and rep.exit_code == 2
    assert [f["coefficients"] for f in rep.completeness_failures] == [[1], [5], [25]]


def test_tautological_certificate_passes(ex2):
    inter = brute_intersect(ex2.variety, ex2.gamma, 130)
    rep = check_certificate(ex2.variety, ex2.gamma, tautological_certificate(inter), intersection=inter)
    assert rep.verdict == "PASS"


def test_projection_certificate_on_example1(ex1):
    rep = check_certificate(ex1.variety, ex1.gamma, projection_certificate(ex1))
    assert rep.verdict == "PASS"


def test_unsound_certificate_detected(ex1):
    from fsets.frobenius import FrobeniusOp
    from fsets.fsetalgebra import GrouplessFSet

    bad = GrouplessFSet(ex1.points["Q"], [(ex1.points["Q2"], 1)], FrobeniusOp(5), label="Q + F^n(Q2)")
    good = ex1.certificate.claimed.groupless
    cert = Certificate(FSetUnion(good + [bad], [], []), 2, 130)
    rep = check_certificate(ex1.variety, ex1.gamma, cert)
    assert rep.verdict == "FAIL" and rep.soundness_failures and not rep.completeness_failures


def test_small_cap_is_bounded_not_pass(ex1):
    cert = ex1.certificate
    small = Certificate(cert.claimed, 0, 130)
    rep = check_certificate(ex1.variety, ex1.gamma, small)
    assert rep.verdict == "PASS-BOUNDED" and rep.exit_code == 3
    assert rep.undecided


def test_recurrence_matches_oracle():
    for h in ([5, -2, 1], [5, 0, 1], [3, 1, -4, 1]):
        for n in range(30):
            assert list(recurrence_coeffs(IntPoly(h), n)) == oracles.recurrence_oracle(h, n)
    vecs = example3_intersection(IntPoly([5, -2, 1]), 30)
    assert vecs == [oracles.recurrence_oracle([5, -2, 1], n) for n in range(31)]


def test_recurrence_on_finite_field_specialization():
    """F^n(P) = a0 P + a1 F(P) on E(F_{5^6}) with F the 5-power map."""
    F = oracles.GF(5, 6)
    E = oracles.GFCurve(F, 1, 0)
    pts = E.some_points(4)
    for P in pts:
        FP = E.frob(P)
        for n in range(26):
            a0, a1 = oracles.recurrence_oracle([5, -2, 1], n)
            assert E.frob(P, n) == E.add(E.mul(a0, P), E.mul(a1, FP))


def test_recurrence_report_catches_wrong_h():
    curve, P, h = example3_data()
    rep = recurrence_report(curve, P, IntPoly([5, 0, 1]), 10)
    assert not rep.ok and rep.failed_at is not None and rep.failed_at <= 2
    rep = recurrence_report(curve, P, h, 25)
    assert rep.ok and rep.relation_holds and rep.direct_checked[-1] >= 3
