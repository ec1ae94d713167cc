import random
from fractions import Fraction

import pytest

from hopfq.associator import (
    AB,
    Associator,
    GTElement,
    _Evaluator,
    gt_act,
    gt_act_second_form,
    gt_curve_zero,
    gt_identity,
    gt_mul,
    gt_mul_second_form,
    gt_verify,
    load_associator,
    save_associator,
    solve_associator,
    solved_associator,
    verify_associator,
)
from hopfq.freealg import NCSeries, diamond, lyndon_basis, nc_exp
from hopfq.truncmod import PreconditionError


def phi4():
    return solved_associator(4)


def test_degree2_coefficient_lambda_half():
    a = solve_associator(2, Fraction(1, 2))
    # hexagon at degree 2 forces lambda^2/6 = 1/24 on [A,B]
    assert a.phi.coefficient((0, 1)) == Fraction(1, 24)
    assert a.phi.coefficient((1, 0)) == Fraction(-1, 24)


@pytest.mark.parametrize("lam", [Fraction(1), Fraction(2), Fraction(1, 3)])
def test_degree2_coefficient_general_lambda(lam):
    # oracle: independent degree-2 hexagon solve forces lambda^2/6
    a = solve_associator(2, lam)
    assert a.phi.coefficient((0, 1)) == lam * lam / 6


def test_phi_one_vacuous_at_degree_1():
    a = solve_associator(1, Fraction(1, 2))
    assert a.phi == NCSeries.unit(AB, 1)
    assert verify_associator(a).ok()


def test_phi_one_fails_hexagon_at_degree_2():
    bad = Associator(NCSeries.unit(AB, 2), Fraction(1, 2))
    rep = verify_associator(bad)
    assert not rep.ok()
    assert any(k.startswith("hexagon") for k in rep.failures())
    # the degree-2 obstruction is the e^{lambda Lambda} expansion: check the
    # residual itself is nonzero with the expected prefactor lambda^2/2
    ev = _Evaluator(2)
    res = ev.hexagon_residual(NCSeries.unit(AB, 2), Fraction(1, 2), 0)
    assert res


def test_verify_solved_degree4_and_duality():
    a = phi4()
    rep = verify_associator(a)
    assert rep.ok(), rep.failures()
    # duality as an explicit product
    from hopfq.freealg import substitute

    swapped = substitute(
        a.phi, {0: NCSeries.gen(AB, 4, 1), 1: NCSeries.gen(AB, 4, 0)}
    )
    assert a.phi * swapped == NCSeries.unit(AB, 4)


def test_gt_identity_and_verify():
    g = gt_identity(4)
    assert gt_verify(g).ok()


def test_gt_curve_zero_properties():
    a = phi4()
    g0 = gt_curve_zero(a)
    assert g0.chi == 0
    assert not g0.f.component(1)  # no linear term
    assert g0.f.coefficient((0, 1)) == Fraction(-1, 24)
    assert diamond(a.phi, g0.f) == NCSeries.unit(AB, 4)
    assert diamond(g0.f, a.phi) == NCSeries.unit(AB, 4)
    assert gt_verify(g0).ok()
    # acting with g(0) degenerates the associator to (1, 0)
    acted = gt_act(g0, a)
    assert acted.lam == 0
    assert acted.phi == NCSeries.unit(AB, 4)


def test_gt_random_nonsolution_fails_relation2():
    f = NCSeries.unit(AB, 4) + lyndon_basis(AB, 2)[0][2].truncated(4) * Fraction(1, 5)
    g = GTElement(1, nc_exp(lyndon_basis(AB, 2)[0][2].truncated(4) * Fraction(1, 5)))
    rep = gt_verify(g)
    assert not rep.ok()
    assert "relation2" in rep.failures()


def test_gt_mul_forms_agree_and_chi_multiplicative():
    a = phi4()
    g0 = gt_curve_zero(a)
    e = gt_identity(4)
    m1 = gt_mul(g0, e)
    assert m1.chi == g0.chi and m1.f == g0.f
    m2 = gt_mul(e, g0)
    assert m2.f == g0.f
    both1 = gt_mul(g0, g0)
    both2 = gt_mul_second_form(g0, g0)
    assert both1.chi == both2.chi == 0
    assert both1.f == both2.f


def test_gt_act_forms_agree_and_result_verifies():
    a = phi4()
    g0 = gt_curve_zero(a)
    r1 = gt_act(g0, a)
    r2 = gt_act_second_form(g0, a)
    assert r1.lam == r2.lam and r1.phi == r2.phi
    e = gt_identity(4)
    same = gt_act(e, a)
    assert same.phi == a.phi and same.lam == a.lam
    assert verify_associator(gt_act(g0, a)).ok()


def test_gt_action_compatibility():
    # gt_act(g1, gt_act(g2, a)) = gt_act(gt_mul(g1, g2), a)
    a = phi4()
    g0 = gt_curve_zero(a)
    e = gt_identity(4)
    lhs = gt_act(g0, gt_act(e, a))
    rhs = gt_act(gt_mul(g0, e), a)
    assert lhs.phi == rhs.phi and lhs.lam == rhs.lam
    lhs2 = gt_act(e, gt_act(g0, a))
    rhs2 = gt_act(gt_mul(e, g0), a)
    assert lhs2.phi == rhs2.phi and lhs2.lam == rhs2.lam


def test_gt_mul_associative_on_verified():
    a = phi4()
    g0 = gt_curve_zero(a)
    e = gt_identity(4)
    gs = [g0, e, gt_mul(g0, g0)]
    for x in gs:
        for y in gs:
            for z in gs:
                lhs = gt_mul(gt_mul(x, y), z)
                rhs = gt_mul(x, gt_mul(y, z))
                assert lhs.chi == rhs.chi and lhs.f == rhs.f


def test_solve_lambda_zero_rejected():
    with pytest.raises(PreconditionError):
        solve_associator(3, 0)


def test_save_load_roundtrip(tmp_path):
    a = solved_associator(3)
    p = tmp_path / "assoc.json"
    save_associator(a, p)
    b = load_associator(p)
    assert b.phi == a.phi and b.lam == a.lam
    assert b.fingerprint() == a.fingerprint()
