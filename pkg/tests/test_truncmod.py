import random
from fractions import Fraction

import pytest

from hopfq.truncmod import (
    BudgetExceededError,
    HMap,
    HModule,
    NonUnitError,
    PreconditionError,
    TruncSeries,
    endo_exp,
    endo_log,
    hmap_add,
    hmap_compose,
    hmap_eq,
    hmap_kernel,
    hmap_tensor,
    identity_map,
    neumann_invert,
    quotient_reduce,
    series_exp,
    series_invert,
    series_log,
    series_mul,
    submodule_quotient,
    tensor_module,
    vec_eq,
)

N = 4


def ts(*coeffs):
    return TruncSeries(N, [Fraction(c) if not isinstance(c, str) else Fraction(c) for c in coeffs])


def rand_series(rng, order=N):
    return TruncSeries(order, [Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(order)])


def test_series_mul_geometric_inverse():
    # (1+h)*(1-h+h^2-h^3) = 1 mod h^4
    a = ts(1, 1)
    b = ts(1, -1, 1, -1)
    assert series_mul(a, b) == ts(1)


def test_series_mul_unit_and_truncation():
    rng = random.Random(7)
    a = rand_series(rng)
    assert series_mul(TruncSeries.const(N, 1), a) == a
    h = TruncSeries.hbar(N)
    hN1 = TruncSeries.hbar(N, N - 1)
    assert series_mul(h, hN1).is_zero()


def test_series_mul_order_mismatch():
    with pytest.raises(Exception):
        series_mul(TruncSeries(3, [1]), TruncSeries(4, [1]))


def test_ring_axioms_random():
    rng = random.Random(11)
    for _ in range(60):
        a, b, c = (rand_series(rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a


def test_series_invert():
    assert series_invert(ts(2)) == ts(Fraction(1, 2))
    assert series_invert(ts(1, 1)) == ts(1, -1, 1, -1)
    with pytest.raises(NonUnitError):
        series_invert(TruncSeries.hbar(N))
    rng = random.Random(3)
    for _ in range(20):
        a = rand_series(rng)
        if a.coeffs[0] == 0:
            continue
        assert a * series_invert(a) == TruncSeries.const(N, 1)


def test_series_exp_log_roundtrip():
    two_h = ts(0, 2)
    assert series_log(series_exp(two_h)) == two_h
    e = series_exp(TruncSeries.hbar(N))
    assert e * e == series_exp(ts(0, 2))
    assert series_log(ts(1)).is_zero()
    rng = random.Random(5)
    for _ in range(20):
        a = rand_series(rng)
        a = TruncSeries(N, (0,) + a.coeffs[1:])
        assert series_log(series_exp(a)) == a
        b = TruncSeries(N, (1,) + a.coeffs[1:])
        assert series_exp(series_log(b)) == b
    with pytest.raises(PreconditionError):
        series_exp(ts(1))
    with pytest.raises(PreconditionError):
        series_log(ts(0, 1))


def two_module(order=N):
    return HModule(order, ["x", "y"], degrees={"x": 1, "y": 2})


def test_hmap_compose_identity_and_interchange():
    m = two_module()
    one = TruncSeries.const(N, 1)
    f = HMap(m, m, {("x",): {("y",): one}, ("y",): {("x",): ts(0, 1)}})
    assert hmap_eq(hmap_compose(identity_map(m), f), f)
    assert hmap_eq(hmap_compose(f, identity_map(m)), f)
    g = HMap(m, m, {("x",): {("x",): ts(2)}})
    fp = HMap(m, m, {("y",): {("y",): ts(3)}})
    gp = HMap(m, m, {("x",): {("y",): one}})
    # (f ⊗ g) ∘ (f' ⊗ g') = (f∘f') ⊗ (g∘g')
    lhs = hmap_compose(hmap_tensor(f, g), hmap_tensor(fp, gp))
    rhs = hmap_tensor(hmap_compose(f, fp), hmap_compose(g, gp))
    assert hmap_eq(lhs, rhs)


def test_tensor_rank_bookkeeping():
    a = HModule(N, ["a", "b"])
    b = HModule(N, ["u", "v", "w"])
    t = tensor_module(a, b)
    assert t.dim == 6


def test_validity_budget_enforced():
    m = two_module()
    one = TruncSeries.const(N, 1)
    f = HMap(m, m, {("x",): {("x",): one}, ("y",): {("y",): one}}, validity=1)
    assert f.apply({("x",): one}) == {("x",): one}
    with pytest.raises(BudgetExceededError):
        f.apply({("y",): one})
    # composing propagates the budget: g raises degree by 1
    g = HMap(m, m, {("x",): {("y",): one}}, validity=None)
    comp = hmap_compose(f, g)
    assert comp.validity == 0


def test_neumann_invert():
    m = two_module()
    idm = identity_map(m)
    assert hmap_eq(neumann_invert(idm), idm)
    r = HMap(m, m, {("x",): {("y",): ts(0, 1)}, ("y",): {("x",): ts(0, 0, 3)}})
    f = hmap_add(idm, r)
    finv = neumann_invert(f)
    assert hmap_eq(hmap_compose(f, finv), idm)
    assert hmap_eq(hmap_compose(finv, f), idm)
    # order N=1: any admissible f is the identity
    m1 = HModule(1, ["x", "y"])
    f1 = identity_map(m1)
    assert hmap_eq(neumann_invert(f1), f1)
    bad = hmap_add(idm, HMap(m, m, {("x",): {("x",): ts(1)}}))
    with pytest.raises(PreconditionError):
        neumann_invert(bad)


def test_endo_log_exp_roundtrip():
    m = two_module()
    idm = identity_map(m)
    assert endo_log(idm).is_zero()
    assert hmap_eq(endo_exp(HMap(m, m, {})), idm)
    rng = random.Random(13)
    cols = {}
    for c in m.basis:
        col = {}
        for r in m.basis:
            s = rand_series(rng)
            col[r] = TruncSeries(N, (0,) + s.coeffs[1:])
        cols[c] = col
    r = HMap(m, m, cols)
    f = hmap_add(identity_map(m), r)
    assert hmap_eq(endo_exp(endo_log(f)), f)
    # log(id + hE) = hE - h^2 E^2/2 + ... : check degree-2 coefficient
    e_mat = HMap(m, m, {("x",): {("x",): ts(0, 1)}})
    lg = endo_log(hmap_add(idm, e_mat))
    assert lg.entry("x", "x") == ts(0, 1, Fraction(-1, 2), Fraction(1, 3))


def test_submodule_quotient_torsion():
    m = HModule(N, ["e1", "e2"])
    res = submodule_quotient(m, [{("e1",): TruncSeries.hbar(N)}])
    # one free generator (e2 class), one torsion generator (e1 class, ann h)
    assert res.module.dim == 2
    assert sorted(res.annihilators.values()) == [1]
    assert res.section is None
    # projection kills the generator
    img = res.projection.apply({("e1",): TruncSeries.hbar(N)})
    assert not quotient_reduce(res.module, img)
    # projection is surjective onto the returned basis
    hit = set()
    for b in m.basis:
        hit.update(res.projection.apply({b: TruncSeries.const(N, 1)}))
    assert hit == set(res.module.basis)


def test_submodule_quotient_free_and_empty():
    m = HModule(N, ["e1", "e2"])
    res = submodule_quotient(m, [{("e1",): TruncSeries.const(N, 1)}])
    assert res.module.dim == 1 and not res.annihilators
    assert res.section is not None
    # projection ∘ section = id on the quotient
    for b in res.module.basis:
        v = res.projection.apply(res.section.apply({b: TruncSeries.const(N, 1)}))
        assert vec_eq(v, {b: TruncSeries.const(N, 1)})
    res2 = submodule_quotient(m, [])
    assert res2.module.dim == 2 and res2.section is not None


def test_submodule_quotient_mixed_random():
    rng = random.Random(23)
    m = HModule(N, ["a", "b", "c"])
    gens = []
    for _ in range(2):
        gens.append({(lbl,): rand_series(rng) for lbl in ["a", "b", "c"]})
    res = submodule_quotient(m, gens)
    for g in gens:
        img = res.projection.apply(g)
        assert not quotient_reduce(res.module, img)


def test_hmap_kernel():
    m = HModule(N, ["x", "y"])
    one = TruncSeries.const(N, 1)
    # f(x)=x, f(y)=h*y : kernel generated by h^{N-1} y
    f = HMap(m, m, {("x",): {("x",): one}, ("y",): {("y",): TruncSeries.hbar(N)}})
    ker = hmap_kernel(f)
    assert len(ker) == 1
    (vec,) = ker
    assert list(vec) == [("y",)]
    assert vec[("y",)].valuation() == N - 1
    # the kernel really is killed
    assert not f.apply(vec)
