import random

import pytest
from hypothesis import given, settings, strategies as st

from cartanq import multiindex as mi
from cartanq import quantmod as qm
from cartanq.twists import TwistSpec, product_spec

H, E, X0 = (1, 0, 1), (1, 0, 2), (0, 1, 0)


@pytest.fixture(scope="module")
def u5():
    return qm.Utq(1, 5, 0)


@pytest.fixture(scope="module")
def vert5(u5):
    spec = TwistSpec("vertical", 1, 1, p=5)
    return spec, qm.modular_ops(spec, u5)


def test_normal_form_examples(u5):
    assert u5.normal_form({(0, (H,) * 5): 1}) == u5.letter(H)
    assert u5.normal_form({(0, (X0,) * 5): 1}) == u5.letter(X0)
    assert u5.normal_form({(0, (E,) * 5): 1}).is_zero()
    m = u5.normal_form({(0, (X0, H, E)): 1})
    assert u5.normal_form(m) == m


def test_t_folds_to_qt():
    U = qm.Utq(1, 5, 1)
    assert U.normal_form({(5, (H,)): 1}) == U.normal_form({(1, (H,)): 1})
    assert qm.Utq(1, 5, 0).normal_form({(5, (H,)): 1}).is_zero()


LETTERS = [H, E, X0, (0, 0, 1), (2, 0, 0), (1, 1, 0), (0, 2, 3)]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(LETTERS), max_size=6), st.lists(st.sampled_from(LETTERS), max_size=6))
def test_normal_form_multiplicative(a, b):
    U = qm.Utq(1, 5, 1)
    na, nb = U.normal_form({(0, tuple(a)): 1}), U.normal_form({(0, tuple(b)): 1})
    assert U.normal_form({(0, tuple(a + b)): 1}) == na * nb


def test_mod_coeffs_examples():
    s = TwistSpec("vertical", 1, 1, p=5)
    assert qm.mod_coeffs(s, (1, 0, 2), 0, 0) == 1
    # l - j > alpha_0 forces the B factor to vanish
    assert qm.mod_coeffs(s, (1, 0, 2), 2, 0) == 0


@pytest.mark.parametrize("ell", range(1, 5))
def test_tau_coefficient_vanishes(ell):
    p = 5
    s = TwistSpec("vertical", 1, 1, p=p)
    alpha = (p - 1, p - 1, p - 1 - ell)
    assert qm._gamma(s, alpha, ell, ell) == mi.tau(1, p)
    assert qm.mod_coeffs(s, alpha, ell, ell) == 0


def test_dl_special_letters():
    v = TwistSpec("vertical", 1, 1, p=5)
    assert qm.mod_dl(v, H, 1).terms() == {E: 3}          # -e with e = 2 D(x^(2e_1+e_-1))
    assert qm.mod_dl(v, X0, 1).terms() == {E: 3}
    c = TwistSpec("contact", 1, 1, p=5)
    assert qm.mod_dl(c, X0, 1).terms() == {(0, 1, 1): 4}


@pytest.mark.parametrize("spec", [TwistSpec("vertical", 1, 1, p=5), TwistSpec("contact", 1, 1, p=7),
                                  TwistSpec("horizontal", 2, 1, -2, p=5), product_spec("vertical", 2, (1, 2), 5),
                                  product_spec("contact", 2, (1, 2), 5)], ids=lambda s: s.label())
def test_dl_special_against_brute_force(spec):
    assert qm.dl_special_check(spec).ok


def test_certification_n1():
    r = qm.mod_certification(1, 5)
    assert r["mismatches"] == []
    assert {d["variant"] for d in r["discrepancies"]} == {"vertical:printed_delta", "contact:printed"}
    assert qm.char0_ratio_certification(1, 5).ok


def test_delta_of_euler_element(u5, vert5):
    spec, ops = vert5
    ctx = u5.ctx
    x, h = u5.letter(X0), u5.letter(H)
    e = u5.letter(E, 2)
    geo = ctx.zero()
    for i in range(1, 5):
        geo = geo + (e ** i) * ctx.tpow(i)
    want = ctx.tensor(x, ctx.one()) + ctx.tensor(ctx.one(), x) + ctx.tensor(h, geo)
    assert qm.delta_utq(X0, spec, u5, ops) == want
    assert qm.counit_utq(X0, spec, u5) == 0


def test_antipode_of_h(u5, vert5):
    spec, ops = vert5
    h, e = u5.letter(H), u5.letter(E, 2)
    want = -(h - e * (h + 1) * u5.ctx.tpow(1))
    assert qm.antipode_utq(H, spec, u5, ops) == want


def test_tau_letter_rejected():
    U = qm.Utq(3, 5, 0)
    spec = TwistSpec("vertical", 3, 1, p=5)
    with pytest.raises(ValueError):
        qm.delta_utq(mi.tau(3, 5), spec, U)


def test_ideal_generators_small(u5, vert5):
    spec, ops = vert5
    r = qm.hopf_ideal_check(spec, u5, [(0, 0, 1), E, (2, 1, 0)], ops, "both")
    assert r.ok, r.detail


@pytest.mark.parametrize("q", [0, 1])
def test_axioms_on_examples(q):
    U = qm.Utq(1, 5, q)
    spec = TwistSpec("vertical", 1, 1, p=5)
    ops = qm.modular_ops(spec, U)
    assert qm.hopf_axiom_suite(spec, U, [X0, H, E, (3, 2, 1)], ops).ok
    assert qm.degree0_slice_check(spec, U, U.basis()[:30], ops).ok


def test_printed_vertical_delta_breaks_the_axioms():
    U = qm.Utq(1, 5, 1)
    spec = TwistSpec("vertical", 1, 1, p=5)
    bad = qm.modular_ops(spec, U, "printed_delta")
    assert not qm.hopf_axiom_suite(spec, U, U.basis()[:30], bad).ok


def test_horizontal_antipode_needs_h_factor():
    U = qm.Utq(2, 5, 0)
    spec = TwistSpec("horizontal", 2, 1, -2, p=5)
    al = random.Random(5).sample(U.basis(), 8)
    assert qm.hopf_axiom_suite(spec, U, al).ok
    assert not qm.printed_antipode_without_h(spec, U, al).ok


@pytest.mark.parametrize("n,p", [(1, 5), (1, 7)])
def test_series_facts(n, p):
    assert qm.mod_series_facts(n, p, 0).ok and qm.mod_series_facts(n, p, 1).ok


def test_tau_vanishing_n1():
    assert qm.tau_vanishing_check(qm.Utq(1, 5, 1)).ok


def test_dims():
    assert qm.dims_report(1, 5).record()["utq"] == "5^126"
    d = qm.dims_report(3, 5)
    assert d.lie == 78124 and d.tau_excluded and d.utq_dim == 5 ** 78125
    assert qm.dims_report(1, 7).lie == 343


def test_p_power_sample():
    assert qm.p_power_check(1, 5, [(0, 1, 0), (1, 0, 1), (1, 0, 2), (4, 4, 4)]).ok
