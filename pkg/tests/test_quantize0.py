from fractions import Fraction

import pytest

from cartanq import quantize0 as q0
from cartanq.cartank import KElement, LieAlgebra
from cartanq.enveloping import Envelope, SeriesContext
from cartanq.twists import TwistSpec, product_spec


def test_d_certification_n1_zero_mismatches():
    r = q0.d_certification((1,), 3, 5)
    assert r["checked"] > 0 and r["mismatches"] == []


def test_printed_horizontal_forms_disagree():
    r = q0.d_certification((2,), 1, 3)
    assert r["mismatches"] == []
    assert {d["variant"] for d in r["discrepancies"]} == {"printed_exponent", "printed_A"}


def test_dl_l0_is_identity():
    s = TwistSpec("vertical", 1, 1)
    assert q0.adl_closed(s, (1, 2, 0), 0) == KElement(1, {(1, 2, 0): 1}, "full")


def test_adpow_l1_example():
    # l = 1, vertical: alpha_0 D(alpha + 2e_k + e_-k - e_0) + (2 alpha_-k - alpha_k) D(alpha + e_k)
    s = TwistSpec("vertical", 1, 1)
    alpha = (1, 2, 0)
    want = KElement(1, {(2, 1, 2): 2, (1, 2, 1): 2}, "full")
    assert q0.adpow_on_e(s, alpha, 1) == want == q0.adpow_oracle(s, alpha, 1)


def test_delta_of_euler_element(ctx1):
    s = TwistSpec("vertical", 1, 1)
    ops = q0.QuantizedOps(s, ctx1)
    x = ctx1.letter((0, 1, 0))
    h, e = ctx1.letter((1, 0, 1)), ctx1.letter((1, 0, 2))
    tail = ctx1.zero()
    for i in range(1, 4):
        tail = tail + (e ** i) * ctx1.tpow(i)
    want = ctx1.tensor(x, ctx1.one()) + ctx1.tensor(ctx1.one(), x) + ctx1.tensor(h, tail)
    assert ops.delta_letter((0, 1, 0)) == want


def test_counit_is_zero(ctx1):
    ops = q0.QuantizedOps(TwistSpec("contact", 1, 1), ctx1)
    assert ops.counit_letter((2, 1, 0)) == 0


@pytest.mark.parametrize("spec", [TwistSpec("vertical", 1, 1), TwistSpec("contact", 1, 1), TwistSpec("ix", 1, -1)],
                         ids=lambda s: s.label())
def test_closed_vs_conjugation_n1(spec):
    ctx = SeriesContext(Envelope(LieAlgebra(1)), N=3)
    alphas = q0.sample_alphas(1, 2, 10, 0)
    assert q0.closed_vs_oracle(spec, ctx, alphas).ok
    assert q0.hopf_axioms_char0(spec, ctx, alphas[:5]).ok


def test_closed_vs_conjugation_double(ctx2):
    spec = product_spec("vertical", 2, (1, 2))
    assert q0.closed_vs_oracle(spec, ctx2, q0.sample_alphas(2, 1, 6, 0)).ok


def test_integrality_vertical():
    assert q0.integrality_audit(TwistSpec("vertical", 1, 1), 3, 4).ok


def test_power_and_commutation_identities(ctx1):
    s = TwistSpec("vertical", 1, 1)
    al = q0.sample_alphas(1, 2, 3, 1)
    assert q0.power_formula_check(s, ctx1, al, 2).ok
    assert q0.commutation_identity_checks(s, ctx1, al).ok


def test_wrong_eigenvalue_is_caught(ctx1, monkeypatch):
    s = TwistSpec("vertical", 1, 1)
    monkeypatch.setattr(q0, "eigenvalue", lambda spec, a: a[2] - a[0] + 1)
    assert not q0.closed_vs_oracle(s, ctx1, [(0, 0, 1), (1, 0, 0)]).ok
