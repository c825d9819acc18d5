import pytest

from cartanq.cartank import LieAlgebra
from cartanq.enveloping import Envelope, SeriesContext
from cartanq.twists import (SpecError, TwistSpec, catalog, cybe_check, distinctness_witness,
                            jordanian_equiv_check, product_spec, rmatrix_build, twist_build,
                            twist_cocycle_check, twist_inverse_check, uv_check)


@pytest.mark.parametrize("spec", catalog(1), ids=lambda s: s.label())
def test_cocycle_n1(spec, ctx1):
    assert twist_cocycle_check(twist_build(spec, 0, ctx1), ctx1).ok


@pytest.mark.parametrize("a,b", [(0, 0), (1, -1), (2, 0), (-1, 2)])
def test_inverse_and_uv(a, b):
    ctx = SeriesContext(Envelope(LieAlgebra(1)), N=6)
    s = TwistSpec("vertical", 1, 1)
    assert twist_inverse_check(s, a, b, ctx).ok
    assert uv_check(s, a, b, ctx).ok


def test_jordanian_form(ctx1):
    s = TwistSpec("contact", 1, 1)
    assert jordanian_equiv_check(twist_build(s, 0, ctx1), ctx1).ok


def test_rmatrix_cybe(ctx1):
    assert cybe_check(rmatrix_build(TwistSpec("vertical", 1, 1), ctx1)).ok


def test_cocycle_catches_a_broken_twist(ctx1):
    F = twist_build(TwistSpec("vertical", 1, 1), 0, ctx1)
    E = ctx1.letter((1, 0, 2))
    F.value = F.value + ctx1.tensor(E, E * ctx1.tpow(2))
    assert not twist_cocycle_check(F, ctx1).ok


def test_distinct_twists(ctx2):
    r = distinctness_witness(2, ctx2)
    assert r.ok and r.detail["residual_terms"] > 0


@pytest.mark.parametrize("args", [("horizontal", 1, 1, -1), ("horizontal", 2, 1, 1), ("vertical", 1, 2, None),
                                  ("ix", 1, 0, None), ("nope", 1, 1, None)])
def test_bad_specs(args):
    with pytest.raises(SpecError):
        TwistSpec(*args)


def test_product_needs_distinct_k():
    with pytest.raises(SpecError):
        product_spec("vertical", 2, (1, 1))


def test_ix_negative_k():
    s = TwistSpec("ix", 2, -2)
    assert s.e == (1, 0, 1, 0, 0)
