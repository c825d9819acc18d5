import pytest
from hypothesis import given, strategies as st

from cartanq import multiindex as mi


def indices(n_max=3, lo=-3, hi=5):
    return st.integers(1, n_max).flatmap(
        lambda n: st.tuples(*[st.integers(lo, hi) for _ in range(2 * n + 1)]))


@given(indices())
def test_text_roundtrip(a):
    assert mi.parse_mi(mi.format_mi(a)) == a


def test_layout():
    a = mi.parse_mi("[1,2;3;4,5]")
    assert mi.get(a, -2) == 1 and mi.get(a, 0) == 3 and mi.get(a, 2) == 5
    assert mi.unit(1, -1) == (1, 0, 0)


def test_norm_examples():
    assert mi.mi_norm(mi.unit(1, 0)) == 0
    assert mi.mi_norm(mi.zero(1)) == -2
    assert mi.mi_norm((1, 0, 2)) == 1


@pytest.mark.parametrize("text", ["[1;2]", "[1,2;0;3]", "1;2;3", "[;0;]"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        mi.parse_mi(text)


@given(indices(), indices())
def test_order_key_is_total_on_same_arity(a, b):
    if len(a) != len(b):
        return
    ka, kb = mi.order_key(a), mi.order_key(b)
    assert (ka < kb) + (kb < ka) + (a == b) == 1


def test_tau():
    assert mi.tau(1, 5) == (4, 4, 4)
