import pytest
from hypothesis import given, settings, strategies as st

from cartanq import cartank as ck
from cartanq import multiindex as mi
from cartanq.cartank import KElement


def K(a, n=1):
    return KElement(n, {a: 1})


def test_h_e_pair():
    assert ck.k_bracket(K((1, 0, 1)), K((1, 0, 2))) == K((1, 0, 2))


def test_antisymmetry_zero():
    a = K((2, 1, 0))
    assert not ck.k_bracket(a, a)


@settings(max_examples=80, deadline=None)
@given(st.tuples(*[st.integers(-2, 3)] * 3), st.tuples(*[st.integers(-2, 3)] * 3))
def test_bracket_antisymmetric(a, b):
    ab, ba = ck.bracket_char0(a, b), ck.bracket_char0(b, a)
    assert set(ab) == set(ba) and all(ab[g] == -ba[g] for g in ab)


def test_euler_element_on_e():
    assert ck.k_bracket(K((0, 1, 0)), K((1, 0, 2))) == K((1, 0, 2))


@pytest.mark.parametrize("n,p,dim", [(1, 5, 125), (3, 5, 78124), (1, 7, 343)])
def test_modular_dimensions(n, p, dim):
    assert ck.k_basis_modular(n, p)[1] == dim


def test_grading_examples():
    assert ck.k_grading(mi.unit(1, 0)) == 0
    assert ck.k_grading(mi.zero(1)) == -2
    assert ck.top_degree(1, 5) == 14
    assert ck.top_degree(3, 5) == (8 * 4 - 2) - 1


@pytest.mark.parametrize("n", [1, 2])
def test_jacobi_and_homomorphism_identically(n):
    assert ck.jacobi_symbolic(n) == {}
    assert ck.homomorphism_symbolic(n) == {}


def test_symbolic_checks_catch_a_wrong_bracket():
    def wrong(a, b):
        r = dict(ck.bracket_char0(a, b))
        k = next(iter(r))
        r[k] = r[k] + a[1] * b[1] * (a[1] - b[1])
        return r
    assert ck.jacobi_symbolic(1, wrong)
    assert ck.homomorphism_symbolic(1, wrong)


def test_numeric_jacobi_sample_n2():
    assert ck.jacobi_check(2, 3, sample=500, seed=1)["count"] == 0
    assert ck.homomorphism_check(2, 3, sample=500, seed=1)["count"] == 0


@settings(max_examples=60, deadline=None)
@given(st.tuples(*[st.integers(0, 4)] * 3), st.tuples(*[st.integers(0, 4)] * 3))
def test_grading_additive(a, b):
    for g, _ in ck.bracket_modular_scaled(a, b, 5):
        assert mi.mi_norm(g) == mi.mi_norm(a) + mi.mi_norm(b)


def test_tau_never_produced_when_excluded():
    r = ck.modular_paths_check(3, 5, sample=1500, seed=2)
    assert r["violations"] == [] and r["tau_hits"] == []


def test_tau_rejected():
    with pytest.raises(ValueError):
        KElement(3, {mi.tau(3, 5): 1}, "modular", 5)
    with pytest.raises(ValueError):
        ck.LieAlgebra(3, 5).check_letter(mi.tau(3, 5))


def test_mode_checks():
    with pytest.raises(ValueError):
        KElement(1, {(-1, 0, 0): 1}, "positive")
    with pytest.raises(ValueError):
        ck.k_bracket(K((0, 0, 0)), KElement(1, {(0, 0, 0): 1}, "modular", 5))
    assert KElement(1, {(-1, 0, 0): 1}, "full")
