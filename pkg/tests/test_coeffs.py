from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from cartanq.coeffs import GF, QQ, Fp, check_prime, fold_t, gbinom, is_prime, lucas

PRIMES = st.sampled_from([5, 7, 11, 13])


@given(st.integers(0, 400), st.integers(0, 400), PRIMES)
def test_lucas_matches_comb(a, b, p):
    assert lucas(a, b, p) == comb(a, b) % p


def test_lucas_out_of_range():
    assert lucas(3, 5, 7) == 0
    assert lucas(3, -1, 7) == 0


@given(st.integers(-20, 20), st.integers(0, 8))
def test_gbinom_pascal(z, i):
    assert gbinom(z, i + 1) + gbinom(z, i) == gbinom(z + 1, i + 1)


def test_gbinom_negative_and_rational():
    assert gbinom(-1, 3) == -1
    assert gbinom(Fraction(1, 2), 2) == Fraction(-1, 8)


@given(st.integers(0, 60), PRIMES, st.integers(0, 12))
def test_fold_t_respects_relation(t, p, q):
    q %= p
    r = fold_t(t, p, q)
    if t < p:
        assert r == (t, 1)
        return
    # t^t = t^(t - p + 1) * q, recursively
    prev = fold_t(t - p + 1, p, q)
    if q == 0:
        assert r is None
    else:
        assert r == (prev[0], prev[1] * q % p)


def test_fold_t_small():
    assert fold_t(5, 5, 1) == (1, 1)
    assert fold_t(5, 5, 0) is None
    assert fold_t(9, 5, 2) == (1, 4)


def test_prime_checks():
    assert is_prime(7) and not is_prime(9)
    with pytest.raises(ValueError):
        check_prime(9)
    with pytest.raises(ValueError):
        GF(3)


@given(st.integers(1, 100), st.integers(1, 100))
def test_fp_field_ops(a, b):
    x, y = Fp(a, 7), Fp(b, 7)
    if int(y):
        assert (x / y) * y == x
    assert x - x == Fp(0, 7)


def test_ring_clean():
    assert QQ.clean({"a": Fraction(2, 1), "b": 0}) == {"a": 2}
    assert GF(5).clean({"a": 7, "b": 10, "c": Fraction(1, 2)}) == {"a": 2, "c": 3}
