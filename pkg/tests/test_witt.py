import random

from cartanq import cartank, witt
from cartanq import multiindex as mi


def test_dk_images_close_under_bracket_mod_p():
    rng = random.Random(3)
    basis = witt.box_indices(1, 5)
    for _ in range(300):
        a, b = rng.choice(basis), rng.choice(basis)
        assert witt.k_from_witt(witt.witt_bracket(witt.dk_modular(a, 5), witt.dk_modular(b, 5))) is not None


def test_scaled_and_derivation_paths_agree():
    rng = random.Random(4)
    for n, p in ((1, 5), (1, 7), (2, 5)):
        basis = witt.box_indices(n, p)
        for _ in range(200):
            a, b = rng.choice(basis), rng.choice(basis)
            assert cartank.bracket_modular_scaled(a, b, p) == cartank.bracket_modular_witt(a, b, p)


def test_p_power_of_toral_and_nilpotent():
    D = witt.dk_modular(mi.unit(1, 0), 5)
    assert witt.derivation_p_power(D) == D
    h = witt.dk_modular((1, 0, 1), 5)
    assert witt.derivation_p_power(h) == h
    e = witt.dk_modular((1, 0, 2), 5)
    assert witt.derivation_p_power(e) == witt.WittElement(1, 5, {})


def test_char0_images_recover_generating_function():
    for a in [(0, 0, 0), (1, 0, 2), (2, 3, 1)]:
        assert witt.k_from_witt(witt.dk_char0(a)) == {a: 1}
