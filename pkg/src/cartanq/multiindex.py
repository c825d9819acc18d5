"""Exponent vectors indexed by labels -n..n.

A multi-index is a plain tuple of length 2n+1; label i lives at position i+n.
Plain tuples keep hashing and dict keys cheap in the rewriting kernel, so the
helpers here carry the label arithmetic instead of a wrapper class.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .coeffs import lucas

MultiIndex = tuple


def arity(a: MultiIndex) -> int:
    if len(a) % 2 != 1:
        raise ValueError(f"multi-index length must be odd, got {len(a)}")
    return len(a) // 2


def same_arity(a: MultiIndex, b: MultiIndex) -> int:
    if len(a) != len(b):
        raise ValueError(f"arity mismatch: {len(a)} vs {len(b)} entries")
    return len(a) // 2


def zero(n: int) -> MultiIndex:
    if n < 1:
        raise ValueError("n must be >= 1")
    return (0,) * (2 * n + 1)


@lru_cache(maxsize=None)
def unit(n: int, label: int) -> MultiIndex:
    if not -n <= label <= n:
        raise ValueError(f"label {label} outside -{n}..{n}")
    v = [0] * (2 * n + 1)
    v[label + n] = 1
    return tuple(v)


def get(a: MultiIndex, label: int) -> int:
    n = len(a) // 2
    if not -n <= label <= n:
        raise ValueError(f"label {label} outside -{n}..{n}")
    return a[label + n]


def add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    same_arity(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    same_arity(a, b)
    return tuple(x - y for x, y in zip(a, b))


def scale(c: int, a: MultiIndex) -> MultiIndex:
    return tuple(c * x for x in a)


def combo(n: int, *pairs) -> MultiIndex:
    """Build sum of c * e_label from (c, label) pairs."""
    v = [0] * (2 * n + 1)
    for c, label in pairs:
        v[label + n] += c
    return tuple(v)


def total(a: MultiIndex) -> int:
    return sum(a)


def mi_norm(a: MultiIndex) -> int:
    return sum(a) + a[len(a) // 2] - 2


def is_nonneg(a: MultiIndex) -> bool:
    return all(x >= 0 for x in a)


def mi_binom(a: MultiIndex, b: MultiIndex, p: int = 0) -> int:
    """Prod_i C(a_i + b_i, a_i), over Z (p = 0) or reduced into F_p."""
    same_arity(a, b)
    if not (is_nonneg(a) and is_nonneg(b)):
        raise ValueError("multinomial needs nonnegative entries")
    r = 1
    if p:
        for x, y in zip(a, b):
            r = r * lucas(x + y, x, p) % p
            if not r:
                return 0
        return r
    for x, y in zip(a, b):
        r *= comb(x + y, x)
    return r


def tau(n: int, p: int) -> MultiIndex:
    return (p - 1,) * (2 * n + 1)


def mi_in_box(a: MultiIndex, t: MultiIndex, strict: bool = False) -> bool:
    same_arity(a, t)
    if any(x < 0 or x > y for x, y in zip(a, t)):
        return False
    return not (strict and a == t)


def order_key(a: MultiIndex):
    """Graded-lex key: contact grade first, then the raw exponent tuple."""
    return (mi_norm(a), a)


def factorial_ratio(gamma: MultiIndex, alpha: MultiIndex) -> Fraction:
    """gamma! / alpha! as an exact rational."""
    num = 1
    den = 1
    for g, a in zip(gamma, alpha):
        num *= factorial(g)
        den *= factorial(a)
    return Fraction(num, den)


_TEXT = re.compile(r"^\[\s*([-\d,\s]*);\s*(-?\d+)\s*;\s*([-\d,\s]*)\]$")


def parse_mi(text: str) -> MultiIndex:
    """Parse `[a_-n,...,a_-1;a_0;a_1,...,a_n]`."""
    m = _TEXT.match(text.strip())
    if not m:
        raise ValueError(f"bad multi-index text {text!r}")
    neg = [int(x) for x in m.group(1).split(",") if x.strip()]
    pos = [int(x) for x in m.group(3).split(",") if x.strip()]
    if len(neg) != len(pos) or not neg:
        raise ValueError(f"need the same number (>= 1) of negative and positive labels in {text!r}")
    return tuple(neg + [int(m.group(2))] + pos)


def format_mi(a: MultiIndex) -> str:
    n = arity(a)
    neg = ",".join(str(x) for x in a[:n])
    pos = ",".join(str(x) for x in a[n + 1:])
    return f"[{neg};{a[n]};{pos}]"
