"""Witt-type vector fields acting on (divided) power series.

Char 0: basis x^a d_j where d_j = x_j d/dx_j is a degree derivation, so
d_j(x^b) = b_j x^b and exponents may be negative.
Char p: basis x^(a) D_j of W(2n+1; 1) acting on the divided power algebra
O(2n+1; 1) by D_j x^(a) = x^(a - e_j); monomials outside 0 <= a <= tau are 0.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import factorial

import numpy as np

from . import multiindex as mi
from .coeffs import QQ, GF, lucas


class WittElement:
    """Sparse combination of basis vector fields keyed by (exponent, label).

    p == 0 means the char-0 degree-derivation basis; p > 0 the divided-power
    basis of W(2n+1; 1) with coefficients stored as residues.
    """

    __slots__ = ("n", "p", "terms")

    def __init__(self, n: int, p: int = 0, terms=None):
        self.n = n
        self.p = p
        ring = GF(p) if p else QQ
        raw = terms or {}
        for (a, j) in raw:
            if len(a) != 2 * n + 1:
                raise ValueError(f"arity mismatch in Witt term {a}")
            if p and not _in_box(a, p):
                raise ValueError(f"divided-power exponent {a} outside the box")
        self.terms = ring.clean(raw)

    @property
    def ring(self):
        return GF(self.p) if self.p else QQ

    def _check(self, other: WittElement):
        if (self.n, self.p) != (other.n, other.p):
            raise ValueError("Witt elements live in different algebras")

    def __add__(self, other: WittElement) -> WittElement:
        self._check(other)
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, 0) + c
        return WittElement(self.n, self.p, d)

    def __neg__(self):
        return WittElement(self.n, self.p, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> WittElement:
        return WittElement(self.n, self.p, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, WittElement):
            return NotImplemented
        return (self.n, self.p, self.terms) == (other.n, other.p, other.terms)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        parts = [f"{c}*x^{mi.format_mi(a)}d{j}" for (a, j), c in sorted(self.terms.items())]
        return "WittElement(" + (" + ".join(parts) or "0") + ")"

    def coefficient_functions(self) -> dict:
        """Group by derivation label: {j: {exponent: coeff}}."""
        out = {}
        for (a, j), c in self.terms.items():
            out.setdefault(j, {})[a] = c
        return out


def _in_box(a, p) -> bool:
    return all(0 <= x < p for x in a)


class OElement:
    """Element of the divided power algebra O(2n+1; 1) over F_p."""

    __slots__ = ("n", "p", "terms")

    def __init__(self, n: int, p: int, terms=None):
        self.n = n
        self.p = p
        raw = terms or {}
        for a in raw:
            if len(a) != 2 * n + 1 or not _in_box(a, p):
                raise ValueError(f"{a} is not a box index for n={n}, p={p}")
        self.terms = GF(p).clean(raw)

    @classmethod
    def monomial(cls, a, p: int) -> OElement:
        return cls(len(a) // 2, p, {tuple(a): 1})

    def __add__(self, other: OElement) -> OElement:
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, 0) + c
        return OElement(self.n, self.p, d)

    def __sub__(self, other: OElement) -> OElement:
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, 0) - c
        return OElement(self.n, self.p, d)

    def __eq__(self, other):
        if not isinstance(other, OElement):
            return NotImplemented
        return (self.n, self.p, self.terms) == (other.n, other.p, other.terms)

    def __repr__(self):
        return f"OElement({self.terms})"


def dp_product(a, b, p: int):
    """x^(a) x^(b) as (exponent, residue), or None when it vanishes."""
    c = 1
    out = []
    for x, y in zip(a, b):
        s = x + y
        if s >= p:
            return None
        c = c * lucas(s, x, p) % p
        if not c:
            return None
        out.append(s)
    return tuple(out), c


def o_multiply(f: OElement, g: OElement) -> OElement:
    if (f.n, f.p) != (g.n, g.p):
        raise ValueError("O elements live in different algebras")
    p = f.p
    d = {}
    for a, c in f.terms.items():
        for b, e in g.terms.items():
            r = dp_product(a, b, p)
            if r:
                d[r[0]] = d.get(r[0], 0) + c * e * r[1]
    return OElement(f.n, p, d)


def _dp_derive(a, j, n):
    """D_j x^(a) = x^(a - e_j); None when the j-th exponent is 0."""
    pos = j + n
    if a[pos] == 0:
        return None
    return a[:pos] + (a[pos] - 1,) + a[pos + 1:]


def derivation_apply(D: WittElement, f: OElement) -> OElement:
    if not D.p:
        raise ValueError("derivation_apply works on the divided-power side only")
    if (D.n, D.p) != (f.n, f.p):
        raise ValueError("derivation and function live over different data")
    n, p = D.n, D.p
    d = {}
    for (b, j), c in D.terms.items():
        for a, e in f.terms.items():
            da = _dp_derive(a, j, n)
            if da is None:
                continue
            r = dp_product(b, da, p)
            if r:
                d[r[0]] = d.get(r[0], 0) + c * e * r[1]
    return OElement(n, p, d)


def witt_bracket(u: WittElement, v: WittElement) -> WittElement:
    u._check(v)
    n, p = u.n, u.p
    d = {}
    if not p:
        # [x^a d_i, x^b d_j] = x^(a+b) (b_i d_j - a_j d_i)
        for (a, i), c in u.terms.items():
            for (b, j), e in v.terms.items():
                s = tuple(x + y for x, y in zip(a, b))
                ce = c * e
                bi = b[i + n]
                aj = a[j + n]
                if bi:
                    d[(s, j)] = d.get((s, j), 0) + ce * bi
                if aj:
                    d[(s, i)] = d.get((s, i), 0) - ce * aj
        return WittElement(n, 0, d)
    # [f D_i, g D_j] = f D_i(g) D_j - g D_j(f) D_i
    for (a, i), c in u.terms.items():
        for (b, j), e in v.terms.items():
            ce = c * e
            db = _dp_derive(b, i, n)
            if db is not None:
                r = dp_product(a, db, p)
                if r:
                    d[(r[0], j)] = d.get((r[0], j), 0) + ce * r[1]
            da = _dp_derive(a, j, n)
            if da is not None:
                r = dp_product(b, da, p)
                if r:
                    d[(r[0], i)] = d.get((r[0], i), 0) - ce * r[1]
    return WittElement(n, p, d)


def dk_char0(a) -> WittElement:
    n = mi.arity(a)
    a = tuple(a)
    d = {}
    e0 = mi.unit(n, 0)
    a0 = a[n]
    shifted = mi.sub(a, e0)
    lead = 2 - (sum(a) - a0)
    if lead:
        d[(shifted, 0)] = lead
    for i in range(1, n + 1):
        if a0:
            d[(shifted, i)] = d.get((shifted, i), 0) + a0
            d[(shifted, -i)] = d.get((shifted, -i), 0) + a0
        pair = mi.sub(a, mi.add(mi.unit(n, i), mi.unit(n, -i)))
        ami, ai = a[n - i], a[n + i]
        if ami:
            d[(pair, i)] = d.get((pair, i), 0) + ami
        if ai:
            d[(pair, -i)] = d.get((pair, -i), 0) - ai
    return WittElement(n, 0, d)


def dk_modular(a, p: int) -> WittElement:
    n = mi.arity(a)
    a = tuple(a)
    if not _in_box(a, p):
        raise ValueError(f"{a} is outside the box for p={p}")
    d = {}
    a0 = a[n]
    lead = (2 - (sum(a) - a0)) % p
    if lead:
        d[(a, 0)] = lead
    head = _dp_derive(a, 0, n)
    for i in range(1, n + 1):
        if head is not None:
            # x^(a - e_0) times x^(e_i) is a divided-power product
            for lab in (i, -i):
                r = dp_product(head, mi.unit(n, lab), p)
                if r:
                    d[(r[0], lab)] = d.get((r[0], lab), 0) + r[1]
        lo = _dp_derive(a, -i, n)
        if lo is not None:
            d[(lo, i)] = d.get((lo, i), 0) + 1
        hi = _dp_derive(a, i, n)
        if hi is not None:
            d[(hi, -i)] = d.get((hi, -i), 0) - 1
    return WittElement(n, p, d)


def char0_to_divided(W: WittElement, p: int, scale=1) -> WittElement:
    """Re-express a char-0 field with nonnegative exponents in the x^(a) D_j basis mod p.

    x^b d_j = x^(b+e_j) d/dx_j = (b+e_j)! x^((b+e_j)) D_j. `scale` multiplies
    every coefficient first (used for the 1/alpha! identification). Terms that
    leave the box must carry a coefficient divisible by p.
    """
    n = W.n
    d = {}
    for (b, j), c in W.terms.items():
        s = mi.add(b, mi.unit(n, j))
        if any(x < 0 for x in s):
            raise ValueError("negative exponent has no divided-power image")
        f = 1
        for x in s:
            f *= factorial(x)
        val = Fraction(c) * scale * f
        if val.denominator % p == 0:
            raise ZeroDivisionError(f"coefficient {val} is not p-integral")
        if not _in_box(s, p):
            if val.numerator % p:
                raise ValueError(f"nonzero coefficient on out-of-box monomial {s}")
            continue
        d[(s, j)] = d.get((s, j), 0) + val
    return WittElement(n, p, d)


def k_from_witt(W: WittElement):
    """Recover the generating function f with D_K(f) = W, or None when W is not contact.

    Uses the contact form: f = (1/2)(g_0 + sum_i (x_{-i} g_i - x_i g_{-i})) where
    W = sum_j g_j d/dx_j, then re-applies D_K to confirm membership. Returns a
    dict exponent -> coefficient (ordinary monomials in char 0, divided powers mod p).
    """
    n, p = W.n, W.p
    f = {}
    if not p:
        for (b, j), c in W.terms.items():
            if j == 0:
                s = mi.add(b, mi.unit(n, 0))
                sign = 1
            else:
                s = mi.add(b, mi.add(mi.unit(n, j), mi.unit(n, -j)))
                sign = 1 if j > 0 else -1
            f[s] = f.get(s, 0) + Fraction(sign * c, 2)
        f = QQ.clean(f)
        back = WittElement(n, 0, {})
        for a, c in f.items():
            back = back + dk_char0(a).scale(c)
        return f if back == W else None
    half = pow(2, -1, p)
    for (b, j), c in W.terms.items():
        if j == 0:
            f[b] = f.get(b, 0) + c * half
            continue
        sign = 1 if j > 0 else -1
        r = dp_product(b, mi.unit(n, -j), p)
        if r:
            f[r[0]] = f.get(r[0], 0) + sign * c * r[1] * half
    f = GF(p).clean(f)
    back = WittElement(n, p, {})
    for a, c in f.items():
        back = back + dk_modular(a, p).scale(c)
    return f if back == W else None


def box_indices(n: int, p: int):
    return [tuple(a) for a in product(range(p), repeat=2 * n + 1)]


def _operator_matrix(D: WittElement) -> tuple[np.ndarray, list]:
    n, p = D.n, D.p
    basis = box_indices(n, p)
    pos = {a: i for i, a in enumerate(basis)}
    M = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for a in basis:
        img = derivation_apply(D, OElement(n, p, {a: 1}))
        for b, c in img.terms.items():
            M[pos[b], pos[a]] = c
    return M, basis


def _matpow_mod(M: np.ndarray, e: int, p: int) -> np.ndarray:
    R = np.eye(M.shape[0], dtype=np.int64)
    B = M % p
    while e:
        if e & 1:
            R = (R @ B) % p
        B = (B @ B) % p
        e >>= 1
    return R


def derivation_p_power(D: WittElement, p: int | None = None) -> WittElement:
    """D^p as a vector field, computed from the operator on O(2n+1; 1).

    Dense integer matrices for n = 1, repeated sparse application otherwise.
    Raises RuntimeError when the operator is not a vector field.
    """
    if not D.p:
        raise ValueError("p-th powers are taken on the divided-power side")
    if p is not None and p != D.p:
        raise ValueError("p does not match the element's field")
    n, p = D.n, D.p
    if n == 1:
        M, basis = _operator_matrix(D)
        P = _matpow_mod(M, p, p)
        image = {a: {basis[r]: int(P[r, i]) for r in np.nonzero(P[:, i])[0]}
                 for i, a in enumerate(basis)}
    else:
        basis = box_indices(n, p)
        image = {}
        for a in basis:
            f = OElement(n, p, {a: 1})
            for _ in range(p):
                f = derivation_apply(D, f)
                if not f.terms:
                    break
            image[a] = f.terms
    d = {}
    for j in range(-n, n + 1):
        for b, c in image[mi.unit(n, j)].items():
            d[(b, j)] = c
    W = WittElement(n, p, d)
    for a in basis:
        got = derivation_apply(W, OElement(n, p, {a: 1})).terms
        if got != image[a]:
            raise RuntimeError(f"p-th power is not a vector field (mismatch on x^({a}))")
    return W
