"""Exact coefficient rings: rationals, prime fields, and K[t]/(t^p - q t)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

Rat = Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p!r}")


@dataclass(frozen=True, slots=True)
class Fp:
    """Residue class modulo a prime p >= 5."""

    residue: int
    p: int

    def __post_init__(self):
        if self.p < 5:
            raise ValueError(f"prime fields need p >= 5, got {self.p}")
        object.__setattr__(self, "residue", self.residue % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixing residues with different moduli")
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(self.residue + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(self.residue - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(o - self.residue, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Fp(self.residue * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.residue, self.p)

    def __pow__(self, e: int):
        return Fp(pow(self.residue, e, self.p), self.p)

    def inverse(self) -> Fp:
        if self.residue == 0:
            raise ZeroDivisionError("zero has no inverse mod p")
        return Fp(pow(self.residue, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Fp(o, self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.residue == other.residue
        if isinstance(other, int):
            return (other - self.residue) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.p))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.p})"


def lucas(a: int, b: int, p: int) -> int:
    """C(a, b) mod p as a plain int, one base-p digit at a time."""
    if b < 0 or a < 0 or b > a:
        return 0
    r = 1
    while b:
        ad, bd = a % p, b % p
        if bd > ad:
            return 0
        r = r * comb(ad, bd) % p
        a //= p
        b //= p
    return r


def binom_mod_p(a: int, b: int, p: int) -> Fp:
    if a < 0 or b < 0:
        raise ValueError("binomial arguments must be nonnegative")
    return Fp(lucas(a, b, p), p)


def gbinom(z, i: int):
    """Generalized binomial z(z-1)...(z-i+1)/i! for any rational z."""
    num = 1
    for r in range(i):
        num *= z - r
    return QQ.reduce(Fraction(num) / factorial(i))


class Ring:
    """Scalar ring used by the sparse algebras.

    Coefficients are stored as raw Python numbers (int or Fraction). `clean`
    reduces a freshly accumulated dict in place and drops zeros.
    """

    char = 0

    def reduce(self, c):
        raise NotImplementedError

    def clean(self, d: dict) -> dict:
        out = {}
        for k, c in d.items():
            c = self.reduce(c)
            if c:
                out[k] = c
        return out

    def fmt(self, c) -> str:
        return str(c)


class Rationals(Ring):
    char = 0

    def reduce(self, c):
        if isinstance(c, Fraction) and c.denominator == 1:
            return c.numerator
        return c

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Ring):
    def __init__(self, p: int):
        check_prime(p)
        if p < 5:
            raise ValueError(f"prime fields need p >= 5, got {p}")
        self.char = p
        self.p = p

    def reduce(self, c):
        if isinstance(c, Fraction):
            if c.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator {c.denominator} vanishes mod {self.p}")
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        if isinstance(c, Fp):
            return c.residue
        return c % self.p

    def clean(self, d: dict) -> dict:
        p = self.p
        out = {}
        for k, c in d.items():
            c = c % p if isinstance(c, int) else self.reduce(c)
            if c:
                out[k] = c
        return out

    def fmt(self, c) -> str:
        return str(self.reduce(c))

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def fold_t(t: int, p: int, q: int) -> tuple[int, int] | None:
    """Rewrite t^e modulo t^p - q t as (exponent, scalar factor); None when it is 0."""
    c = 1
    while t >= p:
        t -= p - 1
        c = c * q % p
        if c == 0:
            return None
    return t, c


class TQuotPoly:
    """Element of F_p[t]/(t^p - q t), stored as a dense tuple of p residues."""

    __slots__ = ("coeffs", "p", "q")

    def __init__(self, coeffs, p: int, q: int):
        check_prime(p)
        if len(coeffs) != p:
            raise ValueError("need exactly p coefficients")
        self.coeffs = tuple(int(c) % p for c in coeffs)
        self.p = p
        self.q = int(q) % p

    @classmethod
    def from_terms(cls, raw, p: int, q: int) -> TQuotPoly:
        return tquot_normalize(raw, q, p)

    def terms(self) -> list[tuple[int, int]]:
        return [(e, c) for e, c in enumerate(self.coeffs) if c]

    def _check(self, other: TQuotPoly):
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError("TQuotPoly parameters differ")

    def __add__(self, other: TQuotPoly) -> TQuotPoly:
        self._check(other)
        return TQuotPoly([a + b for a, b in zip(self.coeffs, other.coeffs)], self.p, self.q)

    def __sub__(self, other: TQuotPoly) -> TQuotPoly:
        self._check(other)
        return TQuotPoly([a - b for a, b in zip(self.coeffs, other.coeffs)], self.p, self.q)

    def __mul__(self, other):
        if isinstance(other, int):
            return TQuotPoly([c * other for c in self.coeffs], self.p, self.q)
        self._check(other)
        raw = [(i + j, a * b) for i, a in enumerate(self.coeffs) if a
               for j, b in enumerate(other.coeffs) if b]
        return tquot_normalize(raw, self.q, self.p)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TQuotPoly):
            return NotImplemented
        return (self.p, self.q, self.coeffs) == (other.p, other.q, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.q, self.coeffs))

    def __repr__(self):
        body = " + ".join(f"{c}*t^{e}" for e, c in self.terms()) or "0"
        return f"TQuotPoly({body}; p={self.p}, q={self.q})"


def tquot_normalize(raw, q, p: int) -> TQuotPoly:
    check_prime(p)
    q = int(q) % p
    out = [0] * p
    for e, c in raw:
        if e < 0:
            raise ValueError(f"negative t-exponent {e}")
        folded = fold_t(e, p, q)
        if folded is None:
            continue
        e2, f = folded
        out[e2] = (out[e2] + int(c) * f) % p
    return TQuotPoly(out, p, q)
