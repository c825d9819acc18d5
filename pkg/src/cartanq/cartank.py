"""Contact Lie algebras in D_K(x^a) coordinates.

Modes:
  full      char 0, Laurent exponents allowed (bracket only)
  positive  char 0, nonnegative exponents (the integral form used everywhere downstream)
  modular   char p, divided-power basis D_K(x^(a)) with 0 <= a <= tau
"""
from __future__ import annotations

from functools import lru_cache

from . import multiindex as mi
from . import witt
from .coeffs import QQ, GF, lucas

MODES = ("full", "positive", "modular")


def _add(d, k, c):
    d[k] = d.get(k, 0) + c


def bracket_char0(a, b) -> dict:
    """Closed-form structure constants [D_K(x^a), D_K(x^b)] over Z, Laurent exponents allowed."""
    n = len(a) // 2
    out = {}
    a0, b0 = a[n], b[n]
    A = 2 - (sum(a) - a0)
    B = 2 - (sum(b) - b0)
    c = A * b0 - B * a0
    if c:
        s = list(x + y for x, y in zip(a, b))
        s[n] -= 1
        _add(out, tuple(s), c)
    for i in range(1, n + 1):
        c = a[n - i] * b[n + i] - a[n + i] * b[n - i]
        if c:
            s = list(x + y for x, y in zip(a, b))
            s[n - i] -= 1
            s[n + i] -= 1
            _add(out, tuple(s), c)
    return {k: v for k, v in out.items() if v}


def bracket_positive(a, b) -> dict:
    """Same as bracket_char0 restricted to K+; results with a negative entry must vanish."""
    out = bracket_char0(a, b)
    for g in out:
        if min(g) < 0:
            raise AssertionError(f"bracket of {a} and {b} leaves K+ at {g}")
    return out


@lru_cache(maxsize=None)
def bracket_modular_scaled(a, b, p: int) -> tuple:
    """Modular structure constants from the integer closed form divided by a!b!.

    Each factorial ratio is rewritten as a product of binomials and reduced
    digitwise, so nothing is ever inverted mod p.
    """
    n = len(a) // 2
    out = {}
    a0, b0 = a[n], b[n]
    A = 2 - (sum(a) - a0)
    B = 2 - (sum(b) - b0)
    rest = 1
    for j in range(2 * n + 1):
        if j != n:
            rest = rest * lucas(a[j] + b[j], a[j], p) % p
    if rest and a0 + b0 >= 1:
        c = (A * lucas(a0 + b0 - 1, a0, p) - B * lucas(a0 + b0 - 1, b0, p)) * rest % p
        if c:
            s = list(x + y for x, y in zip(a, b))
            s[n] -= 1
            if max(s) < p:
                _add(out, tuple(s), c)
    for i in range(1, n + 1):
        lo, hi = n - i, n + i
        others = 1
        for j in range(2 * n + 1):
            if j != lo and j != hi:
                others = others * lucas(a[j] + b[j], a[j], p) % p
        if not others:
            continue
        t1 = t2 = 0
        if a[lo] >= 1 and b[hi] >= 1:
            t1 = lucas(a[lo] + b[lo] - 1, b[lo], p) * lucas(a[hi] + b[hi] - 1, a[hi], p)
        if a[hi] >= 1 and b[lo] >= 1:
            t2 = lucas(a[hi] + b[hi] - 1, b[hi], p) * lucas(a[lo] + b[lo] - 1, a[lo], p)
        c = (t1 - t2) * others % p
        if c:
            s = list(x + y for x, y in zip(a, b))
            s[lo] -= 1
            s[hi] -= 1
            if max(s) < p:
                _add(out, tuple(s), c)
    return tuple(sorted((k, v % p) for k, v in out.items() if v % p))


@lru_cache(maxsize=None)
def bracket_modular_witt(a, b, p: int) -> tuple:
    """Modular structure constants read off the derivation bracket of D_K images."""
    W = witt.witt_bracket(witt.dk_modular(a, p), witt.dk_modular(b, p))
    f = witt.k_from_witt(W)
    if f is None:
        raise RuntimeError(f"bracket of D_K images left the contact algebra ({a}, {b})")
    return tuple(sorted(f.items()))


class KElement:
    """Sparse sum of c_a D_K(x^a) (divided powers in modular mode)."""

    __slots__ = ("n", "mode", "p", "terms")

    def __init__(self, n: int, terms=None, mode: str = "positive", p: int = 0):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        if (mode == "modular") != bool(p):
            raise ValueError("modular mode needs p > 0 and char-0 modes need p = 0")
        self.n = n
        self.mode = mode
        self.p = p
        raw = {tuple(a): c for a, c in (terms or {}).items()}
        for a in raw:
            if len(a) != 2 * n + 1:
                raise ValueError(f"arity mismatch: {a} for n={n}")
            if mode != "full" and min(a) < 0:
                raise ValueError(f"negative exponent {a} in {mode} mode")
            if mode == "modular":
                if max(a) >= p:
                    raise ValueError(f"{a} outside the box for p={p}")
                if tau_excluded(n, p) and a == mi.tau(n, p):
                    raise ValueError("tau is not in the contact algebra when 2n+4 = 0 mod p")
        self.terms = self.ring.clean(raw)

    @property
    def ring(self):
        return GF(self.p) if self.p else QQ

    @classmethod
    def basis(cls, a, mode="positive", p=0) -> KElement:
        return cls(len(a) // 2, {tuple(a): 1}, mode, p)

    def _like(self, terms) -> KElement:
        return KElement(self.n, terms, self.mode, self.p)

    def _check(self, other):
        if (self.n, self.mode, self.p) != (other.n, other.mode, other.p):
            raise ValueError("KElements from different algebras")

    def __add__(self, other):
        self._check(other)
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, 0) + c
        return self._like(d)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return self._like({k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, KElement):
            return NotImplemented
        return (self.n, self.mode, self.p, self.terms) == (other.n, other.mode, other.p, other.terms)

    def __hash__(self):
        return hash((self.n, self.mode, self.p, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: mi.order_key(kv[0]))

    def __repr__(self):
        body = " + ".join(f"{c}*D[{mi.format_mi(a)}]" for a, c in self.items()) or "0"
        return f"KElement({body})"

    def to_witt(self) -> witt.WittElement:
        out = witt.WittElement(self.n, self.p, {})
        for a, c in self.terms.items():
            img = witt.dk_modular(a, self.p) if self.p else witt.dk_char0(a)
            out = out + img.scale(c)
        return out


def tau_excluded(n: int, p: int) -> bool:
    return (2 * n + 4) % p == 0


def k_bracket(x: KElement, y: KElement, path: str = "witt") -> KElement:
    """Bracket in K. Modular mode defaults to the derivation oracle; path='scaled'
    selects the closed form divided by factorials."""
    x._check(y)
    d = {}
    if x.mode == "modular":
        fn = bracket_modular_witt if path == "witt" else bracket_modular_scaled
        for a, c in x.terms.items():
            for b, e in y.terms.items():
                for g, v in fn(a, b, x.p):
                    _add(d, g, c * e * v)
    else:
        fn = bracket_char0 if x.mode == "full" else bracket_positive
        for a, c in x.terms.items():
            for b, e in y.terms.items():
                for g, v in fn(a, b).items():
                    _add(d, g, c * e * v)
    return x._like(d)


def k_basis_modular(n: int, p: int):
    basis = witt.box_indices(n, p)
    if tau_excluded(n, p):
        t = mi.tau(n, p)
        basis = [a for a in basis if a != t]
    basis.sort(key=mi.order_key)
    return basis, len(basis)


def k_grading(a) -> int:
    return mi.mi_norm(a)


def top_degree(n: int, p: int) -> int:
    s = (2 * n + 2) * (p - 1) - 2
    return s - 1 if tau_excluded(n, p) else s


def k_grading_check(n: int, p: int, pairs) -> dict:
    """Check [K_i, K_j] within K_{i+j} and the grade range on the given basis pairs."""
    s = top_degree(n, p)
    bad = []
    for a, b in pairs:
        for g, _ in bracket_modular_scaled(a, b, p):
            if mi.mi_norm(g) != mi.mi_norm(a) + mi.mi_norm(b) or not -2 <= mi.mi_norm(g) <= s:
                bad.append((a, b, g))
    return {"pairs": len(pairs), "violations": bad, "top_degree": s}


class LieAlgebra:
    """Structure-constant view of K+ (char 0) or K(2n+1; 1) (char p) used by the PBW engine."""

    def __init__(self, n: int, p: int = 0, restricted: bool = True):
        self.n = n
        self.p = p
        self.ring = GF(p) if p else QQ
        self.restricted = bool(p) and restricted
        self._cache = {}
        # D_K(x^(e_k+e_-k)) and D_K(x^(e_0)) are toral: their p-th power is themselves
        self.torals = frozenset(
            [mi.unit(n, 0)] + [mi.add(mi.unit(n, k), mi.unit(n, -k)) for k in range(1, n + 1)]
        )

    def bracket(self, a, b) -> dict:
        key = (a, b)
        r = self._cache.get(key)
        if r is None:
            if self.p:
                r = dict(bracket_modular_scaled(a, b, self.p))
            else:
                r = bracket_positive(a, b)
            self._cache[key] = r
        return r

    def check_letter(self, a):
        if len(a) != 2 * self.n + 1 or min(a) < 0:
            raise ValueError(f"{a} is not a basis index of this algebra")
        if self.p and max(a) >= self.p:
            raise ValueError(f"{a} outside the box")
        if self.p and tau_excluded(self.n, self.p) and a == mi.tau(self.n, self.p):
            raise ValueError("tau is not in the contact algebra when 2n+4 = 0 mod p")

    def __repr__(self):
        return f"LieAlgebra(n={self.n}, p={self.p}, restricted={self.restricted})"


# -- Lie-layer checks -------------------------------------------------------------------

def symbolic_index(n: int, name: str) -> tuple:
    import sympy as sp
    return tuple(sp.symbols(f"{name}0:{2 * n + 1}", integer=True))


def _expand_terms(d: dict) -> dict:
    import sympy as sp
    out = {}
    for k, c in d.items():
        k = tuple(sp.expand(e) for e in k) if isinstance(k[0], sp.Basic) or not isinstance(k[0], tuple) else k
        out[k] = out.get(k, 0) + c
    return {k: sp.expand(c) for k, c in out.items() if sp.expand(c) != 0}


def jacobi_symbolic(n: int, bracket=bracket_char0) -> dict:
    """Jacobiator of the closed-form bracket with indeterminate exponents.

    The bracket code runs unchanged on sympy symbols, so an empty result means
    the identity holds for every integer exponent, every finite range included.
    """
    x, y, z = (symbolic_index(n, s) for s in "xyz")
    acc = {}
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        for g, cg in bracket(b, c).items():
            for h, ch in bracket(a, g).items():
                acc[h] = acc.get(h, 0) + cg * ch
    return _expand_terms(acc)


def homomorphism_symbolic(n: int, bracket=bracket_char0) -> dict:
    """D_K([a, b]) - [D_K a, D_K b] in the Witt algebra, indeterminate exponents."""
    a, b = symbolic_index(n, "a"), symbolic_index(n, "b")
    lhs = witt.WittElement(n, 0, {})
    for g, c in bracket(a, b).items():
        lhs = lhs + witt.dk_char0(g).scale(c)
    rhs = witt.witt_bracket(witt.dk_char0(a), witt.dk_char0(b))
    acc = dict(lhs.terms)
    for k, c in rhs.terms.items():
        acc[k] = acc.get(k, 0) - c
    import sympy as sp
    out = {}
    for (e, j), c in acc.items():
        key = (tuple(sp.expand(v) for v in e), j)
        out[key] = out.get(key, 0) + c
    return {k: c for k, c in ((k, sp.expand(c)) for k, c in out.items()) if c != 0}


def _grid(n: int, max_entry: int):
    from itertools import product
    return [tuple(a) for a in product(range(max_entry + 1), repeat=2 * n + 1)]


def jacobi_check(n: int, max_entry: int = 3, sample: int | None = None, seed: int = 0) -> dict:
    """Numeric Jacobi identity on basis triples of K+ (all of them unless `sample`)."""
    import random
    from itertools import product
    idx = _grid(n, max_entry)
    if sample is None:
        triples = product(idx, repeat=3)
    else:
        rng = random.Random(seed)
        triples = [tuple(rng.choice(idx) for _ in range(3)) for _ in range(sample)]
    memo = {}

    def br(a, b):
        r = memo.get((a, b))
        if r is None:
            r = memo[(a, b)] = bracket_char0(a, b)
        return r

    bad, count = [], 0
    for x, y, z in triples:
        count += 1
        acc = {}
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            for g, cg in br(b, c).items():
                for h, ch in bracket_char0(a, g).items():
                    acc[h] = acc.get(h, 0) + cg * ch
        if any(acc.values()):
            bad.append((x, y, z))
    return {"triples": count, "violations": bad[:20], "count": len(bad)}


def homomorphism_check(n: int, max_entry: int = 3, sample: int | None = None, seed: int = 0) -> dict:
    """D_K([a, b]) = [D_K a, D_K b] on basis pairs, numerically."""
    import random
    idx = _grid(n, max_entry)
    if sample is None:
        pairs = [(a, b) for a in idx for b in idx]
    else:
        rng = random.Random(seed)
        pairs = [(rng.choice(idx), rng.choice(idx)) for _ in range(sample)]
    imgs = {}

    def dk(a):
        r = imgs.get(a)
        if r is None:
            r = imgs[a] = witt.dk_char0(a)
        return r

    bad = []
    for a, b in pairs:
        lhs = witt.WittElement(n, 0, {})
        for g, c in bracket_char0(a, b).items():
            lhs = lhs + dk(g).scale(c)
        if lhs != witt.witt_bracket(dk(a), dk(b)):
            bad.append((a, b))
    return {"pairs": len(pairs), "violations": bad[:20], "count": len(bad)}


def modular_paths_check(n: int, p: int, sample: int = 2000, seed: int = 0) -> dict:
    """Scaled closed-form bracket against the derivation-side bracket mod p, and no
    bracket of basis elements lands on tau when tau is excluded."""
    import random
    basis = k_basis_modular(n, p)[0]
    rng = random.Random(seed)
    t = mi.tau(n, p)
    bad, tau_hits = [], []
    for _ in range(sample):
        a, b = rng.choice(basis), rng.choice(basis)
        s = bracket_modular_scaled(a, b, p)
        if s != bracket_modular_witt(a, b, p):
            bad.append((a, b))
        if tau_excluded(n, p) and any(g == t for g, _ in s):
            tau_hits.append((a, b))
    return {"pairs": sample, "violations": bad[:20], "tau_hits": tau_hits[:20]}
