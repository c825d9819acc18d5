"""PBW-normalized enveloping algebras, their tensor powers, and t-series over them.

A PBW monomial is a tuple of basis letters (multi-indices) that is
non-decreasing under the graded-lex order; repeated letters encode exponents.
A SeriesElement of rank r is a sparse map (t_degree, m_1, ..., m_r) -> coeff.
Plain elements of U are rank-1 series concentrated in t-degree 0, so one
class covers EnvElement, TensorElement and SeriesElement.
"""
from __future__ import annotations

from itertools import product
from math import comb

from . import multiindex as mi
from .cartank import LieAlgebra
from .coeffs import fold_t, gbinom, lucas


class Envelope:
    """U(L) (or the restricted quotient u(L) when lie.restricted) in PBW form."""

    def __init__(self, lie: LieAlgebra):
        self.lie = lie
        self.ring = lie.ring
        self.p = lie.p
        self.restricted = lie.restricted
        self._keys = {}
        self._mg = {}
        self._mm = {}
        self._s0 = {}

    def key(self, a):
        k = self._keys.get(a)
        if k is None:
            k = self._keys[a] = mi.order_key(a)
        return k

    def sort_word(self, word) -> tuple:
        return tuple(sorted(word, key=self.key))

    def _append(self, m, g) -> dict:
        if self.restricted:
            p = self.p
            run = 0
            for x in reversed(m):
                if x != g:
                    break
                run += 1
            if run == p - 1:
                # g^p = g^[p]: the element itself for torals, else 0
                if g in self.lie.torals:
                    return {m[: len(m) - (p - 1)] + (g,): 1}
                return {}
        return {m + (g,): 1}

    def mono_times_gen(self, m, g) -> dict:
        ck = (m, g)
        r = self._mg.get(ck)
        if r is not None:
            return r
        key = self.key
        if not m or key(m[-1]) <= key(g):
            r = self._append(m, g)
        else:
            # m' x g = (m' g) x + m' [x, g]
            x = m[-1]
            head = m[:-1]
            acc = {}
            for m2, c in self.mono_times_gen(head, g).items():
                for m3, c2 in self.mono_times_gen(m2, x).items():
                    acc[m3] = acc.get(m3, 0) + c * c2
            for y, c in self.lie.bracket(x, g).items():
                for m3, c2 in self.mono_times_gen(head, y).items():
                    acc[m3] = acc.get(m3, 0) + c * c2
            r = self.ring.clean(acc)
        self._mg[ck] = r
        return r

    def mono_mul(self, m1, m2) -> dict:
        if not m2:
            return {m1: 1}
        if not m1:
            return {m2: 1}
        ck = (m1, m2)
        r = self._mm.get(ck)
        if r is not None:
            return r
        acc = {m1: 1}
        for g in m2:
            nxt = {}
            for m, c in acc.items():
                for m3, c2 in self.mono_times_gen(m, g).items():
                    nxt[m3] = nxt.get(m3, 0) + c * c2
            acc = self.ring.clean(nxt)
        self._mm[ck] = acc
        return acc

    def normalize_word(self, word, order=None) -> dict:
        """PBW normal form of a word of letters.

        `order` optionally gives the sequence in which letters are multiplied
        in (as positions of the word), used by the confluence tests: the
        product is assembled by inserting letters into a growing list of
        normalized blocks and then merging in that order.
        """
        for a in word:
            self.lie.check_letter(a)
        if order is None:
            acc = {(): 1}
            for g in word:
                nxt = {}
                for m, c in acc.items():
                    for m3, c2 in self.mono_times_gen(m, g).items():
                        nxt[m3] = nxt.get(m3, 0) + c * c2
                acc = self.ring.clean(nxt)
            return acc
        # split the word at the positions in `order`, normalize pieces, multiply left to right
        blocks = [{(a,): 1} for a in word]
        for i in order:
            if i + 1 >= len(blocks):
                continue
            left, right = blocks[i], blocks[i + 1]
            merged = {}
            for m1, c1 in left.items():
                for m2, c2 in right.items():
                    for m3, c3 in self.mono_mul(m1, m2).items():
                        merged[m3] = merged.get(m3, 0) + c1 * c2 * c3
            blocks[i: i + 2] = [self.ring.clean(merged)]
        acc = {(): 1}
        for blk in blocks:
            nxt = {}
            for m1, c1 in acc.items():
                for m2, c2 in blk.items():
                    for m3, c3 in self.mono_mul(m1, m2).items():
                        nxt[m3] = nxt.get(m3, 0) + c1 * c2 * c3
            acc = self.ring.clean(nxt)
        return acc

    def delta0_mono(self, m) -> dict:
        """Primitive coproduct of a PBW monomial: {(left, right): coeff}."""
        runs = []
        for x in m:
            if runs and runs[-1][0] == x:
                runs[-1][1] += 1
            else:
                runs.append([x, 1])
        parts = []
        for x, a in runs:
            parts.append([((x,) * j, (x,) * (a - j), comb(a, j)) for j in range(a + 1)])
        out = {}
        for choice in product(*parts):
            left = tuple(l for piece in choice for l in piece[0])
            right = tuple(r for piece in choice for r in piece[1])
            c = 1
            for piece in choice:
                c *= piece[2]
            out[(left, right)] = out.get((left, right), 0) + c
        return self.ring.clean(out)

    def antipode0_mono(self, m) -> dict:
        r = self._s0.get(m)
        if r is not None:
            return r
        acc = {(): (-1) ** len(m)}
        for g in reversed(m):
            nxt = {}
            for m2, c in acc.items():
                for m3, c2 in self.mono_times_gen(m2, g).items():
                    nxt[m3] = nxt.get(m3, 0) + c * c2
            acc = self.ring.clean(nxt)
        self._s0[m] = acc
        return acc

    def reduce_restricted(self, m) -> dict:
        """Image of an unrestricted PBW monomial in u(L): exponents folded with x^p = x^[p]."""
        p = self.p
        out = ()
        i = 0
        while i < len(m):
            x = m[i]
            j = i
            while j < len(m) and m[j] == x:
                j += 1
            a = j - i
            if a >= p:
                if x not in self.lie.torals:
                    return {}
                while a >= p:
                    a -= p - 1
            out += (x,) * a
            i = j
        return {out: 1}


class SeriesContext:
    """An envelope together with the rule for the formal parameter t.

    Char 0: terms of t-degree > N are discarded. Char p: t^p = q t.
    """

    def __init__(self, env: Envelope, N: int | None = None, q: int | None = None):
        self.env = env
        self.ring = env.ring
        self.p = env.p
        if self.p:
            if q is None:
                raise ValueError("modular series need q")
            self.q = q % self.p
            self.N = self.p - 1
        else:
            if N is None:
                raise ValueError("char-0 series need a truncation degree")
            self.N = N
            self.q = None
        self._fold = {}

    def fold(self, t: int):
        r = self._fold.get(t)
        if r is None and t not in self._fold:
            if self.p:
                r = fold_t(t, self.p, self.q)
            else:
                r = (t, 1) if t <= self.N else None
            self._fold[t] = r
        return r

    def with_env(self, env: Envelope) -> SeriesContext:
        return SeriesContext(env, None if env.p else self.N, self.q)

    def truncated(self, N: int) -> SeriesContext:
        return SeriesContext(self.env, N, self.q)

    # constructors
    def zero(self, rank=1) -> SeriesElement:
        return SeriesElement(self, rank, {})

    def scalar(self, c, rank=1, t=0) -> SeriesElement:
        f = self.fold(t)
        if f is None:
            return self.zero(rank)
        return SeriesElement(self, rank, {(f[0],) + ((),) * rank: c * f[1]})

    def one(self, rank=1) -> SeriesElement:
        return self.scalar(1, rank)

    def tpow(self, t, rank=1) -> SeriesElement:
        return self.scalar(1, rank, t)

    def letter(self, a, c=1) -> SeriesElement:
        a = tuple(a)
        self.env.lie.check_letter(a)
        return SeriesElement(self, 1, {(0, (a,)): c})

    def word(self, word) -> SeriesElement:
        nf = self.env.normalize_word([tuple(a) for a in word])
        return SeriesElement(self, 1, {(0, m): c for m, c in nf.items()})

    def from_k(self, x) -> SeriesElement:
        """Embed a KElement (a Lie algebra element) as a rank-1 series."""
        return SeriesElement(self, 1, {(0, (a,)): c for a, c in x.terms.items()})

    def tensor(self, *factors) -> SeriesElement:
        """Outer product of series, concatenating legs and adding t-degrees."""
        terms = {(0,): 1}
        for f in factors:
            nxt = {}
            for k1, c1 in terms.items():
                for k2, c2 in f.terms.items():
                    fo = self.fold(k1[0] + k2[0])
                    if fo is None:
                        continue
                    k = (fo[0],) + k1[1:] + k2[1:]
                    nxt[k] = nxt.get(k, 0) + c1 * c2 * fo[1]
            terms = nxt
        rank = sum(f.rank for f in factors)
        return SeriesElement(self, rank, terms)


class SeriesElement:
    __slots__ = ("ctx", "rank", "terms")

    def __init__(self, ctx: SeriesContext, rank: int, terms: dict, clean=True):
        self.ctx = ctx
        self.rank = rank
        self.terms = ctx.ring.clean(terms) if clean else terms

    def _check(self, other: SeriesElement):
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch {self.rank} vs {other.rank}")
        if self.ctx.env is not other.ctx.env:
            raise ValueError("series over different envelopes")

    def _coerce(self, other):
        if isinstance(other, SeriesElement):
            self._check(other)
            return other
        return self.ctx.scalar(other, self.rank)

    def __add__(self, other):
        other = self._coerce(other)
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, 0) + c
        return SeriesElement(self.ctx, self.rank, d)

    __radd__ = __add__

    def __neg__(self):
        return SeriesElement(self.ctx, self.rank, {k: -c for k, c in self.terms.items()}, clean=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> SeriesElement:
        return SeriesElement(self.ctx, self.rank, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SeriesElement):
            return self.scale(other)
        self._check(other)
        fold = self.ctx.fold
        mm = self.ctx.env.mono_mul
        acc = {}
        if self.rank == 1:
            for (ta, ma), ca in self.terms.items():
                for (tb, mb), cb in other.terms.items():
                    f = fold(ta + tb)
                    if f is None:
                        continue
                    t, s = f
                    c = ca * cb * s
                    for m, v in mm(ma, mb).items():
                        k = (t, m)
                        acc[k] = acc.get(k, 0) + c * v
            return SeriesElement(self.ctx, 1, acc)
        r = self.rank
        for ka, ca in self.terms.items():
            ta = ka[0]
            for kb, cb in other.terms.items():
                f = fold(ta + kb[0])
                if f is None:
                    continue
                t, s = f
                c = ca * cb * s
                legs = [mm(ka[i], kb[i]) for i in range(1, r + 1)]
                if not all(legs):
                    continue
                for combo in product(*[list(l.items()) for l in legs]):
                    v = c
                    for _, x in combo:
                        v *= x
                    k = (t,) + tuple(m for m, _ in combo)
                    acc[k] = acc.get(k, 0) + v
        return SeriesElement(self.ctx, r, acc)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        r = self.ctx.one(self.rank)
        b = self
        while e:
            if e & 1:
                r = r * b
            e >>= 1
            if e:
                b = b * b
        return r

    def commutator(self, other) -> SeriesElement:
        return self * other - other * self

    def __eq__(self, other):
        if isinstance(other, SeriesElement):
            return self.rank == other.rank and self.terms == other.terms
        if isinstance(other, (int,)) or hasattr(other, "denominator"):
            return self == self.ctx.scalar(other, self.rank)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def t_slice(self, t: int) -> SeriesElement:
        return SeriesElement(self.ctx, self.rank, {k: c for k, c in self.terms.items() if k[0] == t}, clean=False)

    def max_t(self) -> int:
        return max((k[0] for k in self.terms), default=-1)

    def truncate(self, N: int) -> SeriesElement:
        return SeriesElement(self.ctx, self.rank, {k: c for k, c in self.terms.items() if k[0] <= N}, clean=False)

    def apply_legs(self, fns) -> SeriesElement:
        """Apply one map per leg and take the outer product of the images.

        Each fn maps a PBW monomial to a SeriesElement (any rank, any t-degree);
        None means identity on that leg. Result rank is the sum of image ranks.
        """
        ctx = self.ctx
        cache = [{} for _ in fns]
        acc = {}
        out_rank = None
        for k, c in self.terms.items():
            imgs = []
            for i, fn in enumerate(fns):
                m = k[i + 1]
                if fn is None:
                    imgs.append({(0, m): 1})
                    continue
                img = cache[i].get(m)
                if img is None:
                    img = cache[i][m] = fn(m)
                imgs.append(img.terms)
            if out_rank is None:
                out_rank = 0
                for i, fn in enumerate(fns):
                    out_rank += 1 if fn is None else cache[i][k[i + 1]].rank
            for combo in product(*[list(d.items()) for d in imgs]):
                f = ctx.fold(k[0] + sum(kk[0] for kk, _ in combo))
                if f is None:
                    continue
                v = c * f[1]
                key = (f[0],)
                for kk, x in combo:
                    v *= x
                    key += kk[1:]
                acc[key] = acc.get(key, 0) + v
        if out_rank is None:
            out_rank = sum(1 if fn is None else fn(()).rank for fn in fns)
        return SeriesElement(ctx, out_rank, acc)

    def multiply_legs(self) -> SeriesElement:
        """m: concatenate all legs by multiplication into rank 1."""
        mm = self.ctx.env.mono_mul
        acc = {}
        for k, c in self.terms.items():
            cur = {k[1]: c}
            for m in k[2:]:
                nxt = {}
                for a, x in cur.items():
                    for b, y in mm(a, m).items():
                        nxt[b] = nxt.get(b, 0) + x * y
                cur = nxt
            for m, x in cur.items():
                key = (k[0], m)
                acc[key] = acc.get(key, 0) + x
        return SeriesElement(self.ctx, 1, acc)

    def permute(self, perm) -> SeriesElement:
        """New leg i is old leg perm[i]."""
        return SeriesElement(self.ctx, self.rank,
                             {(k[0],) + tuple(k[1 + j] for j in perm): c for k, c in self.terms.items()},
                             clean=False)

    def embed(self, legs, rank: int) -> SeriesElement:
        """Place this series into a rank-`rank` tensor on the given legs, 1 elsewhere."""
        out = {}
        for k, c in self.terms.items():
            key = [()] * rank
            for src, dst in enumerate(legs):
                key[dst] = k[1 + src]
            out[(k[0],) + tuple(key)] = c
        return SeriesElement(self.ctx, rank, out, clean=False)

    def items(self):
        key = self.ctx.env.key
        return sorted(self.terms.items(),
                      key=lambda kv: (kv[0][0], [[key(a) for a in m] for m in kv[0][1:]]))

    def __repr__(self):
        body = " + ".join(
            f"{c}*t^{k[0]}*" + "(x)".join(format_mono(m) for m in k[1:]) for k, c in self.items()[:12]
        )
        more = "" if len(self.terms) <= 12 else f" + ... ({len(self.terms)} terms)"
        return f"SeriesElement(rank={self.rank}: {body or '0'}{more})"


def format_mono(m) -> str:
    if not m:
        return "1"
    parts = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        s = "D" + mi.format_mi(m[i])
        parts.append(s if j - i == 1 else f"{s}^{j - i}")
        i = j
    return "*".join(parts)


def pbw_factors(m):
    """(letter, exponent) pairs of a PBW monomial."""
    out = []
    for x in m:
        if out and out[-1][0] == x:
            out[-1][1] += 1
        else:
            out.append([x, 1])
    return [tuple(f) for f in out]


def delta0(x: SeriesElement) -> SeriesElement:
    """Primitive coproduct applied to leg 0 of a rank-1 series."""
    ctx = x.ctx
    env = ctx.env

    def d(m):
        return SeriesElement(ctx, 2, {(0, a, b): c for (a, b), c in env.delta0_mono(m).items()}, clean=False)

    return x.apply_legs([d])


def delta0_on_leg(x: SeriesElement, leg: int) -> SeriesElement:
    ctx = x.ctx
    env = ctx.env

    def d(m):
        return SeriesElement(ctx, 2, {(0, a, b): c for (a, b), c in env.delta0_mono(m).items()}, clean=False)

    return x.apply_legs([d if i == leg else None for i in range(x.rank)])


def antipode0_map(ctx):
    env = ctx.env
    return lambda m: SeriesElement(ctx, 1, {(0, a): c for a, c in env.antipode0_mono(m).items()}, clean=False)


def antipode0(x: SeriesElement, leg: int = 0) -> SeriesElement:
    f = antipode0_map(x.ctx)
    return x.apply_legs([f if i == leg else None for i in range(x.rank)])


def counit0_map(ctx):
    return lambda m: ctx.scalar(1 if not m else 0, 0)


def counit0(x: SeriesElement, leg: int = 0) -> SeriesElement:
    """Apply the counit on one leg; the result has rank one less (rank-0 series are scalars in t)."""
    f = counit0_map(x.ctx)
    return x.apply_legs([f if i == leg else None for i in range(x.rank)])


def h_factorial(ctx: SeriesContext, h, a, m: int, kind: str = "falling") -> SeriesElement:
    """Falling: prod_{i<m}(h + a - i); rising: prod_{i<m}(h + a + i)."""
    if kind not in ("falling", "rising"):
        raise ValueError(f"unknown factorial kind {kind!r}")
    sign = -1 if kind == "falling" else 1
    H = ctx.letter(h) if isinstance(h, tuple) else h
    r = ctx.one()
    for i in range(m):
        r = r * (H + (a + sign * i))
    return r


def one_minus_et_pow(ctx: SeriesContext, e, z: int) -> SeriesElement:
    """(1 - e t)^z. Char 0: binomial series to degree N; char p: z is taken mod p first."""
    E = ctx.letter(e) if isinstance(e, tuple) else e
    out = ctx.one()
    term = ctx.one()
    if ctx.p:
        z = z % ctx.p
        top = z
    else:
        top = ctx.N
    for i in range(1, top + 1):
        term = term * E * ctx.tpow(1)
        if not term:
            break
        c = lucas(z, i, ctx.p) if ctx.p else gbinom(z, i)
        if c:
            out = out + term.scale((-1) ** i * c)
    return out
