"""Jordanian-type twists attached to pairs [h, e] = e in K+ and their checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import multiindex as mi
from .cartank import KElement, k_bracket
from .enveloping import (SeriesContext, SeriesElement, antipode0, counit0,
                         delta0, delta0_on_leg, h_factorial, one_minus_et_pow)

FAMILIES = ("vertical", "horizontal", "contact", "ix", "product")


class SpecError(ValueError):
    """Twist parameters that do not describe a catalogued twist."""


@dataclass(frozen=True)
class TwistSpec:
    family: str
    n: int
    k: int = 1
    m: int | None = None
    p: int = 0
    parts: tuple = field(default=())

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise SpecError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise SpecError("n must be >= 1")
        if self.family == "product":
            if len(self.parts) < 1:
                raise SpecError("a product twist needs at least one factor")
            ks = [s.k for s in self.parts]
            if len(set(ks)) != len(ks):
                raise SpecError(f"repeated k in product {ks}")
            for s in self.parts:
                if s.family in ("product", "horizontal", "ix") or s.n != self.n or s.p != self.p:
                    raise SpecError("product factors must be vertical or contact twists of the same algebra")
            if len({s.family for s in self.parts}) != 1:
                raise SpecError("product factors must share one family")
            return
        if self.family == "ix":
            if not 1 <= abs(self.k) <= self.n:
                raise SpecError(f"k={self.k} needs 1 <= |k| <= {self.n}")
        elif not 1 <= self.k <= self.n:
            raise SpecError(f"k={self.k} outside 1..{self.n}")
        if self.family == "horizontal":
            if self.n < 2:
                raise SpecError("horizontal twists need n >= 2")
            if self.m is None or self.m == 0 or abs(self.m) > self.n or abs(self.m) == self.k:
                raise SpecError(f"horizontal twists need 1 <= |m| <= n with |m| != k, got m={self.m}")
        self.check_pair()

    @property
    def basic(self) -> tuple:
        return self.parts if self.family == "product" else (self,)

    @property
    def h(self):
        n, k = self.n, self.k
        if self.family == "ix":
            return mi.unit(n, 0)
        return mi.combo(n, (1, k), (1, -k))

    @property
    def e(self):
        n, k = self.n, self.k
        if self.family == "vertical":
            return mi.combo(n, (2, k), (1, -k))
        if self.family == "horizontal":
            return mi.combo(n, (1, k), (1, self.m))
        return mi.combo(n, (1, k), (1, 0))

    @property
    def e_scale(self) -> int:
        """Coefficient of the basis letter in e: 2 for the vertical family over F_p."""
        return 2 if (self.p and self.family == "vertical") else 1

    @property
    def eigen_k(self) -> int:
        return self.k

    def h_k(self, ring_mode=None) -> KElement:
        mode = "modular" if self.p else "positive"
        return KElement(self.n, {self.h: 1}, mode, self.p)

    def e_k(self) -> KElement:
        mode = "modular" if self.p else "positive"
        return KElement(self.n, {self.e: self.e_scale}, mode, self.p)

    def check_pair(self):
        h, e = self.h_k(), self.e_k()
        if k_bracket(h, e) != e:
            raise SpecError(f"[h, e] != e for {self}")

    def label(self) -> str:
        if self.family == "product":
            return "product(" + ",".join(s.label() for s in self.parts) + ")"
        if self.family == "horizontal":
            return f"horizontal(k={self.k},m={self.m})"
        return f"{self.family}(k={self.k})"


def product_spec(family: str, n: int, ks, p: int = 0) -> TwistSpec:
    parts = tuple(TwistSpec(family, n, k, p=p) for k in ks)
    spec = TwistSpec("product", n, p=p, parts=parts)
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            for x in (a.h_k(), a.e_k()):
                for y in (b.h_k(), b.e_k()):
                    if k_bracket(x, y):
                        raise SpecError(f"factors {a.label()} and {b.label()} do not commute")
    return spec


def catalog(n: int):
    """Every basic twist the checks run over at arity n, plus F(1)F(2) when n >= 2."""
    out = [TwistSpec("vertical", n, k) for k in range(1, n + 1)]
    if n >= 2:
        for k in range(1, n + 1):
            for m in range(-n, n + 1):
                if m and abs(m) != k:
                    out.append(TwistSpec("horizontal", n, k, m))
    out += [TwistSpec("contact", n, k) for k in range(1, n + 1)]
    out += [TwistSpec("ix", n, k) for k in range(-n, n + 1) if k]
    if n >= 2:
        out.append(product_spec("vertical", n, (1, 2)))
        out.append(product_spec("contact", n, (1, 2)))
    return out


def h_elem(spec: TwistSpec, ctx: SeriesContext) -> SeriesElement:
    return ctx.letter(spec.h)


def e_elem(spec: TwistSpec, ctx: SeriesContext) -> SeriesElement:
    return ctx.letter(spec.e, spec.e_scale)


@dataclass
class TwistElement:
    value: SeriesElement
    inverse: SeriesElement
    spec: TwistSpec
    a: object = 0


def _require_char0(ctx):
    if ctx.p:
        raise ValueError("twist series are built in characteristic 0 only; "
                         "modular structures come from the reduced closed forms")


def _basic_series(spec, a, ctx, inverse: bool) -> SeriesElement:
    H = h_elem(spec, ctx)
    E = e_elem(spec, ctx)
    out = ctx.zero(2)
    epow = ctx.one()
    for r in range(ctx.N + 1):
        if r:
            epow = epow * E
        hf = h_factorial(ctx, H, a, r, "rising" if inverse else "falling")
        c = Fraction(1 if inverse else (-1) ** r, factorial(r))
        out = out + ctx.tensor(hf, epow * ctx.tpow(r)).scale(c)
    return out


def twist_build(spec: TwistSpec, a, ctx: SeriesContext) -> TwistElement:
    """The twist and its inverse: sum (-1)^r/r! h_a^[r] (x) e^r t^r and sum 1/r! h_a^<r> (x) e^r t^r."""
    _require_char0(ctx)
    F = ctx.one(2)
    Finv = ctx.one(2)
    for s in spec.basic:
        F = F * _basic_series(s, a, ctx, False)
        Finv = _basic_series(s, a, ctx, True) * Finv
    return TwistElement(F, Finv, spec, a)


def partner(spec: TwistSpec, a, ctx: SeriesContext) -> SeriesElement:
    """F_a = sum 1/r! h_a^<r> (x) e^r t^r for a basic spec."""
    _require_char0(ctx)
    return _basic_series(spec, a, ctx, True)


def calF(spec: TwistSpec, a, ctx: SeriesContext) -> SeriesElement:
    _require_char0(ctx)
    return _basic_series(spec, a, ctx, False)


def twist_uv(spec: TwistSpec, a, ctx: SeriesContext):
    """(u_a, v_a) with u_a = sum (-1)^r/r! h_{-a}^[r] e^r t^r, v_a = sum 1/r! h_a^[r] e^r t^r."""
    _require_char0(ctx)
    H = h_elem(spec, ctx)
    E = e_elem(spec, ctx)
    u = ctx.zero()
    v = ctx.zero()
    epow = ctx.one()
    for r in range(ctx.N + 1):
        if r:
            epow = epow * E
        et = epow * ctx.tpow(r)
        c = Fraction(1, factorial(r))
        u = u + (h_factorial(ctx, H, -a, r) * et).scale((-1) ** r * c)
        v = v + (h_factorial(ctx, H, a, r) * et).scale(c)
    return u, v


def w_elements(F: TwistElement):
    """w = m(id (x) S0)(F) and its inverse m(S0 (x) id)(F^-1)."""
    w = antipode0(F.value, 1).multiply_legs()
    winv = antipode0(F.inverse, 0).multiply_legs()
    return w, winv


def twisted_delta(F: TwistElement, x: SeriesElement) -> SeriesElement:
    return F.value * delta0(x) * F.inverse


def twisted_antipode(F: TwistElement, x: SeriesElement, w=None) -> SeriesElement:
    w, winv = w or w_elements(F)
    return w * antipode0(x) * winv


@dataclass
class Report:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _first_bad_degree(diff: SeriesElement):
    if not diff.terms:
        return None
    return min(k[0] for k in diff.terms)


def twist_cocycle_check(F: TwistElement, ctx: SeriesContext) -> Report:
    """(F (x) 1)(D0 (x) id)(F) = (1 (x) F)(id (x) D0)(F), plus both counit conditions."""
    Fv = F.value
    lhs = Fv.embed((0, 1), 3) * delta0_on_leg(Fv, 0)
    rhs = Fv.embed((1, 2), 3) * delta0_on_leg(Fv, 1)
    diff = lhs - rhs
    one1 = ctx.one(1)
    left_counit = counit0(Fv, 0)
    right_counit = counit0(Fv, 1)
    ok_counit = left_counit == one1 and right_counit == one1
    bad = _first_bad_degree(diff)
    return Report(
        f"cocycle[{F.spec.label()}]",
        bad is None and ok_counit,
        {"first_bad_degree": bad, "residual_terms": len(diff.terms), "counit": ok_counit, "N": ctx.N},
    )


def twist_inverse_check(spec, a, b, ctx) -> Report:
    """calF_a * F_b = 1 (x) (1 - e t)^(a - b)."""
    lhs = calF(spec, a, ctx) * partner(spec, b, ctx)
    rhs = ctx.tensor(ctx.one(), one_minus_et_pow(ctx, e_elem(spec, ctx), a - b))
    diff = lhs - rhs
    return Report(f"inverse[{spec.label()},a={a},b={b}]", not diff.terms,
                  {"residual_terms": len(diff.terms)})


def uv_check(spec, a, b, ctx) -> Report:
    """v_a u_b = (1 - e t)^-(a+b) and u_a v_{-a} = 1."""
    ua, va = twist_uv(spec, a, ctx)
    ub, _ = twist_uv(spec, b, ctx)
    _, vma = twist_uv(spec, -a, ctx)
    E = e_elem(spec, ctx)
    d1 = va * ub - one_minus_et_pow(ctx, E, -(a + b))
    d2 = ua * vma - ctx.one()
    return Report(f"uv[{spec.label()},a={a},b={b}]", not d1.terms and not d2.terms,
                  {"residual_terms": len(d1.terms) + len(d2.terms)})


def commutativity_check(s1: TwistSpec, s2: TwistSpec, ctx) -> bool:
    F1 = calF(s1, 0, ctx)
    F2 = calF(s2, 0, ctx)
    return (F1 * F2 - F2 * F1).is_zero()


def twist_product(specs, ctx) -> TwistElement:
    specs = list(specs)
    if len(specs) == 1:
        return twist_build(specs[0], 0, ctx)
    spec = product_spec(specs[0].family, specs[0].n, [s.k for s in specs], specs[0].p)
    return twist_build(spec, 0, ctx)


def jordanian_equiv_check(F: TwistElement, ctx) -> Report:
    """F_0 equals exp(h (x) ln(1 - e t)) to the context's truncation degree."""
    sigma = ctx.zero(2)
    for s in F.spec.basic:
        H = h_elem(s, ctx)
        E = e_elem(s, ctx)
        epow = ctx.one()
        for i in range(1, ctx.N + 1):
            epow = epow * E
            sigma = sigma + ctx.tensor(H, epow * ctx.tpow(i)).scale(Fraction(-1, i))
    ex = ctx.one(2)
    term = ctx.one(2)
    for r in range(1, ctx.N + 1):
        term = (term * sigma).scale(Fraction(1, r))
        ex = ex + term
    diff = ex - F.value
    return Report(f"jordanian[{F.spec.label()}]", not diff.terms, {"residual_terms": len(diff.terms)})


def rmatrix_build(spec: TwistSpec, ctx) -> SeriesElement:
    H = h_elem(spec, ctx)
    E = e_elem(spec, ctx)
    return ctx.tensor(H, E) - ctx.tensor(E, H)


def cybe_check(r: SeriesElement) -> Report:
    r12 = r.embed((0, 1), 3)
    r13 = r.embed((0, 2), 3)
    r23 = r.embed((1, 2), 3)
    res = r12.commutator(r13) + r12.commutator(r23) + r13.commutator(r23)
    skew = r + r.permute((1, 0))
    return Report("cybe", res.is_zero() and skew.is_zero(),
                  {"residual_terms": len(res.terms), "skew_residual_terms": len(skew.terms)})


def distinctness_witness(n: int, ctx, witness=None) -> Report:
    """Compare the coproducts twisted by F(1) and by F(1)F(2) on D_K(x^(e_2))."""
    if n < 2:
        raise SpecError("distinctness needs n >= 2")
    witness = witness or mi.unit(n, 2)
    x = ctx.letter(witness)
    F1 = twist_build(TwistSpec("vertical", n, 1), 0, ctx)
    F12 = twist_build(product_spec("vertical", n, (1, 2)), 0, ctx)
    diff = twisted_delta(F1, x) - twisted_delta(F12, x)
    sample = None
    if diff.terms:
        k, c = diff.items()[0]
        sample = {"t": k[0], "left": k[1], "right": k[2], "c": str(c)}
    return Report("distinct[F(1) vs F(1)F(2)]", bool(diff.terms),
                  {"witness": mi.format_mi(witness), "residual_terms": len(diff.terms), "sample": sample})
