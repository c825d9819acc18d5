"""Command-line driver: verification suites and single computations, JSON out.

Exit codes: 0 all checks pass, 1 a check failed (or the run hit --max-seconds),
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import multiprocessing as mp
import os
import sys
import time
from dataclasses import dataclass

from . import cartank, quantize0, quantmod, twists
from . import multiindex as mi
from .coeffs import is_prime
from .enveloping import Envelope, SeriesContext, format_mono
from .twists import SpecError, TwistSpec, product_spec

SUITES = ("lie", "twist", "char0-quant", "modular")
FAMILIES = ("vertical", "horizontal", "contact", "ix", "product", "double-vertical", "double-contact")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    n: int = 1
    p: int = 0
    q: int = 0
    tdeg: int = 3
    family: str | None = None
    k: int | None = None
    m: int | None = None
    suite: str = "lie"
    seed: int = 0
    sample: int | None = None
    timings: bool = False

    def validate(self):
        if self.n < 1:
            raise UsageError("--n must be >= 1")
        if self.p and (not is_prime(self.p) or self.p < 5):
            raise UsageError("--p must be 0 or a prime >= 5")
        if self.p and not 0 <= self.q < self.p:
            raise UsageError("--q must satisfy 0 <= q < p")
        if self.suite == "modular" and not self.p:
            raise UsageError("the modular suite needs --p")
        if self.suite in ("twist", "char0-quant") and self.p:
            raise UsageError(f"the {self.suite} suite runs in characteristic 0 (omit --p)")
        if self.family == "horizontal" and self.n < 2:
            raise UsageError("horizontal twists need n >= 2")
        if self.family in ("product", "double-vertical", "double-contact") and self.n < 2:
            raise UsageError("product twists need n >= 2")
        if self.tdeg < 0:
            raise UsageError("--tdeg must be >= 0")


def _seed(cli_seed: int) -> int:
    env = os.environ.get("CARTANQ_SEED")
    if env is None or env == "":
        return cli_seed
    try:
        return int(env, 0)
    except ValueError:
        raise UsageError(f"CARTANQ_SEED={env!r} is not an integer")


# -- twist selection ----------------------------------------------------------------------

def _specs(cfg: RunConfig, p: int = 0, families=None):
    n = cfg.n
    out = []
    fam = cfg.family
    want = families or ("vertical", "horizontal", "contact", "ix", "product")
    ks = [cfg.k] if cfg.k is not None else list(range(1, n + 1))
    if "vertical" in want and fam in (None, "vertical"):
        out += [TwistSpec("vertical", n, k, p=p) for k in ks]
    if "horizontal" in want and fam in (None, "horizontal") and n >= 2:
        for k in ks:
            ms = [cfg.m] if cfg.m is not None else [m for m in range(-n, n + 1) if m and abs(m) != k]
            out += [TwistSpec("horizontal", n, k, m, p=p) for m in ms]
    if "contact" in want and fam in (None, "contact"):
        out += [TwistSpec("contact", n, k, p=p) for k in ks]
    if "ix" in want and fam in (None, "ix"):
        kx = [cfg.k] if cfg.k is not None else [k for k in range(-n, n + 1) if k]
        out += [TwistSpec("ix", n, k, p=p) for k in kx]
    if "product" in want and n >= 2:
        if fam in (None, "product", "double-vertical"):
            out.append(product_spec("vertical", n, (1, 2), p))
        if fam in (None, "product", "double-contact"):
            out.append(product_spec("contact", n, (1, 2), p))
    return out


def _spec_key(spec: TwistSpec):
    if spec.family == "product":
        return ("product", spec.parts[0].family, tuple(s.k for s in spec.parts))
    return (spec.family, spec.k, spec.m)


def _spec_from_key(key, n, p):
    if key[0] == "product":
        return product_spec(key[1], n, key[2], p)
    return TwistSpec(key[0], n, key[1], key[2], p=p)


def _family_tag(spec: TwistSpec) -> str:
    if spec.family == "product":
        return "double-" + spec.parts[0].family
    return spec.family


# -- check bodies (module level so worker processes can import them) -----------------------

def _char0_ctx(n, N):
    return SeriesContext(Envelope(cartank.LieAlgebra(n)), N=N)


def chk_jacobi_symbolic(cfg):
    r = cartank.jacobi_symbolic(cfg["n"])
    return not r, {"residual_terms": len(r)}


def chk_homomorphism_symbolic(cfg):
    r = cartank.homomorphism_symbolic(cfg["n"])
    return not r, {"residual_terms": len(r)}


def chk_jacobi_numeric(cfg):
    r = cartank.jacobi_check(cfg["n"], 3, cfg.get("sample"), cfg["seed"])
    return not r["count"], {"triples": r["triples"], "residual_terms": r["count"],
                            "failures": [[mi.format_mi(a) for a in t] for t in r["violations"]]}


def chk_homomorphism_numeric(cfg):
    r = cartank.homomorphism_check(cfg["n"], 3, cfg.get("sample"), cfg["seed"])
    return not r["count"], {"pairs": r["pairs"], "residual_terms": r["count"],
                            "failures": [[mi.format_mi(a) for a in t] for t in r["violations"]]}


def chk_h_e_pairs(cfg):
    bad = []
    for spec in twists.catalog(cfg["n"]):
        for s in spec.basic:
            if cartank.k_bracket(s.h_k(), s.e_k()) != s.e_k():
                bad.append(s.label())
    return not bad, {"failures": bad}


def chk_modular_paths(cfg):
    r = cartank.modular_paths_check(cfg["n"], cfg["p"], cfg.get("sample") or 2000, cfg["seed"])
    fails = r["violations"] + r["tau_hits"]
    return not fails, {"pairs": r["pairs"], "failures": [[mi.format_mi(a) for a in t] for t in fails]}


def chk_grading(cfg):
    import random
    n, p = cfg["n"], cfg["p"]
    basis = cartank.k_basis_modular(n, p)[0]
    rng = random.Random(cfg["seed"])
    pairs = [(rng.choice(basis), rng.choice(basis)) for _ in range(cfg.get("sample") or 2000)]
    r = cartank.k_grading_check(n, p, pairs)
    return not r["violations"], {"top_degree": r["top_degree"],
                                 "failures": [[mi.format_mi(a) for a in t] for t in r["violations"]]}


def chk_cocycle(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], 0)
    ctx = _char0_ctx(cfg["n"], cfg["N"])
    r = twists.twist_cocycle_check(twists.twist_build(spec, 0, ctx), ctx)
    return r.ok, r.detail


def chk_inverse(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], 0)
    ctx = _char0_ctx(cfg["n"], max(cfg["N"], 6))
    fails, res = [], 0
    for a in (0, 1, -1, 2):
        for b in (0, 1, -1, 2):
            for s in spec.basic:
                r = twists.twist_inverse_check(s, a, b, ctx)
                u = twists.uv_check(s, a, b, ctx)
                res += r.detail["residual_terms"] + u.detail["residual_terms"]
                if not (r.ok and u.ok):
                    fails.append({"spec": s.label(), "a": a, "b": b})
    return not fails, {"residual_terms": res, "failures": fails}


def chk_jordanian(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], 0)
    ctx = _char0_ctx(cfg["n"], max(cfg["N"], 4))
    r = twists.jordanian_equiv_check(twists.twist_build(spec, 0, ctx), ctx)
    return r.ok, r.detail


def chk_cybe(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], 0)
    ctx = _char0_ctx(cfg["n"], 0)
    bad, res = [], 0
    for s in spec.basic:
        r = twists.cybe_check(twists.rmatrix_build(s, ctx))
        res += r.detail["residual_terms"] + r.detail["skew_residual_terms"]
        if not r.ok:
            bad.append(s.label())
    return not bad, {"residual_terms": res, "failures": bad}


def chk_distinct(cfg):
    ctx = _char0_ctx(cfg["n"], max(cfg["N"], 2))
    r = twists.distinctness_witness(cfg["n"], ctx)
    return r.ok, r.detail


def chk_d_certification(cfg):
    r = quantize0.d_certification((cfg["n"],), 3, 5)
    return not r["mismatches"], {"checked": r["checked"], "residual_terms": len(r["mismatches"]),
                                 "failures": r["mismatches"][:20], "discrepancies": r["discrepancies"]}


def chk_adpow(cfg):
    r = quantize0.adpow_certification((cfg["n"],))
    return not r, {"residual_terms": len(r), "failures": r[:20]}


def chk_integrality(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], 0)
    r = quantize0.integrality_audit(spec, 4, 6)
    return r.ok, r.detail


def _char0_alphas(cfg, cap=None):
    count = cfg.get("sample") if cfg.get("sample") else cap
    return quantize0.sample_alphas(cfg["n"], 2, count, cfg["seed"])


def chk_closed_vs_oracle(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], 0)
    ctx = _char0_ctx(cfg["n"], max(cfg["N"], 4))
    r = quantize0.closed_vs_oracle(spec, ctx, _char0_alphas(cfg))
    return r.ok, r.detail


def chk_axioms_char0(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], 0)
    ctx = _char0_ctx(cfg["n"], cfg["N"])
    r = quantize0.hopf_axioms_char0(spec, ctx, _char0_alphas(cfg))
    return r.ok, r.detail


def chk_multiplicativity(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], 0)
    ctx = _char0_ctx(cfg["n"], cfg["N"])
    al = _char0_alphas(cfg, 8)
    r = quantize0.multiplicativity_check(spec, ctx, list(zip(al, al[1:] + al[:1])))
    return r.ok, r.detail


def chk_power_formulas(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], 0)
    ctx = _char0_ctx(cfg["n"], cfg["N"])
    r = quantize0.power_formula_check(spec, ctx, _char0_alphas(cfg, 4))
    return r.ok, r.detail


def chk_commutation(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], 0)
    ctx = _char0_ctx(cfg["n"], cfg["N"])
    r = quantize0.commutation_identity_checks(spec, ctx, _char0_alphas(cfg, 4))
    return r.ok, r.detail


def _utq(cfg):
    return quantmod.Utq(cfg["n"], cfg["p"], cfg["q"])


def _exhaustive(cfg):
    # every generator only for the vertical family at n = 1, p = 5; elsewhere seeded samples
    return cfg["n"] == 1 and cfg["p"] == 5 and cfg.get("spec", ("vertical",))[0] == "vertical"


def _mod_alphas(cfg, U):
    basis = U.basis()
    exhaustive = _exhaustive(cfg)
    count = cfg.get("sample") or (None if exhaustive else 25)
    return quantmod._sample(basis, count, cfg["seed"])


def chk_series_facts(cfg):
    r = quantmod.mod_series_facts(cfg["n"], cfg["p"], cfg["q"])
    return r.ok, r.detail


def chk_p_power(cfg):
    n, p = cfg["n"], cfg["p"]
    basis = cartank.k_basis_modular(n, p)[0]
    alphas = basis if (n == 1 and p == 5) else quantmod._sample(basis, cfg.get("sample") or 25, cfg["seed"])
    r = quantmod.p_power_check(n, p, alphas)
    return r.ok, r.detail


def chk_dims(cfg):
    d = quantmod.dims_report(cfg["n"], cfg["p"])
    ok = d.lie == d.lie_formula
    return ok, d.record()


def chk_mod_certification(cfg):
    n, p = cfg["n"], cfg["p"]
    sample = cfg.get("sample") or (None if n == 1 else 40)
    r = quantmod.mod_certification(n, p, sample, cfg["seed"])
    return not r["mismatches"], {"checked": r["checked"], "residual_terms": len(r["mismatches"]),
                                 "failures": r["mismatches"][:20], "discrepancies": r["discrepancies"],
                                 "agreements": r["agreements"]}


def chk_mod_ratio(cfg):
    r = quantmod.char0_ratio_certification(cfg["n"], cfg["p"])
    return r.ok, r.detail


def chk_dl_special(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], cfg["p"])
    r = quantmod.dl_special_check(spec)
    return r.ok, r.detail


def _mod_ops(cfg):
    spec = _spec_from_key(cfg["spec"], cfg["n"], cfg["p"])
    U = _utq(cfg)
    return spec, U, quantmod.modular_ops(spec, U)


def chk_hopf_ideal(cfg):
    spec, U, ops = _mod_ops(cfg)
    # multiplying Delta(x)^p out is only affordable on the exhaustive vertical run; there both routes run
    method = "both" if _exhaustive(cfg) else "power-formula"
    r = quantmod.hopf_ideal_check(spec, U, _mod_alphas(cfg, U), ops, method)
    return r.ok, r.detail


def chk_power_formulas_mod(cfg):
    spec, U, ops = _mod_ops(cfg)
    # cubing a product-twist coproduct at q != 0 runs to minutes per letter; squares only there
    s_max = 2 if spec.family == "product" else 3
    r = quantmod.power_formula_mod_check(spec, U, _mod_alphas(cfg, U)[:3], s_max, ops)
    return r.ok, r.detail


def chk_axioms_mod(cfg):
    spec, U, ops = _mod_ops(cfg)
    r = quantmod.hopf_axiom_suite(spec, U, _mod_alphas(cfg, U), ops)
    return r.ok, r.detail


def chk_degree0(cfg):
    spec, U, ops = _mod_ops(cfg)
    r = quantmod.degree0_slice_check(spec, U, _mod_alphas(cfg, U), ops)
    return r.ok, r.detail


def chk_bracket_compat(cfg):
    import random
    spec, U, ops = _mod_ops(cfg)
    al = _mod_alphas(cfg, U)
    rng = random.Random(cfg["seed"])
    pairs = [(rng.choice(al), rng.choice(al)) for _ in range(min(200, len(al)))]
    r = quantmod.bracket_compatibility(spec, U, pairs, ops)
    return r.ok, r.detail


def chk_tau(cfg):
    spec, U, ops = _mod_ops(cfg)
    r = quantmod.tau_vanishing_check(U, spec, ops)
    return r.ok, r.detail


CHECKS = {name[4:]: fn for name, fn in globals().items() if name.startswith("chk_")}


# -- suite plans ---------------------------------------------------------------------------

def plan(cfg: RunConfig) -> list:
    """Ordered list of (check name, family tag, body name, per-item config)."""
    base = {"n": cfg.n, "p": cfg.p, "q": cfg.q, "N": cfg.tdeg, "seed": cfg.seed, "sample": cfg.sample}
    items = []

    def add(name, family, body, **extra):
        items.append((name, family, body, {**base, **extra}))

    if cfg.suite == "lie":
        add("jacobi-symbolic", None, "jacobi_symbolic")
        add("dk-homomorphism-symbolic", None, "homomorphism_symbolic")
        exhaustive = cfg.n == 1 and cfg.sample is None
        add("jacobi-exhaustive" if exhaustive else "jacobi-sampled", None, "jacobi_numeric",
            sample=None if exhaustive else (cfg.sample or 20000))
        add("dk-homomorphism-exhaustive" if exhaustive else "dk-homomorphism-sampled", None,
            "homomorphism_numeric", sample=None if exhaustive else (cfg.sample or 20000))
        add("h-e-pairs", None, "h_e_pairs")
        if cfg.p:
            add("modular-bracket-paths", None, "modular_paths")
            add("grading", None, "grading")
    elif cfg.suite == "twist":
        for spec in _specs(cfg):
            fam, key = _family_tag(spec), _spec_key(spec)
            add(f"cocycle[{spec.label()}]", fam, "cocycle", spec=key)
            add(f"inverse-and-uv[{spec.label()}]", fam, "inverse", spec=key)
            add(f"jordanian[{spec.label()}]", fam, "jordanian", spec=key)
            add(f"cybe[{spec.label()}]", fam, "cybe", spec=key)
        if cfg.n >= 2 and cfg.family in (None, "product", "double-vertical"):
            add("distinctness[F(1) vs F(1)F(2)]", "double-vertical", "distinct")
    elif cfg.suite == "char0-quant":
        if cfg.family is None:
            add("d-certification", None, "d_certification")
            add("adpow-certification", None, "adpow")
        for spec in _specs(cfg):
            fam, key = _family_tag(spec), _spec_key(spec)
            if spec.family == "vertical":
                add(f"integrality[{spec.label()}]", fam, "integrality", spec=key)
            add(f"closed-vs-oracle[{spec.label()}]", fam, "closed_vs_oracle", spec=key)
            add(f"hopf-axioms[{spec.label()}]", fam, "axioms_char0", spec=key)
            add(f"multiplicativity[{spec.label()}]", fam, "multiplicativity", spec=key)
            if spec.family != "product":
                add(f"power-formulas[{spec.label()}]", fam, "power_formulas", spec=key)
                add(f"commutation-identities[{spec.label()}]", fam, "commutation", spec=key)
    else:
        add("series-facts", None, "series_facts")
        add("p-power", None, "p_power")
        add("dims", None, "dims")
        if cfg.family is None:
            add("mod-certification", None, "mod_certification")
            if cfg.n <= 2:
                add("mod-vs-char0-ratio", None, "mod_ratio")
        for spec in _specs(cfg, cfg.p, ("vertical", "horizontal", "contact", "product")):
            fam, key = _family_tag(spec), _spec_key(spec)
            add(f"dl-special[{spec.label()}]", fam, "dl_special", spec=key)
            add(f"hopf-ideal[{spec.label()}]", fam, "hopf_ideal", spec=key)
            add(f"power-formulas-mod[{spec.label()}]", fam, "power_formulas_mod", spec=key)
            add(f"hopf-axioms[{spec.label()}]", fam, "axioms_mod", spec=key)
            add(f"degree-0[{spec.label()}]", fam, "degree0", spec=key)
            add(f"bracket-compat[{spec.label()}]", fam, "bracket_compat", spec=key)
            if spec.family == "vertical":
                add(f"tau-vanishing[{spec.label()}]", fam, "tau", spec=key)
    return items


def _first_failure(detail):
    for key in ("failures", "violations", "mismatches", "hits"):
        v = detail.get(key) if isinstance(detail, dict) else None
        if v:
            return v[0]
    for v in (detail.values() if isinstance(detail, dict) else ()):
        if isinstance(v, dict):
            w = _first_failure(v)
            if w is not None:
                return w
    return None


def _residual_count(detail) -> int:
    if not isinstance(detail, dict):
        return 0
    if "residual_terms" in detail and isinstance(detail["residual_terms"], int):
        return detail["residual_terms"]
    total = 0
    for key, v in detail.items():
        if key in ("failures", "violations", "hits", "raw_nonzero") and isinstance(v, list):
            for f in v:
                if isinstance(f, dict):
                    total += sum(x for k, x in f.items() if "residual" in k and isinstance(x, int)) or 1
                else:
                    total += 1
        elif isinstance(v, dict):
            total += _residual_count(v)
    return total


def _run_item(item):
    name, family, body, icfg = item
    t0 = time.perf_counter()
    try:
        ok, detail = CHECKS[body](icfg)
        status = "pass" if ok else "fail"
    except Exception as exc:  # a crash inside a check is a failed check, not a usage error
        ok, detail, status = False, {"error": f"{type(exc).__name__}: {exc}"}, "fail"
    ms = (time.perf_counter() - t0) * 1000.0
    out = {"name": name, "family": family, "status": status}
    if status == "fail":
        out["witness"] = _first_failure(detail) or detail.get("error")
    out["residual-term-count"] = _residual_count(detail) if status == "fail" else 0
    out["detail"] = detail
    return out, ms


def _json_safe(x):
    return json.loads(json.dumps(x, default=str))


def run_suite(cfg: RunConfig, workers: int = 1, max_seconds: float | None = None):
    """Run the planned checks; returns (report, exit status)."""
    items = plan(cfg)
    results = [None] * len(items)
    start = time.monotonic()
    incomplete = False
    if workers <= 1:
        for i, item in enumerate(items):
            if max_seconds is not None and time.monotonic() - start > max_seconds:
                incomplete = True
                break
            results[i] = _run_item(item)
    else:
        ctx = mp.get_context("fork")
        pool = ctx.Pool(workers)
        try:
            handles = [pool.apply_async(_run_item, (item,)) for item in items]
            for i, h in enumerate(handles):
                left = None if max_seconds is None else max(0.0, max_seconds - (time.monotonic() - start))
                try:
                    results[i] = h.get(timeout=left)
                except mp.TimeoutError:
                    incomplete = True
                    break
        finally:
            pool.terminate()
            pool.join()
    checks = []
    for (name, family, _, _), r in zip(items, results):
        if r is None:
            checks.append({"name": name, "family": family, "status": "skipped", "residual-term-count": None,
                           "millis": None})
            continue
        rec, ms = r
        rec["millis"] = round(ms, 1) if cfg.timings else None
        checks.append(_json_safe(rec))
    report = {
        "suite": cfg.suite,
        "params": {"n": cfg.n, "p": cfg.p, "q": cfg.q, "N": cfg.tdeg, "seed": cfg.seed},
        "incomplete": incomplete,
        "checks": checks,
    }
    ok = not incomplete and all(c["status"] == "pass" for c in checks)
    return report, 0 if ok else 1


# -- single computations -------------------------------------------------------------------

def _term_list(x):
    out = []
    for key, c in x.items():
        legs = [format_mono(m) for m in key[1:]]
        rec = {"left": legs[0]}
        if len(legs) > 1:
            rec["right"] = legs[1]
        rec["t"] = key[0]
        rec["c"] = str(c)
        out.append(rec)
    return out


def _spec_from_args(args, p) -> TwistSpec:
    fam = args.family or "vertical"
    if fam in ("product", "double-vertical", "double-contact"):
        base = "contact" if fam == "double-contact" else "vertical"
        return product_spec(base, args.n, (1, 2), p)
    return TwistSpec(fam, args.n, args.k if args.k is not None else 1, args.m, p=p)


def _structure(args, which):
    alpha = mi.parse_mi(args.alpha)
    if len(alpha) != 2 * args.n + 1:
        raise UsageError(f"{args.alpha} does not have arity n={args.n}")
    spec = _spec_from_args(args, args.p)
    if args.p:
        U = quantmod.Utq(args.n, args.p, args.q)
        ops = quantmod.modular_ops(spec, U)
        U.lie.check_letter(alpha)
    else:
        ctx = _char0_ctx(args.n, args.tdeg)
        ops = quantize0.QuantizedOps(spec, ctx)
        ctx.env.lie.check_letter(alpha)
    val = ops.delta_letter(alpha) if which == "delta" else ops.antipode_letter(alpha)
    return {"alpha": mi.format_mi(alpha), "family": _family_tag(spec), "twist": spec.label(),
            "n": args.n, "p": args.p, "q": args.q if args.p else None, "N": None if args.p else args.tdeg,
            "terms": _term_list(val)}


def cmd_bracket(args):
    a, b = mi.parse_mi(args.a), mi.parse_mi(args.b)
    if len(a) != 2 * args.n + 1 or len(b) != 2 * args.n + 1:
        raise UsageError(f"multi-indices must have arity n={args.n}")
    if args.p:
        x = cartank.KElement(args.n, {a: 1}, "modular", args.p)
        y = cartank.KElement(args.n, {b: 1}, "modular", args.p)
    else:
        mode = "positive" if min(a + b) >= 0 else "full"
        x = cartank.KElement(args.n, {a: 1}, mode)
        y = cartank.KElement(args.n, {b: 1}, mode)
    r = cartank.k_bracket(x, y)
    return {"terms": [{"alpha": mi.format_mi(g), "c": str(c)} for g, c in r.items()]}


def cmd_dims(args):
    if not args.p:
        raise UsageError("dims needs --p")
    d = quantmod.dims_report(args.n, args.p)
    return {"lie": d.lie, "utq": f"{d.p}^{d.utq_exponent}"}


def _common(sp, char0=True):
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--p", type=int, default=0)
    sp.add_argument("--q", type=int, default=0)
    sp.add_argument("--tdeg", type=int, default=3)
    sp.add_argument("--family", choices=FAMILIES)
    sp.add_argument("--k", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--out")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cartanq", description="Contact Lie algebras, Jordanian twists and their quantizations.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    _common(v)
    v.add_argument("--suite", choices=SUITES, default="lie")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--sample", type=int)
    v.add_argument("--max-seconds", type=float)
    v.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    v.add_argument("--timings", action="store_true", help="record per-check milliseconds (breaks byte-identical reruns)")
    b = sub.add_parser("bracket", help="bracket of two basis elements")
    b.add_argument("a")
    b.add_argument("b")
    _common(b)
    for name in ("delta", "antipode"):
        s = sub.add_parser(name, help=f"closed-form {name} of a basis element")
        s.add_argument("alpha")
        _common(s)
    d = sub.add_parser("dims", help="dimensions of K(2n+1;1), u and u_(t,q)")
    _common(d)
    t = sub.add_parser("twist-check", help="twist-layer checks for one twist")
    _common(t)
    t.add_argument("--seed", type=int, default=0)
    return ap


def _emit(obj, out):
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.cmd in ("verify", "twist-check"):
            cfg = RunConfig(n=args.n, p=args.p, q=args.q, tdeg=args.tdeg, family=args.family, k=args.k,
                            m=args.m, suite=getattr(args, "suite", "twist"), seed=_seed(args.seed),
                            sample=getattr(args, "sample", None), timings=getattr(args, "timings", False))
            if args.cmd == "twist-check":
                cfg.suite = "twist"
                if cfg.family is None:
                    raise UsageError("twist-check needs --family")
            cfg.validate()
            try:
                _specs(cfg)
            except SpecError as exc:
                raise UsageError(str(exc))
            if not plan(cfg):
                raise UsageError("no twist matches the selection")
            workers = getattr(args, "workers", 1) or 1
            report, status = run_suite(cfg, workers, getattr(args, "max_seconds", None))
            _emit(report, args.out)
            return status
        if args.family == "horizontal" and args.n < 2:
            raise UsageError("horizontal twists need n >= 2")
        if args.p and (not is_prime(args.p) or args.p < 5):
            raise UsageError("--p must be 0 or a prime >= 5")
        if args.cmd == "bracket":
            obj = cmd_bracket(args)
        elif args.cmd == "dims":
            obj = cmd_dims(args)
        else:
            obj = _structure(args, args.cmd)
        _emit(obj, args.out)
        return 0
    except UsageError as exc:
        sys.stderr.write(f"cartanq: error: {exc}\n")
        return 2
    except (ValueError, SpecError) as exc:
        sys.stderr.write(f"cartanq: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
