"""Deterministic verification suites behind ``padic-cherednik verify``.

Every check returns an entry ``{name, paper_anchor, status, witness}`` where
status is one of pass, fail, error or skip.  Randomness comes from a
``random.Random`` seeded by the run seed and the check name, so each check is
reproducible on its own.
"""

from __future__ import annotations

import random
import time
import traceback
from itertools import product
from typing import Callable, Iterable

from .cherednik import CherednikAlgebra, CherednikElement, NonTermination, NotInAlgebra
from .config import RunConfig
from .opalg import SkewAlgebra, trivial_group
from .padic import (
    LatticeLevel,
    TruncatedHElement,
    certification_checks,
    element_gauge,
    tower_map,
    truncated_gauge,
    truncated_multiply,
)
from .polys import MultiPoly, monomials_up_to
from .refgroup import FiniteGroup
from .scalars import INF, Scalar
from .serialize import parse_operator
from .tdo import (
    PolyForm,
    extension_obstruction,
    g_act_on_form,
    g_map_is_multiplicative,
    poincare_antiderivative,
    random_closed_two_form,
    twist_from_form,
    twist_iso,
)

SUITES = ("pbw", "commute", "presentation", "tdo", "norms", "tower")

ANCHORS = {
    "pbw": "pbw-basis",
    "degeneration": "weyl-degeneration",
    "scaling": "parameter-scaling",
    "commute": "dunkl-commutativity",
    "commutator": "dunkl-function-commutator",
    "presentation": "rational-presentation",
    "poincare": "poincare-lemma",
    "tdo": "tdo-classification",
    "extension": "group-extension-criterion",
    "certify": "lattice-certification",
    "gauge": "gauge-submultiplicativity",
    "tower": "tower-monotonicity",
    "truncated": "truncated-completion",
}


def entry(name: str, anchor: str, status: str, witness=None) -> dict:
    return {"name": name, "paper_anchor": ANCHORS[anchor], "status": status, "witness": witness}


class Runner:
    """Collects entries; exceptions inside a check become ``error`` entries."""

    def __init__(self, cfg: RunConfig, seed: int, timing: bool = False):
        self.cfg = cfg
        self.seed = seed
        self.timing = timing
        self.entries: list[dict] = []

    def rng(self, name: str) -> random.Random:
        return random.Random(f"{self.seed}:{name}")

    def run(self, name: str, anchor: str, check: Callable[[random.Random], tuple[str, object]]):
        start = time.perf_counter()
        try:
            status, witness = check(self.rng(name))
        except Exception as exc:  # reported, never swallowed silently
            status, witness = "error", f"{type(exc).__name__}: {exc}"
            if not isinstance(exc, ValueError):
                witness += "\n" + traceback.format_exc(limit=3)
        e = entry(name, anchor, status, witness)
        if self.timing:
            e["timing"] = round(time.perf_counter() - start, 3)
        self.entries.append(e)
        return e

    def fail_all(self, names: Iterable[tuple[str, str]], exc: Exception):
        for name, anchor in names:
            self.entries.append(entry(name, anchor, "error", f"{type(exc).__name__}: {exc}"))


def _first_failure(samples, test) -> tuple[str, object]:
    for k, sample in enumerate(samples):
        witness = test(sample)
        if witness is not None:
            return "fail", {"sample": k, **witness} if isinstance(witness, dict) else witness
    return "pass", None


def _random_poly(rng, r: int, degree: int, terms: int = 3, scale=1) -> MultiPoly:
    monos = monomials_up_to(r, degree)
    out = {}
    for _ in range(terms):
        c = rng.randint(-3, 3)
        if c:
            e = rng.choice(monos)
            out[e] = out.get(e, Scalar(0)) + Scalar(c * scale)
    return MultiPoly(r, out)


# -- pbw ---------------------------------------------------------------------------------


def predicted_top(a: CherednikElement, b: CherednikElement) -> CherednikElement:
    """Leading symbol of (f g D^a)(h k D^b) = f g(h) gk sigma_{k^-1}(D^a) D^b."""
    alg = a.alg
    G = alg.group
    ((g, al), f), = a.terms.items()
    ((k, be), h), = b.terms.items()
    coef = f * G.act_on_poly(g, h)
    label = G.mul(g, k)
    terms = {}
    for delta, c in alg.skew.symbol_sigma(G.inv(k), al).items():
        key = (label, tuple(x + y for x, y in zip(delta, be)))
        terms[key] = terms[key] + coef.scale(c) if key in terms else coef.scale(c)
    return alg.element(terms)


def check_pbw_products(alg: CherednikAlgebra, rng, samples: int, order: int, degree: int):
    def test(_):
        a = alg.random_basis_element(rng, order, degree)
        b = alg.random_basis_element(rng, order, degree)
        try:
            ab = alg.multiply(a, b)
        except (NotInAlgebra, NonTermination) as exc:
            return {"a": str(a), "b": str(b), "error": f"{type(exc).__name__}: {exc}"}
        expected = predicted_top(a, b)
        if ab.top() != expected:
            return {"a": str(a), "b": str(b), "top": str(ab.top()), "expected": str(expected)}
        return None

    return _first_failure(range(samples), test)


def check_pbw_leading(alg: CherednikAlgebra, order: int):
    alphas = monomials_up_to(alg.r, order)

    def test(pair):
        al, be = pair
        top = alg.multiply(alg.basis(0, al), alg.basis(0, be)).top()
        want = alg.basis(0, tuple(x + y for x, y in zip(al, be)))
        return None if top == want else {"alpha": al, "beta": be, "top": str(top)}

    return _first_failure(product(alphas, alphas), test)


def check_injected(alg: CherednikAlgebra, expr: str, m: int):
    op = parse_operator(expr, alg.skew, alg.dunkl, m)
    try:
        nf = alg.pbw_normal_form(op)
    except NotInAlgebra as exc:
        return "pass", f"NotInAlgebra raised as expected: {exc}"
    return "fail", {"expected": "NotInAlgebra", "normal_form": str(nf)}


def check_degeneration(alg: CherednikAlgebra, rng, samples: int, order: int, degree: int):
    """At c = 0 the PBW product must agree with the skew product under D = t L."""
    params = alg.params
    zero = CherednikAlgebra(alg.group, type(params)(params.t, params.c.scaled(0), params.omega))
    sk = zero.skew
    for i in range(zero.r):
        if zero.dunkl(i) != sk.L(i).scale(zero.t):
            return "fail", f"D_{i + 1} != t L_{i + 1} at c = 0"

    def as_weyl(a: CherednikElement):
        out = sk.zero()
        for (g, alpha), f in a.terms.items():
            op = sk.function(f) * sk.g(g)
            for i, k in enumerate(alpha):
                for _ in range(k):
                    op = op * sk.L(i).scale(zero.t)
            out = out + op
        return out

    def test(_):
        a = zero.random_element(rng, order, degree)
        b = zero.random_element(rng, order, degree)
        lhs = as_weyl(zero.multiply(a, b))
        rhs = as_weyl(a) * as_weyl(b)
        return None if lhs == rhs else {"a": str(a), "b": str(b)}

    return _first_failure(range(samples), test)


def scaling_factors(cfg: RunConfig) -> list[Scalar]:
    m = cfg["cyclotomic_order"]
    lams = [Scalar(2), Scalar(1) / cfg["prime"]]
    lams.append(Scalar.zeta(m) if m > 1 else Scalar(-1))
    return lams


def check_scaling(alg: CherednikAlgebra, lam: Scalar, rng, samples: int, order: int, degree: int):
    target = alg.scaled(lam)

    def test(_):
        a = alg.random_element(rng, order, degree)
        b = alg.random_element(rng, order, degree)
        lhs = alg.scale_parameters(alg.multiply(a, b), lam, target)
        rhs = target.multiply(alg.scale_parameters(a, lam, target), alg.scale_parameters(b, lam, target))
        return None if lhs == rhs else {"lambda": str(lam), "a": str(a), "b": str(b)}

    return _first_failure(range(samples), test)


def suite_pbw(run: Runner, inject: str | None = None):
    cfg = run.cfg
    names = [("pbw.products", "pbw"), ("pbw.leading", "pbw"), ("pbw.degeneration", "degeneration")]
    try:
        alg = cfg.algebra()
    except Exception as exc:
        run.fail_all(names, exc)
        return
    n, order, degree = cfg["verify.samples"], cfg["verify.filtration"], cfg["verify.coeff_degree"]
    run.run("pbw.products", "pbw", lambda rng: check_pbw_products(alg, rng, n, order, degree))
    run.run("pbw.leading", "pbw", lambda rng: check_pbw_leading(alg, order))
    run.run("pbw.degeneration", "degeneration", lambda rng: check_degeneration(alg, rng, n, order, degree))
    for lam in scaling_factors(cfg):
        run.run(f"pbw.scaling[{lam}]", "scaling", lambda rng, lam=lam: check_scaling(alg, lam, rng, n, order, degree))
    if inject is not None:
        run.run("pbw.inject", "pbw", lambda rng: check_injected(alg, inject, cfg["cyclotomic_order"]))


# -- commute -----------------------------------------------------------------------------


def check_dunkl_commute(alg: CherednikAlgebra, v, w, degree: int):
    monos = [MultiPoly.monomial(e) for e in monomials_up_to(alg.r, degree)]

    def test(f):
        lhs = alg.dunkl_apply(v, alg.dunkl_apply(w, f)) - alg.dunkl_apply(w, alg.dunkl_apply(v, f))
        return None if not lhs else {"f": str(f), "value": str(lhs)}

    return _first_failure(monos, test)


def check_commutator_formula(alg: CherednikAlgebra, rng, samples: int, degree: int):
    skew = alg.skew

    def test(_):
        v = [Scalar(rng.randint(-3, 3)) for _ in range(alg.r)]
        f = _random_poly(rng, alg.r, degree)
        F = skew.function(f)
        Dv = alg.dunkl_vector(v)
        comm = Dv * F - F * Dv
        expected = alg.commutator_with_function(v, f)
        if comm != expected.skew():
            return {"v": [str(a) for a in v], "f": str(f), "skew": str(comm), "formula": str(expected)}
        if alg.pbw_normal_form(comm).order() > 0:
            return {"v": [str(a) for a in v], "f": str(f), "order": alg.pbw_normal_form(comm).order()}
        return None

    return _first_failure(range(samples), test)


def suite_commute(run: Runner):
    cfg = run.cfg
    try:
        alg = cfg.algebra()
    except Exception as exc:
        run.fail_all([("commute.formula", "commutator")], exc)
        return
    degree = cfg["verify.degree"]
    for i in range(alg.r):
        for j in range(i + 1, alg.r):
            name = f"commute.D_{i + 1},D_{j + 1}"
            if not alg.untwisted:
                run.entries.append(entry(name, "commute", "skip", "twisted: no polynomial representation"))
                continue
            v, w = alg.unit_vector(i), alg.unit_vector(j)
            run.run(name, "commute", lambda rng, v=v, w=w: check_dunkl_commute(alg, v, w, degree))
    run.run(
        "commute.formula", "commutator",
        lambda rng: check_commutator_formula(alg, rng, cfg["verify.samples"], cfg["verify.coeff_degree"]),
    )


# -- presentation ------------------------------------------------------------------------


def suite_presentation(run: Runner):
    try:
        alg = run.cfg.algebra()
        results = alg.verify_rational_presentation(run.cfg["verify.degree"])
    except Exception as exc:
        run.fail_all([("presentation", "presentation")], exc)
        return
    for res in results:
        run.entries.append(entry(f"presentation.{res['name']}", "presentation", res["status"], res["witness"]))


# -- tdo ---------------------------------------------------------------------------------


def generator_words(alg: SkewAlgebra, length: int):
    gens = [(f"x_{i + 1}", alg.x(i)) for i in range(alg.r)] + [(f"L_{i + 1}", alg.L(i)) for i in range(alg.r)]
    for k in range(1, length + 1):
        yield from product(gens, repeat=k)


def check_twist_iso(omega: PolyForm, t: Scalar, length: int = 3):
    """phi_eta : D_omega -> D_0 with d(eta) = omega / t is multiplicative and invertible."""
    r = omega.r
    eta = poincare_antiderivative(omega).scale(t.inverse())
    src = SkewAlgebra(trivial_group(r), twist_from_form(omega, t))
    dst = SkewAlgebra(trivial_group(r), twist_from_form(PolyForm.zero(r, 2), t))
    for word in generator_words(src, length):
        prod_src = src.one()
        prod_img = dst.one()
        for _, op in word:
            prod_src = prod_src * op
            prod_img = prod_img * twist_iso(eta, op, dst)
        if twist_iso(eta, prod_src, dst) != prod_img:
            return "fail", {"omega": str(omega), "word": "*".join(n for n, _ in word)}
    for i in range(r):
        for op in (src.x(i), src.L(i)):
            back = twist_iso(-eta, twist_iso(eta, op, dst), src)
            if back != op:
                return "fail", {"omega": str(omega), "inverse": f"fails on {op}"}
    return "pass", None


def invariant_part(group: FiniteGroup, omega: PolyForm) -> PolyForm:
    total = PolyForm.zero(omega.r, 2)
    for g in range(len(group)):
        total = total + g_act_on_form(group, g, omega)
    return total.scale(Scalar(1) / len(group))


def check_extension(group: FiniteGroup, rng, samples: int, degree: int, t: Scalar):
    seen = {True: 0, False: 0}

    def test(_):
        omega = random_closed_two_form(rng, group.r, degree)
        if rng.random() < 0.5:
            omega = invariant_part(group, omega)
        g = rng.randrange(len(group))
        fixed = not extension_obstruction(group, g, omega)
        mult = g_map_is_multiplicative(group, g, omega, t)
        seen[fixed] += 1
        if fixed != mult:
            return {"g": g, "omega": str(omega), "obstruction_zero": fixed, "multiplicative": mult}
        return None

    status, witness = _first_failure(range(samples), test)
    if status == "pass":
        witness = {"invariant_samples": seen[True], "non_invariant_samples": seen[False]}
    return status, witness


def suite_tdo(run: Runner):
    cfg = run.cfg
    try:
        group = cfg.group()
        t = cfg.scalar("params.t", cfg["params.t"])
        omega = cfg.omega(group.r)
    except Exception as exc:
        run.fail_all([("tdo.config", "tdo")], exc)
        return
    samples, degree = cfg["verify.samples"], cfg["verify.coeff_degree"]
    if omega is not None:
        run.run("tdo.poincare", "poincare", lambda rng: _check_poincare(omega))
        if run.entries[-1]["status"] != "pass":
            return
        run.run("tdo.twist-iso", "tdo", lambda rng: check_twist_iso(omega, t))
        for g in range(1, len(group)):
            run.run(f"tdo.extension[g<{g}>]", "extension", lambda rng, g=g: _check_extension_one(group, g, omega, t))
        return

    def random_isos(rng):
        def test(_):
            status, witness = check_twist_iso(random_closed_two_form(rng, 2, degree), t)
            return None if status == "pass" else witness

        return _first_failure(range(samples), test)

    run.run("tdo.twist-iso", "tdo", random_isos)
    run.run("tdo.extension", "extension", lambda rng: check_extension(group, rng, samples, degree, t))


def _check_poincare(omega: PolyForm):
    from .tdo import exterior_derivative

    eta = poincare_antiderivative(omega)
    if exterior_derivative(eta) != omega:
        return "fail", {"omega": str(omega), "eta": str(eta)}
    return "pass", {"eta": str(eta)}


def _check_extension_one(group, g, omega, t):
    fixed = not extension_obstruction(group, g, omega)
    mult = g_map_is_multiplicative(group, g, omega, t)
    witness = {"obstruction_zero": fixed, "multiplicative": mult}
    return ("pass" if fixed == mult else "fail"), witness


# -- norms -------------------------------------------------------------------------------


def lattice_element(alg: CherednikAlgebra, rng, n: int, p: int, order: int, degree: int, terms: int = 3) -> CherednikElement:
    """Random element of p^k times the level-n lattice, k in 0..2."""
    out = {}
    monos = monomials_up_to(alg.r, degree)
    alphas = monomials_up_to(alg.r, order)
    extra = rng.randint(0, 2)
    for _ in range(terms):
        alpha = rng.choice(alphas)
        c = rng.randint(-4, 4) * p ** (n * sum(alpha) + extra + rng.randint(0, 1))
        if c:
            key = (rng.randrange(len(alg.group)), alpha)
            f = MultiPoly(alg.r, {rng.choice(monos): Scalar(c)})
            out[key] = out[key] + f if key in out else f
    return alg.element(out)


def check_submultiplicative(alg, level, spec, rng, samples, order, degree):
    def test(_):
        a = lattice_element(alg, rng, level.n, spec.p, order, degree)
        b = lattice_element(alg, rng, level.n, spec.p, order, degree)
        ga, gb = element_gauge(a, level, spec), element_gauge(b, level, spec)
        gab = element_gauge(alg.multiply(a, b), level, spec)
        if gab < ga + gb:
            return {"a": str(a), "b": str(b), "gauge_a": ga, "gauge_b": gb, "gauge_ab": gab}
        return None

    return _first_failure(range(samples), test)


def check_tower_monotone(alg, spec, rng, samples, max_level, order, degree, N):
    def test(_):
        n = rng.randint(2, max_level + 1)
        a = lattice_element(alg, rng, n, spec.p, order, degree)
        exact_hi = element_gauge(a, LatticeLevel(n), spec)
        exact_lo = element_gauge(a, LatticeLevel(n - 1), spec)
        ta = TruncatedHElement.from_element(a, n, N, spec)
        tb = tower_map(ta)
        if exact_lo < exact_hi or truncated_gauge(tb) < truncated_gauge(ta):
            return {"a": str(a), "n": n, "gauges": [exact_hi, exact_lo, _g(truncated_gauge(ta)), _g(truncated_gauge(tb))]}
        return None

    return _first_failure(range(samples), test)


def _g(value):
    return "inf" if value == INF else value


def suite_norms(run: Runner):
    cfg = run.cfg
    try:
        alg = cfg.algebra()
        spec = cfg.field_spec()
    except Exception as exc:
        run.fail_all([("norms", "certify")], exc)
        return
    samples, order, degree = cfg["verify.samples"], cfg["verify.filtration"], cfg["verify.coeff_degree"]
    top = cfg["verify.max_level"]
    for n in range(top + 1):
        for m in range(top + 1):
            level = LatticeLevel(n, m)
            tag = f"(n={n},m={m})"
            checks = certification_checks(alg, level, spec)
            failed = [c for c in checks if not c["ok"]]
            if failed:
                run.entries.append(entry(f"norms.certify{tag}", "certify", "skip", {"certified": False, "violations": failed}))
                continue
            run.entries.append(entry(f"norms.certify{tag}", "certify", "pass", {"certified": True}))
            run.run(
                f"norms.submultiplicative{tag}", "gauge",
                lambda rng, level=level: check_submultiplicative(alg, level, spec, rng, samples, order, degree),
            )
    if not all(c["ok"] for c in certification_checks(alg, LatticeLevel(1), spec)):
        run.entries.append(entry("norms.tower", "tower", "skip", "level 1 is not certified"))
        return
    run.run(
        "norms.tower", "tower",
        lambda rng: check_tower_monotone(alg, spec, rng, samples, top, order, degree, cfg["verify.tower_precision"]),
    )


# -- tower -------------------------------------------------------------------------------


def suite_tower(run: Runner):
    cfg = run.cfg
    try:
        alg = cfg.algebra()
        spec = cfg.field_spec()
    except Exception as exc:
        run.fail_all([("tower", "truncated")], exc)
        return
    n, N = max(cfg["verify.level_n"], 1), cfg["verify.tower_precision"]
    samples, order, degree = cfg["verify.samples"], cfg["verify.filtration"], cfg["verify.coeff_degree"]
    if not all(c["ok"] for c in certification_checks(alg, LatticeLevel(n), spec)):
        run.entries.append(entry("tower", "truncated", "skip", f"level {n} is not certified"))
        return

    def elem(rng):
        return TruncatedHElement.from_element(lattice_element(alg, rng, n, spec.p, order, degree), n, N, spec)

    def assoc(rng):
        def test(_):
            a, b, c = elem(rng), elem(rng), elem(rng)
            lhs = truncated_multiply(truncated_multiply(a, b), c)
            rhs = truncated_multiply(a, truncated_multiply(b, c))
            return None if lhs == rhs else {"a": str(a), "b": str(b), "c": str(c)}

        return _first_failure(range(samples), test)

    def exact(rng):
        def test(_):
            a = lattice_element(alg, rng, n, spec.p, order, degree)
            b = lattice_element(alg, rng, n, spec.p, order, degree)
            ta, tb = (TruncatedHElement.from_element(x, n, N, spec) for x in (a, b))
            want = TruncatedHElement.from_element(alg.multiply(a, b), n, N, spec)
            got = truncated_multiply(ta, tb)
            return None if got == want else {"a": str(a), "b": str(b), "got": str(got), "want": str(want)}

        return _first_failure(range(samples), test)

    def distrib(rng):
        def test(_):
            a, b, c = elem(rng), elem(rng), elem(rng)
            lhs = truncated_multiply(a, b + c)
            rhs = truncated_multiply(a, b) + truncated_multiply(a, c)
            return None if lhs == rhs else {"a": str(a), "b": str(b), "c": str(c)}

        return _first_failure(range(samples), test)

    run.run(f"tower.associative(n={n},N={N})", "truncated", assoc)
    run.run(f"tower.exact(n={n},N={N})", "truncated", exact)
    run.run(f"tower.distributive(n={n},N={N})", "truncated", distrib)


def run_suite(run: Runner, suite: str, inject: str | None = None):
    if suite == "pbw":
        suite_pbw(run, inject)
    elif suite == "commute":
        suite_commute(run)
    elif suite == "presentation":
        suite_presentation(run)
    elif suite == "tdo":
        suite_tdo(run)
    elif suite == "norms":
        suite_norms(run)
    elif suite == "tower":
        suite_tower(run)
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")

