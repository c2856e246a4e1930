"""Cherednik algebras H_{t,c,omega} of a linear reflection group.

H is realised inside the skew algebra G x| D_{omega/t} with coefficients
localized at the reflection arrangement, generated by polynomials, the group
and the Dunkl operators

    D_v = t L_v + sum_s 2 c(s) / (1 - lambda_s) * v(alpha_s) / alpha_s * (s - 1).

Elements are stored in PBW normal form  sum f_{g,a}(x) * g * D_1^a_1 ... D_r^a_r.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .opalg import LocalizedCoeff, SkewAlgebra, SkewOp, TwistData, TwistNotZero, _acc, _collect
from .polys import DivisionFailure, Exponent, MultiPoly, monomials_up_to
from .refgroup import (
    FiniteGroup,
    ReflectionFunction,
    conjugacy_classes,
    enumerate_reflections,
)
from .scalars import ONE, ZERO, Scalar, as_scalar
from .tdo import NotClosed, PolyForm, extension_obstruction, form_from_twist, is_closed


class NotInAlgebra(ValueError):
    """A skew operator has no expansion in the Dunkl basis."""


class NonTermination(RuntimeError):
    """PBW elimination failed to lower the filtration degree."""


def _add_e(e: Exponent, i: int, k: int = 1) -> Exponent:
    return e[:i] + (e[i] + k,) + e[i + 1:]


@dataclass(frozen=True)
class DunklParams:
    t: Scalar
    c: ReflectionFunction
    omega: PolyForm | None = None

    def __post_init__(self):
        object.__setattr__(self, "t", as_scalar(self.t))
        if not self.t:
            raise ValueError("t must be nonzero")

    def twist(self, r: int) -> TwistData:
        if self.omega is None:
            return TwistData.zero(r, self.t)
        return TwistData.from_upper(r, dict(self.omega.components), self.t)

    def scaled(self, lam) -> "DunklParams":
        lam = as_scalar(lam)
        if not lam:
            raise ValueError("scaling factor must be nonzero")
        omega = None if self.omega is None else self.omega.scale(lam)
        return DunklParams(self.t * lam, self.c.scaled(lam), omega)


class CherednikAlgebra:
    def __init__(self, group: FiniteGroup, params: DunklParams):
        self.group = group
        self.r = group.r
        self.params = params
        self.data = enumerate_reflections(group)
        self.classes = conjugacy_classes(group, self.data)
        if params.c.classes != self.classes:
            raise ValueError("reflection function is not defined on this group's classes")
        twist = params.twist(self.r)
        if not twist.is_zero():
            omega = form_from_twist(twist)
            if not is_closed(omega):
                raise NotClosed(f"omega = {omega} is not closed")
            for g in range(1, len(group)):
                if extension_obstruction(group, g, omega):
                    raise ValueError(f"omega is not invariant under group element {g}")
        self.skew = SkewAlgebra(group, twist)
        self.t = params.t
        self.untwisted = twist.is_zero()
        # 2c/(1 - lambda) per reflection datum
        self.kappa = [params.c(i) * 2 / (ONE - d.lam) for i, d in enumerate(self.data)]
        self._dunkl: dict[int, SkewOp] = {}
        self._dpow: dict[Exponent, SkewOp] = {}
        self._gdpow: dict[tuple[int, Exponent], SkewOp] = {}
        self._zero_exp = (0,) * self.r

    # -- generators ------------------------------------------------------

    def dunkl(self, i: int) -> SkewOp:
        """The standard Dunkl operator D_{e_i} as a skew operator."""
        op = self._dunkl.get(i)
        if op is None:
            e = [ZERO] * self.r
            e[i] = ONE
            op = self.dunkl_vector(e)
            self._dunkl[i] = op
        return op

    def dunkl_vector(self, v: Sequence, residues: Sequence[LocalizedCoeff] | None = None) -> SkewOp:
        """D_v; ``residues`` overrides the standard representatives v(alpha)/alpha per datum."""
        skew = self.skew
        op = skew.L_vector(v).scale(self.t)
        for k, d in enumerate(self.data):
            if not self.kappa[k]:
                continue
            res = skew.residue(v, d.hyperplane) if residues is None else residues[k]
            if not res:
                continue
            coeff = res.scale(self.kappa[k])
            op = op + skew.element({(d.s, self._zero_exp): coeff, (0, self._zero_exp): -coeff})
        return op

    def D_power(self, alpha: Exponent) -> SkewOp:
        """D_1^a_1 ... D_r^a_r."""
        op = self._dpow.get(alpha)
        if op is None:
            j = next((k for k, a in enumerate(alpha) if a), None)
            if j is None:
                op = self.skew.one()
            else:
                op = self.dunkl(j) * self.D_power(_add_e(alpha, j, -1))
            self._dpow[alpha] = op
        return op

    def gD(self, g: int, alpha: Exponent) -> SkewOp:
        key = (g, alpha)
        op = self._gdpow.get(key)
        if op is None:
            op = self.skew.g(g) * self.D_power(alpha) if g else self.D_power(alpha)
            self._gdpow[key] = op
        return op

    # -- elements --------------------------------------------------------

    def element(self, terms: Mapping[tuple[int, Exponent], MultiPoly]) -> "CherednikElement":
        return CherednikElement(self, terms)

    def zero(self) -> "CherednikElement":
        return CherednikElement(self, {})

    def one(self) -> "CherednikElement":
        return self.function(MultiPoly.one(self.r))

    def scalar(self, c) -> "CherednikElement":
        return self.function(MultiPoly.const(c, self.r))

    def function(self, f: MultiPoly) -> "CherednikElement":
        return CherednikElement(self, {(0, self._zero_exp): f})

    def x(self, i: int) -> "CherednikElement":
        return self.function(MultiPoly.var(i, self.r))

    def g(self, label: int) -> "CherednikElement":
        return CherednikElement(self, {(label, self._zero_exp): MultiPoly.one(self.r)})

    def D(self, i: int) -> "CherednikElement":
        return self.basis(0, _add_e(self._zero_exp, i))

    def basis(self, g: int, alpha: Exponent, f: MultiPoly | None = None) -> "CherednikElement":
        f = MultiPoly.one(self.r) if f is None else f
        return CherednikElement(self, {(g, tuple(alpha)): f})

    def to_skew(self, a: "CherednikElement") -> SkewOp:
        pending: dict = {}
        for (g, alpha), f in a.terms.items():
            f = LocalizedCoeff.poly(f, self.skew.arr)
            for key, v in self.gD(g, alpha).terms.items():
                _acc(pending, key, f * v)
        return SkewOp(self.skew, _collect(pending))

    # -- PBW -------------------------------------------------------------

    def pbw_normal_form(self, a: SkewOp, max_steps: int = 10_000) -> "CherednikElement":
        if a.alg is not self.skew:
            raise ValueError("operator belongs to a different algebra")
        group, skew = self.group, self.skew
        out: dict[tuple[int, Exponent], MultiPoly] = {}
        steps = 0
        while a.terms:
            steps += 1
            if steps > max_steps:
                raise NonTermination("step limit reached")
            k = a.order()
            tinv = self.t.inverse() ** k
            tops: dict[int, dict[Exponent, LocalizedCoeff]] = {}
            for (g, beta), f in a.terms.items():
                if sum(beta) == k:
                    tops.setdefault(g, {})[beta] = f
            pending: dict = {}
            for g, F in tops.items():
                ginv = group.inv(g)
                coeffs: dict[Exponent, LocalizedCoeff] = {}
                for beta, f in F.items():
                    for alpha, s in skew.symbol_sigma(ginv, beta).items():
                        cur = coeffs.get(alpha)
                        term = f.scale(s * tinv)
                        coeffs[alpha] = term if cur is None else cur + term
                for alpha, f in coeffs.items():
                    if not f:
                        continue
                    if not f.is_polynomial():
                        raise NotInAlgebra(
                            f"coefficient {f} of g<{g}> * D^({','.join(map(str, alpha))}) is not a polynomial"
                        )
                    p = f.num
                    key = (g, alpha)
                    out[key] = out[key] + p if key in out else p
                    for key2, v in self.gD(g, alpha).terms.items():
                        _acc(pending, key2, f * v)
            a = a - SkewOp(skew, _collect(pending))
            if a.terms and a.order() >= k:
                raise NonTermination(f"filtration degree {k} did not drop")
        return CherednikElement(self, {key: f for key, f in out.items() if f})

    def multiply(self, a: "CherednikElement", b: "CherednikElement") -> "CherednikElement":
        if not a.terms or not b.terms:
            return self.zero()
        return self.pbw_normal_form(a.skew() * b.skew())

    # -- relations -------------------------------------------------------

    def commutator_with_function(self, v: Sequence, f: MultiPoly) -> "CherednikElement":
        """[D_v, f] = t v(f) + sum_s kappa_s v(alpha_s) (s(f) - f) / alpha_s * s."""
        v = [as_scalar(a) for a in v]
        terms: dict[tuple[int, Exponent], MultiPoly] = {}
        z = self._zero_exp
        base = f.directional_derivative(v).scale(self.t)
        if base:
            terms[(0, z)] = base
        for k, d in enumerate(self.data):
            va = sum((a * b for a, b in zip(d.alpha, v) if a and b), ZERO)
            if not va or not self.kappa[k]:
                continue
            diff = self.group.act_on_poly(d.s, f) - f
            if not diff:
                continue
            q = diff.divide_linear(d.alpha).scale(self.kappa[k] * va)
            key = (d.s, z)
            terms[key] = terms[key] + q if key in terms else q
        return CherednikElement(self, terms)

    def dunkl_apply(self, v: Sequence, f: MultiPoly) -> MultiPoly:
        """D_v acting on a polynomial (untwisted only)."""
        if not self.untwisted:
            raise TwistNotZero("the twisted algebra has no polynomial representation")
        v = [as_scalar(a) for a in v]
        out = f.directional_derivative(v).scale(self.t)
        for k, d in enumerate(self.data):
            va = sum((a * b for a, b in zip(d.alpha, v) if a and b), ZERO)
            if not va or not self.kappa[k]:
                continue
            diff = self.group.act_on_poly(d.s, f) - f
            if diff:
                out = out + diff.divide_linear(d.alpha).scale(self.kappa[k] * va)
        return out

    def unit_vector(self, i: int) -> list[Scalar]:
        e = [ZERO] * self.r
        e[i] = ONE
        return e

    def verify_rational_presentation(self, degree_bound: int) -> list[dict]:
        """Check the defining relations on all monomials of degree <= degree_bound."""
        if not self.untwisted:
            raise TwistNotZero("the presentation check uses the polynomial representation")
        r = self.r
        monos = [MultiPoly.monomial(e) for e in monomials_up_to(r, degree_bound)]
        results = []

        def record(name, witness):
            results.append({"name": name, "status": "pass" if witness is None else "fail", "witness": witness})

        for i in range(r):
            for j in range(i + 1, r):
                witness = None
                for f in monos:
                    vi, vj = self.unit_vector(i), self.unit_vector(j)
                    lhs = self.dunkl_apply(vi, self.dunkl_apply(vj, f)) - self.dunkl_apply(vj, self.dunkl_apply(vi, f))
                    if lhs:
                        witness = f"[D_{i + 1}, D_{j + 1}]({f}) = {lhs}"
                        break
                record(f"[D_{i + 1},D_{j + 1}]=0", witness)
        for i in range(r):
            for j in range(i + 1, r):
                xi, xj = self.skew.x(i), self.skew.x(j)
                record(f"[x_{i + 1},x_{j + 1}]=0", None if xi * xj == xj * xi else "x_i x_j != x_j x_i")
        for i in range(r):
            for j in range(r):
                # [D_i, x_j] = t delta_ij - sum_s kappa_s alpha_s(e_i) (x_j - s(x_j)) / alpha_s * s
                xj = MultiPoly.var(j, r)
                rhs = self.commutator_with_function(self.unit_vector(i), xj)
                witness = None
                for f in monos:
                    lhs = self.dunkl_apply(self.unit_vector(i), xj * f) - xj * self.dunkl_apply(self.unit_vector(i), f)
                    expected = MultiPoly(r)
                    for (g, _), h in rhs.terms.items():
                        expected = expected + h * self.group.act_on_poly(g, f)
                    if lhs != expected:
                        witness = f"[D_{i + 1}, x_{j + 1}]({f}) = {lhs}, expected {expected}"
                        break
                record(f"[D_{i + 1},x_{j + 1}]", witness)
        return results

    def scaled(self, lam) -> "CherednikAlgebra":
        return CherednikAlgebra(self.group, self.params.scaled(lam))

    def scale_parameters(self, a: "CherednikElement", lam, target: "CherednikAlgebra | None" = None) -> "CherednikElement":
        """Rewrite a in the basis of H_{lam t, lam c, lam omega}, where D' = lam D."""
        lam = as_scalar(lam)
        target = self.scaled(lam) if target is None else target
        inv = lam.inverse()
        return CherednikElement(
            target, {(g, alpha): f.scale(inv ** sum(alpha)) for (g, alpha), f in a.terms.items()}
        )

    # -- random elements -------------------------------------------------

    def random_element(self, rng, order: int, degree: int, n_terms: int = 3, coeff_range: int = 3) -> "CherednikElement":
        terms: dict[tuple[int, Exponent], MultiPoly] = {}
        monos = monomials_up_to(self.r, degree)
        alphas = monomials_up_to(self.r, order)
        for _ in range(n_terms):
            g = rng.randrange(len(self.group))
            alpha = rng.choice(alphas)
            f = MultiPoly(self.r, {rng.choice(monos): Scalar(rng.randint(-coeff_range, coeff_range))})
            key = (g, alpha)
            terms[key] = terms[key] + f if key in terms else f
        return CherednikElement(self, terms)

    def random_basis_element(self, rng, order: int, degree: int) -> "CherednikElement":
        g = rng.randrange(len(self.group))
        alpha = rng.choice(monomials_up_to(self.r, order))
        e = rng.choice(monomials_up_to(self.r, degree))
        return self.basis(g, alpha, MultiPoly.monomial(e))


class CherednikElement:
    __slots__ = ("alg", "terms", "_skew")

    def __init__(self, alg: CherednikAlgebra, terms: Mapping[tuple[int, Exponent], MultiPoly]):
        self.alg = alg
        self.terms = {(g, tuple(a)): f for (g, a), f in terms.items() if f}
        self._skew = None

    def skew(self) -> SkewOp:
        if self._skew is None:
            self._skew = self.alg.to_skew(self)
        return self._skew

    def _check(self, other):
        if other.alg is not self.alg:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        if not isinstance(other, CherednikElement):
            other = self.alg.scalar(other)
        self._check(other)
        terms = dict(self.terms)
        for k, f in other.terms.items():
            terms[k] = terms[k] + f if k in terms else f
        return CherednikElement(self.alg, terms)

    __radd__ = __add__

    def __neg__(self):
        return CherednikElement(self.alg, {k: -f for k, f in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, CherednikElement):
            other = self.alg.scalar(other)
        return self + (-other)

    def scale(self, s) -> "CherednikElement":
        return CherednikElement(self.alg, {k: f.scale(s) for k, f in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CherednikElement):
            self._check(other)
            return self.alg.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, CherednikElement):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self) -> int:
        """Filtration degree (max |alpha|); -1 for zero."""
        return max((sum(a) for _, a in self.terms), default=-1)

    def top(self) -> "CherednikElement":
        k = self.order()
        return CherednikElement(self.alg, {key: f for key, f in self.terms.items() if sum(key[1]) == k})

    def __str__(self):
        from .serialize import format_cherednik

        return format_cherednik(self.terms)

    __repr__ = __str__


def commutator_with_function(alg: CherednikAlgebra, v, f) -> CherednikElement:
    return alg.commutator_with_function(v, f)


def pbw_normal_form(alg: CherednikAlgebra, a: SkewOp) -> CherednikElement:
    return alg.pbw_normal_form(a)


def multiply(a: CherednikElement, b: CherednikElement) -> CherednikElement:
    return a.alg.multiply(a, b)


def default_params(group: FiniteGroup, c_values: Sequence, t=1, omega: PolyForm | None = None) -> DunklParams:
    classes = conjugacy_classes(group, enumerate_reflections(group))
    return DunklParams(as_scalar(t), ReflectionFunction(classes, list(c_values)), omega)


__all__ = [
    "CherednikAlgebra",
    "CherednikElement",
    "DunklParams",
    "DivisionFailure",
    "NonTermination",
    "NotInAlgebra",
    "commutator_with_function",
    "default_params",
    "multiply",
    "pbw_normal_form",
]
