"""Polynomial differential forms on affine r-space and twisted differential operators.

Forms are stored on ordered index sets: ``{(i, j): f}`` with ``i < j`` means
``f dx_i ^ dx_j``.  A closed 2-form ``omega`` determines the algebra D_omega in
which ``[L_i, L_j] = omega_ij / t``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Mapping, Sequence

from .opalg import LocalizedCoeff, SkewAlgebra, SkewOp, TwistData, trivial_group
from .polys import MultiPoly
from .refgroup import FiniteGroup
from .scalars import Scalar

Index = tuple[int, ...]


class NotClosed(ValueError):
    """A 2-form expected to be closed has nonzero exterior derivative."""


class EtaMismatch(ValueError):
    """d(eta) does not equal (omega_1 - omega_2) / t."""


def _sort_sign(idx: Sequence[int]) -> tuple[int, Index]:
    """Sign of the permutation sorting idx, and the sorted tuple (sign 0 on repeats)."""
    idx = list(idx)
    if len(set(idx)) < len(idx):
        return 0, ()
    sign = 1
    for a in range(len(idx)):
        for b in range(len(idx) - 1 - a):
            if idx[b] > idx[b + 1]:
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
                sign = -sign
    return sign, tuple(idx)


class PolyForm:
    __slots__ = ("r", "degree", "components")

    def __init__(self, r: int, degree: int, components: Mapping[Index, MultiPoly] | None = None):
        self.r = r
        self.degree = degree
        self.components: dict[Index, MultiPoly] = {}
        for idx, f in (components or {}).items():
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not match degree {degree}")
            sign, key = _sort_sign(idx)
            if sign == 0 or not f:
                continue
            cur = self.components.get(key, MultiPoly(r)) + (f if sign > 0 else -f)
            if cur:
                self.components[key] = cur
            else:
                self.components.pop(key, None)

    @classmethod
    def zero(cls, r: int, degree: int) -> "PolyForm":
        return cls(r, degree)

    @classmethod
    def function(cls, f: MultiPoly) -> "PolyForm":
        return cls(f.r, 0, {(): f})

    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self):
        return bool(self.components)

    def __getitem__(self, idx: Index) -> MultiPoly:
        sign, key = _sort_sign(idx)
        f = self.components.get(key, MultiPoly(self.r)) if sign else MultiPoly(self.r)
        return f if sign >= 0 else -f

    def _same_shape(self, other: "PolyForm"):
        if (self.r, self.degree) != (other.r, other.degree):
            raise ValueError("forms of different shape")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._same_shape(other)
        comps = dict(self.components)
        for k, f in other.components.items():
            comps[k] = comps[k] + f if k in comps else f
        return PolyForm(self.r, self.degree, comps)

    def __neg__(self):
        return PolyForm(self.r, self.degree, {k: -f for k, f in self.components.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, s) -> "PolyForm":
        return PolyForm(self.r, self.degree, {k: f.scale(s) for k, f in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.r, self.degree, self.components) == (other.r, other.degree, other.components)

    def __hash__(self):
        return hash((self.r, self.degree, frozenset(self.components.items())))

    def __str__(self):
        if not self.components:
            return "0"
        pieces = []
        for idx, f in sorted(self.components.items()):
            wedge = "^".join(f"dx_{i + 1}" for i in idx)
            for e, c in sorted(f.terms.items()):
                cs = f"({c})" if c.needs_parens() else str(c)
                piece = f"{cs} * x^({','.join(map(str, e))})"
                pieces.append(f"{piece} {wedge}" if wedge else piece)
        return " + ".join(pieces)

    __repr__ = __str__


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    comps: dict[Index, MultiPoly] = {}
    for I, f in a.components.items():
        for J, h in b.components.items():
            sign, key = _sort_sign(I + J)
            if sign:
                prod = f * h
                prod = prod if sign > 0 else -prod
                comps[key] = comps[key] + prod if key in comps else prod
    return PolyForm(a.r, a.degree + b.degree, comps)


def exterior_derivative(form: PolyForm) -> PolyForm:
    comps: dict[Index, MultiPoly] = {}
    for I, f in form.components.items():
        for k in range(form.r):
            df = f.derivative(k)
            if not df:
                continue
            sign, key = _sort_sign((k,) + I)
            if sign:
                df = df if sign > 0 else -df
                comps[key] = comps[key] + df if key in comps else df
    return PolyForm(form.r, form.degree + 1, comps)


def is_closed(form: PolyForm) -> bool:
    return exterior_derivative(form).is_zero()


def poincare_antiderivative(omega: PolyForm) -> PolyForm:
    """Radial-homotopy primitive of a closed 2-form."""
    if omega.degree != 2:
        raise ValueError("expected a 2-form")
    if not is_closed(omega):
        raise NotClosed(f"d({omega}) = {exterior_derivative(omega)}")
    r = omega.r
    comps: dict[Index, MultiPoly] = {}
    for (i, j), f in omega.components.items():
        for e, c in f.terms.items():
            mono = MultiPoly(r, {e: c / (sum(e) + 2)})
            for idx, piece in (((j,), mono * MultiPoly.var(i, r)), ((i,), -(mono * MultiPoly.var(j, r)))):
                comps[idx] = comps[idx] + piece if idx in comps else piece
    return PolyForm(r, 1, comps)


def g_act_on_form(group: FiniteGroup, g: int, form: PolyForm) -> PolyForm:
    """Pullback along x -> M_g x (the same substitution used on functions)."""
    M = group.matrices[g]
    r = form.r
    out = PolyForm.zero(r, form.degree)
    for I, f in form.components.items():
        moved = PolyForm.function(f.substitute_linear(M))
        for i in I:
            moved = wedge(moved, PolyForm(r, 1, {(j,): MultiPoly.const(M[i][j], r) for j in range(r) if M[i][j]}))
        out = out + moved
    return out


def extension_obstruction(group: FiniteGroup, g: int, omega: PolyForm) -> PolyForm:
    return g_act_on_form(group, g, omega) - omega


# -- forms versus twist data -----------------------------------------------------------


def twist_from_form(omega: PolyForm, t=1) -> TwistData:
    if omega.degree != 2:
        raise ValueError("expected a 2-form")
    return TwistData.from_upper(omega.r, dict(omega.components), t)


def form_from_twist(twist: TwistData) -> PolyForm:
    r = twist.r
    return PolyForm(r, 2, {(i, j): twist.omega[i][j] for i, j in combinations(range(r), 2)})


# -- isomorphisms ----------------------------------------------------------------------


def _image(alg: SkewAlgebra, a: SkewOp, coeff_map, L_images: Sequence[SkewOp]) -> SkewOp:
    """Sum of coeff_map(f) * prod_i L_images[i]^beta_i * g over the terms of a."""
    out = alg.zero()
    powers: dict[tuple[int, int], SkewOp] = {}

    def power(i, k):
        if (i, k) not in powers:
            powers[(i, k)] = L_images[i] ** k
        return powers[(i, k)]

    for (g, beta), f in a.terms.items():
        term = alg.function(coeff_map(f))
        for i, k in enumerate(beta):
            if k:
                term = term * power(i, k)
        if g:
            term = term * alg.g(g)
        out = out + term
    return out


def twist_iso(eta: PolyForm, a: SkewOp, target: SkewAlgebra) -> SkewOp:
    """Map L_v -> L_v + eta(v), fixing functions and group elements."""
    src = a.alg
    if eta.degree != 1 or eta.r != src.r:
        raise ValueError("eta must be a 1-form on the same space")
    if target.group.matrices != src.group.matrices or target.twist.t != src.twist.t:
        raise ValueError("source and target must share the group and t")
    diff = (form_from_twist(src.twist) - form_from_twist(target.twist)).scale(src.twist.t.inverse())
    if exterior_derivative(eta) != diff:
        raise EtaMismatch(f"d(eta) = {exterior_derivative(eta)} but (omega_1 - omega_2)/t = {diff}")
    images = [target.L(i) + target.function(eta[(i,)]) for i in range(src.r)]
    return _image(target, a, lambda f: _recoeff(f, target), images)


def _recoeff(f: LocalizedCoeff, alg: SkewAlgebra) -> LocalizedCoeff:
    # coefficients carry the source arrangement; rebuild them over the target's
    if f.arr is alg.arr:
        return f
    if any(f.den) and list(f.arr.forms) != list(alg.arr.forms):
        raise ValueError("source and target arrangements differ")
    return LocalizedCoeff(f.num, f.den, alg.arr, reduced=True)


def g_map(alg: SkewAlgebra, g_matrix_group: FiniteGroup, g: int, a: SkewOp) -> SkewOp:
    """Natural g-map on D_omega: x_i -> g(x_i), L_v -> L_{g(v)}.

    ``alg`` must be built on the trivial group, ``g`` is a label of
    ``g_matrix_group``.  The map is an algebra morphism exactly when g fixes omega.
    """
    Minv = g_matrix_group.inverse_matrices[g]
    r = alg.r
    images = [alg.L_vector([Minv[k][i] for k in range(r)]) for i in range(r)]
    M = g_matrix_group.matrices[g]

    def coeff_map(f):
        if any(f.den):
            raise ValueError("g_map is defined on polynomial coefficients")
        return f.num.substitute_linear(M)

    return _image(alg, a, coeff_map, images)


def g_map_is_multiplicative(group: FiniteGroup, g: int, omega: PolyForm, t=1) -> bool:
    """Check phi_g(ab) = phi_g(a) phi_g(b) on all pairs of generators x_i, L_j."""
    r = omega.r
    alg = SkewAlgebra(trivial_group(r), twist_from_form(omega, t))
    gens = [alg.x(i) for i in range(r)] + [alg.L(i) for i in range(r)]
    for a in gens:
        for b in gens:
            if g_map(alg, group, g, a * b) != g_map(alg, group, g, a) * g_map(alg, group, g, b):
                return False
    return True


def random_one_form(rng, r: int, degree: int, density: float = 0.5) -> PolyForm:
    from .polys import monomials_up_to

    comps = {}
    for i in range(r):
        terms = {}
        for e in monomials_up_to(r, degree):
            if rng.random() < density:
                terms[e] = Scalar(rng.randint(-4, 4)) / rng.randint(1, 3)
        comps[(i,)] = MultiPoly(r, terms)
    return PolyForm(r, 1, comps)


def random_closed_two_form(rng, r: int, degree: int) -> PolyForm:
    """d of a random polynomial 1-form with coefficients of degree <= degree + 1."""
    return exterior_derivative(random_one_form(rng, r, degree + 1))
