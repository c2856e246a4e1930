"""Skew group algebras of twisted differential operators on affine r-space.

Elements are finite sums ``f * L^beta * g`` (coefficient leftmost, group
element rightmost) where ``f`` is a polynomial localized at the reflection
arrangement, ``L^beta = L_1^b1 ... L_r^br`` in this fixed order and ``g`` a
group label.  Relations used for normal ordering::

    L_i f     = f L_i + d_i(f)
    L_i L_j   = L_j L_i + omega_ij / t
    g f       = g(f) g
    g L_v     = L_{g(v)} g
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Mapping, Sequence

from .polys import DivisionFailure, Exponent, MultiPoly
from .refgroup import FiniteGroup, build_group, enumerate_reflections, hyperplanes_of, identity_matrix
from .scalars import ONE, ZERO, Scalar, as_scalar, modular_root


class TwistNotZero(ValueError):
    """Operation needs an untwisted algebra (omega = 0)."""


def _add_e(e: Exponent, i: int, k: int = 1) -> Exponent:
    return e[:i] + (e[i] + k,) + e[i + 1:]


# -- arrangement and localized coefficients ------------------------------------


class Arrangement:
    """The hyperplanes alpha_Y of a reflection group with their G-permutation."""

    def __init__(self, r: int, forms: Sequence[Sequence[Scalar]], group: FiniteGroup | None = None):
        self.r = r
        self.forms = [tuple(as_scalar(a) for a in f) for f in forms]
        self.polys = [MultiPoly.linear(f, r) for f in self.forms]
        self.group = group
        self._powers: dict[tuple[int, int], MultiPoly] = {}
        self._images: dict[int, list[tuple[int, Scalar]]] = {}
        orders = {a.m for f in self.forms for a in f}
        if group is not None:
            orders |= {a.m for M in group.matrices for row in M for a in row}
        self.m = max(orders, default=1)
        self._P, self._root = modular_root(self.m)
        self._points = [self._point_on(f) for f in self.forms]
        self._mono_values: list[dict[Exponent, int]] = [{} for _ in self.forms]

    def _point_on(self, form) -> list[int]:
        # a fixed point of the hyperplane, reduced mod P
        P, root = self._P, self._root
        coords = [(7919 * (k + 3) + 104729) % P for k in range(self.r)]
        j = next(k for k, a in enumerate(form) if a)
        rest = sum(form[k].mod_image(P, root) * coords[k] for k in range(self.r) if k != j and form[k])
        coords[j] = -rest * pow(form[j].mod_image(P, root), -1, P) % P
        return coords

    def might_divide(self, f: MultiPoly, Y: int) -> bool:
        """False only if f certainly does not vanish on the hyperplane Y."""
        P, root, pts = self._P, self._root, self._points[Y]
        cache = self._mono_values[Y]
        m = self.m
        acc = 0
        for e, c in f.terms.items():
            if c.m != 1 and c.m != m:
                return True
            v = cache.get(e)
            if v is None:
                v = 1
                for x, k in zip(pts, e):
                    if k:
                        v = v * pow(x, k, P) % P
                cache[e] = v
            acc += v * c.mod_image(P, root)
        return acc % P == 0

    def __len__(self):
        return len(self.forms)

    def power(self, Y: int, k: int) -> MultiPoly:
        key = (Y, k)
        p = self._powers.get(key)
        if p is None:
            p = self.polys[Y] ** k
            self._powers[key] = p
        return p

    def image(self, g: int) -> list[tuple[int, Scalar]]:
        """For each Y: (Y', mu) with g(alpha_Y) = mu * alpha_Y'."""
        if g not in self._images:
            out = []
            for form in self.forms:
                img = self.group.act_on_form(g, form)
                lead = next(x for x in img if x)
                normalized = tuple(x * lead.inverse() for x in img)
                try:
                    out.append((self.forms.index(normalized), lead))
                except ValueError:
                    raise ValueError("arrangement is not stable under the group") from None
            self._images[g] = out
        return self._images[g]

    def match(self, form: Sequence[Scalar]) -> tuple[int, Scalar] | None:
        """Return (Y, mu) with form = mu * alpha_Y, or None."""
        form = tuple(as_scalar(a) for a in form)
        if not any(form):
            return None
        lead = next(x for x in form if x)
        normalized = tuple(x * lead.inverse() for x in form)
        if normalized in self.forms:
            return self.forms.index(normalized), lead
        return None


class LocalizedCoeff:
    """``numerator / prod_Y alpha_Y^k_Y``, kept reduced (no alpha_Y with k_Y > 0 divides it)."""

    __slots__ = ("num", "den", "arr", "_hash")

    def __init__(self, num: MultiPoly, den: Sequence[int] | None, arr: Arrangement, *, reduced=False):
        den = tuple(den) if den is not None else (0,) * len(arr)
        if not num.terms:
            den = (0,) * len(arr)
        elif not reduced and any(den):
            den = list(den)
            for Y, k in enumerate(den):
                while k and arr.might_divide(num, Y):
                    try:
                        num = num.divide_linear(arr.forms[Y])
                    except DivisionFailure:
                        break
                    k -= 1
                den[Y] = k
            den = tuple(den)
        self.num, self.den, self.arr = num, den, arr
        self._hash = None

    @classmethod
    def poly(cls, f: MultiPoly, arr: Arrangement) -> "LocalizedCoeff":
        return cls(f, None, arr, reduced=True)

    @classmethod
    def const(cls, c, arr: Arrangement) -> "LocalizedCoeff":
        return cls(MultiPoly.const(c, arr.r), None, arr, reduced=True)

    @staticmethod
    def sum(values: Sequence["LocalizedCoeff"]) -> "LocalizedCoeff":
        """Sum with one reduction at the end."""
        arr = values[0].arr
        by_den: dict[tuple[int, ...], dict] = {}
        for v in values:
            terms = by_den.setdefault(v.den, {})
            for e, c in v.num.terms.items():
                cur = terms.get(e)
                terms[e] = c if cur is None else cur + c
        if len(by_den) == 1:
            (den, terms), = by_den.items()
            num = MultiPoly(arr.r, {e: c for e, c in terms.items() if c}, _clean=True)
            return LocalizedCoeff(num, den, arr, reduced=not any(den))
        den = tuple(max(ks) for ks in zip(*by_den))
        num = MultiPoly(arr.r)
        for d, terms in by_den.items():
            part = LocalizedCoeff(MultiPoly(arr.r, {e: c for e, c in terms.items() if c}, _clean=True), d, arr, reduced=True)
            num = num + part._lift(den)
        return LocalizedCoeff(num, den, arr)

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_polynomial(self) -> bool:
        return not any(self.den)

    def pole_order(self) -> int:
        return sum(self.den)

    def _lift(self, den: Sequence[int]) -> MultiPoly:
        f = self.num
        for Y, (have, want) in enumerate(zip(self.den, den)):
            if want > have:
                f = f * self.arr.power(Y, want - have)
        return f

    def __add__(self, other: "LocalizedCoeff") -> "LocalizedCoeff":
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den == other.den:
            if not any(self.den):
                return LocalizedCoeff(self.num + other.num, self.den, self.arr, reduced=True)
            return LocalizedCoeff(self.num + other.num, self.den, self.arr)
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return LocalizedCoeff(self._lift(den) + other._lift(den), den, self.arr)

    def __neg__(self):
        return LocalizedCoeff(-self.num, self.den, self.arr, reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "LocalizedCoeff":
        if isinstance(other, LocalizedCoeff):
            if not self.num.terms or not other.num.terms:
                return LocalizedCoeff(MultiPoly(self.arr.r), None, self.arr, reduced=True)
            if not any(self.den) and not any(other.den):
                return LocalizedCoeff(self.num * other.num, self.den, self.arr, reduced=True)
            # alpha_Y is prime and both factors are reduced, so alpha_Y can only
            # cancel from a numerator whose own denominator avoids Y
            an, bn, arr = self.num, other.num, self.arr
            den = [a + b for a, b in zip(self.den, other.den)]
            for Y, k in enumerate(den):
                if not k or (self.den[Y] and other.den[Y]):
                    continue
                if self.den[Y]:
                    bn, den[Y] = _cancel(bn, Y, k, arr)
                else:
                    an, den[Y] = _cancel(an, Y, k, arr)
            return LocalizedCoeff(an * bn, den, arr, reduced=True)
        if isinstance(other, MultiPoly):
            return self * LocalizedCoeff.poly(other, self.arr)
        return self.scale(other)

    def scale(self, s) -> "LocalizedCoeff":
        s = as_scalar(s)
        if s == ONE:
            return self
        return LocalizedCoeff(self.num.scale(s), self.den, self.arr, reduced=True)

    def derivative(self, i: int) -> "LocalizedCoeff":
        d_num = self.num.derivative(i)
        if not any(self.den):
            return LocalizedCoeff(d_num, self.den, self.arr, reduced=True)
        arr = self.arr
        # only hyperplanes involving x_i gain a pole:
        # d(N / prod a^k) = (dN * P - N * sum_{Y in A} k_Y d(a_Y) P / a_Y) / (P * prod a^k),
        # P = prod_{Y in A} a_Y; the new numerator is prime to every a_Y with Y in A
        bumped = [Y for Y, k in enumerate(self.den) if k and arr.forms[Y][i]]
        if not bumped:
            num, den = d_num, list(self.den)
        else:
            prod_all = MultiPoly.one(arr.r)
            for Y in bumped:
                prod_all = prod_all * arr.polys[Y]
            num = d_num * prod_all
            for Y in bumped:
                rest = MultiPoly.one(arr.r)
                for Z in bumped:
                    if Z != Y:
                        rest = rest * arr.polys[Z]
                num = num - (self.num * rest).scale(arr.forms[Y][i] * self.den[Y])
            den = [k + 1 if Y in bumped else k for Y, k in enumerate(self.den)]
        if num:
            for Y, k in enumerate(den):
                if k and Y not in bumped:
                    num, den[Y] = _cancel(num, Y, k, arr)
        return LocalizedCoeff(num, den, arr, reduced=True)

    def act(self, group: FiniteGroup, g: int) -> "LocalizedCoeff":
        if g == 0:
            return self
        num = group.act_on_poly(g, self.num)
        if not any(self.den):
            return LocalizedCoeff(num, self.den, self.arr, reduced=True)
        den = [0] * len(self.arr)
        scale = ONE
        for Y, (Yp, mu) in enumerate(self.arr.image(g)):
            k = self.den[Y]
            if k:
                den[Yp] += k
                scale = scale * mu ** k
        return LocalizedCoeff(num.scale(scale.inverse()), den, self.arr, reduced=True)

    def as_poly(self) -> MultiPoly:
        if any(self.den):
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def __eq__(self, other):
        if isinstance(other, LocalizedCoeff):
            return self.den == other.den and self.num == other.num
        if isinstance(other, MultiPoly):
            return not any(self.den) and self.num == other
        return NotImplemented

    def cross_equal(self, other: "LocalizedCoeff") -> bool:
        """Equality by cross multiplication (independent of reduction)."""
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return self._lift(den) == other._lift(den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        if not any(self.den):
            return str(self.num)
        dens = "*".join(
            (f"({self.arr.polys[Y]})" if k == 1 else f"({self.arr.polys[Y]})^{k}") for Y, k in enumerate(self.den) if k
        )
        return f"({self.num})/({dens})"

    __repr__ = __str__


def _cancel(num: MultiPoly, Y: int, k: int, arr: Arrangement) -> tuple[MultiPoly, int]:
    """Divide num by alpha_Y up to k times; returns the quotient and remaining exponent."""
    while k and num.degree() > 0 and arr.might_divide(num, Y):
        try:
            num = num.divide_linear(arr.forms[Y])
        except DivisionFailure:
            break
        k -= 1
    return num, k


# -- twists -----------------------------------------------------------------------


@dataclass
class TwistData:
    """omega[i][j] = omega(d_i, d_j) (antisymmetric) and the unit t."""

    omega: list[list[MultiPoly]]
    t: Scalar

    def __post_init__(self):
        self.t = as_scalar(self.t)
        if not self.t:
            raise ValueError("t must be nonzero")
        r = len(self.omega)
        for i in range(r):
            if self.omega[i][i]:
                raise ValueError("omega must vanish on the diagonal")
            for j in range(r):
                if self.omega[i][j] != -self.omega[j][i]:
                    raise ValueError("omega must be antisymmetric")

    @classmethod
    def zero(cls, r: int, t=1) -> "TwistData":
        return cls([[MultiPoly(r) for _ in range(r)] for _ in range(r)], as_scalar(t))

    @classmethod
    def from_upper(cls, r: int, upper: Mapping[tuple[int, int], MultiPoly], t=1) -> "TwistData":
        omega = [[MultiPoly(r) for _ in range(r)] for _ in range(r)]
        for (i, j), f in upper.items():
            if i == j:
                raise ValueError("omega has no diagonal entries")
            if i > j:
                i, j, f = j, i, -f
            omega[i][j] = omega[i][j] + f
            omega[j][i] = omega[j][i] - f
        return cls(omega, as_scalar(t))

    @property
    def r(self) -> int:
        return len(self.omega)

    def is_zero(self) -> bool:
        return not any(f for row in self.omega for f in row)

    def scaled(self, lam) -> "TwistData":
        lam = as_scalar(lam)
        return TwistData([[f.scale(lam) for f in row] for row in self.omega], self.t * lam)


# -- the skew algebra ------------------------------------------------------------------

Key = tuple[int, Exponent]


def trivial_group(r: int) -> FiniteGroup:
    return build_group([identity_matrix(r)], name="1")


class SkewAlgebra:
    """G x| D_{omega/t} with coefficients localized at the reflection arrangement."""

    def __init__(self, group: FiniteGroup, twist: TwistData | None = None, arrangement: Arrangement | None = None):
        self.group = group
        self.r = group.r
        self.twist = twist if twist is not None else TwistData.zero(self.r)
        if self.twist.r != self.r:
            raise ValueError("twist rank does not match the group rank")
        if arrangement is None:
            arrangement = Arrangement(self.r, hyperplanes_of(enumerate_reflections(group)), group)
        self.arr = arrangement
        self.untwisted = self.twist.is_zero()
        self._L_mono: dict[tuple[int, Exponent], dict[Exponent, LocalizedCoeff]] = {}
        self._sigma: dict[tuple[int, Exponent], dict[Exponent, Scalar]] = {}
        self._zero_exp = (0,) * self.r

    # -- constructors ----------------------------------------------------

    def element(self, terms: Mapping[Key, LocalizedCoeff]) -> "SkewOp":
        return SkewOp(self, {k: v for k, v in terms.items() if v})

    def zero(self) -> "SkewOp":
        return SkewOp(self, {})

    def one(self) -> "SkewOp":
        return self.scalar(ONE)

    def scalar(self, c) -> "SkewOp":
        return self.function(MultiPoly.const(c, self.r))

    def function(self, f) -> "SkewOp":
        if isinstance(f, MultiPoly):
            f = LocalizedCoeff.poly(f, self.arr)
        return self.element({(0, self._zero_exp): f})

    def x(self, i: int) -> "SkewOp":
        return self.function(MultiPoly.var(i, self.r))

    def L(self, i: int) -> "SkewOp":
        return self.element({(0, _add_e(self._zero_exp, i)): self.coeff(ONE)})

    def L_vector(self, v: Sequence) -> "SkewOp":
        acc = self.zero()
        for i, a in enumerate(v):
            a = as_scalar(a)
            if a:
                acc = acc + self.L(i).scale(a)
        return acc

    def g(self, label: int) -> "SkewOp":
        return self.element({(label, self._zero_exp): self.coeff(ONE)})

    def coeff(self, c) -> LocalizedCoeff:
        return LocalizedCoeff.const(c, self.arr)

    def residue(self, v: Sequence, Y: int) -> LocalizedCoeff:
        """The standard residue representative v(alpha_Y) / alpha_Y."""
        v = [as_scalar(a) for a in v]
        val = sum((a * b for a, b in zip(self.arr.forms[Y], v) if a and b), ZERO)
        den = [0] * len(self.arr)
        den[Y] = 1
        return LocalizedCoeff(MultiPoly.const(val, self.r), den, self.arr, reduced=True)

    # -- normal ordering -------------------------------------------------

    def _omega_over_t(self, i: int, j: int) -> LocalizedCoeff:
        return LocalizedCoeff.poly(self.twist.omega[i][j].scale(self.twist.t.inverse()), self.arr)

    def _L_times_mono(self, i: int, beta: Exponent) -> dict[Exponent, LocalizedCoeff]:
        """Normal form of L_i * L^beta."""
        key = (i, beta)
        cached = self._L_mono.get(key)
        if cached is not None:
            return cached
        j = next((k for k, b in enumerate(beta) if b), None)
        if j is None or i <= j or self.untwisted:
            out = {_add_e(beta, i): self.coeff(ONE)}
        else:
            rest = _add_e(beta, j, -1)
            inner = self._L_times_mono(i, rest)
            out = dict(self._lmul_L(j, inner))
            w = self._omega_over_t(i, j)
            if w:
                v = out[rest] + w if rest in out else w
                if v:
                    out[rest] = v
                else:
                    del out[rest]
        self._L_mono[key] = out
        return out

    def _lmul_L(self, i: int, nf: Mapping[Exponent, LocalizedCoeff]) -> dict[Exponent, LocalizedCoeff]:
        out: dict[Exponent, LocalizedCoeff] = {}
        for beta, f in nf.items():
            if self.untwisted:
                _acc(out, _add_e(beta, i), f)
            else:
                for gamma, q in self._L_times_mono(i, beta).items():
                    _acc(out, gamma, f * q)
            df = f.derivative(i)
            if df:
                _acc(out, beta, df)
        return _collect(out)

    def _lmul_L_word(self, alpha: Exponent, nf: Mapping[Exponent, LocalizedCoeff]) -> dict[Exponent, LocalizedCoeff]:
        """Normal form of L^alpha * nf."""
        if self.untwisted:
            return self._leibniz(alpha, nf)
        for i in range(self.r - 1, -1, -1):
            for _ in range(alpha[i]):
                nf = self._lmul_L(i, nf)
        return dict(nf)

    def _leibniz(self, alpha: Exponent, nf: Mapping[Exponent, LocalizedCoeff]) -> dict[Exponent, LocalizedCoeff]:
        # untwisted: L^alpha f = sum_gamma binom(alpha, gamma) d^gamma(f) L^(alpha - gamma)
        out: dict[Exponent, LocalizedCoeff] = {}
        gammas = _sub_exponents(alpha)
        for beta, f in nf.items():
            derivs = {self._zero_exp: f}
            for gamma in gammas:
                if gamma not in derivs:
                    i = next(k for k, b in enumerate(gamma) if b)
                    derivs[gamma] = derivs[_add_e(gamma, i, -1)].derivative(i)
                d = derivs[gamma]
                if not d:
                    continue
                mult = 1
                for a, c in zip(alpha, gamma):
                    mult *= comb(a, c)
                target = tuple(a - c + b for a, c, b in zip(alpha, gamma, beta))
                _acc(out, target, d.scale(mult) if mult != 1 else d)
        return _collect(out)

    def sigma(self, g: int, beta: Exponent) -> dict[Exponent, LocalizedCoeff]:
        """Normal form of g L^beta g^-1 = prod_i L_{g(e_i)}^beta_i (ordered product)."""
        key = (g, beta)
        if key in self._sigma:
            return self._sigma[key]
        if g == 0:
            out = {beta: self.coeff(ONE)}
        else:
            Minv = self.group.inverse_matrices[g]
            nf: dict[Exponent, LocalizedCoeff] = {self._zero_exp: self.coeff(ONE)}
            for i in range(self.r - 1, -1, -1):
                col = [(k, Minv[k][i]) for k in range(self.r) if Minv[k][i]]
                for _ in range(beta[i]):
                    new: dict[Exponent, LocalizedCoeff] = {}
                    for k, a in col:
                        for gamma, f in self._lmul_L(k, nf).items():
                            _acc(new, gamma, f.scale(a))
                    nf = _collect(new)
            out = nf
        self._sigma[key] = out
        return out

    def symbol_sigma(self, g: int, beta: Exponent) -> dict[Exponent, Scalar]:
        """Top-degree (commutative) part of sigma(g, beta)."""
        deg = sum(beta)
        return {
            gamma: f.num.constant_term()
            for gamma, f in self.sigma(g, beta).items()
            if sum(gamma) == deg
        }

    def multiply(self, a: "SkewOp", b: "SkewOp") -> "SkewOp":
        if a.alg is not self or b.alg is not self:
            raise ValueError("operands belong to different algebras")
        if not a.terms or not b.terms:
            return self.zero()
        group, mul = self.group, self.group.mul
        by_label: dict[int, list[tuple[Exponent, LocalizedCoeff]]] = {}
        for (g, alpha), f in a.terms.items():
            by_label.setdefault(g, []).append((alpha, f))
        out: dict[Key, LocalizedCoeff] = {}
        for g, items in by_label.items():
            # g * b, normal ordered, grouped by resulting label
            gb: dict[int, dict[Exponent, LocalizedCoeff]] = {}
            for (k, beta), h in b.terms.items():
                gh = h.act(group, g)
                target = gb.setdefault(mul(g, k), {})
                for gamma, q in self.sigma(g, beta).items():
                    _acc(target, gamma, gh.scale(q.num.constant_term()) if q.num.is_constant() else gh * q)
            gb = {label: _collect(nf) for label, nf in gb.items()}
            for alpha, f in items:
                for label, nf in gb.items():
                    prod = self._lmul_L_word(alpha, nf) if any(alpha) else nf
                    for gamma, q in prod.items():
                        _acc(out, (label, gamma), f * q)
        return SkewOp(self, _collect(out))

    # -- representation on functions -----------------------------------------

    def apply_to_function(self, a: "SkewOp", f) -> LocalizedCoeff:
        """Act on a (localized) function: L_i as d/dx_i, g by substitution."""
        if not self.untwisted:
            raise TwistNotZero("twisted operators have no canonical action on functions")
        if isinstance(f, MultiPoly):
            f = LocalizedCoeff.poly(f, self.arr)
        acc = LocalizedCoeff.poly(MultiPoly(self.r), self.arr)
        moved: dict[int, LocalizedCoeff] = {}
        derivs: dict[tuple[int, Exponent], LocalizedCoeff] = {}
        for (g, beta), c in a.terms.items():
            if g not in moved:
                moved[g] = f.act(self.group, g)
            key = (g, beta)
            d = derivs.get(key)
            if d is None:
                d = moved[g]
                for i, k in enumerate(beta):
                    for _ in range(k):
                        d = d.derivative(i)
                derivs[key] = d
            if d:
                acc = acc + c * d
        return acc


def _acc(target: dict, key, value: LocalizedCoeff):
    # collect summands; _collect() adds them with a single reduction per key
    if value:
        target.setdefault(key, []).append(value)


def _collect(target: dict) -> dict:
    out = {}
    for key, values in target.items():
        v = values[0] if len(values) == 1 else LocalizedCoeff.sum(values)
        if v:
            out[key] = v
    return out


def _sub_exponents(alpha: Exponent) -> list[Exponent]:
    # all gamma <= alpha, graded so that gamma - e_i precedes gamma
    out = [()]
    for a in alpha:
        out = [g + (k,) for g in out for k in range(a + 1)]
    return sorted(out, key=sum)


class SkewOp:
    """An element sum f * L^beta * g of a SkewAlgebra."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: SkewAlgebra, terms: Mapping[Key, LocalizedCoeff]):
        self.alg = alg
        self.terms = dict(terms)

    def _check(self, other: "SkewOp"):
        if other.alg is not self.alg:
            raise ValueError("operands belong to different algebras")

    def __add__(self, other):
        if not isinstance(other, SkewOp):
            other = self.alg.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            cur = out.get(k)
            if cur is None:
                out[k] = v
            else:
                v = cur + v
                if v:
                    out[k] = v
                else:
                    del out[k]
        return SkewOp(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return SkewOp(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SkewOp):
            other = self.alg.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "SkewOp":
        s = as_scalar(s)
        if not s:
            return self.alg.zero()
        return SkewOp(self.alg, {k: v.scale(s) for k, v in self.terms.items()})

    def left_coeff(self, f: LocalizedCoeff) -> "SkewOp":
        if not f:
            return self.alg.zero()
        return SkewOp(self.alg, {k: f * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, SkewOp):
            return self.alg.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "SkewOp":
        result = self.alg.one()
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, SkewOp):
            return self.alg is other.alg and self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def order(self) -> int:
        """Differential order: max |beta|, -1 for zero."""
        return max((sum(beta) for _, beta in self.terms), default=-1)

    def group_support(self) -> set[int]:
        return {g for g, _ in self.terms}

    def is_function(self) -> bool:
        return all(g == 0 and not any(beta) for g, beta in self.terms)

    def as_function(self) -> LocalizedCoeff:
        if not self.is_function():
            raise ValueError("operator is not a function")
        return self.terms.get((0, self.alg._zero_exp), LocalizedCoeff.poly(MultiPoly(self.alg.r), self.alg.arr))

    def __str__(self):
        from .serialize import format_skew

        return format_skew(self)

    __repr__ = __str__


def commutator(a: SkewOp, b: SkewOp) -> SkewOp:
    return a * b - b * a


def multiply_skew(a: SkewOp, b: SkewOp) -> SkewOp:
    return a.alg.multiply(a, b)


def apply_to_function(a: SkewOp, f) -> LocalizedCoeff:
    return a.alg.apply_to_function(a, f)


def residue(alg: SkewAlgebra, v: Sequence, Y: int) -> LocalizedCoeff:
    return alg.residue(v, Y)
