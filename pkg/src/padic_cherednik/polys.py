"""Sparse multivariate polynomials over Q(zeta_m).

Exponent vectors are tuples of length ``r``; variables are 0-indexed
internally and printed 1-indexed (``x_1 .. x_r``).
"""

from __future__ import annotations

from operator import add
from typing import Iterable, Mapping, Sequence

from .scalars import ONE, Scalar, as_scalar

Exponent = tuple[int, ...]


class DivisionFailure(ArithmeticError):
    """Exact division by a linear form left a nonzero remainder."""


def _bump(e: Exponent, i: int, k: int = 1) -> Exponent:
    return e[:i] + (e[i] + k,) + e[i + 1:]


class MultiPoly:
    __slots__ = ("r", "terms", "_hash")

    def __init__(self, r: int, terms: Mapping[Exponent, Scalar] | None = None, *, _clean=False):
        self.r = r
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {}
            for e, c in terms.items():
                c = as_scalar(c)
                if c:
                    if len(e) != r:
                        raise ValueError(f"exponent {e} has wrong length for r={r}")
                    self.terms[tuple(e)] = c
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, r: int) -> "MultiPoly":
        return cls(r)

    @classmethod
    def const(cls, c, r: int) -> "MultiPoly":
        c = as_scalar(c)
        return cls(r, {(0,) * r: c} if c else {}, _clean=True)

    @classmethod
    def one(cls, r: int) -> "MultiPoly":
        return cls.const(ONE, r)

    @classmethod
    def var(cls, i: int, r: int) -> "MultiPoly":
        e = [0] * r
        e[i] = 1
        return cls(r, {tuple(e): ONE}, _clean=True)

    @classmethod
    def monomial(cls, e: Sequence[int], c=ONE) -> "MultiPoly":
        return cls(len(e), {tuple(e): c})

    @classmethod
    def linear(cls, coeffs: Sequence, r: int | None = None) -> "MultiPoly":
        r = len(coeffs) if r is None else r
        terms = {}
        for i, a in enumerate(coeffs):
            a = as_scalar(a)
            if a:
                terms[_bump((0,) * r, i)] = a
        return cls(r, terms, _clean=True)

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.r in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.r, Scalar(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly(self.r, {e: c for e, c in self.terms.items() if sum(e) == d}, _clean=True)

    def coefficients(self) -> Iterable[Scalar]:
        return self.terms.values()

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.r != self.r:
                raise ValueError("polynomials in different numbers of variables")
            return other
        return MultiPoly.const(other, self.r)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly(self.r, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.r, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "MultiPoly":
        s = as_scalar(s)
        if not s:
            return MultiPoly(self.r)
        if s == ONE:
            return self
        return MultiPoly(self.r, {e: c * s for e, c in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return MultiPoly(self.r)
        if len(other.terms) == 1:
            (e2, c2), = other.terms.items()
            return MultiPoly(
                self.r,
                {tuple(map(add, e1, e2)): c1 * c2 for e1, c1 in self.terms.items()},
                _clean=True,
            )
        if len(self.terms) == 1:
            (e1, c1), = self.terms.items()
            return MultiPoly(
                self.r,
                {tuple(map(add, e1, e2)): c1 * c2 for e2, c2 in other.terms.items()},
                _clean=True,
            )
        out: dict[Exponent, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly(self.r, {e: c for e, c in out.items() if c}, _clean=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = MultiPoly.one(self.r), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[_bump(e, i, -1)] = c * e[i]
        return MultiPoly(self.r, out, _clean=True)

    def directional_derivative(self, v: Sequence) -> "MultiPoly":
        """Derivative along the constant vector field sum_i v_i d/dx_i."""
        acc = MultiPoly(self.r)
        for i, a in enumerate(v):
            a = as_scalar(a)
            if a:
                acc = acc + self.derivative(i).scale(a)
        return acc

    def substitute_linear(self, M: Sequence[Sequence[Scalar]]) -> "MultiPoly":
        """Return f(M x): x_i is replaced by sum_j M[i][j] x_j."""
        r = self.r
        rows = [[(j, as_scalar(a)) for j, a in enumerate(M[i]) if a] for i in range(r)]
        if all(len(row) == 1 for row in rows):
            out = {}
            for e, c in self.terms.items():
                ne = [0] * r
                coeff = c
                for i, k in enumerate(e):
                    if k:
                        j, a = rows[i][0]
                        ne[j] += k
                        if a != ONE:
                            coeff = coeff * a ** k
                ne = tuple(ne)
                v = out.get(ne)
                out[ne] = coeff if v is None else v + coeff
            return MultiPoly(r, {e: c for e, c in out.items() if c}, _clean=True)
        forms = [MultiPoly(r, {_bump((0,) * r, j): a for j, a in row}, _clean=True) for row in rows]
        powers: dict[tuple[int, int], MultiPoly] = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = forms[i] ** k
            return powers[key]

        acc = MultiPoly(r)
        for e, c in self.terms.items():
            term = MultiPoly.const(c, r)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = acc + term
        return acc

    def divide_linear(self, form: Sequence) -> "MultiPoly":
        """Exact quotient by the linear form sum_i form[i] x_i."""
        form = [as_scalar(a) for a in form]
        j = next(i for i, a in enumerate(form) if a)
        inv = form[j].inverse()
        others = [(k, a) for k, a in enumerate(form) if a and k != j]
        rem = dict(self.terms)
        quot: dict[Exponent, Scalar] = {}
        top = max((e[j] for e in rem), default=0)
        for d in range(top, 0, -1):
            layer = [(e, c) for e, c in rem.items() if e[j] == d]
            for e, c in layer:
                del rem[e]
                q = c * inv
                qe = _bump(e, j, -1)
                quot[qe] = quot[qe] + q if qe in quot else q
                for k, a in others:
                    ne = _bump(qe, k)
                    v = rem.get(ne)
                    v = -(q * a) if v is None else v - q * a
                    if v:
                        rem[ne] = v
                    else:
                        rem.pop(ne, None)
        if rem:
            raise DivisionFailure("polynomial is not divisible by the linear form")
        return MultiPoly(self.r, {e: c for e, c in quot.items() if c}, _clean=True)

    def evaluate(self, point: Sequence) -> Scalar:
        acc = Scalar(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * as_scalar(x) ** k
            acc = acc + term
        return acc

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.r == other.r and self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self == MultiPoly.const(other, self.r)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.r, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Exponent, Scalar]]:
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"x_{i + 1}" if k == 1 else f"x_{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            cs = str(c)
            if c.needs_parens():
                cs = f"({cs})"
            if not mono:
                pieces.append(cs)
            elif c == ONE:
                pieces.append(mono)
            elif c == -ONE:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{cs}*{mono}")
        text = pieces[0]
        for p in pieces[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self):
        return f"MultiPoly({self})"


def exponents_of_degree(r: int, d: int) -> list[Exponent]:
    """Exponent vectors of total degree exactly d, in descending lex order."""
    if r == 0:
        return [()] if d == 0 else []
    if r == 1:
        return [(d,)]
    return [(k,) + rest for k in range(d, -1, -1) for rest in exponents_of_degree(r - 1, d - k)]


def monomials_up_to(r: int, degree: int) -> list[Exponent]:
    """All exponent vectors of total degree <= degree, graded order."""
    return [e for d in range(degree + 1) for e in exponents_of_degree(r, d)]
