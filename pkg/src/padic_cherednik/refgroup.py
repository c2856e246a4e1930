"""Finite linear groups acting on affine r-space and their reflection data.

Convention: a group element g carries a matrix M_g and acts on functions by
``(g.f)(x) = f(M_g x)``.  For this to be a left action the product of labels
is defined by ``M_{gh} = M_h M_g``.  Vector fields then transform as
``g(v) = M_g^{-1} v`` and linear forms (row vectors) as ``a -> a M_g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .polys import MultiPoly
from .scalars import ONE, ZERO, Scalar, as_scalar

Matrix = tuple[tuple[Scalar, ...], ...]


class NotFinite(ValueError):
    """Group closure exceeded the configured bound."""


class NotFaithfulAction(ValueError):
    """Two group elements act by the same matrix."""


class EigenvalueNotInField(ValueError):
    """A reflection has no usable conormal eigenvalue in the coefficient field."""


# -- matrix helpers ---------------------------------------------------------


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(as_scalar(a) for a in row) for row in rows)


def identity_matrix(r: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(r)) for i in range(r))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, k = len(A), len(B)
    cols = len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(cols):
            acc = ZERO
            for t in range(k):
                a = A[i][t]
                if a:
                    b = B[t][j]
                    if b:
                        acc = acc + a * b
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(A: Matrix, v: Sequence[Scalar]) -> tuple[Scalar, ...]:
    return tuple(sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in A)


def vec_mat(v: Sequence[Scalar], A: Matrix) -> tuple[Scalar, ...]:
    r = len(A[0])
    return tuple(sum((v[i] * A[i][j] for i in range(len(v)) if v[i] and A[i][j]), ZERO) for j in range(r))


def rank(A: Matrix) -> int:
    rows = [list(row) for row in A]
    rk, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rk, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = rows[rk][col].inverse()
        for r in range(len(rows)):
            if r != rk and rows[r][col]:
                f = rows[r][col] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rk])]
        rk += 1
    return rk


# -- groups -----------------------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    label: int
    matrix: Matrix


class FiniteGroup:
    """A finite matrix group with multiplication table on integer labels.

    Label 0 is the identity; the remaining labels follow breadth-first
    discovery from the generators.
    """

    def __init__(self, matrices: Sequence[Matrix], name: str = "G"):
        self.name = name
        self.matrices: list[Matrix] = [as_matrix(M) for M in matrices]
        self.r = len(self.matrices[0])
        index: dict[Matrix, int] = {}
        for i, M in enumerate(self.matrices):
            if M in index:
                raise NotFaithfulAction(f"elements {index[M]} and {i} share a matrix")
            index[M] = i
        self._index = index
        if self.matrices[0] != identity_matrix(self.r):
            raise ValueError("element 0 must be the identity")
        n = len(self.matrices)
        self.table = [[0] * n for _ in range(n)]
        for g in range(n):
            for h in range(n):
                prod = mat_mul(self.matrices[h], self.matrices[g])
                if prod not in index:
                    raise ValueError("element list is not closed under multiplication")
                self.table[g][h] = index[prod]
        self.inverses = [next(h for h in range(n) if self.table[g][h] == 0) for g in range(n)]

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(range(len(self.matrices)))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={len(self)}, rank={self.r})"

    @property
    def identity(self) -> int:
        return 0

    def element(self, g: int) -> GroupElement:
        return GroupElement(g, self.matrices[g])

    def label_of(self, M) -> int:
        return self._index[as_matrix(M)]

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverses[g]

    def order_of(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k

    @cached_property
    def inverse_matrices(self) -> list[Matrix]:
        return [self.matrices[self.inv(g)] for g in self]

    # -- actions ------------------------------------------------------------

    def act_on_vector(self, g: int, v: Sequence) -> tuple[Scalar, ...]:
        """g(v) = M_g^{-1} v for a constant vector field v."""
        return mat_vec(self.inverse_matrices[g], [as_scalar(a) for a in v])

    def act_on_form(self, g: int, a: Sequence) -> tuple[Scalar, ...]:
        """Action on a linear form given by its coefficient row: a -> a M_g."""
        return vec_mat([as_scalar(x) for x in a], self.matrices[g])

    def act_on_poly(self, g: int, f: MultiPoly) -> MultiPoly:
        if g == 0:
            return f
        return f.substitute_linear(self.matrices[g])


def act_on_poly(g: GroupElement, f: MultiPoly) -> MultiPoly:
    """(g.f)(x) = f(M_g x)."""
    return f.substitute_linear(g.matrix)


def build_group(generators: Sequence[Sequence[Sequence]], bound: int = 5000, name: str = "G") -> FiniteGroup:
    """Finite closure of the given invertible matrices."""
    gens = [as_matrix(M) for M in generators]
    if not gens:
        raise ValueError("need at least one generator")
    r = len(gens[0])
    for M in gens:
        if len(M) != r or any(len(row) != r for row in M):
            raise ValueError("generators must be square matrices of equal size")
        if rank(M) != r:
            raise ValueError("generator is not invertible")
    ident = identity_matrix(r)
    elements = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for M in frontier:
            for S in gens:
                P = mat_mul(M, S)
                if P not in seen:
                    seen.add(P)
                    elements.append(P)
                    nxt.append(P)
                    if len(elements) > bound:
                        raise NotFinite(f"closure exceeds {bound} elements")
        frontier = nxt
    return FiniteGroup(elements, name=name)


# -- reflections --------------------------------------------------------------


@dataclass(frozen=True)
class ReflectionDatum:
    """A pseudo-reflection s, its normalized hyperplane form and conormal eigenvalue."""

    s: int
    hyperplane: int
    alpha: tuple[Scalar, ...]
    lam: Scalar

    def alpha_poly(self) -> MultiPoly:
        return MultiPoly.linear(self.alpha)


def normalize_form(a: Sequence[Scalar]) -> tuple[tuple[Scalar, ...], Scalar]:
    """Scale a so its first nonzero coordinate is 1; returns (normalized, scale)."""
    lead = next(x for x in a if x)
    inv = lead.inverse()
    return tuple(x * inv for x in a), lead


def enumerate_reflections(group: FiniteGroup) -> list[ReflectionDatum]:
    ident = identity_matrix(group.r)
    data: list[ReflectionDatum] = []
    hyperplanes: list[tuple[Scalar, ...]] = []
    for g in group:
        if g == 0:
            continue
        M = group.matrices[g]
        defect = tuple(tuple(M[i][j] - ident[i][j] for j in range(group.r)) for i in range(group.r))
        if rank(defect) != 1:
            continue
        row = next(row for row in defect if any(row))
        alpha, _ = normalize_form(row)
        image = vec_mat(alpha, M)
        j = next(i for i, x in enumerate(alpha) if x)
        lam = image[j]
        if any(image[i] != lam * alpha[i] for i in range(group.r)) or lam == ONE:
            raise EigenvalueNotInField(f"element {g} has no conormal eigenvalue != 1")
        if alpha not in hyperplanes:
            hyperplanes.append(alpha)
        data.append(ReflectionDatum(g, hyperplanes.index(alpha), alpha, lam))
    return data


def hyperplanes_of(data: Sequence[ReflectionDatum]) -> list[tuple[Scalar, ...]]:
    out: dict[int, tuple[Scalar, ...]] = {}
    for d in data:
        out.setdefault(d.hyperplane, d.alpha)
    return [out[i] for i in sorted(out)]


def conjugacy_classes(group: FiniteGroup, data: Sequence[ReflectionDatum]) -> list[list[int]]:
    """Orbits of reflection data under (Y, g) -> (h(Y), h^-1 g h), as index lists.

    Classes are ordered by the lowest group label they contain.
    """
    by_s = {d.s: i for i, d in enumerate(data)}
    assigned: dict[int, int] = {}
    classes: list[list[int]] = []
    for i in sorted(range(len(data)), key=lambda k: data[k].s):
        if i in assigned:
            continue
        s = data[i].s
        orbit = sorted({by_s[group.mul(group.mul(group.inv(h), s), h)] for h in group}, key=lambda k: data[k].s)
        for k in orbit:
            assigned[k] = len(classes)
        classes.append(orbit)
    return classes


@dataclass
class ReflectionFunction:
    """Class-constant values c(Y, g), one Scalar per conjugacy class."""

    classes: list[list[int]]
    values: list[Scalar]
    _lookup: dict[int, Scalar] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.values) != len(self.classes):
            raise ValueError(f"expected {len(self.classes)} class values, got {len(self.values)}")
        self.values = [as_scalar(v) for v in self.values]
        self._lookup = {i: v for cls, v in zip(self.classes, self.values) for i in cls}

    def __call__(self, datum_index: int) -> Scalar:
        return self._lookup[datum_index]

    def scaled(self, lam) -> "ReflectionFunction":
        lam = as_scalar(lam)
        return ReflectionFunction(self.classes, [v * lam for v in self.values])

    def is_zero(self) -> bool:
        return not any(self.values)


# -- built-in families ------------------------------------------------------------


def _perm_matrix(perm: Sequence[int]) -> list[list[int]]:
    n = len(perm)
    return [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)]


def cyclic_group(m: int) -> FiniteGroup:
    """Z/m acting on K^1 by zeta_m (needs coefficients in Q(zeta_m))."""
    return build_group([[[Scalar.zeta(m)]]], name=f"Z/{m}")


def symmetric_group(n: int) -> FiniteGroup:
    """S_n permuting the coordinates of K^n."""
    gens = []
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(_perm_matrix(perm))
    return build_group(gens, name=f"S{n}")


def hyperoctahedral_group(n: int) -> FiniteGroup:
    """B_n: signed permutations of K^n."""
    flip = [[(-1 if i == 0 else 1) if i == j else 0 for j in range(n)] for i in range(n)]
    return build_group(symmetric_group(n).matrices[1:n] + [flip], name=f"B{n}") if n > 1 else build_group([flip], name="B1")


# two simple reflections of the rank-2 crystallographic root systems
_RATIONAL_DIHEDRAL = {
    2: ([[-1, 0], [0, 1]], [[1, 0], [0, -1]]),
    3: ([[-1, 1], [0, 1]], [[1, 0], [1, -1]]),
    4: ([[-1, 2], [0, 1]], [[1, 0], [1, -1]]),
    6: ([[-1, 3], [0, 1]], [[1, 0], [1, -1]]),
}


def dihedral_group(m: int, cyclotomic: bool = False) -> FiniteGroup:
    """I_2(m) of order 2m.

    Over Q (m in {2, 3, 4, 6}) the crystallographic form is used; with
    ``cyclotomic=True`` the group is generated by diag(zeta, zeta^-1) and the
    coordinate swap, which needs coefficients in Q(zeta_m).
    """
    if not cyclotomic:
        if m not in _RATIONAL_DIHEDRAL:
            raise ValueError(f"I2({m}) has no rational form; use the cyclotomic one")
        return build_group(_RATIONAL_DIHEDRAL[m], name=f"I2({m})")
    z = Scalar.zeta(m)
    return build_group([[[z, 0], [0, z.inverse()]], [[0, 1], [1, 0]]], name=f"I2({m})")


FAMILIES = ("cyclic", "symmetric", "dihedral", "hyperoctahedral")


def make_group(family: str, rank: int = 1, m: int = 2, field_order: int = 1) -> FiniteGroup:
    """Construct a built-in family; ``field_order`` is the cyclotomic order of the scalars."""
    if family == "cyclic":
        if rank != 1:
            raise ValueError("cyclic family acts on K^1 (rank 1)")
        if m > 2 and field_order != m:
            raise ValueError(f"Z/{m} needs cyclotomic_order {m}")
        return cyclic_group(m)
    if family == "symmetric":
        return symmetric_group(rank)
    if family == "hyperoctahedral":
        return hyperoctahedral_group(rank)
    if family == "dihedral":
        if rank != 2:
            raise ValueError("dihedral family acts on K^2 (rank 2)")
        if m in _RATIONAL_DIHEDRAL and field_order != m:
            return dihedral_group(m)
        if field_order != m:
            raise ValueError(f"I2({m}) needs cyclotomic_order {m}")
        return dihedral_group(m, cyclotomic=True)
    raise ValueError(f"unknown family {family!r}")
