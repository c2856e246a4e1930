"""Gauss valuations, Cherednik lattices and truncated arithmetic in the level tower.

At level (n, m) the integral lattice is spanned over the power-bounded functions
of U_m = {|delta| >= |p|^m} by g * (p^n D)^alpha.  Its gauge on a PBW element
sum f_{g,a} g D^a is  min v(f_{g,a}) - n |a|,  with v the Gauss valuation, so the
lattice is exactly the set of elements of gauge >= 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping

from .cherednik import CherednikAlgebra, CherednikElement
from .opalg import LocalizedCoeff
from .polys import Exponent, MultiPoly
from .scalars import INF, FieldSpec, Scalar, embed, valuation


class CapTooSmall(ValueError):
    """n * cap < N: dropped tails would not vanish modulo p^N."""


@dataclass(frozen=True)
class LatticeLevel:
    n: int
    m: int = 0

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError("lattice levels are non-negative")


def gauss_valuation(f: MultiPoly, spec: FieldSpec):
    """Minimum coefficient valuation; +inf for 0."""
    return min((valuation(c, spec) for c in f.terms.values()), default=INF)


def localized_valuation(c: LocalizedCoeff, level: LatticeLevel, spec: FieldSpec):
    """Lower bound for the valuation of num / prod alpha^k on U_m."""
    if not c:
        return INF
    return gauss_valuation(c.num, spec) - level.m * sum(c.den)


def shilov_in_domain(forms, level: LatticeLevel, spec: FieldSpec) -> bool:
    """Does the Gauss point lie in U_m, i.e. v(alpha_Y) <= m for all Y?"""
    return all(gauss_valuation(MultiPoly.linear(f), spec) <= level.m for f in forms)


def certification_checks(alg: CherednikAlgebra, level: LatticeLevel, spec: FieldSpec) -> list[dict]:
    """The individual inequalities behind certify_cherednik_level."""
    checks = []
    tinv = alg.t.inverse()
    skew = alg.skew
    for i in range(alg.r):
        v = alg.unit_vector(i)
        for k, d in enumerate(alg.data):
            res = skew.residue(v, d.hyperplane)
            if not res or not alg.kappa[k]:
                continue
            val = localized_valuation(res.scale(alg.kappa[k] * tinv), level, spec)
            checks.append({"field": i + 1, "reflection": d.s, "bound": val + level.n, "ok": val + level.n >= 0})
    twist = skew.twist
    for i in range(alg.r):
        for j in range(i + 1, alg.r):
            w = twist.omega[i][j]
            if w:
                val = gauss_valuation(w.scale(tinv), spec)
                checks.append({"omega": [i + 1, j + 1], "bound": val + level.n, "ok": val + level.n >= 0})
    return checks


def certify_cherednik_level(alg: CherednikAlgebra, level: LatticeLevel, spec: FieldSpec) -> bool:
    """True iff p^n D_{v/t} is integral on U_m for every basis field v."""
    return all(c["ok"] for c in certification_checks(alg, level, spec))


def element_gauge(a: CherednikElement, level: LatticeLevel, spec: FieldSpec):
    """Largest k with a in p^k times the level-n lattice; +inf for 0."""
    return min(
        (gauss_valuation(f, spec) - level.n * sum(alpha) for (_, alpha), f in a.terms.items()),
        default=INF,
    )


def gauge_report(a: CherednikElement, level: LatticeLevel, spec: FieldSpec) -> dict:
    g = element_gauge(a, level, spec)
    return {
        "level": {"n": level.n, "m": level.m},
        "element": str(a),
        "gauge": "inf" if g == INF else g,
        "certified": certify_cherednik_level(a.alg, level, spec),
    }


# -- truncated tower -------------------------------------------------------------------


def _cap_for(n: int, N: int) -> int:
    if n < 1:
        raise ValueError("truncated elements need level n >= 1")
    return math.ceil(N / n)


class TruncatedHElement:
    """A level-n element of the completed algebra, known modulo p^N.

    ``terms`` maps (g, alpha) to {exponent: residue mod p^N}; only |alpha| <= cap
    is stored, the rest vanishes modulo p^N on the level-n lattice.
    """

    __slots__ = ("alg", "terms", "n", "N", "cap", "spec")

    def __init__(self, alg: CherednikAlgebra, terms: Mapping, n: int, N: int, cap: int, spec: FieldSpec, check=True):
        if n < 1:
            raise ValueError("truncated elements need level n >= 1")
        self.alg, self.n, self.N, self.cap = alg, n, N, cap
        self.spec = spec.with_precision(N)
        mod = spec.p ** N
        clean = {}
        for (g, alpha), coeffs in terms.items():
            if sum(alpha) > cap:
                continue
            poly = {e: r % mod for e, r in coeffs.items() if r % mod}
            if not poly:
                continue
            if check:
                need = min(N, n * sum(alpha))
                for r in poly.values():
                    if _vp(r, spec.p, N) < need:
                        raise ValueError(f"coefficient of g<{g}> D^{alpha} lies outside the level-{n} lattice")
            clean[(g, tuple(alpha))] = poly
        self.terms = clean

    @classmethod
    def from_element(cls, a: CherednikElement, n: int, N: int, spec: FieldSpec, cap: int | None = None) -> "TruncatedHElement":
        cap = _cap_for(n, N) if cap is None else cap
        spec = spec.with_precision(N)
        terms = {}
        for (g, alpha), f in a.terms.items():
            terms[(g, alpha)] = {e: embed(c, spec).residue for e, c in f.terms.items()}
        return cls(a.alg, terms, n, N, cap, spec)

    def lift(self) -> CherednikElement:
        """Integer representatives of the stored residues, as an exact element."""
        r = self.alg.r
        return CherednikElement(
            self.alg, {key: MultiPoly(r, {e: Scalar(v) for e, v in poly.items()}) for key, poly in self.terms.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, TruncatedHElement):
            return NotImplemented
        return (self.alg, self.n, self.N, self.cap, self.terms) == (other.alg, other.n, other.N, other.cap, other.terms)

    def __add__(self, other: "TruncatedHElement") -> "TruncatedHElement":
        _same_tower(self, other)
        terms = {k: dict(v) for k, v in self.terms.items()}
        for k, poly in other.terms.items():
            tgt = terms.setdefault(k, {})
            for e, r in poly.items():
                tgt[e] = tgt.get(e, 0) + r
        return TruncatedHElement(self.alg, terms, self.n, self.N, self.cap, self.spec, check=False)

    def __str__(self):
        pieces = []
        for (g, alpha), poly in sorted(self.terms.items()):
            for e, v in sorted(poly.items()):
                pieces.append(f"{v} * x^({','.join(map(str, e))}) * g<{g}> * D^({','.join(map(str, alpha))})")
        body = " + ".join(pieces) if pieces else "0"
        return f"[n={self.n}, N={self.N}, cap={self.cap}] {body}"

    __repr__ = __str__


def _vp(r: int, p: int, N: int) -> int:
    if r == 0:
        return N
    k = 0
    while r % p == 0:
        r //= p
        k += 1
    return k


def _same_tower(a: TruncatedHElement, b: TruncatedHElement):
    if a.alg is not b.alg or (a.n, a.N, a.cap) != (b.n, b.N, b.cap):
        raise ValueError("truncated elements live at different levels or precisions")


def truncated_multiply(a: TruncatedHElement, b: TruncatedHElement) -> TruncatedHElement:
    _same_tower(a, b)
    if a.n * a.cap < a.N:
        raise CapTooSmall(f"n * cap = {a.n * a.cap} < N = {a.N}")
    prod = a.alg.multiply(a.lift(), b.lift())
    return TruncatedHElement.from_element(prod, a.n, a.N, a.spec, a.cap)


def tower_map(a: TruncatedHElement) -> TruncatedHElement:
    """The transition map from level n to level n - 1."""
    n = a.n - 1
    if n < 1:
        raise ValueError("the tower is truncated only at levels n >= 1")
    return TruncatedHElement(a.alg, a.terms, n, a.N, _cap_for(n, a.N), a.spec, check=False)


def truncated_gauge(a: TruncatedHElement):
    """Gauge of the stored element at its own level; coefficient valuations saturate at N."""
    return min(
        (min(_vp(r, a.spec.p, a.N) for r in poly.values()) - a.n * sum(alpha) for (_, alpha), poly in a.terms.items()),
        default=INF,
    )


def report_json(entries) -> str:
    return json.dumps(entries, indent=2, sort_keys=True)
