"""Exact arithmetic in cyclotomic fields Q(zeta_m) with a p-adic embedding.

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(m)-1) with
rational coordinates (``gmpy2.mpq``).  Rational elements are always stored
with ``m == 1`` so they mix freely with elements of any cyclotomic field.

The p-adic valuation is computed through the embedding that sends zeta to
the Hensel lift of the smallest positive root of Phi_m modulo p.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2
from gmpy2 import mpq, mpz

INF = math.inf

Number = Union[int, Fraction, "Scalar"]


class PrecisionExhausted(ArithmeticError):
    """A nonzero element vanishes modulo p^N; the working precision must grow."""


# ---------------------------------------------------------------------------
# cyclotomic data


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # coefficient lists are lowest degree first; den is monic
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        lead = num[-1]
        q[shift] = lead
        for i, d in enumerate(den):
            num[i + shift] -= lead * d
        while num and num[-1] == 0:
            num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_poly(d)))
            assert not any(rem)
    while poly[-1] == 0:
        poly.pop()
    return tuple(poly)


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


@lru_cache(maxsize=None)
def _reduction_table(m: int) -> tuple[tuple[int, ...], ...]:
    # row k: zeta^k in the power basis, for 0 <= k < 2*phi - 1
    phi = euler_phi(m)
    cyc = cyclotomic_poly(m)
    rows: list[list[int]] = []
    for k in range(max(2 * phi - 1, 1)):
        if k < phi:
            row = [0] * phi
            row[k] = 1
        else:
            prev = rows[k - 1]
            # zeta * (sum prev_j zeta^j); zeta^phi = -sum_{j<phi} cyc_j zeta^j
            row = [0] + prev[:-1]
            top = prev[-1]
            for j in range(phi):
                row[j] -= top * cyc[j]
        rows.append(row)
    return tuple(tuple(r) for r in rows)


# ---------------------------------------------------------------------------
# Scalar


def _to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class Scalar:
    """An exact element of Q(zeta_m)."""

    __slots__ = ("m", "c", "_hash")

    def __init__(self, value: Number = 0, m: int = 1):
        if isinstance(value, Scalar):
            self.m, self.c = value.m, value.c
        elif isinstance(value, str):
            s = Scalar.parse(value, m)
            self.m, self.c = s.m, s.c
        else:
            self.m, self.c = 1, (_to_mpq(value),)
        self._hash = None

    @classmethod
    def _rat(cls, q) -> "Scalar":
        obj = cls.__new__(cls)
        obj.m, obj.c, obj._hash = 1, (q,), None
        return obj

    @classmethod
    def _make(cls, m: int, coeffs) -> "Scalar":
        obj = cls.__new__(cls)
        coeffs = tuple(coeffs)
        if m > 1 and not any(coeffs[1:]):
            m, coeffs = 1, coeffs[:1]
        obj.m, obj.c, obj._hash = m, coeffs, None
        return obj

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "Scalar":
        """The power zeta_m^k of the distinguished primitive m-th root of unity."""
        k %= m
        if euler_phi(m) == 1:
            # m in (1, 2): zeta is the rational root of x - 1 or x + 1
            return cls(-cyclotomic_poly(m)[0]) ** k
        table = _reduction_table(m)
        if k < len(table):
            return cls._make(m, [mpq(v) for v in table[k]])
        return cls.zeta(m, 1) ** k

    @classmethod
    def from_coeffs(cls, coeffs, m: int) -> "Scalar":
        phi = euler_phi(m)
        coeffs = [_to_mpq(v) for v in coeffs]
        if len(coeffs) > phi:
            acc = [mpq(0)] * phi
            table = _reduction_table(m)
            for k, v in enumerate(coeffs):
                if v:
                    row = table[k] if k < len(table) else cls.zeta(m, k).lift(m)
                    for j in range(phi):
                        acc[j] += v * row[j]
            coeffs = acc
        coeffs = coeffs + [mpq(0)] * (phi - len(coeffs))
        return cls._make(m, coeffs)

    _TERM = re.compile(r"\s*([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*\*?\s*(zeta(?:\^\(?(-?[0-9]+)\)?)?)?\s*")

    @classmethod
    def parse(cls, text: str, m: int = 1) -> "Scalar":
        """Parse sums like ``3/2``, ``-zeta^3 + 1/2`` or ``2*zeta``."""
        text = text.strip()
        if not text:
            raise ValueError("empty scalar")
        total = cls(0)
        pos = 0
        first = True
        while pos < len(text):
            match = cls._TERM.match(text, pos)
            sign, num, zeta_part, power = match.groups()
            if match.end() == pos or (num is None and zeta_part is None):
                raise ValueError(f"cannot parse scalar {text!r} at position {pos}")
            if not first and not sign:
                raise ValueError(f"missing operator in scalar {text!r} at position {pos}")
            value = cls(Fraction(num)) if num else cls(1)
            if zeta_part:
                if m == 1:
                    raise ValueError("zeta requires a cyclotomic order > 1")
                value = value * cls.zeta(m, int(power) if power else 1)
            total = total - value if sign == "-" else total + value
            pos = match.end()
            first = False
        return total

    # -- structure --------------------------------------------------------

    def lift(self, m: int) -> tuple:
        """Coordinates of self in the power basis of Q(zeta_m)."""
        if self.m == m:
            return self.c
        if self.m == 1:
            return (self.c[0],) + (mpq(0),) * (euler_phi(m) - 1)
        raise ValueError(f"cannot view an element of Q(zeta_{self.m}) in Q(zeta_{m})")

    def _common(self, other: "Scalar"):
        if self.m == other.m:
            return self.m, self.c, other.c
        if self.m == 1:
            return other.m, self.lift(other.m), other.c
        if other.m == 1:
            return self.m, self.c, other.lift(self.m)
        raise ValueError(f"mixed cyclotomic orders {self.m} and {other.m}")

    def is_rational(self) -> bool:
        return self.m == 1

    def rational(self) -> Fraction:
        if self.m != 1:
            raise ValueError(f"{self} is not rational")
        q = self.c[0]
        return Fraction(int(q.numerator), int(q.denominator))

    def is_zero(self) -> bool:
        return self.m == 1 and not self.c[0]

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction, type(mpq(0)))):
                other = Scalar(other)
            else:
                return NotImplemented
        if self.m == 1 and other.m == 1:
            return Scalar._rat(self.c[0] + other.c[0])
        m, a, b = self._common(other)
        return Scalar._make(m, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        if self.m == 1:
            return Scalar._rat(-self.c[0])
        return Scalar._make(self.m, [-x for x in self.c])

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction, type(mpq(0)))):
                other = Scalar(other)
            else:
                return NotImplemented
        if self.m == 1 and other.m == 1:
            return Scalar._rat(self.c[0] - other.c[0])
        m, a, b = self._common(other)
        return Scalar._make(m, [x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction, type(mpq(0)))):
                other = Scalar(other)
            else:
                return NotImplemented
        if self.m == 1:
            s = self.c[0]
            if other.m == 1:
                return Scalar._rat(s * other.c[0])
            return Scalar._make(other.m, [s * y for y in other.c])
        if other.m == 1:
            s = other.c[0]
            return Scalar._make(self.m, [s * x for x in self.c])
        m, a, b = self._common(other)
        phi = len(a)
        prod = [mpq(0)] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        table = _reduction_table(m)
        out = prod[:phi]
        for k in range(phi, 2 * phi - 1):
            v = prod[k]
            if v:
                row = table[k]
                for j in range(phi):
                    if row[j]:
                        out[j] += v * row[j]
        return Scalar._make(m, out)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        if self.m == 1:
            return Scalar._make(1, (1 / self.c[0],))
        m, phi = self.m, len(self.c)
        # columns: self * zeta^j
        cols = [(self * Scalar.zeta(m, j)).lift(m) for j in range(phi)]
        rows = [[cols[j][i] for j in range(phi)] + [mpq(1 if i == 0 else 0)] for i in range(phi)]
        for col in range(phi):
            piv = next(r for r in range(col, phi) if rows[r][col])
            rows[col], rows[piv] = rows[piv], rows[col]
            inv = 1 / rows[col][col]
            rows[col] = [v * inv for v in rows[col]]
            for r in range(phi):
                if r != col and rows[r][col]:
                    f = rows[r][col]
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
        return Scalar._make(m, [rows[i][phi] for i in range(phi)])

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Scalar(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.m == other.m and self.c == other.c
        if isinstance(other, (int, Fraction, type(mpq(0)))):
            return self.m == 1 and self.c[0] == _to_mpq(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.m == 1:
                q = self.c[0]
                self._hash = hash(Fraction(int(q.numerator), int(q.denominator)))
            else:
                self._hash = hash((self.m, self.c))
        return self._hash

    def __str__(self):
        parts = []
        for k, v in enumerate(self.c):
            if not v:
                continue
            mag = abs(v)
            sign = "-" if v < 0 else "+"
            if k == 0:
                body = str(mag)
            else:
                zeta = "zeta" if k == 1 else f"zeta^{k}"
                body = zeta if mag == 1 else f"{mag}*{zeta}"
            parts.append((sign, body))
        if not parts:
            return "0"
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Scalar({str(self)!r}, m={self.m})"

    def mod_image(self, P: int, root: int) -> int:
        """Image under Q(zeta_m) -> Z/P with zeta -> root (denominators prime to P)."""
        if self.m == 1:
            q = self.c[0]
            d = q.denominator
            return int(q.numerator) % P if d == 1 else int(q.numerator) * pow(int(d), -1, P) % P
        acc = 0
        rk = 1
        for q in self.c:
            if q:
                acc += int(q.numerator) * pow(int(q.denominator), -1, P) * rk
            rk = rk * root % P
        return acc % P

    def needs_parens(self) -> bool:
        return sum(1 for v in self.c if v) > 1


ZERO = Scalar(0)
ONE = Scalar(1)


def as_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


# ---------------------------------------------------------------------------
# p-adic side


@dataclass(frozen=True)
class FieldSpec:
    """Cyclotomic order m, prime p = 1 (mod m) and working precision N."""

    m: int = 1
    p: int = 5
    N: int = 20

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("cyclotomic_order must be positive")
        if self.p < 2 or not gmpy2.is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p % self.m != 1 % self.m:
            raise ValueError(f"prime {self.p} is not 1 mod {self.m}")
        if self.N < 1:
            raise ValueError("precision must be at least 1")

    def with_precision(self, N: int) -> "FieldSpec":
        return FieldSpec(self.m, self.p, N)


@dataclass(frozen=True)
class TruncatedPadic:
    """A residue modulo p^N."""

    residue: int
    p: int
    N: int

    def __post_init__(self):
        object.__setattr__(self, "residue", int(self.residue) % (self.p ** self.N))

    def _check(self, other: "TruncatedPadic"):
        if (self.p, self.N) != (other.p, other.N):
            raise ValueError("truncated p-adics at different precisions")

    def __add__(self, other):
        if isinstance(other, int):
            other = TruncatedPadic(other, self.p, self.N)
        self._check(other)
        return TruncatedPadic(self.residue + other.residue, self.p, self.N)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPadic(-self.residue, self.p, self.N)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = TruncatedPadic(other, self.p, self.N)
        self._check(other)
        return TruncatedPadic(self.residue * other.residue, self.p, self.N)

    __rmul__ = __mul__

    def __bool__(self):
        return self.residue != 0

    def valuation(self) -> int:
        """p-adic valuation, capped at the precision N (zero reports N)."""
        if self.residue == 0:
            return self.N
        return min(_vp_int(self.residue, self.p), self.N)

    def reduce(self, N: int) -> "TruncatedPadic":
        return TruncatedPadic(self.residue, self.p, N)


@lru_cache(maxsize=None)
def modular_root(m: int) -> tuple[int, int]:
    """A prime P = 1 mod m above 2^61 and a root of Phi_m mod P (for fast zero tests)."""
    P = (2**61 // m + 1) * m + 1
    while not gmpy2.is_prime(P):
        P += m
    phi = cyclotomic_poly(m)
    a = 2
    while True:
        z = pow(a, (P - 1) // m, P)
        if _phi_mod(phi, z, P) == 0:
            return P, z
        a += 1


def _vp_int(n: int, p: int) -> int:
    if n == 0:
        return INF
    return int(gmpy2.remove(mpz(n), p)[1])


def _phi_mod(coeffs, x: int, mod: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % mod
    return acc


@lru_cache(maxsize=None)
def _lift_root(m: int, p: int, N: int) -> int:
    cyc = cyclotomic_poly(m)
    dcyc = [k * cyc[k] for k in range(1, len(cyc))]
    roots = [x for x in range(1, p) if _phi_mod(cyc, x, p) == 0]
    if not roots:
        raise ValueError(f"Phi_{m} has no root modulo {p}")
    r, prec = roots[0], 1
    while prec < N:
        prec = min(2 * prec, N)
        mod = p ** prec
        f = _phi_mod(cyc, r, mod)
        df = _phi_mod(dcyc, r, mod)
        r = (r - f * pow(df, -1, mod)) % mod
    return r


def hensel_lift_root(spec: FieldSpec) -> TruncatedPadic:
    """Root of Phi_m modulo p^N lifting the smallest positive root modulo p."""
    return TruncatedPadic(_lift_root(spec.m, spec.p, spec.N), spec.p, spec.N)


def _integral_parts(a: Scalar, m: int) -> tuple[list[int], int]:
    coeffs = a.lift(m)
    den = 1
    for q in coeffs:
        den = math.lcm(den, int(q.denominator))
    return [int(q * den) for q in coeffs], den


def _check_field(a: Scalar, spec: FieldSpec):
    if a.m not in (1, spec.m):
        raise ValueError(f"scalar lives in Q(zeta_{a.m}) but the field spec has m={spec.m}")


def valuation(a: Scalar, spec: FieldSpec):
    """v_p(a) under the fixed embedding of Q(zeta_m); +inf for zero."""
    a = as_scalar(a)
    _check_field(a, spec)
    if a.is_zero():
        return INF
    if a.m == 1:
        q = a.c[0]
        return _vp_int(int(q.numerator), spec.p) - _vp_int(int(q.denominator), spec.p)
    ints, den = _integral_parts(a, spec.m)
    mod = spec.p ** spec.N
    r = _lift_root(spec.m, spec.p, spec.N)
    image = _phi_mod(ints, r, mod)
    if image == 0:
        raise PrecisionExhausted(f"{a} vanishes modulo {spec.p}^{spec.N}")
    return _vp_int(image, spec.p) - _vp_int(den, spec.p)


def embed(a: Scalar, spec: FieldSpec) -> TruncatedPadic:
    """Image of a p-integral scalar in Z/p^N."""
    a = as_scalar(a)
    _check_field(a, spec)
    ints, den = _integral_parts(a, spec.m)
    extra = _vp_int(den, spec.p)
    prec = spec.N + extra
    mod = spec.p ** prec
    r = _lift_root(spec.m, spec.p, prec) if spec.m > 1 else 1
    image = _phi_mod(ints, r, mod)
    if extra:
        if image % (spec.p ** extra):
            raise ValueError(f"{a} is not p-integral (p={spec.p})")
        image //= spec.p ** extra
        den //= spec.p ** extra
    mod_n = spec.p ** spec.N
    return TruncatedPadic(image * pow(den, -1, mod_n), spec.p, spec.N)
