"""Text forms of operators and a small expression parser.

Canonical skew-operator terms look like::

    coeff * x^(a1,..,ar) / delta^(k1,..,kY) * L^(b1,..,br) * g<label>

and Cherednik elements (PBW order f * g * D^alpha) like::

    coeff * x^(a1,..,ar) * g<label> * D^(b1,..,br)

The parser accepts these forms as well as free-hand expressions such as
``x_1*D_2 - 3/2*g<1>`` or ``1/(x_1 - x_2)``.
"""

from __future__ import annotations

import re
from typing import Callable

from .opalg import LocalizedCoeff, SkewAlgebra, SkewOp
from .polys import DivisionFailure, MultiPoly
from .scalars import ONE, Scalar


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _fmt_coeff(c: Scalar) -> str:
    text = str(c)
    return f"({text})" if c.needs_parens() else text


def _tuple(e) -> str:
    return "(" + ",".join(str(k) for k in e) + ")"


def format_skew(op: SkewOp) -> str:
    pieces = []
    for (g, beta), f in sorted(op.terms.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[1].den)):
        for e, c in sorted(f.num.terms.items()):
            piece = f"{_fmt_coeff(c)} * x^{_tuple(e)}"
            if any(f.den):
                piece += f" / delta^{_tuple(f.den)}"
            piece += f" * L^{_tuple(beta)} * g<{g}>"
            pieces.append(piece)
    return " + ".join(pieces) if pieces else "0"


def format_cherednik(terms) -> str:
    pieces = []
    for (g, alpha), f in sorted(terms.items()):
        for e, c in sorted(f.terms.items()):
            pieces.append(f"{_fmt_coeff(c)} * x^{_tuple(e)} * g<{g}> * D^{_tuple(alpha)}")
    return " + ".join(pieces) if pieces else "0"


def format_localized(f: LocalizedCoeff) -> str:
    if not f:
        return "0"
    pieces = []
    for e, c in sorted(f.num.terms.items()):
        piece = f"{_fmt_coeff(c)} * x^{_tuple(e)}"
        if any(f.den):
            piece += f" / delta^{_tuple(f.den)}"
        pieces.append(piece)
    return " + ".join(pieces)


def format_poly(f: MultiPoly) -> str:
    if not f:
        return "0"
    return " + ".join(f"{_fmt_coeff(c)} * x^{_tuple(e)}" for e, c in sorted(f.terms.items()))


# -- parsing ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<gen>g<\s*\d+\s*>)|(?P<ident>[A-Za-z]+(?:_\d+)?)|(?P<op>[-+*/^(),]))"
)


class _DeltaPower:
    def __init__(self, den):
        self.den = tuple(den)


class ExprParser:
    """Recursive-descent parser producing elements of a SkewAlgebra.

    ``dunkl`` maps a 0-based index to the Dunkl operator (a SkewOp); without
    it ``D`` tokens are rejected.  ``m`` is the cyclotomic order used for
    ``zeta``.
    """

    def __init__(self, alg: SkewAlgebra, dunkl: Callable[[int], SkewOp] | None = None, m: int = 1):
        self.alg = alg
        self.dunkl = dunkl
        self.m = m

    def parse(self, text: str) -> SkewOp:
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match:
                bad = len(text) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", bad)
            kind = match.lastgroup
            start = match.start(kind)
            self.tokens.append((kind, match.group(kind), start))
            pos = match.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0
        value = self._expr()
        if self._peek()[0] != "end":
            raise ParseError(f"unexpected token {self._peek()[1]!r}", self._peek()[2])
        return self._to_op(value, self._peek()[2])

    # -- token helpers ----------------------------------------------------

    def _peek(self):
        return self.tokens[self.i]

    def _take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _expect(self, value: str):
        tok = self._take()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])

    def _to_op(self, value, pos) -> SkewOp:
        if isinstance(value, Scalar):
            return self.alg.scalar(value)
        if isinstance(value, SkewOp):
            return value
        raise ParseError("delta power may only appear as a divisor", pos)

    # -- grammar ----------------------------------------------------------

    def _expr(self):
        value = self._term()
        while self._peek()[1] in ("+", "-"):
            op, _, pos = self._take()[1], None, self._peek()[2]
            rhs = self._term()
            lhs_op = value if isinstance(value, Scalar) else self._to_op(value, pos)
            rhs_op = rhs if isinstance(rhs, Scalar) else self._to_op(rhs, pos)
            value = lhs_op + rhs_op if op == "+" else lhs_op - rhs_op
        return value

    def _term(self):
        value = self._unary()
        while self._peek()[1] in ("*", "/"):
            op, pos = self._take()[1], self._peek()[2]
            rhs = self._unary()
            if op == "*":
                value = self._mul(value, rhs, pos)
            else:
                value = self._div(value, rhs, pos)
        return value

    def _mul(self, a, b, pos):
        if isinstance(a, _DeltaPower) or isinstance(b, _DeltaPower):
            raise ParseError("delta power may only appear as a divisor", pos)
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a * b
        if isinstance(a, Scalar):
            return b.scale(a)
        if isinstance(b, Scalar):
            return a.scale(b)
        return a * b

    def _div(self, a, b, pos):
        if isinstance(a, _DeltaPower):
            raise ParseError("delta power may only appear as a divisor", pos)
        if isinstance(b, Scalar):
            if not b:
                raise ParseError("division by zero", pos)
            return a / b if isinstance(a, Scalar) else a.scale(b.inverse())
        arr = self.alg.arr
        if isinstance(b, _DeltaPower):
            if len(b.den) != len(arr):
                raise ParseError(f"delta needs {len(arr)} exponents", pos)
            inv = LocalizedCoeff(MultiPoly.one(self.alg.r), b.den, arr, reduced=True)
        else:
            if not b.is_function():
                raise ParseError("can only divide by functions", pos)
            f = b.as_function()
            if not f.is_polynomial():
                raise ParseError("can only divide by products of hyperplane forms", pos)
            num = f.num
            den = [0] * len(arr)
            for Y in range(len(arr)):
                while num.degree() > 0:
                    try:
                        num = num.divide_linear(arr.forms[Y])
                    except DivisionFailure:
                        break
                    den[Y] += 1
            if not num.is_constant() or not num:
                raise ParseError("divisor is not a product of hyperplane forms", pos)
            inv = LocalizedCoeff(MultiPoly.const(num.constant_term().inverse(), self.alg.r), den, arr, reduced=True)
        if isinstance(a, Scalar):
            return self.alg.function(inv).scale(a)
        return a * self.alg.function(inv)

    def _unary(self):
        if self._peek()[1] == "-":
            pos = self._take()[2]
            value = self._unary()
            if isinstance(value, _DeltaPower):
                raise ParseError("delta power may only appear as a divisor", pos)
            return -value
        if self._peek()[1] == "+":
            self._take()
            return self._unary()
        return self._power()

    def _power(self):
        value = self._atom()
        if self._peek()[1] == "^":
            pos = self._take()[2]
            kind, text, tpos = self._take()
            if kind != "num":
                raise ParseError("expected integer exponent", tpos)
            k = int(text)
            if isinstance(value, _DeltaPower):
                raise ParseError("delta takes a tuple exponent", pos)
            value = value ** k
        return value

    def _exponent_tuple(self) -> tuple[int, ...]:
        self._expect("(")
        out = []
        while True:
            kind, text, pos = self._take()
            if kind != "num":
                raise ParseError("expected integer in exponent tuple", pos)
            out.append(int(text))
            nxt = self._take()
            if nxt[1] == ")":
                return tuple(out)
            if nxt[1] != ",":
                raise ParseError("expected ',' or ')'", nxt[2])

    def _atom(self):
        kind, text, pos = self._take()
        r = self.alg.r
        if kind == "num":
            return Scalar(int(text))
        if kind == "gen":
            label = int(text[2:-1])
            if not 0 <= label < len(self.alg.group):
                raise ParseError(f"no group element g<{label}>", pos)
            return self.alg.g(label)
        if kind == "op" and text == "(":
            value = self._expr()
            self._expect(")")
            return value
        if kind == "ident":
            name, _, idx = text.partition("_")
            if name == "zeta":
                if self.m == 1:
                    raise ParseError("zeta needs a cyclotomic field", pos)
                return Scalar.zeta(self.m)
            if name not in ("x", "L", "D", "delta"):
                raise ParseError(f"unknown symbol {text!r}", pos)
            if name == "D" and self.dunkl is None:
                raise ParseError("Dunkl operators are not available here", pos)
            if idx:
                i = int(idx) - 1
                if not 0 <= i < r or name == "delta":
                    raise ParseError(f"bad index in {text!r}", pos)
                return self._generator(name, i)
            if self._peek()[1] == "^" and self.tokens[self.i + 1][1] == "(":
                self._take()
                exps = self._exponent_tuple()
                if name == "delta":
                    return _DeltaPower(exps)
                if len(exps) != r:
                    raise ParseError(f"{name} needs {r} exponents", pos)
                value = self.alg.one()
                for i, k in enumerate(exps):
                    if k:
                        value = value * self._generator(name, i) ** k
                return value
            if name != "delta" and r == 1:
                return self._generator(name, 0)
            raise ParseError(f"ambiguous symbol {text!r}", pos)
        raise ParseError(f"unexpected token {text or 'end of input'!r}", pos)

    def _generator(self, name: str, i: int) -> SkewOp:
        if name == "x":
            return self.alg.x(i)
        if name == "L":
            return self.alg.L(i)
        return self.dunkl(i)


def parse_operator(text: str, alg: SkewAlgebra, dunkl=None, m: int = 1) -> SkewOp:
    return ExprParser(alg, dunkl, m).parse(text)


def parse_poly(text: str, r: int, m: int = 1) -> MultiPoly:
    """Parse a polynomial expression in x_1..x_r."""
    from .opalg import SkewAlgebra, trivial_group

    alg = SkewAlgebra(trivial_group(r))
    op = ExprParser(alg, None, m).parse(text)
    if not op.is_function():
        raise ValueError(f"{text!r} is not a polynomial")
    return op.as_function().as_poly()
