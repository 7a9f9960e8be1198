"""QScalar: exact elements of Q(i)(u), the field housing every q-coefficient.

Canonical form ``num / den``:

* ``den`` is a polynomial in ``u`` with nonzero constant term and leading
  coefficient 1;
* any power of ``u`` (a unit) lives in ``num``;
* ``num`` (with its ``u``-power factored out) is coprime to ``den``.

Two values are equal exactly when their fields are identical.
"""

from __future__ import annotations

import re
from functools import lru_cache

from qorbit.errors import DivisionByZero, EvaluationPole
from qorbit.exactfield.gaussian import GaussianRational, I as _I
from qorbit.exactfield.laurent import (
    ULaurent,
    format_terms,
    poly_exact_div,
    poly_gcd,
)

_ONE_POLY = ULaurent.monomial(1)
_ZERO_POLY = ULaurent()


class QScalar:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        num = _as_laurent(num)
        den = _ONE_POLY if den is None else _as_laurent(den)
        n, d = _canonical(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _raw(cls, num: ULaurent, den: ULaurent) -> "QScalar":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, c) -> "QScalar":
        return cls._raw(ULaurent.monomial(c), _ONE_POLY)

    @classmethod
    def u_power(cls, k: int, coeff=1) -> "QScalar":
        return cls._raw(ULaurent.monomial(coeff, k), _ONE_POLY)

    @classmethod
    def q_power(cls, k: int, coeff=1) -> "QScalar":
        return cls.u_power(2 * k, coeff)

    @classmethod
    def coerce(cls, x) -> "QScalar":
        if isinstance(x, QScalar):
            return x
        if isinstance(x, ULaurent):
            return cls._raw(x, _ONE_POLY)
        return cls.const(x)

    # -- predicates -----------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.den.topdeg() == 0 and self.num == _ONE_POLY

    def is_laurent(self) -> bool:
        return self.den.topdeg() == 0

    def is_constant(self) -> bool:
        return self.is_laurent() and (not self.num or self.num.terms.keys() == {0})

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num.coeff(0)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QScalar):
            try:
                other = QScalar.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if not a:
            return other
        if not c:
            return self
        if b.topdeg() == 0 and d.topdeg() == 0:
            return QScalar._raw(a + c, _ONE_POLY)
        if b == d:
            return QScalar(a + c, b)
        # Henrici: with g = gcd(b, d) only g can share factors with the sum.
        g = poly_gcd(b, d)
        if g.topdeg() == 0:
            # coprime denominators: the sum is already in lowest terms
            n = a * d + c * b
            return QScalar._raw(n, b * d) if n else ZERO
        b1 = poly_exact_div(b, g)
        d1 = poly_exact_div(d, g)
        return QScalar._reduced(a * d1 + c * b1, b * d1, g)

    __radd__ = __add__

    def __neg__(self):
        return QScalar._raw(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, QScalar):
            try:
                other = QScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return QScalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, QScalar):
            try:
                other = QScalar.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if not a or not c:
            return ZERO
        b_one = b.topdeg() == 0
        d_one = d.topdeg() == 0
        if b_one and d_one:
            return QScalar._raw(a * c, _ONE_POLY)
        # cross-cancel: gcd(a, d) and gcd(c, b); products of monic stay monic
        if not d_one:
            a, d = _cancel(a, d)
        if not b_one:
            c, b = _cancel(c, b)
        return QScalar._raw(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if not self.num:
            raise DivisionByZero("inverse of zero QScalar")
        n = self.num
        low = n.lowdeg()
        poly = n.shift(-low)
        lc = poly.leading()
        inv = 1 / lc
        return QScalar._raw(self.den.scale(inv).shift(-low), poly.scale(inv))

    def __truediv__(self, other):
        if not isinstance(other, QScalar):
            try:
                other = QScalar.coerce(other)
            except TypeError:
                return NotImplemented
        if not other.num:
            raise DivisionByZero("QScalar division by zero")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.den.topdeg() == 0:
            return QScalar._raw(self.num**k, _ONE_POLY)
        return QScalar._raw(self.num**k, self.den**k)

    def mul_u_power(self, k: int) -> "QScalar":
        return QScalar._raw(self.num.shift(k), self.den)

    def conjugate(self) -> "QScalar":
        """Formal conjugation ``i -> -i``, ``u -> 1/u`` (shadow of |q| = 1)."""
        return QScalar(self.num.conjugate(), self.den.conjugate())

    # -- evaluation -----------------------------------------------------
    def classical_limit(self) -> GaussianRational:
        """Exact value at ``u = 1``."""
        d = self.den.evaluate(1)
        if not d:
            raise EvaluationPole(f"{self} has a pole at u = 1")
        return self.num.evaluate(1) / d

    def evaluate(self, value: complex) -> complex:
        d = self.den.evaluate(complex(value))
        if d == 0:
            raise EvaluationPole(f"{self} has a pole at u = {value}")
        return self.num.evaluate(complex(value)) / d

    @classmethod
    def _reduced(cls, num: ULaurent, den: ULaurent, hint) -> "QScalar":
        """``num/den`` with ``den`` already monic; only ``hint`` may be shared."""
        if not num:
            return ZERO
        low = num.lowdeg()
        poly = num.shift(-low) if low else num
        g = poly_gcd(poly, den if hint is None else hint)
        if g.topdeg() > 0:
            poly = poly_exact_div(poly, g)
            den = poly_exact_div(den, g)
        return cls._raw(poly.shift(low) if low else poly, den)

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, QScalar):
            try:
                other = QScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- text -----------------------------------------------------------
    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"QScalar({format_scalar(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "QScalar":
        return parse_scalar(text)


def _as_laurent(x) -> ULaurent:
    if isinstance(x, ULaurent):
        return x
    if isinstance(x, QScalar):
        if x.den.topdeg() != 0:
            raise TypeError("expected a Laurent polynomial, got a fraction")
        return x.num
    return ULaurent.monomial(x)


def _canonical(num: ULaurent, den: ULaurent) -> tuple[ULaurent, ULaurent]:
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return _ZERO_POLY, _ONE_POLY
    dl = den.lowdeg()
    if dl:
        den = den.shift(-dl)
        num = num.shift(-dl)
    lc = den.leading()
    if not lc.is_one():
        inv = 1 / lc
        den = den.scale(inv)
        num = num.scale(inv)
    if den.topdeg() == 0:
        return num, _ONE_POLY
    low = num.lowdeg()
    poly = num.shift(-low)
    g = poly_gcd(poly, den)
    if g.topdeg() > 0:
        poly = poly_exact_div(poly, g)
        den = poly_exact_div(den, g)
    return poly.shift(low), den


def _cancel(num: ULaurent, den: ULaurent) -> tuple[ULaurent, ULaurent]:
    low = num.lowdeg()
    poly = num.shift(-low) if low else num
    if poly.topdeg() == 0:
        return num, den
    g = poly_gcd(poly, den)
    if g.topdeg() == 0:
        return num, den
    return poly_exact_div(poly, g).shift(low), poly_exact_div(den, g)


ZERO = QScalar._raw(_ZERO_POLY, _ONE_POLY)
ONE = QScalar._raw(_ONE_POLY, _ONE_POLY)
I = QScalar.const(_I)
U = QScalar.u_power(1)
Q = QScalar.u_power(2)


@lru_cache(maxsize=None)
def q_number(x: int, step: int = 1) -> QScalar:
    """``[x]`` in base ``q**step``: ``(q^(s x) - q^(-s x)) / (q^s - q^(-s))``.

    Computed as the symmetric geometric sum, which is already canonical.
    """
    if step not in (1, 2):
        raise ValueError("step must be 1 or 2")
    if x == 0:
        return ZERO
    sign = 1 if x > 0 else -1
    n = abs(x)
    # in u: q^s = u^(2s); [n] = sum_{k=0}^{n-1} u^(2s(n-1-2k))
    e = 2 * step
    terms = {e * (n - 1 - 2 * k): sign for k in range(n)}
    return QScalar._raw(ULaurent(terms), _ONE_POLY)


def q_number_by_division(x: int, step: int = 1) -> QScalar:
    """Same value straight from the defining quotient (used as a cross-check)."""
    s = 2 * step
    num = ULaurent({s * x: 1}) - ULaurent({-s * x: 1})
    den = ULaurent({s: 1}) - ULaurent({-s: 1})
    return QScalar(num, den)


def substitute_q(f: QScalar, mode="classical_limit", value=None):
    """Evaluate ``f`` at ``u = 1`` exactly, or at a complex ``u`` numerically."""
    if mode == "classical_limit":
        return f.classical_limit()
    if mode == "numeric":
        if value is None:
            raise ValueError("numeric mode needs a value")
        return f.evaluate(value)
    raise ValueError(f"unknown mode {mode!r}")


# -- text formats -------------------------------------------------------

def format_scalar(x: QScalar) -> str:
    """Interchange grammar, e.g. ``(i*u^4)/(1 + u^8)``."""
    if not x.num:
        return "0"
    num = format_terms(x.num)
    if x.den.topdeg() == 0:
        return num
    return f"({num})/({format_terms(x.den)})"


def _qexp(k: int) -> str:
    if k % 2 == 0:
        return str(k // 2)
    return f"{k}/2"


def format_scalar_q(x: QScalar, latex: bool = False) -> str:
    """Render in ``q`` (``u^k`` becomes ``q^(k/2)``) for display."""

    def poly(p: ULaurent) -> str:
        if not p:
            return "0"
        parts = []
        for k, c in p.items():
            if k == 0:
                parts.append(_coef_latex(c) if latex else str(c))
                continue
            e = _qexp(k)
            power = "q" if e == "1" else (f"q^{{{e}}}" if latex else f"q^{e}")
            if c.is_one():
                parts.append(power)
            elif c == -1:
                parts.append("-" + power)
            else:
                cs = _coef_latex(c) if latex else str(c)
                parts.append(f"{cs}\\,{power}" if latex else f"{cs}*{power}")
        text = parts[0]
        for t in parts[1:]:
            text += " - " + t[1:] if t.startswith("-") else " + " + t
        return text

    if not x.num:
        return "0"
    n = poly(x.num)
    if x.den.topdeg() == 0:
        return n
    d = poly(x.den)
    if latex:
        return f"\\frac{{{n}}}{{{d}}}"
    return f"({n})/({d})"


def _coef_latex(c: GaussianRational) -> str:
    return str(c).replace("*i", "i").replace("i", "\\imath ") if c.im else str(c)


_TOKEN = re.compile(r"\s*(\d+(?:/\d+)?|[()+\-*/^]|u|i)")


def parse_scalar(text: str) -> QScalar:
    """Parse the interchange grammar (``format_scalar`` output) back to a QScalar.

    Accepts sums/products of integers, ``i``, ``u``, ``u^k`` with
    parentheses and one level of ``/``; enough for round trips and for
    replaying residuals reported by the CLI.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad QScalar text at {pos}: {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    parser = _Parser(tokens)
    value = parser.expr()
    if parser.pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return value


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, tok=None):
        t = self.peek()
        if tok is not None and t != tok:
            raise ValueError(f"expected {tok!r}, got {t!r}")
        self.pos += 1
        return t

    def expr(self) -> QScalar:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        value = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            value = value + t if op == "+" else value - t
        return value

    def term(self) -> QScalar:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            f = self.factor()
            value = value * f if op == "*" else value / f
        return value

    def factor(self) -> QScalar:
        t = self.peek()
        if t == "(":
            self.take()
            value = self.expr()
            self.take(")")
        elif t == "u":
            self.take()
            value = U
        elif t == "i":
            self.take()
            value = I
        elif t == "-":
            self.take()
            return -self.factor()
        elif t is not None and t[0].isdigit():
            self.take()
            value = QScalar.const(GaussianRational(t))
        else:
            raise ValueError(f"unexpected token {t!r}")
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            k = int(self.take())
            value = value ** (-k if neg else k)
        return value
