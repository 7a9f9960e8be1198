"""Gaussian rationals: exact complex numbers ``re + i*im`` with rational parts."""

from __future__ import annotations

import re as _re
from numbers import Rational

from gmpy2 import mpq

from qorbit.errors import DivisionByZero

_ZERO = mpq(0)
_ONE = mpq(1)


def _to_mpq(x):
    if isinstance(x, (int, Rational, str)):
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(x) -> str:
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class GaussianRational:
    """Element of Q(i).

    Arithmetic never leaves the field; ``float``/``complex`` inputs are
    refused so that nothing inexact leaks in by accident.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            self.re, self.im = re.re, re.im + _to_mpq(im)
            return
        self.re = _to_mpq(re)
        self.im = _to_mpq(im)

    @classmethod
    def _new(cls, re, im):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return cls._new(_to_mpq(x), _ZERO)

    # -- predicates -----------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussianRational._new(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussianRational._new(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational._new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            if not d:
                return GaussianRational._new(a * c, _ZERO)
            return GaussianRational._new(a * c, a * d)
        if not d:
            return GaussianRational._new(a * c, b * c)
        return GaussianRational._new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b = self.re, self.im
        if not b:
            if not a:
                raise DivisionByZero("inverse of zero Gaussian rational")
            return GaussianRational._new(1 / a, _ZERO)
        n = a * a + b * b
        return GaussianRational._new(a / n, -b / n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussianRational._new(_ONE, _ZERO)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._new(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def sort_key(self):
        return (self.re, self.im)

    # -- text -----------------------------------------------------------
    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self):
        if not self.im:
            return format_rational(self.re)
        if self.im == 1:
            imag = "i"
        elif self.im == -1:
            imag = "-i"
        else:
            imag = f"{format_rational(self.im)}*i"
        if not self.re:
            return imag
        sign = "" if imag.startswith("-") else "+"
        return f"({format_rational(self.re)}{sign}{imag})"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Inverse of ``str``: accepts ``3/2``, ``-i``, ``2/3*i``, ``(1-1/2*i)``."""
        s = text.replace(" ", "")
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        m = _GAUSS_RE.fullmatch(s)
        if not m or not s:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        real, imag = m.group("re"), m.group("im")
        re_part = mpq(real.lstrip("+")) if real else _ZERO
        if imag is None:
            im_part = _ZERO
        else:
            coeff = imag[:-1].rstrip("*")
            if coeff in ("", "+"):
                im_part = _ONE
            elif coeff == "-":
                im_part = -_ONE
            else:
                im_part = mpq(coeff.lstrip("+"))
        return cls._new(re_part, im_part)


_GAUSS_RE = _re.compile(
    r"(?P<re>[+-]?\d+(?:/\d+)?)?(?P<im>(?:(?<=\d)[+-]|^[+-]?)(?:\d+(?:/\d+)?\*?)?i)?"
)

ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
