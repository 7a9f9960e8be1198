"""Rational functions of ``z`` over Q(i)(u).

``ZRational`` keeps ``z**zshift * num / den`` with ``den`` monic in ``z``,
both ``num`` and ``den`` free of ``z`` factors, and ``gcd(num, den) = 1``.
``FactoredZ`` is the product form used for the basis functions; it
multiplies and q-shifts without ever expanding.
"""

from __future__ import annotations

from qorbit.errors import DivisionByZero, NotAFactor
from qorbit.exactfield import _dense
from qorbit.exactfield.scalar import ONE, ZERO, QScalar


class ZPoly:
    """Polynomial in ``z`` with QScalar coefficients, ``{exponent: coeff}``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
            for j, c in items:
                if j < 0:
                    raise ValueError("ZPoly exponents must be nonnegative")
                c = QScalar.coerce(c)
                if c:
                    clean[j] = c
        self._c = clean

    @classmethod
    def from_dense(cls, coeffs: list) -> "ZPoly":
        obj = object.__new__(cls)
        obj._c = {j: c for j, c in enumerate(coeffs) if c}
        return obj

    def dense(self) -> list:
        if not self._c:
            return []
        out = [ZERO] * (max(self._c) + 1)
        for j, c in self._c.items():
            out[j] = c
        return out

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def __bool__(self):
        return bool(self._c)

    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def lowdeg(self) -> int:
        return min(self._c)

    def leading(self) -> QScalar:
        return self._c[max(self._c)]

    def coeff(self, j: int) -> QScalar:
        return self._c.get(j, ZERO)

    def __add__(self, other: "ZPoly") -> "ZPoly":
        out = dict(self._c)
        for j, c in other._c.items():
            s = out.get(j)
            if s is None:
                out[j] = c
            else:
                s = s + c
                if s:
                    out[j] = s
                else:
                    del out[j]
        return ZPoly._wrap(out)

    def __neg__(self) -> "ZPoly":
        return ZPoly._wrap({j: -c for j, c in self._c.items()})

    def __sub__(self, other: "ZPoly") -> "ZPoly":
        return self + (-other)

    def __mul__(self, other: "ZPoly") -> "ZPoly":
        if len(other._c) == 1:
            (j, c), = other._c.items()
            return self.scale(c).zshift(j)
        if len(self._c) == 1:
            (j, c), = self._c.items()
            return other.scale(c).zshift(j)
        return ZPoly.from_dense(_dense.mul(self.dense(), other.dense()))

    def scale(self, c: QScalar) -> "ZPoly":
        if not c:
            return ZPoly._wrap({})
        if c.is_one():
            return self
        return ZPoly._wrap({j: x * c for j, x in self._c.items()})

    def zshift(self, k: int) -> "ZPoly":
        if not k:
            return self
        return ZPoly._wrap({j + k: c for j, c in self._c.items()})

    def q_shift(self, k: int) -> "ZPoly":
        """Coefficient of ``z**j`` times ``q**(k j)``."""
        return ZPoly._wrap({j: c.mul_u_power(2 * k * j) for j, c in self._c.items()})

    def derivative(self) -> "ZPoly":
        return ZPoly._wrap({j - 1: c * j for j, c in self._c.items() if j})

    def map_coeffs(self, fn) -> "ZPoly":
        return ZPoly({j: fn(c) for j, c in self._c.items()})

    def monic(self) -> tuple[QScalar, "ZPoly"]:
        lc = self.leading()
        if lc.is_one():
            return ONE, self
        inv = lc.inverse()
        return lc, ZPoly._wrap({j: c * inv for j, c in self._c.items()})

    @classmethod
    def _wrap(cls, d: dict) -> "ZPoly":
        obj = object.__new__(cls)
        obj._c = d
        return obj

    def __eq__(self, other):
        if not isinstance(other, ZPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        return f"ZPoly({format_zpoly(self)!r})"

    def __str__(self):
        return format_zpoly(self)


def zpoly_gcd(a: ZPoly, b: ZPoly) -> ZPoly:
    return ZPoly.from_dense(_dense.gcd(a.dense(), b.dense()))


def zpoly_exact_div(a: ZPoly, b: ZPoly) -> ZPoly:
    return ZPoly.from_dense(_dense.exact_div(a.dense(), b.dense()))


def zpoly_divmod(a: ZPoly, b: ZPoly) -> tuple[ZPoly, ZPoly]:
    lc, mb = b.monic()
    q, r = _dense.divmod_monic(a.dense(), mb.dense())
    inv = lc.inverse()
    return ZPoly.from_dense([c * inv for c in q]), ZPoly.from_dense(r)


_ZONE = ZPoly._wrap({0: ONE})
_ZZERO = ZPoly._wrap({})


class ZRational:
    """``z**zshift * num(z) / den(z)`` in canonical form."""

    __slots__ = ("num", "den", "zshift", "_hash")

    def __init__(self, num, den=None, zshift: int = 0):
        num = _as_zpoly(num)
        den = _ZONE if den is None else _as_zpoly(den)
        if not den:
            raise DivisionByZero("zero denominator")
        self.num, self.den, self.zshift = _canonical(num, den, zshift)
        self._hash = None

    @classmethod
    def _raw(cls, num: ZPoly, den: ZPoly, zshift: int) -> "ZRational":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj.zshift = zshift
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, c) -> "ZRational":
        c = QScalar.coerce(c)
        if not c:
            return ZERO_Z
        return cls._raw(ZPoly._wrap({0: c}), _ZONE, 0)

    @classmethod
    def monomial(cls, j: int, c=1) -> "ZRational":
        """``c * z**j`` for any integer ``j``."""
        c = QScalar.coerce(c)
        if not c:
            return ZERO_Z
        return cls._raw(ZPoly._wrap({0: c}), _ZONE, j)

    @classmethod
    def linear(cls, a, b) -> "ZRational":
        """``a*z + b``."""
        return cls(ZPoly({0: b, 1: a}))

    # -- predicates -----------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0 and self.zshift >= 0

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ZRational):
            other = ZRational.const(other)
        if not self.num:
            return other
        if not other.num:
            return self
        r = min(self.zshift, other.zshift)
        n1 = self.num.zshift(self.zshift - r)
        n2 = other.num.zshift(other.zshift - r)
        d1, d2 = self.den, other.den
        if d1 == d2:
            return ZRational(n1 + n2, d1, r)
        if d1.degree() == 0:
            return ZRational._from_sum(n1 * d2 + n2, d2, r, None)
        if d2.degree() == 0:
            return ZRational._from_sum(n1 + n2 * d1, d1, r, None)
        g = zpoly_gcd(d1, d2)
        if g.degree() == 0:
            return ZRational._from_sum(n1 * d2 + n2 * d1, d1 * d2, r, _ZONE)
        d1g = zpoly_exact_div(d1, g)
        d2g = zpoly_exact_div(d2, g)
        return ZRational._from_sum(n1 * d2g + n2 * d1g, d1 * d2g, r, g)

    __radd__ = __add__

    @classmethod
    def _from_sum(cls, num: ZPoly, den: ZPoly, zshift: int, hint) -> "ZRational":
        if not num:
            return ZERO_Z
        low = num.lowdeg()
        if low:
            num = num.zshift(-low)
            zshift += low
        g = zpoly_gcd(num, den if hint is None else hint) if (hint is None or hint.degree() > 0) else _ZONE
        if g.degree() > 0:
            num = zpoly_exact_div(num, g)
            den = zpoly_exact_div(den, g)
        return cls._raw(num, den, zshift)

    def __neg__(self):
        return ZRational._raw(-self.num, self.den, self.zshift)

    def __sub__(self, other):
        if not isinstance(other, ZRational):
            other = ZRational.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return ZRational.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, ZRational):
            return self.scale(QScalar.coerce(other))
        if not self.num or not other.num:
            return ZERO_Z
        a, b, c, d = self.num, self.den, other.num, other.den
        if d.degree() > 0 and a.degree() > 0:
            a, d = _cancel(a, d)
        if b.degree() > 0 and c.degree() > 0:
            c, b = _cancel(c, b)
        return ZRational._raw(a * c, b * d, self.zshift + other.zshift)

    __rmul__ = __mul__

    def scale(self, c: QScalar) -> "ZRational":
        if not c:
            return ZERO_Z
        return ZRational._raw(self.num.scale(c), self.den, self.zshift)

    def times_z(self, k: int) -> "ZRational":
        if not self.num:
            return self
        return ZRational._raw(self.num, self.den, self.zshift + k)

    def inverse(self) -> "ZRational":
        if not self.num:
            raise DivisionByZero("inverse of the zero function")
        lc, n = self.num.monic()
        return ZRational._raw(self.den.scale(lc.inverse()), n, -self.zshift)

    def __truediv__(self, other):
        if not isinstance(other, ZRational):
            return self.scale(QScalar.coerce(other).inverse())
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE_Z
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def q_shift(self, k: int) -> "ZRational":
        """``f(z) -> f(q**k z)``; an automorphism, so no gcd is needed."""
        if not k or not self.num:
            return self
        num = self.num.q_shift(k)
        den = self.den.q_shift(k)
        top = den.degree()
        if top:
            den = ZPoly._wrap({j: c.mul_u_power(-2 * k * top) for j, c in den._c.items()})
        num = ZPoly._wrap(
            {j: c.mul_u_power(2 * k * (self.zshift - top)) for j, c in num._c.items()}
        )
        return ZRational._raw(num, den, self.zshift)

    def derivative(self) -> "ZRational":
        """d/dz, treating every QScalar coefficient as a constant."""
        if not self.num:
            return self
        s, n, d = self.zshift, self.num, self.den
        z = ZPoly._wrap({1: ONE})
        top = n.scale(QScalar.const(s)) * d + z * (n.derivative() * d - n * d.derivative())
        return ZRational(top, d * d, s - 1)

    def map_coeffs(self, fn) -> "ZRational":
        """Apply ``fn`` to every coefficient and renormalise (e.g. ``u -> 1``)."""
        return ZRational(self.num.map_coeffs(fn), self.den.map_coeffs(fn), self.zshift)

    def classical_limit(self) -> "ZRational":
        return self.map_coeffs(lambda c: QScalar.const(c.classical_limit()))

    def compose(self, w: "ZRational") -> "ZRational":
        """``f(w(z))`` for a rational ``w``."""
        return _horner(self.num, w) * (w ** self.zshift) / _horner(self.den, w)

    def evaluate(self, z, u=1.0):
        """Numeric value at complex ``z`` with ``u`` substituted numerically."""
        z = complex(z)
        n = sum(c.evaluate(u) * z**j for j, c in self.num._c.items())
        d = sum(c.evaluate(u) * z**j for j, c in self.den._c.items())
        return n / d * z**self.zshift

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ZRational):
            try:
                other = ZRational.const(other)
            except TypeError:
                return NotImplemented
        return self.zshift == other.zshift and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den, self.zshift))
        return self._hash

    def __repr__(self):
        return f"ZRational({format_zrational(self)!r})"

    def __str__(self):
        return format_zrational(self)


def _as_zpoly(x) -> ZPoly:
    if isinstance(x, ZPoly):
        return x
    if isinstance(x, (list, dict)):
        return ZPoly(x)
    return ZPoly({0: x})


def _canonical(num: ZPoly, den: ZPoly, zshift: int):
    if not num:
        return _ZZERO, _ZONE, 0
    low = den.lowdeg()
    if low:
        den = den.zshift(-low)
        zshift -= low
    low = num.lowdeg()
    if low:
        num = num.zshift(-low)
        zshift += low
    lc, den = den.monic()
    if not lc.is_one():
        num = num.scale(lc.inverse())
    if den.degree() > 0 and num.degree() > 0:
        g = zpoly_gcd(num, den)
        if g.degree() > 0:
            num = zpoly_exact_div(num, g)
            den = zpoly_exact_div(den, g)
    return num, den, zshift


def _cancel(num: ZPoly, den: ZPoly):
    g = zpoly_gcd(num, den)
    if g.degree() == 0:
        return num, den
    return zpoly_exact_div(num, g), zpoly_exact_div(den, g)


def _horner(p: ZPoly, w: ZRational) -> ZRational:
    acc = ZERO_Z
    for j in range(p.degree(), -1, -1):
        acc = acc * w + ZRational.const(p.coeff(j))
    return acc


ZERO_Z = ZRational._raw(_ZZERO, _ZONE, 0)
ONE_Z = ZRational._raw(_ZONE, _ZONE, 0)
Z = ZRational._raw(_ZONE, _ZONE, 1)


def q_shift(f: ZRational, k: int) -> ZRational:
    return f.q_shift(k)


def divide_known_factor(f: ZRational, a, b, power: int = 1) -> ZRational:
    """Remove one exact linear factor ``(a z + b)`` from ``f``.

    ``power=1`` divides by the factor, which must divide the numerator;
    ``power=-1`` multiplies by it, which must cancel against the
    denominator.  Anything else raises :class:`NotAFactor`.
    """
    a = QScalar.coerce(a)
    b = QScalar.coerce(b)
    if power not in (1, -1):
        raise ValueError("power must be +1 or -1")
    if not a and not b:
        raise NotAFactor("zero is not a factor")
    if not a:
        return f.scale(b.inverse()) if power == 1 else f.scale(b)
    if not b:
        scaled = f.scale(a.inverse()) if power == 1 else f.scale(a)
        return scaled.times_z(-power)
    lin = ZPoly({0: b / a, 1: ONE})
    if power == 1:
        q, r = zpoly_divmod(f.num, lin)
        if r:
            raise NotAFactor(f"({a})*z + ({b}) does not divide the numerator")
        return ZRational._raw(q.scale(a.inverse()), f.den, f.zshift)
    q, r = zpoly_divmod(f.den, lin)
    if r:
        raise NotAFactor(f"({a})*z + ({b}) does not divide the denominator")
    return ZRational._raw(f.num.scale(a), q, f.zshift)


class FactoredZ:
    """``scalar * prod (a z + b)**e`` with the factor list kept as given."""

    __slots__ = ("scalar", "factors", "_normal")

    def __init__(self, scalar=1, factors=()):
        self.scalar = QScalar.coerce(scalar)
        fs = []
        for a, b, e in factors:
            a, b = QScalar.coerce(a), QScalar.coerce(b)
            if not a and not b:
                raise ValueError("a factor (a z + b) needs a != 0 or b != 0")
            if e:
                fs.append((a, b, int(e)))
        self.factors = tuple(fs)
        self._normal = None

    def normal_form(self) -> tuple[QScalar, int, dict]:
        """``(scalar, z exponent, {c: e})`` for ``scalar z^k prod (z + c)^e``."""
        if self._normal is None:
            scalar = self.scalar
            zexp = 0
            roots: dict = {}
            for a, b, e in self.factors:
                if not a:
                    scalar = scalar * b**e
                    continue
                scalar = scalar * a**e
                c = b / a
                if not c:
                    zexp += e
                else:
                    roots[c] = roots.get(c, 0) + e
            self._normal = (scalar, zexp, {c: e for c, e in roots.items() if e})
        return self._normal

    @classmethod
    def _from_normal(cls, scalar, zexp, roots) -> "FactoredZ":
        factors = [(ONE, c, e) for c, e in roots.items() if e]
        if zexp:
            factors.append((ONE, ZERO, zexp))
        return cls(scalar, factors)

    def __mul__(self, other):
        if not isinstance(other, FactoredZ):
            other = FactoredZ(other)
        s1, z1, r1 = self.normal_form()
        s2, z2, r2 = other.normal_form()
        roots = dict(r1)
        for c, e in r2.items():
            roots[c] = roots.get(c, 0) + e
        return FactoredZ._from_normal(s1 * s2, z1 + z2, roots)

    def inverse(self) -> "FactoredZ":
        s, z, r = self.normal_form()
        return FactoredZ._from_normal(s.inverse(), -z, {c: -e for c, e in r.items()})

    def __truediv__(self, other):
        if not isinstance(other, FactoredZ):
            other = FactoredZ(other)
        return self * other.inverse()

    def q_shift(self, k: int) -> "FactoredZ":
        step = QScalar.q_power(k)
        return FactoredZ(self.scalar, [(a * step, b, e) for a, b, e in self.factors])

    def expand(self) -> ZRational:
        return expand(self)

    def __eq__(self, other):
        if not isinstance(other, FactoredZ):
            return NotImplemented
        return self.normal_form() == other.normal_form()

    def __hash__(self):
        s, z, r = self.normal_form()
        return hash((s, z, frozenset(r.items())))

    def __repr__(self):
        return f"FactoredZ({format_factored(self)!r})"

    def __str__(self):
        return format_factored(self)


def expand(f: FactoredZ) -> ZRational:
    """Distribute the factors: positive exponents up, negative down.

    Normalised roots are distinct, so numerator and denominator are
    coprime by construction and no gcd is run.
    """
    scalar, zexp, roots = f.normal_form()
    if not scalar:
        return ZERO_Z
    num = [ONE]
    den = [ONE]
    for c, e in sorted(roots.items(), key=lambda ce: str(ce[0])):
        lin = [c, ONE]
        for _ in range(abs(e)):
            if e > 0:
                num = _dense.mul(num, lin)
            else:
                den = _dense.mul(den, lin)
    return ZRational._raw(ZPoly.from_dense(num).scale(scalar), ZPoly.from_dense(den), zexp)


def _root_order(c: QScalar):
    return str(c)


def sum_factored(terms) -> ZRational:
    """``sum c * z^a * f`` for ``(c, a, f)`` with ``f`` a FactoredZ.

    The denominators are products of known linear factors, so the sum is
    formed over their exact lcm and reduced by trial division at each root.
    No polynomial gcd is needed, which keeps coefficient growth in check
    when the denominators do not telescope.
    """
    parts = []
    lcm: dict = {}
    for c, a, f in terms:
        scalar, zexp, roots = f.normal_form()
        coeff = scalar * QScalar.coerce(c)
        if not coeff:
            continue
        parts.append((coeff, zexp + a, roots))
        for root, e in roots.items():
            if e < 0:
                lcm[root] = max(lcm.get(root, 0), -e)
    if not parts:
        return ZERO_Z
    zmin = min(z for _, z, _ in parts)
    total = [ZERO]
    for coeff, z, roots in parts:
        poly = [ZERO] * (z - zmin) + [coeff]
        for root in sorted(set(roots) | set(lcm), key=_root_order):
            e = roots.get(root, 0)
            power = e + lcm.get(root, 0)
            for _ in range(power):
                poly = _dense.mul(poly, [root, ONE])
        if len(poly) > len(total):
            total = total + [ZERO] * (len(poly) - len(total))
        for j, x in enumerate(poly):
            if x:
                total[j] = total[j] + x
    total = _dense.trim(total)
    if not total:
        return ZERO_Z
    den = [ONE]
    for root in sorted(lcm, key=_root_order):
        mult = lcm[root]
        while mult:
            quot, rem = _synthetic_div(total, -root)
            if rem:
                break
            total = quot
            mult -= 1
        for _ in range(mult):
            den = _dense.mul(den, [root, ONE])
    num = ZPoly.from_dense(total)
    low = num.lowdeg()
    if low:
        num = num.zshift(-low)
    return ZRational._raw(num, ZPoly.from_dense(den), zmin + low)


def _synthetic_div(coeffs: list, x0) -> tuple[list, QScalar]:
    """Divide the dense polynomial by ``z - x0``: returns (quotient, remainder)."""
    n = len(coeffs) - 1
    quot = [ZERO] * n
    acc = ZERO
    for j in range(n, -1, -1):
        acc = acc * x0 + coeffs[j]
        if j:
            quot[j - 1] = acc
    return quot, acc


# -- text ---------------------------------------------------------------

def _wrap_coeff(s: str) -> str:
    if any(ch in s for ch in " /") or (s.startswith("(") and not s.endswith(")")):
        return f"[{s}]"
    return s


def format_zpoly(p: ZPoly) -> str:
    if not p:
        return "0"
    parts = []
    for j in sorted(p._c):
        c = p._c[j]
        cs = str(c)
        if j == 0:
            parts.append(_wrap_coeff(cs))
            continue
        power = "z" if j == 1 else f"z^{j}"
        if c.is_one():
            parts.append(power)
        elif c == -1:
            parts.append("-" + power)
        else:
            parts.append(f"{_wrap_coeff(cs)}*{power}")
    text = parts[0]
    for t in parts[1:]:
        text += " - " + t[1:] if t.startswith("-") else " + " + t
    return text


def format_zrational(f: ZRational) -> str:
    if not f.num:
        return "0"
    text = format_zpoly(f.num)
    has_den = f.den.degree() > 0
    if len(f.num._c) > 1 and (has_den or f.zshift):
        text = f"({text})"
    if f.zshift:
        pre = "z" if f.zshift == 1 else f"z^{f.zshift}"
        if f.num.degree() == 0:
            c = f.num._c[0]
            text = pre if c.is_one() else "-" + pre if c == -1 else f"{_wrap_coeff(str(c))}*{pre}"
        else:
            text = f"{pre}*{text}"
    if has_den:
        text = f"{text}/({format_zpoly(f.den)})"
    return text


def format_factored(f: FactoredZ, q_notation: bool = False) -> str:
    from qorbit.exactfield.scalar import format_scalar_q

    fmt = (lambda x: format_scalar_q(x)) if q_notation else str

    def lin(a, b):
        if not a:
            return fmt(b)
        if a.is_one():
            head = "z"
        else:
            head = f"{_wrap_coeff(fmt(a))} z" if q_notation else f"{_wrap_coeff(fmt(a))}*z"
        if not b:
            return head
        bs = fmt(b)
        if bs.startswith("-"):
            return f"{head} - {bs[1:]}"
        return f"{head} + {bs}"

    ups = [(a, b, e) for a, b, e in f.factors if e > 0]
    downs = [(a, b, -e) for a, b, e in f.factors if e < 0]

    def prod(items):
        if not items:
            return "1"
        out = ""
        for a, b, e in items:
            out += f"({lin(a, b)})" + (f"^{e}" if e != 1 else "")
        return out

    head = prod(ups)
    if not f.scalar.is_one():
        head = f"{_wrap_coeff(fmt(f.scalar))}*{head}"
    if not downs:
        return head
    return f"{head}/({prod(downs)})"
