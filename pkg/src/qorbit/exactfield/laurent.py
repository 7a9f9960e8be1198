"""Laurent polynomials in ``u`` over Q(i), where ``u**2 = q``."""

from __future__ import annotations

from gmpy2 import mpq

from qorbit.exactfield import _dense
from qorbit.exactfield.gaussian import GaussianRational, ZERO, _ZERO


class ULaurent:
    """Finitely supported map ``exponent -> GaussianRational``.

    Zero coefficients are never stored.  Instances are treated as
    immutable; every operation returns a new object.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, c in dict(terms).items():
                c = GaussianRational.coerce(c)
                if c:
                    clean[int(k)] = c
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "ULaurent":
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def monomial(cls, coeff, k: int = 0) -> "ULaurent":
        c = GaussianRational.coerce(coeff)
        return cls._raw({k: c} if c else {})

    # -- inspection -----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def lowdeg(self) -> int:
        return min(self._terms)

    def topdeg(self) -> int:
        return max(self._terms)

    def leading(self) -> GaussianRational:
        return self._terms[max(self._terms)]

    def coeff(self, k: int) -> GaussianRational:
        return self._terms.get(k, ZERO)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_real(self) -> bool:
        return all(not c.im for c in self._terms.values())

    # -- ring operations ------------------------------------------------
    def __add__(self, other: "ULaurent") -> "ULaurent":
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return ULaurent._raw(out)

    def __neg__(self) -> "ULaurent":
        return ULaurent._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "ULaurent") -> "ULaurent":
        return self + (-other)

    def __mul__(self, other: "ULaurent") -> "ULaurent":
        a, b = self._terms, other._terms
        if not a or not b:
            return ULaurent._raw({})
        if len(a) == 1:
            (k, c), = a.items()
            return other.scale(c).shift(k)
        if len(b) == 1:
            (k, c), = b.items()
            return self.scale(c).shift(k)
        out: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                k = i + j
                s = out.get(k)
                out[k] = x * y if s is None else s + x * y
        return ULaurent._raw({k: c for k, c in out.items() if c})

    def scale(self, c) -> "ULaurent":
        c = GaussianRational.coerce(c)
        if not c:
            return ULaurent._raw({})
        if c.is_one():
            return self
        return ULaurent._raw({k: x * c for k, x in self._terms.items()})

    def shift(self, k: int) -> "ULaurent":
        """Multiply by ``u**k``."""
        if not k:
            return self
        return ULaurent._raw({e + k: c for e, c in self._terms.items()})

    def __pow__(self, e: int) -> "ULaurent":
        if e < 0:
            raise ValueError("negative power of a Laurent polynomial")
        result = ULaurent.monomial(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "ULaurent":
        """Image under ``i -> -i``, ``u -> 1/u`` (the |q| = 1 involution)."""
        return ULaurent._raw({-k: c.conjugate() for k, c in self._terms.items()})

    def scale_exponents(self, r: int) -> "ULaurent":
        """Substitute ``u -> u**r``."""
        return ULaurent._raw({k * r: c for k, c in self._terms.items()})

    # -- evaluation -----------------------------------------------------
    def evaluate(self, x):
        """Horner-free evaluation; ``x`` may be a GaussianRational or a complex."""
        if isinstance(x, complex) or isinstance(x, float):
            return sum((complex(c) * x**k for k, c in self._terms.items()), 0j)
        x = GaussianRational.coerce(x)
        total = ZERO
        for k, c in self._terms.items():
            total = total + c * x**k
        return total

    # -- dense conversion -----------------------------------------------
    def dense(self, low: int) -> list:
        """Coefficient list of ``self * u**(-low)`` (must be a polynomial)."""
        top = self.topdeg() - low
        out = [ZERO] * (top + 1)
        for k, c in self._terms.items():
            out[k - low] = c
        return out

    @classmethod
    def from_dense(cls, coeffs: list, low: int = 0) -> "ULaurent":
        terms = {}
        for j, c in enumerate(coeffs):
            if c:
                if not isinstance(c, GaussianRational):
                    c = GaussianRational._new(mpq(c), _ZERO)
                terms[j + low] = c
        return cls._raw(terms)

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ULaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"ULaurent({format_terms(self)!r})"

    def __str__(self):
        return format_terms(self)


def dense_pair(p: ULaurent, low: int) -> tuple[list, bool]:
    """Dense coefficients plus a flag telling whether they are all real.

    Real inputs come back as ``mpq`` lists for the fast kernel path.
    """
    d = p.dense(low)
    if all(not c.im for c in d):
        return [c.re for c in d], True
    return d, False


def poly_gcd(a: ULaurent, b: ULaurent) -> ULaurent:
    """Monic gcd of two polynomials (nonnegative exponents) over Q(i)."""
    da, ra = _normalised(a)
    db, rb = _normalised(b)
    if ra and rb:
        g = _dense.gcd([c.re for c in da], [c.re for c in db])
    else:
        g = _dense.gcd(da, db)
    return ULaurent.from_dense(g)


def poly_exact_div(a: ULaurent, b: ULaurent) -> ULaurent:
    da = a.dense(0)
    db = b.dense(0)
    if all(not c.im for c in da) and all(not c.im for c in db):
        return ULaurent.from_dense(_dense.exact_div([c.re for c in da], [c.re for c in db]))
    return ULaurent.from_dense(_dense.exact_div(da, db))


def _normalised(p: ULaurent) -> tuple[list, bool]:
    d = _dense.monic(p.dense(0)) if p else []
    return d, all(not c.im for c in d)


def format_terms(p: ULaurent, var: str = "u") -> str:
    """Sum of ``c*u^k`` terms in increasing exponent order."""
    if not p:
        return "0"
    parts = []
    for k, c in p.items():
        parts.append(_format_term(c, k, var))
    text = parts[0]
    for t in parts[1:]:
        text += " - " + t[1:] if t.startswith("-") else " + " + t
    return text


def _format_term(c: GaussianRational, k: int, var: str) -> str:
    if k == 0:
        return str(c)
    power = var if k == 1 else f"{var}^{k}"
    if c.is_one():
        return power
    if c == -1:
        return "-" + power
    return f"{c}*{power}"
