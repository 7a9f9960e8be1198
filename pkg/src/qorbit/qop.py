"""Twisted Laurent operators ``sum c * z^a * S^b`` with ``S z = q z S``.

``(S f)(z) = f(q z)``.  The generators K, K^-1, E, F of the sigma-modified
action are realised as such operators, and the Hopf-side consistency
checks (defining relations, Leibniz rule for the unmodified action, the
star structure of the real form) are decided by exact normal ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from qorbit.exactfield import (
    I,
    ONE,
    Q,
    ZERO,
    QScalar,
    ZRational,
    q_number,
)
from qorbit.exactfield.scalar import format_scalar
from qorbit.exactfield.zfunc import ZERO_Z, FactoredZ, _wrap_coeff, sum_factored
from qorbit.report import Report


class QDiffOperator:
    """Normal-ordered operator: ``{(a, b): coeff}`` meaning ``coeff z^a S^b``."""

    __slots__ = ("_t",)

    def __init__(self, terms=None):
        clean = {}
        for (a, b), c in (terms or {}).items():
            c = QScalar.coerce(c)
            if c:
                clean[(int(a), int(b))] = c
        self._t = clean

    @classmethod
    def _wrap(cls, d: dict) -> "QDiffOperator":
        obj = object.__new__(cls)
        obj._t = d
        return obj

    @classmethod
    def identity(cls) -> "QDiffOperator":
        return cls._wrap({(0, 0): ONE})

    @classmethod
    def shift(cls, b: int = 1) -> "QDiffOperator":
        return cls._wrap({(0, b): ONE})

    @classmethod
    def zpow(cls, a: int = 1) -> "QDiffOperator":
        return cls._wrap({(a, 0): ONE})

    @classmethod
    def scalar(cls, c) -> "QDiffOperator":
        return cls({(0, 0): c})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    # -- algebra --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QDiffOperator):
            other = QDiffOperator.scalar(other)
        out = dict(self._t)
        for k, c in other._t.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return QDiffOperator._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return QDiffOperator._wrap({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        if not isinstance(other, QDiffOperator):
            other = QDiffOperator.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return QDiffOperator.scalar(other) - self

    def __mul__(self, other):
        if isinstance(other, QDiffOperator):
            return op_mul(self, other)
        c = QScalar.coerce(other)
        if not c:
            return QDiffOperator._wrap({})
        return QDiffOperator._wrap({k: x * c for k, x in self._t.items()})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("use an explicit inverse operator")
        result = QDiffOperator.identity()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, QDiffOperator):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __repr__(self):
        return f"QDiffOperator({format_operator(self)!r})"

    def __str__(self):
        return format_operator(self)


def op_mul(A: QDiffOperator, B: QDiffOperator) -> QDiffOperator:
    """``z^a S^b * z^c S^d = q^(b c) z^(a+c) S^(b+d)``."""
    out: dict = {}
    for (a, b), x in A._t.items():
        for (c, d), y in B._t.items():
            k = (a + c, b + d)
            term = (x * y).mul_u_power(2 * b * c)
            s = out.get(k)
            out[k] = term if s is None else s + term
    return QDiffOperator._wrap({k: c for k, c in out.items() if c})


def commutator(A: QDiffOperator, B: QDiffOperator) -> QDiffOperator:
    return op_mul(A, B) - op_mul(B, A)


def apply(A: QDiffOperator, f: ZRational) -> ZRational:
    """``sum c z^a f(q^b z)``."""
    total = ZERO_Z
    for (a, b), c in sorted(A._t.items()):
        total = total + f.q_shift(b).scale(c).times_z(a)
    return total


def apply_ratio(A: QDiffOperator, f: FactoredZ) -> ZRational:
    """``(A f) / f`` for a factored ``f``.

    Each ``f(q^b z) / f(z)`` stays in factored form, where the shifted and
    unshifted products telescope; the terms are then summed over the lcm
    of their linear denominators without any polynomial gcd.
    """
    cache: dict = {}
    terms = []
    for (a, b), c in sorted(A._t.items()):
        if b not in cache:
            cache[b] = f.q_shift(b) / f
        terms.append((c, a, cache[b]))
    return sum_factored(terms)


def format_operator(A: QDiffOperator) -> str:
    if not A._t:
        return "0"
    parts = []
    for (a, b), c in sorted(A._t.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        parts.append(f"{_wrap_coeff(format_scalar(c))} * z^{a} * S^{b}")
    return " + ".join(parts)


# -- generators ----------------------------------------------------------

GENERATOR_NAMES = ("K", "Kinv", "E", "F")


@dataclass(frozen=True)
class GeneratorSet:
    sigma: int
    K: QDiffOperator
    Kinv: QDiffOperator
    E: QDiffOperator
    F: QDiffOperator

    def __getitem__(self, name: str) -> QDiffOperator:
        return getattr(self, name)

    def word(self, letters) -> QDiffOperator:
        out = QDiffOperator.identity()
        for x in letters:
            out = op_mul(out, self[x])
        return out


_QMINUS = Q - Q.inverse()


def generators(sigma: int) -> GeneratorSet:
    """Operators of the sigma-modified action.

    With ``n = -sigma``: ``K = q^(n/2) S``,
    ``E = z (q^(3n/2) S - q^(-n/2) S^-1) / (q - q^-1)``,
    ``F = -q^(-n/2) z^-1 (S - S^-1) / (q - q^-1)``.
    """
    inv = _QMINUS.inverse()
    K = QDiffOperator({(0, 1): QScalar.u_power(-sigma)})
    Kinv = QDiffOperator({(0, -1): QScalar.u_power(sigma)})
    E = QDiffOperator({
        (1, 1): QScalar.u_power(-3 * sigma) * inv,
        (1, -1): -QScalar.u_power(sigma) * inv,
    })
    F = QDiffOperator({
        (-1, 1): -QScalar.u_power(sigma) * inv,
        (-1, -1): QScalar.u_power(sigma) * inv,
    })
    return GeneratorSet(sigma, K, Kinv, E, F)


def monomial_action(X: str, sigma: int, j: int) -> tuple[QScalar, int]:
    """Closed-form image of ``z^j``: returns ``(coefficient, new exponent)``."""
    if X == "K":
        return QScalar.u_power(2 * j - sigma), j
    if X == "Kinv":
        return QScalar.u_power(sigma - 2 * j), j
    if X == "E":
        return QScalar.u_power(-sigma) * q_number(j - sigma), j + 1
    if X == "F":
        return -QScalar.u_power(sigma) * q_number(j), j - 1
    raise ValueError(f"unknown generator {X!r}")


# -- defining relations --------------------------------------------------

def relation_residuals(gens: GeneratorSet) -> dict[str, QDiffOperator]:
    K, Kinv, E, F = gens.K, gens.Kinv, gens.E, gens.F
    K2 = op_mul(K, K)
    Kinv2 = op_mul(Kinv, Kinv)
    return {
        "KE=qEK": op_mul(K, E) - op_mul(E, K) * Q,
        "KF=q^-1FK": op_mul(K, F) - op_mul(F, K) * Q.inverse(),
        "KKinv=1": op_mul(K, Kinv) - QDiffOperator.identity(),
        "KinvK=1": op_mul(Kinv, K) - QDiffOperator.identity(),
        "[E,F]=(K^2-K^-2)/(q-q^-1)": commutator(E, F) - (K2 - Kinv2) * _QMINUS.inverse(),
    }


def verify_relations(sigma: int, gens: GeneratorSet | None = None) -> Report:
    """All defining relations as exact normal-ordered residuals.

    ``gens`` overrides the realisation (used for negative controls).
    """
    gens = gens if gens is not None else generators(sigma)
    report = Report(f"relations(sigma={sigma})")
    for name, residual in relation_residuals(gens).items():
        report.add(name, residual.is_zero(), "" if residual.is_zero() else str(residual),
                   sigma=sigma)
    return report


# -- coproduct and Leibniz rule -------------------------------------------

@dataclass(frozen=True)
class CoproductRule:
    """``Delta X = sum X_(1) (x) X_(2)`` on generator words, plus the counit."""

    delta: dict = field(default_factory=lambda: {
        "K": ((ONE, ("K",), ("K",)),),
        "Kinv": ((ONE, ("Kinv",), ("Kinv",)),),
        "E": ((ONE, ("E",), ("K",)), (ONE, ("Kinv",), ("E",))),
        "F": ((ONE, ("F",), ("K",)), (ONE, ("Kinv",), ("F",))),
    })
    counit: dict = field(default_factory=lambda: {"K": ONE, "Kinv": ONE, "E": ZERO, "F": ZERO})

    def counit_word(self, word) -> QScalar:
        out = ONE
        for x in word:
            out = out * self.counit[x]
        return out

    def counit_law(self) -> dict[str, bool]:
        """``(eps (x) id) Delta X = X = (id (x) eps) Delta X`` as formal word sums."""
        result = {}
        for X, legs in self.delta.items():
            left: dict = {}
            right: dict = {}
            for c, w1, w2 in legs:
                e1 = self.counit_word(w1)
                e2 = self.counit_word(w2)
                if e1:
                    left[w2] = left.get(w2, ZERO) + c * e1
                if e2:
                    right[w1] = right.get(w1, ZERO) + c * e2
            target = {(X,): ONE}
            left = {w: c for w, c in left.items() if c}
            right = {w: c for w, c in right.items() if c}
            result[X] = left == target and right == target
        return result


def leibniz_check(jmax: int, rule: CoproductRule | None = None, sigma: int = 0) -> Report:
    """``xi(X)(z^a z^b) = sum (xi(X_(1)) z^a)(xi(X_(2)) z^b)`` for 0 <= a, b <= jmax.

    Both sides are computed by applying the realised operators to
    monomials, independently of the closed-form coefficients.
    """
    if jmax < 1:
        raise ValueError("jmax must be >= 1")
    rule = rule or CoproductRule()
    gens = generators(sigma)
    report = Report(f"leibniz(sigma={sigma}, jmax={jmax})")
    mono = [ZRational.monomial(j) for j in range(2 * jmax + 1)]
    for X in ("K", "E", "F"):
        op = gens[X]
        for a in range(jmax + 1):
            for b in range(jmax + 1):
                lhs = apply(op, mono[a + b])
                rhs = ZERO_Z
                for c, w1, w2 in rule.delta[X]:
                    rhs = rhs + (apply(gens.word(w1), mono[a]) * apply(gens.word(w2), mono[b])).scale(c)
                diff = lhs - rhs
                report.add(f"{X}(z^{a} z^{b})", diff.is_zero(), "" if not diff else str(diff),
                           a=a, b=b)
        unit = apply(op, mono[0]) - ZRational.const(rule.counit[X])
        report.add(f"{X}.1=eps({X})", unit.is_zero(), "" if not unit else str(unit))
    for X, ok in rule.counit_law().items():
        report.add(f"counit law {X}", ok, "")
    return report


# -- star structure --------------------------------------------------------

STAR_IMAGE = {
    "K": (ONE, "K"),
    "Kinv": (ONE, "Kinv"),
    "E": (-Q.inverse(), "E"),
    "F": (-Q, "F"),
}


def _relations_as_words() -> dict[str, tuple[list, list]]:
    """Defining relations ``L = R`` as sums of ``(coeff, word)``."""
    qm = _QMINUS.inverse()
    return {
        "KE=qEK": ([(ONE, ("K", "E"))], [(Q, ("E", "K"))]),
        "KF=q^-1FK": ([(ONE, ("K", "F"))], [(Q.inverse(), ("F", "K"))]),
        "KKinv=1": ([(ONE, ("K", "Kinv"))], [(ONE, ())]),
        "KinvK=1": ([(ONE, ("Kinv", "K"))], [(ONE, ())]),
        "[E,F]=(K^2-K^-2)/(q-q^-1)": (
            [(ONE, ("E", "F")), (-ONE, ("F", "E"))],
            [(qm, ("K", "K")), (-qm, ("Kinv", "Kinv"))],
        ),
    }


def star_words(terms: list) -> list:
    """Conjugate-linear anti-automorphism: reverse words, map letters, conj scalars."""
    out = []
    for c, word in terms:
        coeff = c.conjugate()
        letters = []
        for x in reversed(word):
            s, y = STAR_IMAGE[x]
            coeff = coeff * s
            letters.append(y)
        out.append((coeff, tuple(letters)))
    return out


def realise(terms: list, gens: GeneratorSet) -> QDiffOperator:
    total = QDiffOperator()
    for c, word in terms:
        total = total + gens.word(word) * c
    return total


def star_relation_check(sigma: int) -> Report:
    gens = generators(sigma)
    report = Report(f"star(sigma={sigma})")
    for name, (lhs, rhs) in _relations_as_words().items():
        residual = realise(star_words(lhs), gens) - realise(star_words(rhs), gens)
        report.add(name, residual.is_zero(), "" if residual.is_zero() else str(residual),
                   sigma=sigma)
    return report


__all__ = [
    "QDiffOperator", "GeneratorSet", "CoproductRule", "op_mul", "commutator", "apply",
    "apply_ratio", "generators", "monomial_action", "verify_relations", "leibniz_check",
    "star_relation_check", "star_words", "realise", "relation_residuals", "I",
]
