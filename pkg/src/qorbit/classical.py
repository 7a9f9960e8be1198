"""Undeformed holomorphic discrete series of SL(2,R).

Covers the coadjoint orbit geometry and its upper-half-plane chart, the
first-order operators of the infinitesimal representation, the integrated
group action, and the L^2 norms of the SO(2)-eigenfunctions (exact closed
form plus an adaptive Gauss-Legendre cross-check).

Weights are integers: ``n`` stands for ``4 pi k`` throughout.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from qorbit.errors import DivergentIntegral, InvariantViolation, QuadratureFailure
from qorbit.exactfield import ONE_Z, ZERO_Z, GaussianRational, QScalar, Z, ZRational
from qorbit.report import Report

# Functions on the half-plane are ZRationals whose coefficients are
# u-free constants; no separate type is needed.
CRational = ZRational

_I = GaussianRational(0, 1)


def const(c) -> CRational:
    return ZRational.const(QScalar.const(c))


# -- differential operators ------------------------------------------------

@dataclass(frozen=True)
class DiffOperator:
    """``f -> p f' + r f``."""

    p: CRational
    r: CRational

    def __call__(self, f: CRational) -> CRational:
        return self.p * f.derivative() + self.r * f

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        return DiffOperator(self.p + other.p, self.r + other.r)

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return DiffOperator(self.p - other.p, self.r - other.r)

    def scale(self, c) -> "DiffOperator":
        k = const(c)
        return DiffOperator(self.p * k, self.r * k)

    def bracket(self, other: "DiffOperator") -> "DiffOperator":
        """Closed form of ``[A, B]`` for first-order operators."""
        p1, r1, p2, r2 = self.p, self.r, other.p, other.r
        return DiffOperator(p1 * p2.derivative() - p2 * p1.derivative(),
                            p1 * r2.derivative() - p2 * r1.derivative())


def rho(X: str, n: int, literal: bool = False) -> DiffOperator:
    """Infinitesimal discrete-series operators with ``4 pi k = n``.

    ``rho(E) = z^2 d/dz + n z``.  ``literal=True`` gives the variant with a
    constant term ``n`` instead of ``n z``; it is kept only to demonstrate
    that it breaks the eigenvalue relation and the sl2 brackets.
    """
    if X == "E":
        return DiffOperator(Z * Z, const(n) if literal else Z * const(n))
    if X == "F":
        return DiffOperator(const(-1), ZERO_Z)
    if X == "H":
        return DiffOperator(Z * const(2), const(n))
    raise ValueError(f"unknown generator {X!r}")


def classical_psi(m: int, n: int) -> CRational:
    """``(z - i)^m (z + i)^(-m-n)``."""
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    return (Z - const(_I)) ** m * (Z + const(_I)) ** (-(m + n))


def commutator_on(A: DiffOperator, B: DiffOperator, f: CRational) -> CRational:
    return A(B(f)) - B(A(f))


TEST_FUNCTIONS = (
    lambda: (Z * Z + const(3) * Z - const(_I)) / (Z**3 - const(2) * Z + const(GaussianRational(5, 1))),
    lambda: (Z + const(2)) ** -2 * const(GaussianRational(1, -3)),
    lambda: Z**4 - const(Fraction(1, 7)),
)


def bracket_checks(n: int, literal: bool = False) -> Report:
    """sl2 relations, each tested on generic rational functions by repeated
    differentiation and also compared with the closed-form bracket."""
    E, F, H = rho("E", n, literal), rho("F", n, literal), rho("H", n, literal)
    wanted = {
        "[H,E]=2E": (H, E, E.scale(2)),
        "[H,F]=-2F": (H, F, F.scale(-2)),
        "[E,F]=H": (E, F, H),
    }
    report = Report("brackets")
    for name, (A, B, C) in wanted.items():
        ok = True
        residual = ""
        for make in TEST_FUNCTIONS:
            f = make()
            diff = commutator_on(A, B, f) - C(f)
            if diff:
                ok = False
                residual = str(diff)
                break
        closed = A.bracket(B)
        ok = ok and closed.p == C.p and closed.r == C.r
        report.add(name, ok, residual, n=n)
    return report


def verify_classical(m: int, n: int, literal: bool = False) -> Report:
    """Eigenvalue and three-term relations for ``rho`` on ``psi_m``, plus brackets."""
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    psi = {k: classical_psi(k, n) for k in (m - 1, m, m + 1) if k >= 0}
    half_i = _I / 2

    def combo(a, b, c) -> CRational:
        out = psi[m] * const(b) + psi[m + 1] * const(c)
        if m > 0:
            out = out + psi[m - 1] * const(a)
        return out

    E, F, H = rho("E", n, literal), rho("F", n, literal), rho("H", n, literal)
    checks = {
        "rho(E-F)": ((E - F)(psi[m]), psi[m] * const(_I * (2 * m + n))),
        "rho(E)": (E(psi[m]), combo(half_i * m, half_i * (2 * m + n), half_i * (m + n))),
        "rho(F)": (F(psi[m]), combo(half_i * m, -half_i * (2 * m + n), half_i * (m + n))),
        "rho(H)": (H(psi[m]), combo(m, 0, -(m + n))),
    }
    report = Report("classical")
    for name, (lhs, rhs) in checks.items():
        diff = lhs - rhs
        report.add(name, diff.is_zero(), "" if not diff else str(diff), m=m, n=n)
    report.extend(bracket_checks(n, literal), m=m)
    return report


# -- group action ------------------------------------------------------------

@dataclass(frozen=True)
class Matrix2:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.a * self.d - self.b * self.c != 1:
            raise InvariantViolation(f"determinant {self.a * self.d - self.b * self.c} != 1")

    def __matmul__(self, o: "Matrix2") -> "Matrix2":
        return Matrix2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                       self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self) -> "Matrix2":
        return Matrix2(self.d, -self.b, -self.c, self.a)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    @classmethod
    def identity(cls) -> "Matrix2":
        return cls(1, 0, 0, 1)


def random_sl2(rng: random.Random, size: int = 5) -> Matrix2:
    """Pseudo-random det-1 rational matrix with small entries."""

    def r():
        return Fraction(rng.randint(-size, size), rng.randint(1, size))

    while True:
        a, b, c = r(), r(), r()
        if a:
            return Matrix2(a, b, c, (1 + b * c) / a)


def group_action(g: Matrix2, n: int, f: CRational) -> CRational:
    """``(d - b z)^(-n) f((-c + a z) / (d - b z))``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cocycle = const(g.d) - Z * const(g.b)
    w = (const(-g.c) + Z * const(g.a)) / cocycle
    return cocycle ** (-n) * f.compose(w)


GROUP_FAMILY = (
    lambda: ONE_Z,
    lambda: Z,
    lambda: (Z + const(_I)).inverse(),
)


def homomorphism_check(g1: Matrix2, g2: Matrix2, n: int, family=GROUP_FAMILY) -> Report:
    report = Report("group")
    g12 = g1 @ g2
    for idx, make in enumerate(family):
        f = make()
        lhs = group_action(g1, n, group_action(g2, n, f))
        rhs = group_action(g12, n, f)
        diff = lhs - rhs
        report.add(f"rho(g1)rho(g2)f{idx}=rho(g1g2)f{idx}", diff.is_zero(),
                   "" if not diff else str(diff), n=n)
    return report


# -- coadjoint geometry --------------------------------------------------------

@dataclass(frozen=True)
class OrbitPoint:
    x1: Fraction
    x2: Fraction
    x3: Fraction
    k: Fraction

    def __post_init__(self):
        for name in ("x1", "x2", "x3", "k"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.k <= 0:
            raise InvariantViolation("k must be positive")
        if self.x1 <= 0:
            raise InvariantViolation("the chosen leaf has x1 > 0")
        if self.invariant() != self.k**2:
            raise InvariantViolation(
                f"x1^2 - x2^2 - x3^2 = {self.invariant()} != k^2 = {self.k**2}")

    def invariant(self) -> Fraction:
        return self.x1**2 - self.x2**2 - self.x3**2

    def matrix(self):
        return ((self.x3, self.x1 + self.x2), (-self.x1 + self.x2, -self.x3))

    @classmethod
    def from_parameters(cls, t, x3, k) -> "OrbitPoint":
        """Rational point on the leaf with ``x1 - x2 = t > 0``."""
        t, x3, k = Fraction(t), Fraction(x3), Fraction(k)
        s = (k * k + x3 * x3) / t
        return cls((t + s) / 2, (s - t) / 2, x3, k)


def _mat_mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))


def _transpose(A):
    return ((A[0][0], A[1][0]), (A[0][1], A[1][1]))


def coadjoint(g: Matrix2, x: OrbitPoint) -> OrbitPoint:
    """Coadjoint action under the trace pairing: ``X -> (g X^t g^-1)^t``."""
    G = g.rows()
    Ginv = g.inverse().rows()
    Y = _transpose(_mat_mul(_mat_mul(G, _transpose(x.matrix())), Ginv))
    x3 = Y[0][0]
    x1 = (Y[0][1] - Y[1][0]) / 2
    x2 = (Y[0][1] + Y[1][0]) / 2
    return OrbitPoint(x1, x2, x3, x.k)


def chart(x: OrbitPoint) -> GaussianRational:
    """``z = (x1 + x2) / (x3 - i k)``, a point of the upper half-plane."""
    return GaussianRational(x.x1 + x.x2) / GaussianRational(x.x3, -x.k)


def moebius(g: Matrix2, z: GaussianRational) -> GaussianRational:
    """``(c + d z) / (a + b z)``."""
    z = GaussianRational.coerce(z)
    return (GaussianRational(g.c) + GaussianRational(g.d) * z) / (
        GaussianRational(g.a) + GaussianRational(g.b) * z)


def chart_equivariance(g: Matrix2, x: OrbitPoint) -> Report:
    """The chart intertwines the coadjoint action with the Moebius action,
    and the image stays on the orbit and in the upper half-plane."""
    report = Report("orbit")
    y = coadjoint(g, x)
    lhs, rhs = chart(y), moebius(g, chart(x))
    report.add("chart(Ad*g x)=g.chart(x)", lhs == rhs, "" if lhs == rhs else f"{lhs} != {rhs}")
    report.add("Ad*g x on orbit", y.invariant() == x.k**2 and y.x1 > 0, "")
    report.add("chart in upper half-plane", lhs.im > 0, "" if lhs.im > 0 else str(lhs))
    return report


# -- norms ----------------------------------------------------------------------

@dataclass(frozen=True)
class NormValue:
    """``coeff * pi``."""

    coeff: Fraction

    def __post_init__(self):
        if self.coeff < 0:
            raise ValueError("norm must be nonnegative")

    def __float__(self):
        return float(self.coeff) * math.pi

    def to_json(self) -> dict:
        return {"pi_multiple": f"{self.coeff.numerator}/{self.coeff.denominator}"}

    def __str__(self):
        c = self.coeff
        if c == 1:
            return "pi"
        if c.denominator == 1:
            return f"{c.numerator}*pi"
        if c.numerator == 1:
            return f"pi/{c.denominator}"
        return f"{c.numerator}*pi/{c.denominator}"


def norm_closed(m: int, n: int) -> NormValue:
    """Squared norm ``4^(1-n) pi m! (n-2)! / (m+n-1)!``."""
    if n < 2:
        raise DivergentIntegral("the weighted L^2 norm diverges for n < 2")
    if m < 0:
        raise ValueError("m must be >= 0")
    coeff = Fraction(math.factorial(m) * math.factorial(n - 2),
                     4 ** (n - 1) * math.factorial(m + n - 1))
    return NormValue(coeff)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    evaluations: int

    def to_json(self) -> dict:
        v = self.value
        val = f"{v.real:.15g}" if abs(v.imag) <= 1e-300 else f"{v.real:.15g}{v.imag:+.15g}j"
        return {"value": val, "error_estimate": f"{self.error:.3g}",
                "evaluations": self.evaluations}


_GL_POINTS = 16
_BUDGET = 2**22


def _psi_numeric(m: int, n: int, z: np.ndarray) -> np.ndarray:
    return (z - 1j) ** m * (z + 1j) ** (-(m + n))


def _graded_nodes(panels: int, x: np.ndarray, w: np.ndarray):
    """Composite GL nodes on [-1, 1] pushed through the quintic grading
    ``g = (15 v - 10 v^3 + 3 v^5) / 8``, whose derivative vanishes to second
    order at both ends.  Returns ``g(v)`` and ``g'(v) * weight``."""
    edges = np.linspace(-1.0, 1.0, panels + 1)
    half = (edges[1:] - edges[:-1]) / 2
    mid = (edges[1:] + edges[:-1]) / 2
    v = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wv = (half[:, None] * w[None, :]).ravel()
    g = (15 * v - 10 * v**3 + 3 * v**5) / 8
    dg = 15 / 8 * (1 - v**2) ** 2
    return g, dg * wv


def _tensor_rule(integrand, panels: int, x, w):
    g, wg = _graded_nodes(panels, x, w)
    s = math.pi / 2 * g
    t = math.pi / 4 * (1 + g)
    ws = math.pi / 2 * wg / np.cos(s) ** 2
    wt = math.pi / 4 * wg / np.cos(t) ** 2
    X = np.tan(s)[:, None]
    Y = np.tan(t)[None, :]
    vals = integrand(X + 1j * Y, Y)
    return complex(np.einsum("i,ij,j->", ws, vals, wt)), s.size * t.size


def adaptive_half_plane(integrand, tol: float, scale: float | None = None) -> QuadResult:
    """Integrate over R x R_+ after ``x = tan s``, ``y = tan t``.

    The mapped integrand is bounded but, for n = 2, discontinuous at the
    corner where both coordinates run off to infinity; an endpoint grading
    of ``s`` and ``t`` flattens that corner.  Tensor Gauss-Legendre on a
    dyadically refined panel grid; stops when two
    successive levels agree to ``tol`` (relative to ``scale`` when given,
    otherwise to the current estimate).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x, w = np.polynomial.legendre.leggauss(_GL_POINTS)
    used = 0
    panels = 1
    prev, cost = _tensor_rule(integrand, panels, x, w)
    used += cost
    while True:
        panels *= 2
        if used + (panels * _GL_POINTS) ** 2 > _BUDGET:
            raise QuadratureFailure(f"no convergence to {tol} within {_BUDGET} evaluations")
        cur, cost = _tensor_rule(integrand, panels, x, w)
        used += cost
        err = abs(cur - prev)
        ref = scale if scale is not None else abs(cur)
        if err <= tol * ref:
            return QuadResult(cur, err, used)
        prev = cur


def norm_quadrature(m: int, n: int, tol: float = 1e-8) -> QuadResult:
    """Numerical ``int |psi_m|^2 y^(n-2) dx dy`` over the upper half-plane."""
    if n < 2:
        raise DivergentIntegral("the weighted L^2 norm diverges for n < 2")

    def integrand(z, y):
        return np.abs(_psi_numeric(m, n, z)) ** 2 * y ** (n - 2)

    res = adaptive_half_plane(integrand, tol)
    return QuadResult(complex(res.value.real, 0.0), res.error, res.evaluations)


def inner_quadrature(m: int, mp: int, n: int, tol: float = 1e-8) -> QuadResult:
    """Numerical ``int psi_m conj(psi_m') y^(n-2)``; tolerance relative to the
    geometric mean of the two closed-form norms."""
    if n < 2:
        raise DivergentIntegral("the weighted L^2 norm diverges for n < 2")
    scale = math.sqrt(float(norm_closed(m, n)) * float(norm_closed(mp, n)))

    def integrand(z, y):
        return _psi_numeric(m, n, z) * np.conj(_psi_numeric(mp, n, z)) * y ** (n - 2)

    return adaptive_half_plane(integrand, tol, scale=scale)


__all__ = [
    "CRational", "DiffOperator", "Matrix2", "OrbitPoint", "NormValue", "QuadResult",
    "rho", "classical_psi", "verify_classical", "bracket_checks", "group_action",
    "homomorphism_check", "random_sl2", "coadjoint", "chart", "moebius", "chart_equivariance", "norm_closed",
    "norm_quadrature", "inner_quadrature", "adaptive_half_plane",
]
