"""The q-deformed discrete series: basis functions, eigenvalue identity and
the tridiagonal action of EK^-1, FK^-1, K^-2.

Everything here is decided by exact arithmetic.  The tridiagonal
coefficients are obtained twice: by solving a linear system over
Q(i)(u) built from the operator images (``decompose_tridiagonal``), and by
transcribing the reference closed forms (``expected_coeffs``).
"""

from __future__ import annotations

from dataclasses import dataclass

from qorbit.errors import EvaluationPole, NotInTridiagonalSpan, SingularSystem
from qorbit.exactfield import (
    I,
    ONE,
    ONE_Z,
    ZERO,
    FactoredZ,
    GaussianRational,
    QScalar,
    ZRational,
    q_number,
)
from qorbit.exactfield.zfunc import ZPoly, zpoly_exact_div, zpoly_gcd
from qorbit.qop import QDiffOperator, apply, apply_ratio, generators, op_mul
from qorbit.report import Report

OPERATORS = ("EKinv", "FKinv", "Kinv2")


@dataclass(frozen=True)
class QSeriesParams:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"weight n must be >= 1, got {self.n}")
        if self.m < 0:
            raise ValueError(f"basis index m must be >= 0, got {self.m}")

    @property
    def sigma(self) -> int:
        return -self.n


@dataclass(frozen=True)
class TridiagonalCoeffs:
    alpha: QScalar
    beta: QScalar
    gamma: QScalar

    def as_tuple(self) -> tuple:
        return (self.alpha, self.beta, self.gamma)

    def __iter__(self):
        return iter(self.as_tuple())


def _q(k: int) -> QScalar:
    return QScalar.q_power(k)


def psi(p: QSeriesParams) -> FactoredZ:
    """``prod_{j<m} (q^(2(j+n)) z - i) / prod_{j<m+n} (q^(2(j-m)) z + i)``."""
    m, n = p.m, p.n
    factors = [(_q(2 * (j + n)), -I, 1) for j in range(m)]
    factors += [(_q(2 * (j - m)), I, -1) for j in range(m + n)]
    return FactoredZ(ONE, factors)


def _basis(p: QSeriesParams, m: int) -> FactoredZ:
    return psi(QSeriesParams(p.n, m))


def eigen_operator(n: int) -> QDiffOperator:
    """``q^(2n) E K - F K`` for the weight-n action."""
    g = generators(-n)
    return op_mul(g.E, g.K) * _q(2 * n) - op_mul(g.F, g.K)


def eigenvalue(p: QSeriesParams) -> QScalar:
    return I * _q(p.n) * q_number(2 * p.m + p.n)


def tridiagonal_operator(which: str, n: int) -> QDiffOperator:
    g = generators(-n)
    if which == "EKinv":
        return op_mul(g.E, g.Kinv)
    if which == "FKinv":
        return op_mul(g.F, g.Kinv)
    if which == "Kinv2":
        return op_mul(g.Kinv, g.Kinv)
    raise ValueError(f"unknown operator {which!r}")


def compact_eigencheck(p: QSeriesParams, direct: bool = False) -> Report:
    """Residual of the eigenvalue identity for ``psi_m``.

    The default path divides by ``psi_m`` before expanding; ``direct=True``
    applies the operator to the fully expanded function instead (slow, used
    as an independent cross-check on small cells).
    """
    op = eigen_operator(p.n)
    lam = eigenvalue(p)
    f = psi(p)
    if direct:
        F = f.expand()
        residual = apply(op, F) - F.scale(lam)
    else:
        ratio = apply_ratio(op, f) - ZRational.const(lam)
        residual = ratio * f.expand() if ratio else ratio
    report = Report("eigen")
    report.add("q^2nEK-FK", residual.is_zero(), "" if not residual else str(residual),
               m=p.m, n=p.n)
    return report


# -- exact decomposition --------------------------------------------------

def _common_polys(funcs: list[ZRational]) -> list[ZPoly]:
    """Numerators of ``funcs`` over one common denominator and z-power."""
    lcm = funcs[0].den
    for f in funcs[1:]:
        g = zpoly_gcd(lcm, f.den)
        lcm = lcm * zpoly_exact_div(f.den, g)
    zmin = min(f.zshift for f in funcs)
    out = []
    for f in funcs:
        out.append((f.num * zpoly_exact_div(lcm, f.den)).zshift(f.zshift - zmin))
    return out


def solve_combination(basis: list[ZRational], target: ZRational) -> list[QScalar]:
    """Exact ``x`` with ``sum x_k basis_k = target``, or raise.

    Gaussian elimination on the z-coefficient rows; every row not used as
    a pivot must reduce to ``0 = 0``.  Afterwards the combination is
    re-evaluated as a rational function, so a returned solution is proven.
    """
    polys = _common_polys(list(basis) + [target])
    cols, rhs = polys[:-1], polys[-1]
    degree = max(p.degree() for p in polys)
    rows = [[c.coeff(j) for c in cols] + [rhs.coeff(j)] for j in range(degree + 1)]
    k = len(cols)
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            raise SingularSystem(f"basis functions are linearly dependent (column {col})")
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(r)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][k]:
            raise NotInTridiagonalSpan(f"inconsistent coefficient row: 0 = {rows[i][k]}")
    x = [rows[i][k] for i in pivots]
    total = ZRational.const(ZERO)
    for xi, b in zip(x, basis):
        total = total + b.scale(xi) if xi else total
    if total != target:
        raise NotInTridiagonalSpan("solution does not reproduce the target")
    return x


def decompose_tridiagonal(A: QDiffOperator, p: QSeriesParams) -> TridiagonalCoeffs:
    """Coefficients of ``A psi_m`` on ``psi_{m-1}, psi_m, psi_{m+1}``."""
    f = psi(p)
    g = apply_ratio(A, f)
    up = (_basis(p, p.m + 1) / f).expand()
    if p.m == 0:
        beta, gamma = solve_combination([ONE_Z, up], g)
        return TridiagonalCoeffs(ZERO, beta, gamma)
    down = (_basis(p, p.m - 1) / f).expand()
    alpha, beta, gamma = solve_combination([down, ONE_Z, up], g)
    return TridiagonalCoeffs(alpha, beta, gamma)


# -- transcribed closed forms ---------------------------------------------

def expected_coeffs(which: str, p: QSeriesParams, amended: bool = False) -> TridiagonalCoeffs:
    """The nine reference coefficients, transcribed term by term.

    ``amended=True`` replaces the middle K^-2 coefficient by the derived
    value, whose leading power is ``q^(4m+n)`` instead of the transcribed
    ``q^(4m+2)`` (the two agree only for n = 2).
    """
    m, n = p.m, p.n
    a = 4 * m + 2 * n
    d1 = 1 + _q(a - 2)
    d2 = 1 + _q(a)
    d3 = 1 + _q(a + 2)
    one_q2 = 1 + _q(2)
    one_n = 1 + _q(2 * (n - 1))
    qm2 = q_number(m, 2)
    qmn2 = q_number(m + n, 2)
    q2m_n = q_number(2 * m + n)
    if which == "EKinv":
        alpha = I * _q(4 * m + n - 1) * one_q2 * qm2 / (d1 * d2)
        beta = I * _q(4 * m + 2) * one_n * q2m_n / (d1 * d3)
        gamma = I * _q(4 * m + n + 1) * one_q2 * qmn2 / (d2 * d3)
    elif which == "FKinv":
        alpha = I * _q(8 * m + 5 * n - 5) * one_q2 * qm2 / (d1 * d2)
        beta = -I * _q(4 * m + 2 * n) * one_n * q2m_n / (d1 * d3)
        gamma = I * _q(n - 3) * one_q2 * qmn2 / (d2 * d3)
    elif which == "Kinv2":
        q2diff = _q(2) - _q(-2)
        alpha = -q2diff * _q(6 * m + 3 * n - 2) * qm2 / (d1 * d2)
        lead = _q(4 * m + n) if amended else _q(4 * m + 2)
        beta = lead * one_n * one_q2 / (d1 * d3)
        gamma = q2diff * _q(2 * m + n) * qmn2 / (d2 * d3)
    else:
        raise ValueError(f"unknown operator {which!r}")
    return TridiagonalCoeffs(alpha, beta, gamma)


def compare_coeffs(derived: TridiagonalCoeffs, expected: TridiagonalCoeffs) -> list[str]:
    """Names of mismatching entries with both values, empty when equal."""
    out = []
    for name, d, e in zip(("alpha", "beta", "gamma"), derived, expected):
        if d != e:
            out.append(f"{name}: derived={d} expected={e}")
    return out


def verify_tridiagonal(p: QSeriesParams, amended: bool = False,
                       expected=None) -> Report:
    """Solve for each operator's triple and compare with the closed forms.

    ``expected`` may replace :func:`expected_coeffs` (negative controls).
    """
    expected = expected or expected_coeffs
    report = Report("tridiag")
    for which in OPERATORS:
        op = tridiagonal_operator(which, p.n)
        try:
            derived = decompose_tridiagonal(op, p)
        except NotInTridiagonalSpan as exc:
            report.add(which, False, f"not tridiagonal: {exc}", m=p.m, n=p.n)
            continue
        want = expected(which, p, amended=amended) if expected is expected_coeffs \
            else expected(which, p)
        diffs = compare_coeffs(derived, want)
        report.add(which, not diffs, "; ".join(diffs), m=p.m, n=p.n)
    return report


# -- classical limit --------------------------------------------------------

def classical_triple(which: str, p: QSeriesParams) -> tuple:
    m, n = p.m, p.n
    half_i = GaussianRational(0, 1) / 2
    if which == "EKinv":
        return (half_i * m, half_i * (2 * m + n), half_i * (m + n))
    if which == "FKinv":
        return (half_i * m, -half_i * (2 * m + n), half_i * (m + n))
    if which == "Kinv2":
        return (GaussianRational(0), GaussianRational(1), GaussianRational(0))
    raise ValueError(f"unknown operator {which!r}")


def classical_limit_coeffs(which: str, p: QSeriesParams, amended: bool = False):
    """Entrywise ``u = 1`` of the closed forms, and whether it matches the
    undeformed tridiagonal action."""
    coeffs = expected_coeffs(which, p, amended=amended)
    try:
        triple = tuple(c.classical_limit() for c in coeffs)
    except EvaluationPole:
        return None, False
    return triple, triple == classical_triple(which, p)


def classical_psi_limit(p: QSeriesParams) -> ZRational:
    """``psi_m`` expanded and evaluated at ``u = 1``."""
    return psi(p).expand().classical_limit()


__all__ = [
    "QSeriesParams", "TridiagonalCoeffs", "OPERATORS", "psi", "eigen_operator", "eigenvalue",
    "tridiagonal_operator", "compact_eigencheck", "decompose_tridiagonal",
    "solve_combination", "expected_coeffs", "compare_coeffs", "verify_tridiagonal",
    "classical_triple", "classical_limit_coeffs", "classical_psi_limit",
]
