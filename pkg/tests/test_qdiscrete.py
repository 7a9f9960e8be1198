from __future__ import annotations

import mpmath as mp
import pytest

from qorbit.errors import NotInTridiagonalSpan, SingularSystem
from qorbit.exactfield import I, ONE_Z, U, Z, GaussianRational, ZRational
from qorbit.exactfield.zfunc import format_factored
from qorbit.qdiscrete import (
    OPERATORS,
    QSeriesParams,
    TridiagonalCoeffs,
    classical_limit_coeffs,
    classical_psi_limit,
    compact_eigencheck,
    decompose_tridiagonal,
    eigenvalue,
    expected_coeffs,
    psi,
    solve_combination,
    tridiagonal_operator,
    verify_tridiagonal,
)
from qorbit.classical import classical_psi
from qorbit.qop import apply

mp.mp.dps = 40


# -- high-precision oracle built from the product formula ----------------------

def psi_num(m, n, z, u):
    q = u * u
    val = mp.mpf(1)
    for j in range(m):
        val *= q ** (2 * (j + n)) * z - 1j
    for j in range(m + n):
        val /= q ** (2 * (j - m)) * z + 1j
    return val


def op_num(which, n, f, z, u):
    q = u * u
    sig = -n
    K = lambda g: lambda w: u ** (-sig) * g(q * w)  # noqa: E731
    Kinv = lambda g: lambda w: u ** sig * g(w / q)  # noqa: E731
    E = lambda g: lambda w: w * (u ** (-3 * sig) * g(q * w) - u ** sig * g(w / q)) / (q - 1 / q)  # noqa: E731
    F = lambda g: lambda w: (-(u ** sig) * g(q * w) + u ** sig * g(w / q)) / (w * (q - 1 / q))  # noqa: E731
    if which == "EKinv":
        return E(Kinv(f))(z)
    if which == "FKinv":
        return F(Kinv(f))(z)
    return Kinv(Kinv(f))(z)


def _rat(x):
    return mp.mpf(int(x.numerator)) / int(x.denominator)


def _eval_exact(c, u):
    def poly(p):
        return sum(mp.mpc(_rat(x.re), _rat(x.im)) * u ** k for k, x in p.items())
    return poly(c.num) / poly(c.den)


def residual_num(which, m, n, coeffs: TridiagonalCoeffs, z, u):
    f = lambda w: psi_num(m, n, w, u)  # noqa: E731
    lhs = op_num(which, n, f, z, u)
    rhs = _eval_exact(coeffs.beta, u) * psi_num(m, n, z, u) \
        + _eval_exact(coeffs.gamma, u) * psi_num(m + 1, n, z, u)
    if m:
        rhs += _eval_exact(coeffs.alpha, u) * psi_num(m - 1, n, z, u)
    return abs(lhs - rhs) / abs(lhs)


# -- basics ---------------------------------------------------------------------

def test_params_validation():
    with pytest.raises(ValueError):
        QSeriesParams(0, 1)
    with pytest.raises(ValueError):
        QSeriesParams(1, -1)


def test_psi_rendering():
    f = psi(QSeriesParams(1, 1))
    assert format_factored(f, q_notation=True) == "(q^2 z - i)/((q^-2 z + i)(z + i))"
    assert psi(QSeriesParams(1, 0)).expand() == (Z + ZRational.const(I)).inverse()


def test_psi_against_oracle():
    u = mp.mpf("1.1")
    z = mp.mpc("0.3", "0.8")
    for m, n in [(0, 1), (2, 3), (4, 2)]:
        exact = psi(QSeriesParams(n, m)).expand()
        assert abs(exact.evaluate(complex(z), float(u)) - psi_num(m, n, z, u)) < 1e-12


def test_ek_inv_on_psi0_example():
    ek = tridiagonal_operator("EKinv", 1)
    got = apply(ek, psi(QSeriesParams(1, 0)).expand())
    want = Z * ZRational.const(I * U**4) / (
        Z * Z + Z * ZRational.const(I * (1 + U**4)) - ZRational.const(U**4))
    assert got == want


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("m", [0, 1, 2])
def test_eigen_direct_vs_ratio(m, n):
    p = QSeriesParams(n, m)
    assert compact_eigencheck(p).ok
    assert compact_eigencheck(p, direct=True).ok


def test_eigenvalue_limit():
    # i q^n [2m+n]_q -> i (2m+n) at u = 1
    assert eigenvalue(QSeriesParams(3, 2)).classical_limit() == GaussianRational(0, 7)


# -- tridiagonal coefficients ---------------------------------------------------------

def test_decompose_example_ek_0_1():
    d = decompose_tridiagonal(tridiagonal_operator("EKinv", 1), QSeriesParams(1, 0))
    assert str(d.alpha) == "0"
    assert str(d.beta) == str(d.gamma) == "(i*u^4)/(1 + u^8)"
    assert expected_coeffs("EKinv", QSeriesParams(1, 0)) == d


@pytest.mark.parametrize("n", range(1, 4))
@pytest.mark.parametrize("m", range(0, 5))
def test_amended_closed_forms_match(m, n):
    report = verify_tridiagonal(QSeriesParams(n, m), amended=True)
    assert report.ok, str(report)


@pytest.mark.parametrize("which", OPERATORS)
@pytest.mark.parametrize("m,n", [(0, 1), (2, 2), (3, 4), (1, 5)])
def test_derived_coefficients_against_oracle(which, m, n):
    p = QSeriesParams(n, m)
    derived = decompose_tridiagonal(tridiagonal_operator(which, n), p)
    for u, z in [(mp.mpf("1.3"), mp.mpc("0.2", "1.1")), (mp.mpf("0.7"), mp.mpc("-1.5", "0.4"))]:
        assert residual_num(which, m, n, derived, z, u) < mp.mpf(10) ** -30


@pytest.mark.parametrize("m", [0, 3])
@pytest.mark.parametrize("n", [1, 3, 4])
def test_reference_k2_middle_coefficient_fails_oracle(m, n):
    # the oracle confirms which side of the discrepancy is right
    p = QSeriesParams(n, m)
    reference = expected_coeffs("Kinv2", p)
    amended = expected_coeffs("Kinv2", p, amended=True)
    u, z = mp.mpf("1.3"), mp.mpc("0.2", "1.1")
    assert residual_num("Kinv2", m, n, reference, z, u) > 1e-6
    assert residual_num("Kinv2", m, n, amended, z, u) < mp.mpf(10) ** -30


def test_k2_middle_coefficient_discrepancy():
    # literal transcription: only the K^-2 middle coefficient is off, exactly when n != 2
    for n in range(1, 5):
        for m in range(0, 4):
            report = verify_tridiagonal(QSeriesParams(n, m))
            failing = {c.check for c in report.failures()}
            if n == 2:
                assert not failing
            else:
                assert failing == {"Kinv2"}
                residual = report.failures()[0].residual
                assert residual.startswith("beta:") and "alpha" not in residual and "gamma" not in residual


def test_alpha_vanishes_at_bottom():
    for which in OPERATORS:
        for n in (1, 4):
            d = decompose_tridiagonal(tridiagonal_operator(which, n), QSeriesParams(n, 0))
            assert not d.alpha


def test_negative_control_detects_wrong_gamma():
    def perturbed(which, p):
        c = expected_coeffs(which, p, amended=True)
        return TridiagonalCoeffs(c.alpha, c.beta, c.gamma * U**2)

    report = verify_tridiagonal(QSeriesParams(2, 1), expected=perturbed)
    assert report.failed == 3
    assert all(f.residual.startswith("gamma:") for f in report.failures())


def test_solver_rejects_targets_outside_span():
    with pytest.raises(NotInTridiagonalSpan):
        solve_combination([ONE_Z, Z], Z * Z)
    with pytest.raises(SingularSystem):
        solve_combination([Z, Z * ZRational.const(U)], Z)
    assert solve_combination([ONE_Z, Z], Z * ZRational.const(U) + ONE_Z) == [1, U]


# -- q -> 1 ----------------------------------------------------------------------

@pytest.mark.parametrize("which", OPERATORS)
@pytest.mark.parametrize("m,n", [(0, 1), (1, 1), (5, 3), (12, 6)])
def test_classical_limit_coeffs(which, m, n):
    triple, ok = classical_limit_coeffs(which, QSeriesParams(n, m))
    assert ok, triple


def test_classical_limit_example():
    triple, ok = classical_limit_coeffs("EKinv", QSeriesParams(1, 1))
    half_i = GaussianRational(0, 1) / 2
    assert ok and triple == (half_i, half_i * 3, half_i * 2)


@pytest.mark.parametrize("m,n", [(0, 1), (3, 2), (6, 5)])
def test_psi_classical_limit(m, n):
    assert classical_psi_limit(QSeriesParams(n, m)) == classical_psi(m, n)
