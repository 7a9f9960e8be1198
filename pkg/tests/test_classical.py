from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from qorbit.classical import (
    Matrix2,
    NormValue,
    OrbitPoint,
    adaptive_half_plane,
    bracket_checks,
    chart,
    chart_equivariance,
    classical_psi,
    coadjoint,
    const,
    group_action,
    homomorphism_check,
    inner_quadrature,
    moebius,
    norm_closed,
    norm_quadrature,
    random_sl2,
    rho,
    verify_classical,
)
from qorbit.errors import DivergentIntegral, InvariantViolation, QuadratureFailure
from qorbit.exactfield import GaussianRational, Z


# -- operators and brackets ---------------------------------------------------------

@pytest.mark.parametrize("m,n", [(0, 1), (0, 2), (3, 2), (12, 6), (5, 4)])
def test_verify_classical(m, n):
    report = verify_classical(m, n)
    assert report.ok, str(report)


def test_literal_rho_e_fails():
    report = verify_classical(2, 3, literal=True)
    failing = {c.check for c in report.failures()}
    assert {"rho(E-F)", "rho(E)", "[H,E]=2E", "[E,F]=H"} <= failing
    assert "rho(F)" not in failing and "[H,F]=-2F" not in failing


@pytest.mark.parametrize("n", [1, 4])
def test_brackets(n):
    assert bracket_checks(n).ok


def test_rho_on_psi0_is_eigenfunction():
    # (E - F) psi_0 = i n psi_0, checked by evaluation at a point
    n = 3
    f = classical_psi(0, n)
    g = (rho("E", n) - rho("F", n))(f)
    z = 0.4 + 0.9j
    assert abs(g.evaluate(z) - 1j * n * f.evaluate(z)) < 1e-12


# -- group action ------------------------------------------------------------------

def test_matrix_invariants():
    with pytest.raises(InvariantViolation):
        Matrix2(1, 1, 1, 1)
    g = Matrix2(2, 3, 1, 2)
    assert g @ g.inverse() == Matrix2.identity()


@pytest.mark.parametrize("n", [1, 2, 5])
def test_homomorphism(n):
    rng = random.Random(7)
    for _ in range(5):
        assert homomorphism_check(random_sl2(rng), random_sl2(rng), n).ok


def test_group_action_numeric():
    g = Matrix2(Fraction(1, 2), 1, Fraction(-1, 2), 1)
    f = (Z + const(GaussianRational(0, 1))).inverse()
    n = 2
    h = group_action(g, n, f)
    z = 0.3 + 1.4j
    w = (-g.c + g.a * z) / (g.d - g.b * z)
    want = (float(g.d) - float(g.b) * z) ** (-n) * f.evaluate(w)
    assert abs(h.evaluate(z) - want) < 1e-12


# -- orbit geometry -------------------------------------------------------------------

def test_orbit_point_invariants():
    x = OrbitPoint.from_parameters(Fraction(3, 2), 2, 1)
    assert x.invariant() == 1
    with pytest.raises(InvariantViolation):
        OrbitPoint(1, 1, 1, 1)


def test_chart_equivariance():
    rng = random.Random(3)
    x = OrbitPoint.from_parameters(Fraction(1, 3), Fraction(-2, 5), 2)
    for _ in range(10):
        g = random_sl2(rng)
        assert chart_equivariance(g, x).ok
        assert chart(coadjoint(g, x)) == moebius(g, chart(x))


def test_chart_of_base_point_is_i():
    assert chart(OrbitPoint(1, 0, 0, 1)) == GaussianRational(0, 1)


# -- norms ---------------------------------------------------------------------------

def test_norm_closed_values():
    assert norm_closed(0, 2) == NormValue(Fraction(1, 4))
    assert str(norm_closed(0, 2)) == "pi/4"
    assert norm_closed(0, 2).to_json() == {"pi_multiple": "1/4"}
    with pytest.raises(DivergentIntegral):
        norm_closed(0, 1)


def _scipy_norm(m, n):
    def f(y, x):
        z = complex(x, y)
        return abs((z - 1j) ** m / (z + 1j) ** (m + n)) ** 2 * y ** (n - 2)
    val, _ = integrate.dblquad(f, -np.inf, np.inf, 0, np.inf, epsabs=1e-12, epsrel=1e-10)
    return val


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("m,n", [(0, 2), (1, 3), (2, 4)])
def test_norm_against_scipy(m, n):
    ref = _scipy_norm(m, n)
    assert abs(ref / float(norm_closed(m, n)) - 1) < 1e-6
    got = norm_quadrature(m, n, 1e-8)
    assert abs(got.value.real / ref - 1) < 1e-6


def test_quarter_pi():
    res = norm_quadrature(0, 2, 1e-8)
    assert abs(res.value.real - math.pi / 4) < 1e-8
    assert res.error < 1e-8


@pytest.mark.parametrize("n", [2, 3, 5])
def test_orthogonality(n):
    for m in range(3):
        for mp in range(m + 1, 4):
            assert abs(inner_quadrature(m, mp, n, 1e-8).value) < 1e-7


def test_quadrature_reports_non_convergence():
    # an integrand with a non-integrable singularity cannot settle
    with pytest.raises(QuadratureFailure):
        adaptive_half_plane(lambda z, y: 1 / y ** 1.5, 1e-10)
