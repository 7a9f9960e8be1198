from __future__ import annotations

import dataclasses

import pytest

from qorbit.exactfield import I, ONE, ONE_Z, Q, U, Z, ZRational, q_number
from qorbit.qop import (
    CoproductRule,
    QDiffOperator,
    apply,
    apply_ratio,
    commutator,
    generators,
    leibniz_check,
    monomial_action,
    op_mul,
    star_relation_check,
    star_words,
    verify_relations,
)
from qorbit.qdiscrete import QSeriesParams, psi

S = QDiffOperator.shift
zp = QDiffOperator.zpow


# -- numeric oracle: the operators written out as plain callables ------------

def numeric_generators(sigma: int, u: float):
    q = u * u
    c = 1 / (q - 1 / q)
    return {
        "K": lambda f: lambda z: u ** -sigma * f(q * z),
        "Kinv": lambda f: lambda z: u ** sigma * f(z / q),
        "E": lambda f: lambda z: z * c * (u ** (-3 * sigma) * f(q * z) - u ** sigma * f(z / q)),
        "F": lambda f: lambda z: c / z * (-(u ** sigma) * f(q * z) + u ** sigma * f(z / q)),
    }


def test_normal_ordering_rule():
    # z^a S^b z^c S^d = q^(bc) z^(a+c) S^(b+d)
    lhs = op_mul(zp(1) * 1, S(2)) * 1
    assert op_mul(lhs, op_mul(zp(3), S(-1))) == op_mul(zp(4), S(1)) * Q**6


def test_operator_algebra_basics():
    A = zp(1) + S(1) * U
    assert A - A == QDiffOperator()
    assert op_mul(S(1), S(-1)) == QDiffOperator.identity()
    assert commutator(A, A).is_zero()
    with pytest.raises(ValueError):
        A ** -1


def test_apply_example():
    E = generators(-2).E
    assert apply(E, ONE_Z) == Z * ZRational.const(1 + U**4)


def test_apply_ratio_matches_apply():
    g = generators(-1)
    f = psi(QSeriesParams(1, 2))
    A = op_mul(g.E, g.Kinv) + g.F * I
    assert apply_ratio(A, f) * f.expand() == apply(A, f.expand())


@pytest.mark.parametrize("sigma", [0, -1, -3])
@pytest.mark.parametrize("X", ["K", "Kinv", "E", "F"])
def test_generators_against_numeric_oracle(sigma, X):
    u = 1.07
    f = (Z * Z + ZRational.const(I)) / (Z + ZRational.const(3))
    exact = apply(generators(sigma)[X], f)
    fn = numeric_generators(sigma, u)[X](lambda z: f.evaluate(z, u))
    for z in (0.4 + 0.9j, -1.3 + 0.2j):
        assert abs(exact.evaluate(z, u) - fn(z)) < 1e-9 * (1 + abs(fn(z)))


@pytest.mark.parametrize("sigma", [0, -2])
@pytest.mark.parametrize("j", [0, 1, 4])
@pytest.mark.parametrize("X", ["K", "Kinv", "E", "F"])
def test_monomial_action(sigma, j, X):
    c, k = monomial_action(X, sigma, j)
    assert apply(generators(sigma)[X], ZRational.monomial(j)) == ZRational.monomial(k, c)


def test_relations_hold_numerically_without_normal_ordering():
    u, sigma = 1.11, -3
    g = numeric_generators(sigma, u)
    q = u * u
    f = lambda z: (z**2 + 1j) / (z + 3)  # noqa: E731
    z = 0.3 + 1.2j
    ke = g["K"](g["E"](f))(z) - q * g["E"](g["K"](f))(z)
    ef = g["E"](g["F"](f))(z) - g["F"](g["E"](f))(z)
    kk = (g["K"](g["K"](f))(z) - g["Kinv"](g["Kinv"](f))(z)) / (q - 1 / q)
    assert abs(ke) < 1e-9
    assert abs(ef - kk) < 1e-9 * abs(kk)


@pytest.mark.parametrize("n", range(0, 9))
def test_relations(n):
    report = verify_relations(-n)
    assert report.ok, str(report)
    assert report.passed == 5


def test_relations_negative_control():
    g = generators(-2)
    broken = dataclasses.replace(g, E=g.E * U)
    report = verify_relations(-2, broken)
    assert not report.ok
    assert {c.check for c in report.failures()} == {"[E,F]=(K^2-K^-2)/(q-q^-1)"}
    other = dataclasses.replace(g, K=g.K + QDiffOperator.identity())
    assert verify_relations(-2, other).failed >= 3


def test_leibniz_small():
    assert leibniz_check(2).ok


def test_leibniz_negative_control():
    # the undeformed rule Delta E = E x 1 + 1 x E fails once q != 1
    rule = CoproductRule()
    wrong = dict(rule.delta)
    wrong["E"] = ((ONE, ("E",), ()), (ONE, (), ("E",)))
    report = leibniz_check(2, CoproductRule(delta=wrong))
    assert not report.ok
    assert all(c.check.startswith("E(") for c in report.failures())


def test_counit_law():
    assert all(CoproductRule().counit_law().values())


@pytest.mark.parametrize("sigma", [0, -1, -3, -6])
def test_star_relations(sigma):
    assert star_relation_check(sigma).ok


def test_star_is_involutive_on_words():
    terms = [(U + I, ("E", "K", "F")), (Q, ("Kinv",))]
    assert star_words(star_words(terms)) == terms


def test_q_number_in_monomial_action():
    c, k = monomial_action("E", -1, 3)
    assert k == 4 and c == U * q_number(4)
