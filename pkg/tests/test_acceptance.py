"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Every test prints one ``criterion N: PASS|FAIL ...`` line (outside pytest's
capture) before asserting, so ``pytest -v`` shows the verdicts inline.
"""

from __future__ import annotations

import math
import random
import time

import pytest

from qorbit import classical as cl
from qorbit import qdiscrete as qd
from qorbit.properties import canonical_idempotence, field_axioms, qshift_homomorphism
from qorbit.qop import leibniz_check, star_relation_check, verify_relations

N_GRID = range(1, 7)
M_GRID = range(0, 13)
SEED = 20240229


@pytest.fixture
def verdict(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number} [{title}]: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f" ({detail})"
        with capsys.disabled():
            print("\n" + line)
    return emit


def test_criterion_1_relations(verdict):
    t0 = time.perf_counter()
    bad = []
    for n in range(0, 9):
        report = verify_relations(-n)
        bad += [(n, c.check) for c in report.failures()]
    secs = time.perf_counter() - t0
    ok = not bad and secs < 10
    verdict(1, "defining relations, n = 0..8", ok, f"{len(bad)} nonzero residuals, {secs:.2f} s")
    assert ok, bad


def test_criterion_2_eigen(verdict):
    t0 = time.perf_counter()
    bad = []
    for n in N_GRID:
        for m in M_GRID:
            if not qd.compact_eigencheck(qd.QSeriesParams(n, m)).ok:
                bad.append((m, n))
    secs = time.perf_counter() - t0
    ok = not bad and secs < 30
    verdict(2, "eigenvalue identity on n 1..6, m 0..12", ok, f"{len(bad)} failing cells, {secs:.2f} s")
    assert ok, bad


def test_criterion_3_tridiagonal(verdict):
    t0 = time.perf_counter()
    mismatches = []
    alpha_nonzero = []
    total = 0
    for n in N_GRID:
        for m in M_GRID:
            p = qd.QSeriesParams(n, m)
            for which in qd.OPERATORS:
                derived = qd.decompose_tridiagonal(qd.tridiagonal_operator(which, n), p)
                diffs = qd.compare_coeffs(derived, qd.expected_coeffs(which, p))
                total += 1
                if diffs:
                    mismatches.append((which, m, n, diffs[0]))
                if m == 0 and derived.alpha:
                    alpha_nonzero.append((which, n))
    secs = time.perf_counter() - t0
    ok = not mismatches and not alpha_nonzero and secs < 60
    detail = f"{len(mismatches)}/{total} triples differ from the transcription, {secs:.2f} s"
    if mismatches:
        which, m, n, diff = mismatches[0]
        detail += f"; first {which} m={m} n={n}: {diff}"
    verdict(3, "three-term coefficients equal the closed forms", ok, detail)
    assert ok, mismatches[:5]


def test_criterion_4_classical_limit(verdict):
    bad = []
    for n in N_GRID:
        for m in M_GRID:
            p = qd.QSeriesParams(n, m)
            for which in qd.OPERATORS:
                triple, match = qd.classical_limit_coeffs(which, p)
                if not match:
                    bad.append((which, m, n, triple))
            if qd.classical_psi_limit(p) != cl.classical_psi(m, n):
                bad.append(("psi", m, n, None))
    ok = not bad
    verdict(4, "q -> 1 limit of coefficients and psi_m", ok, f"{len(bad)} mismatches")
    assert ok, bad[:5]


def test_criterion_5_classical_representation(verdict):
    bad = []
    for n in N_GRID:
        for m in M_GRID:
            bad += [(m, n, c.check) for c in cl.verify_classical(m, n).failures()]
    literal = cl.verify_classical(1, 3, literal=True)
    literal_fails = {c.check for c in literal.failures()}
    regression = {"rho(E-F)", "[E,F]=H"} <= literal_fails
    ok = not bad and regression
    verdict(5, "classical operators, brackets, constant-term rho(E) regression", ok,
            f"{len(bad)} failures; constant-term form breaks {sorted(literal_fails)}")
    assert ok, bad[:5]


def test_criterion_6_group_action(verdict):
    rng = random.Random(SEED)
    pairs = [(cl.random_sl2(rng), cl.random_sl2(rng)) for _ in range(20)]
    bad = []
    for n in N_GRID:
        for idx, (g1, g2) in enumerate(pairs):
            bad += [(n, idx, c.check) for c in cl.homomorphism_check(g1, g2, n).failures()]
    ok = not bad
    verdict(6, "group action homomorphism, 20 seeded pairs", ok, f"{len(bad)} failures")
    assert ok, bad[:5]


def test_criterion_7_norms(verdict):
    t0 = time.perf_counter()
    worst_norm = 0.0
    worst_inner = 0.0
    for n in range(2, 6):
        for m in range(0, 4):
            closed = float(cl.norm_closed(m, n))
            res = cl.norm_quadrature(m, n, 1e-8)
            worst_norm = max(worst_norm, abs(res.value.real - closed) / closed)
            for mp in range(m + 1, 4):
                inner = cl.inner_quadrature(m, mp, n, 1e-8)
                scale = math.sqrt(closed * float(cl.norm_closed(mp, n)))
                worst_inner = max(worst_inner, abs(inner.value) / scale)
    quarter = cl.norm_quadrature(0, 2, 1e-8).value.real
    quarter_ok = str(cl.norm_closed(0, 2)) == "pi/4" and abs(quarter / (math.pi / 4) - 1) <= 1e-6
    secs = time.perf_counter() - t0
    ok = worst_norm <= 1e-6 and worst_inner <= 1e-6 and quarter_ok and secs < 60
    verdict(7, "norms and orthogonality by quadrature", ok,
            f"max rel err {worst_norm:.1e}, max rel inner {worst_inner:.1e}, "
            f"||psi_0||^2 at n=2 = {quarter:.12f}, {secs:.2f} s")
    assert ok


def test_criterion_8_hopf(verdict):
    leibniz = leibniz_check(10)
    star_bad = []
    for n in range(0, 9):
        star_bad += [(n, c.check) for c in star_relation_check(-n).failures()]
    ok = leibniz.ok and not star_bad
    verdict(8, "Leibniz rule to jmax = 10 and star relations", ok,
            f"{leibniz.passed} Leibniz cases, {leibniz.failed} failed; {len(star_bad)} star failures")
    assert ok


def test_criterion_9_kernel_properties(verdict):
    reports = [field_axioms(SEED, 1000), canonical_idempotence(SEED, 1000),
               qshift_homomorphism(SEED, 1000)]
    ok = all(r.ok and r.passed == 1000 for r in reports)
    detail = ", ".join(f"{r.suite} {r.passed}/1000" for r in reports)
    verdict(9, "kernel property suites", ok, detail)
    assert ok
