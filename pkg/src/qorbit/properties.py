"""Seeded random property suites for the exact kernel.

Shared by the ``field`` CLI suite and the test-suite, so a failing seed
reproduces identically in both places.
"""

from __future__ import annotations

import random

from qorbit.exactfield import (
    GaussianRational,
    QScalar,
    ULaurent,
    ZPoly,
    ZRational,
)
from qorbit.report import Report


def random_gaussian(rng: random.Random, size: int = 4) -> GaussianRational:
    return GaussianRational(rng.randint(-size, size), rng.randint(-size, size)) / rng.randint(1, size)


def random_laurent(rng: random.Random, terms: int = 3, low: int = -4, high: int = 4) -> ULaurent:
    return ULaurent({rng.randint(low, high): random_gaussian(rng) for _ in range(rng.randint(1, terms))})


def random_scalar(rng: random.Random) -> QScalar:
    """Random element with a nontrivial denominator about half the time."""
    num = random_laurent(rng)
    if rng.random() < 0.5:
        den = ULaurent({0: 1})
    else:
        den = random_laurent(rng, terms=2, low=0, high=3)
        if not den:
            den = ULaurent({0: 1})
    return QScalar(num, den)


def random_zrational(rng: random.Random) -> ZRational:
    num = ZPoly({j: random_scalar(rng) for j in range(rng.randint(0, 2) + 1)})
    den = ZPoly({j: random_scalar(rng) for j in range(rng.randint(0, 1) + 1)})
    if not den:
        den = ZPoly({0: 1})
    return ZRational(num, den, rng.randint(-2, 2))


def field_axioms(seed: int, count: int) -> Report:
    rng = random.Random(seed)
    report = Report("field-axioms")
    for idx in range(count):
        a, b, c = random_scalar(rng), random_scalar(rng), random_scalar(rng)
        checks = {
            "distributive": a * (b + c) == a * b + a * c,
            "associative": (a * b) * c == a * (b * c),
            "commutative": a + b == b + a and a * b == b * a,
            "inverse": (not a) or (a * a.inverse()).is_one(),
        }
        bad = [k for k, ok in checks.items() if not ok]
        report.add("field", not bad, f"{bad} a={a} b={b} c={c}" if bad else "", index=idx)
    return report


def canonical_idempotence(seed: int, count: int) -> Report:
    rng = random.Random(seed)
    report = Report("canonical")
    for idx in range(count):
        x = random_scalar(rng)
        y = QScalar(x.num, x.den)
        f = random_zrational(rng)
        g = ZRational(f.num, f.den, f.zshift)
        ok = (y.num == x.num and y.den == x.den and g.num == f.num
              and g.den == f.den and g.zshift == f.zshift)
        report.add("idempotent", ok, f"x={x} f={f}" if not ok else "", index=idx)
    return report


def qshift_homomorphism(seed: int, count: int) -> Report:
    rng = random.Random(seed)
    report = Report("q_shift")
    for idx in range(count):
        f, g = random_zrational(rng), random_zrational(rng)
        k = rng.choice([-2, -1, 1, 2, 3])
        ok_mul = (f * g).q_shift(k) == f.q_shift(k) * g.q_shift(k)
        ok_add = (f + g).q_shift(k) == f.q_shift(k) + g.q_shift(k)
        ok = ok_mul and ok_add
        report.add("homomorphism", ok, f"k={k} f={f} g={g}" if not ok else "", index=idx)
    return report


def kernel_properties(seed: int, count: int) -> Report:
    report = Report("field")
    for part in (field_axioms, canonical_idempotence, qshift_homomorphism):
        sub = part(seed, count)
        for case in sub.cases:
            case.check = f"{sub.suite}:{case.check}"
        report.cases.extend(sub.cases)
    return report
