"""Exact arithmetic kernel: Q(i), Laurent polynomials in u (u^2 = q), the
field Q(i)(u), and rational functions of z over it."""

from qorbit.exactfield.gaussian import GaussianRational
from qorbit.exactfield.laurent import ULaurent
from qorbit.exactfield.scalar import (
    I,
    ONE,
    Q,
    U,
    ZERO,
    QScalar,
    format_scalar,
    format_scalar_q,
    parse_scalar,
    q_number,
    substitute_q,
)
from qorbit.exactfield.zfunc import (
    ONE_Z,
    ZERO_Z,
    Z,
    FactoredZ,
    ZPoly,
    ZRational,
    divide_known_factor,
    expand,
    q_shift,
)


def scalar_arith(a: QScalar, b: QScalar, which: str) -> QScalar:
    """Dispatch ``add``/``sub``/``mul``/``div`` on two QScalars."""
    if which == "add":
        return a + b
    if which == "sub":
        return a - b
    if which == "mul":
        return a * b
    if which == "div":
        return a / b
    raise ValueError(f"unknown operation {which!r}")


__all__ = [
    "GaussianRational", "ULaurent", "QScalar", "ZPoly", "ZRational", "FactoredZ",
    "I", "ONE", "ZERO", "Q", "U", "Z", "ONE_Z", "ZERO_Z",
    "q_number", "substitute_q", "q_shift", "expand", "divide_known_factor",
    "scalar_arith", "format_scalar", "format_scalar_q", "parse_scalar",
]
