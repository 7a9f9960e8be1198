"""Dense univariate polynomial kernels over Q or Q(i).

Polynomials are coefficient lists, lowest degree first, trimmed (no
trailing zeros; the zero polynomial is ``[]``).  The routines only use
ring operators and ``1 / x``, so they run unchanged on lists of ``mpq``
and on lists of :class:`GaussianRational`.  Callers pass ``mpq`` lists
whenever every coefficient is real: that is several times faster and
the gcd over Q(i) of real polynomials coincides with the gcd over Q.
"""

from __future__ import annotations

from qorbit.errors import NotAFactor


def trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def monic(p: list) -> list:
    lc = p[-1]
    if lc == 1:
        return p
    inv = 1 / lc
    return [c * inv for c in p]


def mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return trim(out)


def divmod_monic(a: list, b: list) -> tuple[list, list]:
    """Quotient and remainder of ``a`` by a *monic* ``b``."""
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], list(a)
    r = list(a)
    quot = [None] * (len(a) - db)
    bl = b[:db]
    for i in range(len(a) - 1 - db, -1, -1):
        c = r[i + db]
        quot[i] = c
        if c:
            for j, bj in enumerate(bl):
                if bj:
                    r[i + j] = r[i + j] - c * bj
    return trim(quot), trim(r[:db])


def rem_monic(a: list, b: list) -> list:
    db = len(b) - 1
    if len(a) - 1 < db:
        return list(a)
    r = list(a)
    bl = [(j, bj) for j, bj in enumerate(b[:db]) if bj]
    for i in range(len(a) - 1 - db, -1, -1):
        c = r[i + db]
        if c:
            for j, bj in bl:
                r[i + j] = r[i + j] - c * bj
    return trim(r[:db])


def gcd(a: list, b: list) -> list:
    """Monic gcd by the Euclidean algorithm, normalising every remainder."""
    if not a:
        return monic(b) if b else []
    if not b:
        return monic(a)
    if len(a) < len(b):
        a, b = b, a
    a = monic(a)
    b = monic(b)
    one = [b[-1]]
    while len(b) > 1:
        r = rem_monic(a, b)
        if not r:
            return b
        a, b = b, monic(r)
    return one


def exact_div(a: list, b: list) -> list:
    """``a / b`` where ``b`` is known to divide ``a``."""
    lc = b[-1]
    if lc == 1:
        q, r = divmod_monic(a, b)
    else:
        inv = 1 / lc
        q, r = divmod_monic(a, [c * inv for c in b])
        q = [c * inv for c in q]
    if r:
        raise NotAFactor("polynomial division left a nonzero remainder")
    return q
