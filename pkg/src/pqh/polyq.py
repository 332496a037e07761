"""Univariate polynomial arithmetic and factorization over Q.

Polynomials are tuples of Fractions, coefficients from low to high
degree, with no trailing zeros (the zero polynomial is ``()``).
Degrees stay desk-scale (<= 4n) but coefficients coming out of echelon
forms routinely reach dozens of digits, so irreducible factorization is
delegated to sympy; everything else is hand-rolled.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import sympy

from .linalg import F0, F1, Mat

ZERO = ()
ONE = (F1,)


def poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_deg(p):
    return len(p) - 1


def poly_add(p, q):
    n = max(len(p), len(q))
    p = p + (F0,) * (n - len(p))
    q = q + (F0,) * (n - len(q))
    return poly_trim(a + b for a, b in zip(p, q))


def poly_neg(p):
    return tuple(-a for a in p)


def poly_sub(p, q):
    return poly_add(p, poly_neg(q))


def poly_scale(c, p):
    if c == 0:
        return ZERO
    return tuple(c * a for a in p)


def poly_mul(p, q):
    if not p or not q:
        return ZERO
    out = [F0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_divmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [F0] * max(0, len(p) - len(q) + 1)
    dq = len(q) - 1
    lead = q[-1]
    for i in range(len(rem) - 1, dq - 1, -1):
        if rem[i] == 0:
            continue
        f = rem[i] / lead
        quo[i - dq] = f
        for j in range(dq + 1):
            rem[i - dq + j] -= f * q[j]
    return poly_trim(quo), poly_trim(rem)


def poly_monic(p):
    if not p:
        return ZERO
    return tuple(a / p[-1] for a in p)


def poly_gcd(p, q):
    a, b = p, q
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a)


def poly_derivative(p):
    return poly_trim(i * a for i, a in enumerate(p) if i > 0)


def poly_eval(p, x):
    acc = F0
    for a in reversed(p):
        acc = acc * x + a
    return acc


def poly_pow(p, k):
    out = ONE
    base = p
    while k:
        if k & 1:
            out = poly_mul(out, base)
        base = poly_mul(base, base)
        k >>= 1
    return out


def poly_eval_matrix(p, A: Mat) -> Mat:
    n = A.nrows
    acc = Mat.zeros(n, n)
    for a in reversed(p):
        acc = (acc @ A) + Mat.identity(n).scale(a)
    return acc


def squarefree_part(p):
    if poly_deg(p) < 1:
        return poly_monic(p)
    g = poly_gcd(p, poly_derivative(p))
    return poly_monic(poly_divmod(p, g)[0])


def rational_roots(p):
    """All rational roots of p (multiplicities stripped)."""
    p = poly_trim(p)
    if not p:
        raise ValueError("zero polynomial has every root")
    _, factors = factor(p)
    return {-fac[0] for fac, _m in factors if poly_deg(fac) == 1}


_X = sympy.Symbol("x")


def factor(p):
    """Factor p over Q into monic irreducibles.

    Returns (leading_coefficient, [(irreducible monic poly, multiplicity)...]),
    factors sorted by (degree, coefficients) for determinism.
    """
    p = poly_trim(p)
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    if poly_deg(p) == 0:
        return p[0], []
    sp = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(p)],
        _X,
        domain="QQ",
    )
    lead_s, factors_s = sp.factor_list()
    lead = Fraction(int(lead_s.p), int(lead_s.q))
    out = []
    for fac, mult in factors_s:
        lc = fac.LC()
        lead *= Fraction(int(lc.p), int(lc.q)) ** mult
        monic = fac.monic()
        coeffs = tuple(
            Fraction(int(c.p), int(c.q)) for c in reversed(monic.all_coeffs())
        )
        out.append((coeffs, int(mult)))
    out.sort(key=lambda fm: (poly_deg(fm[0]), fm[0]))
    # exact cross-check: the factorization must multiply back to p
    prod = (lead,)
    for fac, mult in out:
        prod = poly_mul(prod, poly_pow(fac, mult))
    if prod != p:
        raise AssertionError("factorization failed to recompose")
    return lead, out


def minimal_polynomial(A: Mat):
    """Monic minimal polynomial of a square rational matrix."""
    n = A.nrows
    if n == 0:
        return ONE
    _, factors = factor(A.charpoly())
    m = ONE
    for q, mult in factors:
        e = 1
        while e < mult:
            Pe = poly_eval_matrix(poly_pow(q, e), A)
            if Pe.kernel().nrows == mult * poly_deg(q):
                break
            e += 1
        m = poly_mul(m, poly_pow(q, e))
    return m


def is_rational_square(x: Fraction):
    """Exact test: is x the square of a rational? Returns the root or None."""
    if x < 0:
        return None
    if x == 0:
        return F0
    rn = isqrt(x.numerator)
    rd = isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def poly_str(p, var="x"):
    if not p:
        return "0"
    parts = []
    for i, a in enumerate(p):
        if a == 0:
            continue
        if i == 0:
            parts.append(str(a))
        elif i == 1:
            parts.append(f"{a}*{var}" if a != 1 else var)
        else:
            parts.append(f"{a}*{var}^{i}" if a != 1 else f"{var}^{i}")
    return " + ".join(parts).replace("+ -", "- ")
