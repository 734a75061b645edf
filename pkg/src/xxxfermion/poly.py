"""Dense univariate polynomials with exact coefficients.

A polynomial is a list ``[c0, c1, ..., cd]`` (ascending powers).  The
coefficients may be ints, Fractions or any field elements supporting the
usual operators; helpers never coerce types on their own.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def add(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = q[i] if i < len(q) else 0
        out.append(a + b)
    return trim(out)


def sub(p, q):
    return add(p, [-c for c in q])


def scale(p, c):
    return trim([c * x for x in p])


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def power(p, k):
    out = [1]
    for _ in range(k):
        out = mul(out, p)
    return out


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p):
    return trim([i * p[i] for i in range(1, len(p))])


def from_roots(roots, one=1):
    out = [one]
    for r in roots:
        out = mul(out, [-r, one])
    return out


def shift(p, c):
    """Coefficients of p(x + c)."""
    out = [0] * len(p)
    for k, a in enumerate(p):
        if a == 0:
            continue
        ck = 1
        for j in range(k, -1, -1):
            # term a * C(k, j) * x^j * c^(k-j); c^(k-j) built incrementally
            out[j] = out[j] + a * comb(k, j) * ck
            ck = ck * c
    return trim(out)


def divide_linear(p, r):
    """Divide p by (x - r); returns (quotient, remainder)."""
    if not p:
        return [], 0
    n = len(p) - 1
    q = [0] * n
    acc = p[n]
    for i in range(n - 1, -1, -1):
        q[i] = acc
        acc = p[i] + acc * r
    return trim(q), acc


def series_inverse(p, order):
    """First ``order`` Taylor coefficients of 1/p at 0 (requires p[0] != 0)."""
    inv0 = Fraction(1, p[0]) if isinstance(p[0], int) else 1 / p[0]
    out = [inv0]
    for k in range(1, order):
        acc = 0
        for j in range(1, min(k, len(p) - 1) + 1):
            acc = acc + p[j] * out[k - j]
        out.append(-acc * inv0)
    return out


def series_mul(p, q, order):
    out = [0] * order
    for i, a in enumerate(p[:order]):
        if a == 0:
            continue
        for j, b in enumerate(q[: order - i]):
            out[i + j] = out[i + j] + a * b
    return out
