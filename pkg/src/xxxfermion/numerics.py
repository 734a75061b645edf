"""Arbitrary precision helpers: double exponential quadrature, odd zeta values
and the handful of constants used by the zero and finite temperature code.

Everything here works on mpmath numbers.  Functions take an explicit
:class:`Precision` and evaluate inside ``mpmath.workdps`` so that callers do
not have to touch the global context.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp, mpf


@dataclass(frozen=True)
class Precision:
    """Working precision in decimal digits."""

    digits: int = 50

    def __post_init__(self):
        if self.digits < 15:
            raise ValueError("precision below 15 digits is not supported")

    def tol(self, slack: int = 5):
        """Return 10**-(digits - slack) as an mpf."""
        with mpmath.workdps(self.digits + 5):
            return mpf(10) ** (-(self.digits - slack))


@dataclass(frozen=True)
class DEQuadrature:
    """Parameters of the trapezoidal rule after the map

        g(t) = -1 + (4/pi) arctan(exp(c sinh t)),

    which sends the real line onto (-1, 1) with double exponential decay of
    the Jacobian at both ends.
    """

    h: Fraction = Fraction(1, 20)
    N: int = 200
    c: Fraction = Fraction(1, 10)

    def __post_init__(self):
        if self.h <= 0 or self.N <= 0 or self.c <= 0:
            raise ValueError("h, N and c must be positive")


def _as_mpf(x):
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


@lru_cache(maxsize=64)
def _de_table(h: Fraction, N: int, c: Fraction, digits: int):
    # For k = -N..N: node g(hk), Jacobian g'(hk) and the number of extra
    # digits needed to resolve the node from the nearer endpoint.  The
    # distance 1 - |g| = (4/pi) arctan(exp(-c|sinh t|)) is computed directly,
    # so nodes very close to +-1 keep all their significant digits.
    work = digits + 15
    with mpmath.workdps(work):
        hh, cc = _as_mpf(h), _as_mpf(c)
        four_over_pi = 4 / mp.pi
        rows = []
        for k in range(-N, N + 1):
            t = hh * k
            s = cc * mpmath.sinh(t)
            delta = four_over_pi * mpmath.atan(mpmath.exp(-abs(s)))
            extra = max(0, int(-mpmath.log10(delta)) + 1) if delta < 1 else 0
            with mpmath.workdps(work + extra):
                node = (1 - delta) if s >= 0 else (delta - 1)
            # d/dt arctan(e^s) = s' / (2 cosh s)
            jac = four_over_pi * cc * mpmath.cosh(t) / (2 * mpmath.cosh(s))
            rows.append((node, jac, extra))
        return tuple(rows)


def de_nodes(quad: DEQuadrature, prec: Precision):
    """Nodes g(hk) in (-1, 1) and weights h g'(hk) for k = -N..N."""
    rows = _de_table(quad.h, quad.N, quad.c, prec.digits)
    with mpmath.workdps(prec.digits + 15):
        hh = _as_mpf(quad.h)
        return [r[0] for r in rows], [hh * r[1] for r in rows]


def de_integrate(f, R_halfwidth, quad: DEQuadrature = DEQuadrature(),
                 prec: Precision = Precision()):
    """Integrate f over [-R, R] with the double exponential rule.

    Returns h R sum_k f(R g(hk)) g'(hk).  ``f`` receives and returns mpmath
    numbers (complex values are allowed).  Nodes that crowd the endpoints are
    evaluated with enough extra digits to keep their distance to the
    endpoint, so integrable endpoint singularities are handled.
    """
    rows = _de_table(quad.h, quad.N, quad.c, prec.digits)
    work = prec.digits + 10
    with mpmath.workdps(work):
        R = _as_mpf(R_halfwidth)
        hh = _as_mpf(quad.h)
        total = mpf(0)
        for k, (x, jac, extra) in enumerate(rows):
            try:
                with mpmath.workdps(work + extra):
                    val = f(R * x)
            except (ZeroDivisionError, ValueError) as exc:
                raise ArithmeticError(f"integrand failed at node {k - quad.N}") from exc
            total += jac * val
            if not mpmath.isfinite(total):
                raise ArithmeticError(f"non-finite partial sum at node {k - quad.N}")
        return +(hh * R * total)


@lru_cache(maxsize=256)
def _zeta_odd_cached(k: int, digits: int):
    # Borwein's accelerated alternating series for the eta function,
    # zeta(s) = eta(s) / (1 - 2^{1-s}).
    s = 2 * k + 1
    work = digits + 15
    with mpmath.workdps(work):
        n = int(1.31 * work) + 10
        # d_j = n sum_{i=0}^{j} (n+i-1)! 4^i / ((n-i)! (2i)!)
        d = []
        term = mpf(1) / n  # i = 0 term of the inner sum, before the factor n
        acc = term
        d.append(n * acc)
        for i in range(1, n + 1):
            term = term * (n + i - 1) * (n - i + 1) * 4 / ((2 * i - 1) * (2 * i))
            acc += term
            d.append(n * acc)
        dn = d[n]
        total = mpf(0)
        for j in range(n):
            sign = -1 if j % 2 else 1
            total += sign * (dn - d[j]) / mpf(j + 1) ** s
        eta = total / dn
        return +(eta / (1 - mpf(2) ** (1 - s)))


def zeta_odd(k: int, prec: Precision = Precision()):
    """zeta(2k+1) for k >= 1."""
    if k < 1:
        raise ValueError("k must be positive")
    val = _zeta_odd_cached(k, prec.digits)
    with mpmath.workdps(prec.digits):
        return +val


def constants(prec: Precision = Precision()):
    """log 2, pi and Gamma(1/4)^2 / (pi sqrt(2 pi))."""
    with mpmath.workdps(prec.digits + 10):
        log2 = mpmath.log(2)
        pi = +mp.pi
        gq = mpmath.gamma(mpf(1) / 4) ** 2 / (pi * mpmath.sqrt(2 * pi))
    with mpmath.workdps(prec.digits):
        return {"log2": +log2, "pi": +pi, "gamma_quarter": +gq}
