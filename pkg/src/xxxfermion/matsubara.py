"""Random unphysical Matsubara data.

The data consist of two monic polynomials of degree L,

    a(x) = x^L + a_1 x^{L-1} + ... + a_L,    d(x) = x^L + d_1 x^{L-1} + ... + d_L,

and m roots beta_j obeying the Bethe equations

    a(beta_j) Q(beta_j + 1) + d(beta_j) Q(beta_j - 1) = 0,   Q(x) = prod (x - beta_j).

The roots and most coefficients are drawn at random; the equations are linear
in a_1..a_m, which are solved for exactly.
"""

from __future__ import annotations

import builtins
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import poly
from .linalg import bareiss_solve, det_exact


class InadmissibleData(ValueError):
    pass


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class MatsubaraData:
    L: int
    m: int
    a_coeffs: tuple
    d_coeffs: tuple
    roots: tuple

    def __post_init__(self):
        object.__setattr__(self, "a_coeffs", tuple(Fraction(x) for x in self.a_coeffs))
        object.__setattr__(self, "d_coeffs", tuple(Fraction(x) for x in self.d_coeffs))
        object.__setattr__(self, "roots", tuple(Fraction(x) for x in self.roots))
        if len(self.a_coeffs) != self.L or len(self.d_coeffs) != self.L:
            raise ValueError("need L coefficients for a and d")
        if len(self.roots) != self.m:
            raise ValueError("need m roots")

    # polynomials in ascending coefficient order
    @cached_property
    def a_poly(self):
        return [*reversed(self.a_coeffs), Fraction(1)]

    @cached_property
    def d_poly(self):
        return [*reversed(self.d_coeffs), Fraction(1)]

    @cached_property
    def q_poly(self):
        return poly.from_roots(self.roots, Fraction(1))

    def a(self, x):
        return poly.evaluate(self.a_poly, x)

    def d(self, x):
        return poly.evaluate(self.d_poly, x)

    def Q(self, x):
        return poly.evaluate(self.q_poly, x)

    @cached_property
    def afrak_num(self):
        """Numerator a(x) Q(x+1) of the auxiliary function."""
        return poly.mul(self.a_poly, poly.shift(self.q_poly, 1))

    @cached_property
    def afrak_den(self):
        """Denominator d(x) Q(x-1) of the auxiliary function."""
        return poly.mul(self.d_poly, poly.shift(self.q_poly, -1))

    def Lambda0(self):
        """Transfer-matrix eigenvalue at 0: (a(0)Q(1) + d(0)Q(-1)) / Q(0)."""
        return (self.a(0) * self.Q(1) + self.d(0) * self.Q(-1)) / self.Q(0)

    def bethe_residuals(self):
        return [self.a(b) * self.Q(b + 1) + self.d(b) * self.Q(b - 1) for b in self.roots]

    def to_text(self) -> str:
        parts = [f"{self.L} {self.m}",
                 " ".join(_fmt(x) for x in self.a_coeffs),
                 " ".join(_fmt(x) for x in self.d_coeffs),
                 " ".join(_fmt(x) for x in self.roots)]
        return " | ".join(parts)

    @classmethod
    def from_text(cls, line: str) -> "MatsubaraData":
        head, a, d, r = (p.strip() for p in line.split("|"))
        L, m = (int(x) for x in head.split())
        conv = lambda s: tuple(Fraction(x) for x in s.split())
        return cls(L, m, conv(a), conv(d), conv(r))


def eval_afrak(md: MatsubaraData, x) -> Fraction:
    den = poly.evaluate(md.afrak_den, x)
    if den == 0:
        raise ZeroDivisionError(f"auxiliary function has a pole at {x}")
    return poly.evaluate(md.afrak_num, x) / den


def afrak_derivative(md: MatsubaraData, x) -> Fraction:
    N, D = md.afrak_num, md.afrak_den
    den = poly.evaluate(D, x)
    if den == 0:
        raise ZeroDivisionError(f"auxiliary function has a pole at {x}")
    num = (poly.evaluate(poly.derivative(N), x) * den
           - poly.evaluate(N, x) * poly.evaluate(poly.derivative(D), x))
    return num / (den * den)


def gaudin_matrix(md: MatsubaraData):
    """G_{kl} = d log afrak(beta_k) / d beta_l with a, d held fixed."""
    b = md.roots
    m = md.m
    G = [[Fraction(0)] * m for _ in range(m)]
    for k in range(m):
        # derivative of log(a/d) at beta_k
        diag = (poly.evaluate(poly.derivative(md.a_poly), b[k]) / md.a(b[k])
                - poly.evaluate(poly.derivative(md.d_poly), b[k]) / md.d(b[k]))
        for l in range(m):
            if l == k:
                continue
            t = 1 / (b[k] - b[l] + 1) - 1 / (b[k] - b[l] - 1)
            diag += t
            G[k][l] = -t
        G[k][k] = diag
    return G


def check_admissible(md: MatsubaraData):
    """Raise InadmissibleData if any genericity condition used downstream fails."""
    b = md.roots
    if len(set(b)) != len(b):
        raise InadmissibleData("repeated roots")
    for i, x in enumerate(b):
        if x in (0, 1, -1):
            raise InadmissibleData("root at 0 or +-1")
        for y in b[i + 1:]:
            if abs(x - y) == 1:
                raise InadmissibleData("roots differ by one")
        if md.d(x) == 0 or md.a(x) == 0:
            raise InadmissibleData("a or d vanishes at a root")
    if any(r != 0 for r in md.bethe_residuals()):
        raise InadmissibleData("Bethe equations violated")
    if md.d(0) == 0 or md.a(0) == 0:
        raise InadmissibleData("a(0) or d(0) vanishes")
    if md.a(0) * md.Q(1) + md.d(0) * md.Q(-1) == 0:
        raise InadmissibleData("1 + afrak(0) vanishes")
    for x in b:
        if afrak_derivative(md, x) == 0:
            raise InadmissibleData("afrak' vanishes at a root")
    if md.m and det_exact(gaudin_matrix(md)) == 0:
        raise InadmissibleData("degenerate Gaudin matrix")
    # the residue system for G(beta_k, mu): (1 - K(beta_k - beta_j)/afrak'(beta_j))
    if md.m:
        ap = [afrak_derivative(md, x) for x in b]
        M = [[(1 if k == j else 0) - _K(b[k] - b[j]) / ap[j] for j in range(md.m)]
             for k in range(md.m)]
        if det_exact(M) == 0:
            raise InadmissibleData("singular residue system")


def _K(x):
    return Fraction(2) / (x * x - 1)


def solve_bethe(L, m, roots, a_tail, d_coeffs):
    """Solve the Bethe equations for a_1..a_m given the rest of the data.

    ``a_tail`` holds a_{m+1}..a_L.  Returns the full tuple a_1..a_L.
    """
    roots = [Fraction(x) for x in roots]
    Qp = poly.from_roots(roots, Fraction(1))
    dp = [*reversed([Fraction(x) for x in d_coeffs]), Fraction(1)]
    A, rhs = [], []
    for bj in roots:
        qp = poly.evaluate(Qp, bj + 1)
        qm = poly.evaluate(Qp, bj - 1)
        A.append([bj ** (L - i) * qp for i in range(1, m + 1)])
        known = bj ** L + sum(Fraction(a_tail[i - m - 1]) * bj ** (L - i)
                              for i in range(m + 1, L + 1))
        rhs.append(-known * qp - poly.evaluate(dp, bj) * qm)
    head = bareiss_solve(A, rhs)
    return tuple(head) + tuple(Fraction(x) for x in a_tail)


def _draw(rng, rng_range):
    while True:
        v = rng.randint(-rng_range, rng_range)
        if v != 0:
            return v


def generate_md(L: int, m: int, seed: int, range: int = 9, max_tries: int = 1000) -> MatsubaraData:
    """Draw admissible Matsubara data deterministically from ``seed``.

    Integers come from [-range, range] without 0.  Draws violating any
    admissibility condition (see check_admissible) are rejected.
    """
    if L < 1 or m < 0 or 2 * m > L:
        raise ValueError("need L >= 1 and 0 <= m <= L/2")
    if range < 2:
        raise ValueError("range must be at least 2")
    rng = random.Random(f"md-{L}-{m}-{seed}-{range}")
    for _ in builtins.range(max_tries):
        roots = []
        while len(roots) < m:
            v = _draw(rng, range)
            if v not in roots:
                roots.append(v)
        a_tail = [_draw(rng, range) for _ in builtins.range(L - m)]
        d = [_draw(rng, range) for _ in builtins.range(L)]
        try:
            a = solve_bethe(L, m, roots, a_tail, d)
            md = MatsubaraData(L, m, a, d, tuple(roots))
            check_admissible(md)
        except (ZeroDivisionError, InadmissibleData):
            continue
        return md
    raise InadmissibleData(f"no admissible data after {max_tries} draws; enlarge range")

