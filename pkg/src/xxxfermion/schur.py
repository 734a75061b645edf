"""Symmetric polynomials in the Schur basis and the monodromy actions on them.

A symmetric polynomial f(x_1..x_q) is stored as a :class:`SchurVector`: the
number of variables q and a map partition -> coefficient.  Partitions are
plain tuples of positive ints in weakly decreasing order.

Through the boson-fermion correspondence a partition of length <= q is the
semi-infinite wedge psi*_{k_1} ... psi*_{k_q} with k_i = lambda_i + q - i.
Multiplying by a one-variable polynomial in the fermionic picture (the
wedge operations below) and multiplying by elementary symmetric functions
(Pieri) are the two building blocks of the A, B, C, D actions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import poly
from .linalg import det_exact


# ---------------------------------------------------------------------------
# partitions and the Fock picture

def fock_indices(lam, q):
    """Strictly decreasing indices (k_1 > ... > k_q >= 0) of a partition."""
    if len(lam) > q:
        raise ValueError("partition longer than the number of variables")
    return tuple((lam[i] if i < len(lam) else 0) + q - 1 - i for i in range(q))


def partition_from_fock(ks):
    q = len(ks)
    for a, b in zip(ks, ks[1:]):
        if a <= b:
            raise ValueError("Fock indices must be strictly decreasing")
    if ks and ks[-1] < 0:
        raise ValueError("negative Fock index")
    return tuple(k - (q - 1 - i) for i, k in enumerate(ks) if k - (q - 1 - i) > 0)


def box_partitions(q, b):
    """All partitions with at most q parts, each at most b (ascending size)."""
    out = []

    def rec(prefix, maxpart, left):
        out.append(tuple(prefix))
        if left == 0:
            return
        for p in range(1, maxpart + 1):
            prefix.append(p)
            rec(prefix, p, left - 1)
            prefix.pop()

    rec([], b, q)
    out.sort(key=lambda lam: (sum(lam), lam))
    return out


# ---------------------------------------------------------------------------

class SchurVector:
    """Element of H_q: a finite combination of Schur polynomials in q variables."""

    __slots__ = ("q", "terms")

    def __init__(self, q, terms=None):
        self.q = q
        self.terms = {}
        if terms:
            for lam, c in terms.items():
                if c != 0:
                    if len(lam) > q:
                        raise ValueError("partition longer than q")
                    self.terms[tuple(lam)] = c

    @classmethod
    def vacuum(cls, q=0, one=Fraction(1)):
        return cls(q, {(): one})

    def copy(self):
        v = SchurVector(self.q)
        v.terms = dict(self.terms)
        return v

    def add_term(self, lam, c):
        new = self.terms.get(lam, 0) + c
        if new == 0:
            self.terms.pop(lam, None)
        else:
            self.terms[lam] = new

    def __add__(self, other):
        if self.q != other.q:
            raise ValueError("adding vectors with different variable counts")
        out = self.copy()
        for lam, c in other.terms.items():
            out.add_term(lam, c)
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c):
        v = SchurVector(self.q)
        if c != 0:
            v.terms = {lam: x * c for lam, x in self.terms.items()}
        return v

    def __eq__(self, other):
        return isinstance(other, SchurVector) and self.q == other.q and self.terms == other.terms

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        body = " + ".join(f"{c}*{list(lam)}" for lam, c in self.sorted_terms())
        return f"SchurVector(q={self.q}: {body or '0'})"


def retag(Y, q):
    """Same terms viewed in H_q (no check beyond lengths)."""
    return SchurVector(q, Y.terms)


# ---------------------------------------------------------------------------
# Pieri rule

@lru_cache(maxsize=None)
def pieri_partition(j, lam, q):
    """Partitions in e_j * s_lam (q variables), each with coefficient 1."""
    n = len(lam)
    if j == 0:
        return (lam,)
    pad = min(j, q - n)
    base = list(lam) + [0] * pad
    if j > len(base):
        return ()
    out = []
    for J in combinations(range(len(base)), j):
        new = list(base)
        for i in J:
            new[i] += 1
        if all(new[i] >= new[i + 1] for i in range(len(new) - 1)):
            out.append(tuple(x for x in new if x > 0))
    return tuple(out)


def pieri(j, Y):
    """sigma_j o Y: multiplication by the j-th elementary symmetric function."""
    out = SchurVector(Y.q)
    for lam, c in Y.terms.items():
        for mu in pieri_partition(j, lam, Y.q):
            out.add_term(mu, c)
    return out


# ---------------------------------------------------------------------------
# wedges and cuts

@lru_cache(maxsize=None)
def wedge_index(j, lam, q):
    """psi*_j wedge (partition lam in H_q) as (sign, partition in H_{q+1}) or None."""
    ks = fock_indices(lam, q)
    if j in ks:
        return None
    bigger = sum(1 for k in ks if k > j)
    new = tuple(sorted(ks + (j,), reverse=True))
    return (-1 if bigger % 2 else 1), partition_from_fock(new)


def wedge_monomial(j, Y):
    out = SchurVector(Y.q + 1)
    for lam, c in Y.terms.items():
        r = wedge_index(j, lam, Y.q)
        if r is not None:
            out.add_term(r[1], c if r[0] > 0 else -c)
    return out


def wedge1(P, Y):
    """(sum_j P_j psi*_j) wedge Y, raising q by one.  P is a coefficient list."""
    out = SchurVector(Y.q + 1)
    for lam, c in Y.terms.items():
        for j, pj in enumerate(P):
            if pj == 0:
                continue
            r = wedge_index(j, lam, Y.q)
            if r is not None:
                out.add_term(r[1], c * pj if r[0] > 0 else -(c * pj))
    return out


def wedge2(R, Y):
    """(sum R_ij psi*_i psi*_j) wedge Y, raising q by two.

    R is a dict {(i, j): coefficient} or a nested list R[i][j].
    """
    if isinstance(R, dict):
        items = list(R.items())
    else:
        items = [((i, j), c) for i, row in enumerate(R) for j, c in enumerate(row)]
    out = SchurVector(Y.q + 2)
    q = Y.q
    for lam, c in Y.terms.items():
        for (i, j), rij in items:
            if rij == 0:
                continue
            r1 = wedge_index(j, lam, q)
            if r1 is None:
                continue
            r2 = wedge_index(i, r1[1], q + 1)
            if r2 is None:
                continue
            coef = c * rij
            out.add_term(r2[1], coef if r1[0] * r2[0] > 0 else -coef)
    return out


def cut(q, Y):
    """Drop diagrams longer than q and view the result in H_q."""
    return SchurVector(q, {lam: c for lam, c in Y.terms.items() if len(lam) <= q})


def sigma_inverse(Y, strict=True):
    """Divide by x_1...x_q: subtract one from every part.

    Every diagram must have length exactly q, otherwise the division is not
    polynomial and an ArithmeticError is raised.  With ``strict=False``
    shorter diagrams are dropped instead; this is the linear map used on
    pieces of a sum whose short diagrams cancel.
    """
    out = SchurVector(Y.q)
    for lam, c in Y.terms.items():
        if len(lam) != Y.q:
            if not strict:
                continue
            raise ArithmeticError(f"diagram {lam} shorter than {Y.q} before division")
        out.add_term(tuple(x - 1 for x in lam if x > 1), c)
    return out


# ---------------------------------------------------------------------------
# polynomial helpers for the actions

def _binom_shift_poly(sign, power):
    """(x + sign)^power as an int coefficient list."""
    return poly.power([sign, 1], power) if power > 0 else [1]


def A_polys(a_poly, q):
    """A_k(x) = (-1)^{k-1} (x+1)^{q+1-k} a(x), k = 1..q+1."""
    return [poly.scale(poly.mul(_binom_shift_poly(1, q + 1 - k), a_poly), (-1) ** (k - 1))
            for k in range(1, q + 2)]


def D_polys(d_poly, q):
    """D_k(x) = (-1)^{k-1} (x-1)^{q+1-k} d(x), k = 1..q+1."""
    return [poly.scale(poly.mul(_binom_shift_poly(-1, q + 1 - k), d_poly), (-1) ** (k - 1))
            for k in range(1, q + 2)]


def _act_diagonal(Y, polys):
    q = Y.q
    total = SchurVector(q + 1)
    for k, Pk in enumerate(polys, start=1):
        total = total + pieri(k - 1, wedge1(Pk, Y))
    return cut(q, total)


def act_A(Y, a_poly):
    return _act_diagonal(Y, A_polys(a_poly, Y.q))


def act_D(Y, d_poly):
    return _act_diagonal(Y, D_polys(d_poly, Y.q))


def B_one_particle_polys(a_poly, d_poly, a0, d0, q, p, k):
    """One-variable part of the B action into H_q, attached to sigma_p sigma_k.

    d0 a(x) (x+1)^{q-k} (-1)^k sum_{t<q-p} (-x)^t
        - a0 d(x) (1-x)^{q-k} (-1)^p sum_{t<q-p} x^t
    """
    alt = [(-1) ** t for t in range(q - p)]
    geo = [1] * (q - p)
    left = poly.mul(poly.mul(a_poly, _binom_shift_poly(1, q - k)), alt)
    one_minus = poly.power([1, -1], q - k) if q - k > 0 else [1]
    right = poly.mul(poly.mul(d_poly, one_minus), geo)
    return poly.sub(poly.scale(left, d0 * (-1) ** k), poly.scale(right, a0 * (-1) ** p))


def B_pair_polys(a_poly, d_poly, q, k, l):
    """Two-variable part of the B action into H_q, attached to sigma_k sigma_l.

    -(-1)^{k+l} d(x) a(y) (y+1)^{q-l} sum_{s<q-k} (x-1)^{q-k-1-s} y^s,
    returned as a dict {(i, j): coefficient of x^i y^j}.
    """
    ypart = poly.mul(a_poly, _binom_shift_poly(1, q - l))
    R = {}
    for s in range(q - k):
        xs = poly.mul(d_poly, _binom_shift_poly(-1, q - k - 1 - s))
        ys = [0] * s + list(ypart)
        for i, xi in enumerate(xs):
            if xi == 0:
                continue
            for j, yj in enumerate(ys):
                if yj == 0:
                    continue
                R[(i, j)] = R.get((i, j), 0) + xi * yj
    sign = -((-1) ** (k + l))
    return {key: sign * v for key, v in R.items() if v != 0}


def B_bracket(Y, a_poly, d_poly, a0, d0, pairs=True):
    """The B action before the final division by sigma_q.

    Linear in (a0, d0) for the one-particle part and bilinear in (d, a) for
    the pair part, which lets callers assemble it from monomial pieces.
    """
    q = Y.q + 1
    bracket = SchurVector(q)
    for p in range(q):
        for k in range(q + 1):
            P = B_one_particle_polys(a_poly, d_poly, a0, d0, q, p, k)
            if P:
                bracket = bracket + pieri(p, pieri(k, wedge1(P, Y)))
    if pairs and q >= 2:
        Y2 = pieri(q - 2, cut(q - 2, Y))
        for k in range(q):
            for l in range(q + 1):
                R = B_pair_polys(a_poly, d_poly, q, k, l)
                if R:
                    bracket = bracket + pieri(k, pieri(l, wedge2(R, Y2)))
    return bracket


def act_B(Y, a_poly, d_poly, a0, d0):
    """B: H_{q-1} -> H_q."""
    return sigma_inverse(B_bracket(Y, a_poly, d_poly, a0, d0))


def act_C(Y):
    """C: H_{q+1} -> H_q."""
    return cut(Y.q - 1, Y)


def act_letter(letter, md, Y):
    """Apply one monodromy entry (A, B, C or D) for the data ``md``."""
    if letter == "A":
        return act_A(Y, md.a_poly)
    if letter == "D":
        return act_D(Y, md.d_poly)
    if letter == "B":
        return act_B(Y, md.a_poly, md.d_poly, md.a(0), md.d(0))
    if letter == "C":
        return act_C(Y)
    raise ValueError(f"unknown letter {letter!r}")


# ---------------------------------------------------------------------------
# evaluation, Slavnov vector and Gaudin norm

def schur_eval(lam, points):
    """s_lam(points) by the bialternant formula (points pairwise distinct)."""
    q = len(points)
    points = [Fraction(x) if isinstance(x, int) else x for x in points]
    if len(lam) > q:
        return 0
    full = list(lam) + [0] * (q - len(lam))
    num = [[x ** (full[i] + q - 1 - i) for x in points] for i in range(q)]
    den = [[x ** (q - 1 - i) for x in points] for i in range(q)]
    dd = det_exact(den)
    if dd == 0:
        raise ZeroDivisionError("repeated evaluation points")
    return det_exact(num) / dd


def eval_schur(Y, points):
    points = list(points)
    if len(points) != Y.q:
        raise ValueError("number of points must equal q")
    if len(set(points)) != len(points):
        raise ZeroDivisionError("repeated evaluation points")
    total = 0
    for lam, c in Y.terms.items():
        total = total + c * schur_eval(lam, points)
    return total


def slavnov_polys(md):
    """The m one-variable polynomials whose wedge gives the Slavnov vector."""
    out = []
    for j, bj in enumerate(md.roots):
        others = [b for l, b in enumerate(md.roots) if l != j]
        qp = poly.from_roots([b - 1 for b in others], Fraction(1))  # Q(x+1)/(x-bj+1)
        qm = poly.from_roots([b + 1 for b in others], Fraction(1))  # Q(x-1)/(x-bj-1)
        num = poly.sub(poly.mul(md.a_poly, qp), poly.mul(md.d_poly, qm))
        quo, rem = poly.divide_linear(num, bj)
        if rem != 0:
            raise ArithmeticError("Bethe equation violated in Slavnov vector")
        out.append(quo)
    return out


def slavnov_vector(md):
    """The overlap of the on-shell Bethe covector with an off-shell vector."""
    m = md.m
    pref = Fraction(-1) ** (m * (m - 1) // 2)
    for b in md.roots:
        pref *= md.d(b)
    for i in range(m):
        for j in range(i + 1, m):
            pref /= md.roots[i] - md.roots[j]
    Y = SchurVector.vacuum(0)
    for P in reversed(slavnov_polys(md)):
        Y = wedge1(P, Y)
    return Y.scaled(pref)


def gaudin_norm(md):
    """Norm of the Bethe state: prod a d * prod_{i!=j} (b_i-b_j+1)/(b_i-b_j) * det G."""
    from .matsubara import gaudin_matrix

    b = md.roots
    val = Fraction(1)
    for x in b:
        val *= md.a(x) * md.d(x)
    for i in range(md.m):
        for j in range(md.m):
            if i != j:
                val *= (b[i] - b[j] + 1) / (b[i] - b[j])
    return val * det_exact(gaudin_matrix(md))
