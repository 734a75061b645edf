"""Exact linear algebra used across the package.

Small systems (Bethe constraints, m x m residue systems) go through a
fraction-free Bareiss elimination written here.  Large exact or modular
eliminations delegate to python-flint (``fmpq_mat`` / ``nmod_mat``).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import flint


def _common_denominator_rows(rows):
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def bareiss_solve(A, b):
    """Solve A x = b exactly for square A with rational entries.

    Uses fraction-free (Bareiss) elimination on the integer-scaled augmented
    matrix.  Raises ZeroDivisionError if A is singular.
    """
    n = len(A)
    if n == 0:
        return []
    M = _common_denominator_rows([list(A[i]) + [b[i]] for i in range(n)])
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(M[i][n])
        for j in range(i + 1, n):
            acc -= M[i][j] * x[j]
        x[i] = acc / M[i][i]
    return x


def det_exact(A):
    """Determinant of a small square matrix of field elements (Gaussian)."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [list(r) for r in A]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return M[0][0] * 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        det = det * M[k][k]
        inv = 1 / M[k][k] if not isinstance(M[k][k], int) else Fraction(1, M[k][k])
        for i in range(k + 1, n):
            f = M[i][k] * inv
            if f == 0:
                continue
            for j in range(k, n):
                M[i][j] = M[i][j] - f * M[k][j]
    return det


def solve_small(A, rhs_columns):
    """Solve A X = B for a small square A over any field (Gauss-Jordan).

    ``rhs_columns`` is a list of right-hand-side vectors; their entries may be
    anything supporting +, - and multiplication by field elements (e.g. series
    coefficient lists handled by the caller).  Returns the solution columns.
    """
    n = len(A)
    M = [list(r) for r in A]
    cols = [list(c) for c in rhs_columns]
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            for c in cols:
                c[k], c[piv] = c[piv], c[k]
        inv = 1 / M[k][k] if not isinstance(M[k][k], int) else Fraction(1, M[k][k])
        M[k] = [x * inv for x in M[k]]
        for c in cols:
            c[k] = c[k] * inv
        for i in range(n):
            if i == k or M[i][k] == 0:
                continue
            f = M[i][k]
            M[i] = [M[i][j] - f * M[k][j] for j in range(n)]
            for c in cols:
                c[i] = c[i] - f * c[k]
    return cols


# ---------------------------------------------------------------------------
# flint-backed helpers

def to_fmpq_mat(rows, ncols=None):
    nr = len(rows)
    nc = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    M = flint.fmpq_mat(nr, nc)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x != 0:
                if isinstance(x, Fraction):
                    M[i, j] = flint.fmpq(x.numerator, x.denominator)
                else:
                    M[i, j] = x
    return M


def fmpq_to_fraction(x):
    return Fraction(int(x.p), int(x.q))


def rref_rational(rows, ncols):
    """Reduced row echelon form over Q; returns (rows as Fraction lists, pivots)."""
    if not rows:
        return [], []
    M = to_fmpq_mat(rows, ncols)
    R, rank = M.rref()
    out, pivots = [], []
    for i in range(rank):
        row = [fmpq_to_fraction(R[i, j]) for j in range(ncols)]
        pivots.append(next(j for j, x in enumerate(row) if x != 0))
        out.append(row)
    return out, pivots


def nullspace_rational(rows, ncols):
    """Basis of {x : M x = 0} in canonical form.

    The basis vector attached to free column f has entry 1 at f and 0 at the
    other free columns, so the coordinates of any kernel element are its
    entries at the free columns.  Returns (basis, free_columns).
    """
    R, pivots = rref_rational(rows, ncols)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(R, pivots):
            v[p] = -r[f]
        basis.append(v)
    return basis, free


def rank_mod_p(rows, ncols, p):
    if not rows:
        return 0
    M = flint.nmod_mat(len(rows), ncols, p)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x != 0:
                M[i, j] = to_mod(x, p)
    return M.rank()


def to_mod(x, p):
    """Reduce an int or Fraction modulo p."""
    if isinstance(x, Fraction):
        return x.numerator % p * pow(x.denominator % p, -1, p) % p
    return int(x) % p


# ---------------------------------------------------------------------------
# multi-modular reconstruction

def crt_pair(r1, m1, r2, m2):
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2


def rational_reconstruction(a, m):
    """Find p/q with p = a q (mod m), |p|, q <= sqrt(m/2); None if none exists."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if (r1 - a * s1) % m != 0:
        return None
    return Fraction(r1, s1)


def large_primes(count, start=(1 << 62)):
    """Deterministic list of primes just below ``start``."""
    out = []
    c = start - 1
    while len(out) < count:
        if flint.fmpz(c).is_prime():
            out.append(c)
        c -= 2 if c % 2 else 1
    return out
